// Copyright 2026 The CFSK Receiver Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Parameter-space exploration over the CFSK family: Helstrom and simulated
// error maps over (delta_omega_T, delta_theta), their local minima, and the
// energy / alphabet-size scans used to compare CFSK against PSK, QAM16 and PPM.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfsk/alphabet.hpp"
#include "cfsk/receiver.hpp"
#include "cfsk/table.hpp"

namespace cfsk {

struct Axis {
  std::string name;
  std::vector<double> values;  // strictly increasing, at least 2 points

  /// Inclusive linear grid; rejects points < 2 and stop <= start.
  static Axis linear(std::string name, double start, double stop, int points);
  /// Explicit, strictly increasing coordinates.
  static Axis list(std::string name, std::vector<double> values);

  int size() const { return static_cast<int>(values.size()); }
  double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
};

struct GridSpec {
  Axis x;  // first axis; delta_omega_T for CFSK maps
  Axis y;  // second axis; delta_theta for CFSK maps

  std::int64_t cells() const { return static_cast<std::int64_t>(x.size()) * y.size(); }

  /// delta_omega_T in [0, 4 pi] (81 points) by delta_theta in [0, 2 pi)
  /// (64 points, the last one at 2 pi * 63/64).
  static GridSpec default_optimization();
};

struct SweepMap {
  GridSpec grid;
  std::vector<double> values;  // row-major: index = i * y.size() + j
  std::map<std::string, std::string> metadata;

  SweepMap() = default;
  explicit SweepMap(GridSpec g);

  double& at(int i, int j) { return values[index(i, j)]; }
  double at(int i, int j) const { return values[index(i, j)]; }

  /// Long-format table with columns <x name>, <y name>, value.
  Table to_table() const;
  /// Inverse of to_table for maps on the same grid shape.
  static SweepMap from_table(const Table& table);

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(grid.y.size()) +
           static_cast<std::size_t>(j);
  }
};

struct MapPoint {
  int i = 0;
  int j = 0;
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
};

struct MinimaReport {
  std::optional<MapPoint> global_min;
  /// Smallest local minimum at strictly smaller x than the global minimum,
  /// among minima within `secondary_ratio` of the global value.
  std::optional<MapPoint> secondary_min;
  std::vector<MapPoint> local_minima;  // ascending by value
};

struct MinimaOptions {
  bool median_smooth = false;  // 3x3 median filter first, for noisy MC maps
  double secondary_ratio = 10.0;
};

/// Cells strictly below every existing neighbour (up to 8) are local minima.
/// A map without any such cell, e.g. a constant one, reports nothing.
MinimaReport find_minima(const SweepMap& map, const MinimaOptions& options = {});

/// Helstrom (SRM) error of the CFSK alphabet at each (delta_omega_T,
/// delta_theta) cell.
SweepMap sweep_hb_map(int M, double n_bar, const GridSpec& grid, int threads = 0);

/// Simulated receiver SER at each cell; cell (i, j) uses seed
/// stream_key(seed, i, j).
SweepMap sweep_ser_map(int M, double n_bar, const GridSpec& grid, const ReceiverModel& model,
                       std::int64_t trials, std::uint64_t seed, int threads = 0);

struct CfskOptimum {
  double delta_omega_T = 0.0;
  double delta_theta = 0.0;
  double hb = 1.0;
};

/// Minimizes the CFSK Helstrom bound on `coarse`, then on a refine_points x
/// refine_points grid spanning one coarse step around the best cell.
CfskOptimum optimize_cfsk(int M, double n_bar, const GridSpec& coarse,
                          int refine_points = 9, int threads = 0);
CfskOptimum optimize_cfsk(int M, double n_bar, int threads = 0);

struct ScanOptions {
  ReceiverModel model;
  std::int64_t trials = 100000;
  std::int64_t sql_trials = 100000;
  std::uint64_t seed = 0;
  int threads = 0;
  GridSpec optimization_grid = GridSpec::default_optimization();
  bool simulate = true;  // false skips the receiver SER columns
};

/// One row per n_bar. Columns: nbar, then for CFSK dwt, dtheta, ser (with
/// Wilson bounds), hb, sql; for PSK ser, hb, sql; for QAM16 and PPM hb, sql.
/// Only the requested kinds appear.
Table scan_energy(int M, const std::vector<ConstellationKind>& kinds,
                  const std::vector<double>& n_bars, const ScanOptions& options);

/// One row per M at n_bar = photons_per_bit * log2(M): CFSK and PSK SER, HB
/// and SQL. Rejects M that is not a power of two.
Table scan_alphabet(double photons_per_bit, const std::vector<int>& Ms,
                    const ScanOptions& options);

enum class EnergyUnit { kPerSymbol, kPerBit };

/// Ratio of the optimized CFSK Helstrom bound to the PSK one. x axis: energy
/// (photons per symbol or per bit), y axis: M.
SweepMap hb_ratio_map(const std::vector<double>& energies, const std::vector<int>& Ms,
                      EnergyUnit unit, const GridSpec& coarse, int threads = 0);

/// log2(M) for powers of two; throws ConfigError otherwise.
int bits_per_symbol(int M);

}  // namespace cfsk
