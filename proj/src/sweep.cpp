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

#include "cfsk/sweep.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <omp.h>

#include "cfsk/bounds.hpp"
#include "cfsk/errors.hpp"
#include "cfsk/rng.hpp"

namespace cfsk {

namespace {

double cfsk_hb(int M, double n_bar, double dwt, double dtheta) {
  return srm_error(gram_matrix(Constellation::cfsk({M, n_bar, dwt, dtheta}))).p_error;
}

int resolve_threads(int threads) { return threads > 0 ? threads : omp_get_max_threads(); }

// Largest gap adjacent to index i; the refine window spans this much on
// either side of the coarse optimum.
double local_step(const Axis& axis, int i) {
  double step = 0.0;
  if (i > 0) step = std::max(step, axis[i] - axis[i - 1]);
  if (i + 1 < axis.size()) step = std::max(step, axis[i + 1] - axis[i]);
  return step;
}

std::pair<int, int> argmin_cell(const SweepMap& map) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < map.values.size(); ++k) {
    if (map.values[k] < map.values[best]) best = k;
  }
  const int ny = map.grid.y.size();
  return {static_cast<int>(best / static_cast<std::size_t>(ny)),
          static_cast<int>(best % static_cast<std::size_t>(ny))};
}

SweepMap median_smoothed(const SweepMap& map) {
  SweepMap out = map;
  const int nx = map.grid.x.size();
  const int ny = map.grid.y.size();
  std::vector<double> window;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      window.clear();
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = i + di, jj = j + dj;
          if (ii >= 0 && ii < nx && jj >= 0 && jj < ny) window.push_back(map.at(ii, jj));
        }
      }
      const auto mid = window.begin() + static_cast<std::ptrdiff_t>(window.size() / 2);
      std::nth_element(window.begin(), mid, window.end());
      out.at(i, j) = *mid;
    }
  }
  return out;
}

struct Columns {
  Table table;
  std::vector<Cell> row;
  bool first_row = true;

  void put(const std::string& name, Cell value) {
    if (first_row) table.columns.push_back(name);
    row.push_back(std::move(value));
  }
  void end_row() {
    table.add_row(std::move(row));
    row.clear();
    first_row = false;
  }
};

void put_ser(Columns& cols, const std::string& prefix, const SerEstimate& est) {
  cols.put(prefix + "_ser", est.p_hat);
  cols.put(prefix + "_ser_lo", est.ci95.low);
  cols.put(prefix + "_ser_hi", est.ci95.high);
  cols.put(prefix + "_errors", est.errors);
}

void put_sql(Columns& cols, const std::string& prefix, const BoundResult& sql) {
  cols.put(prefix + "_sql", sql.p_error);
  cols.put(prefix + "_sql_ci95", sql.ci95_halfwidth);
}

}  // namespace

Axis Axis::linear(std::string name, double start, double stop, int points) {
  if (points < 2) throw ConfigError("axis '" + name + "' needs at least 2 points");
  if (!(stop > start)) throw ConfigError("axis '" + name + "' needs stop > start");
  Axis axis{std::move(name), {}};
  axis.values.resize(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    axis.values[static_cast<std::size_t>(i)] =
        i + 1 == points ? stop : start + (stop - start) * i / (points - 1);
  }
  return axis;
}

Axis Axis::list(std::string name, std::vector<double> values) {
  if (values.size() < 2) throw ConfigError("axis '" + name + "' needs at least 2 points");
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (!(values[k] > values[k - 1])) {
      throw ConfigError("axis '" + name + "' must be strictly increasing");
    }
  }
  return Axis{std::move(name), std::move(values)};
}

GridSpec GridSpec::default_optimization() {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  return {Axis::linear("dwt", 0.0, 2.0 * kTwoPi, 81),
          Axis::linear("dtheta", 0.0, kTwoPi * 63.0 / 64.0, 64)};
}

SweepMap::SweepMap(GridSpec g) : grid(std::move(g)) {
  values.assign(static_cast<std::size_t>(grid.cells()), 0.0);
}

Table SweepMap::to_table() const {
  Table t;
  t.columns = {grid.x.name, grid.y.name, "value"};
  for (int i = 0; i < grid.x.size(); ++i) {
    for (int j = 0; j < grid.y.size(); ++j) t.add_row({grid.x[i], grid.y[j], at(i, j)});
  }
  return t;
}

SweepMap SweepMap::from_table(const Table& table) {
  if (table.columns.size() != 3) throw ConfigError("map table needs exactly 3 columns");
  std::vector<double> xs, ys;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const double x = table.number(r, table.columns[0]);
    const double y = table.number(r, table.columns[1]);
    if (xs.empty() || xs.back() != x) xs.push_back(x);
    if (xs.size() == 1) ys.push_back(y);
  }
  SweepMap map(GridSpec{Axis::list(table.columns[0], xs), Axis::list(table.columns[1], ys)});
  if (static_cast<std::int64_t>(table.rows.size()) != map.grid.cells()) {
    throw ConfigError("map table is not a full rectangular grid");
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) map.values[r] = table.number(r, "value");
  return map;
}

MinimaReport find_minima(const SweepMap& input, const MinimaOptions& options) {
  const SweepMap map = options.median_smooth ? median_smoothed(input) : input;
  const int nx = map.grid.x.size();
  const int ny = map.grid.y.size();
  MinimaReport report;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double v = map.at(i, j);
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || ii >= nx || jj < 0 || jj >= ny) continue;
          if (!(v < map.at(ii, jj))) {
            is_min = false;
            break;
          }
        }
      }
      if (is_min) report.local_minima.push_back({i, j, map.grid.x[i], map.grid.y[j], v});
    }
  }
  std::stable_sort(report.local_minima.begin(), report.local_minima.end(),
                   [](const MapPoint& a, const MapPoint& b) { return a.value < b.value; });
  if (report.local_minima.empty()) return report;

  report.global_min = report.local_minima.front();
  const MapPoint& g = *report.global_min;
  for (const MapPoint& p : report.local_minima) {
    if (p.x < g.x && p.value <= options.secondary_ratio * g.value) {
      report.secondary_min = p;
      break;
    }
  }
  return report;
}

SweepMap sweep_hb_map(int M, double n_bar, const GridSpec& grid, int threads) {
  ProtocolParams{M, n_bar, 0.0, 0.0}.validate();
  SweepMap map(grid);
  const int ny = grid.y.size();
  const std::int64_t cells = grid.cells();
#pragma omp parallel for schedule(dynamic) num_threads(resolve_threads(threads))
  for (std::int64_t k = 0; k < cells; ++k) {
    const int i = static_cast<int>(k / ny);
    const int j = static_cast<int>(k % ny);
    map.at(i, j) = cfsk_hb(M, n_bar, grid.x[i], grid.y[j]);
  }
  map.metadata = {{"quantity", "hb"},
                  {"method", "SRM_GENERIC"},
                  {"M", std::to_string(M)},
                  {"nbar", format_double(n_bar)}};
  return map;
}

SweepMap sweep_ser_map(int M, double n_bar, const GridSpec& grid, const ReceiverModel& model,
                       std::int64_t trials, std::uint64_t seed, int threads) {
  SweepMap map(grid);
  for (int i = 0; i < grid.x.size(); ++i) {
    for (int j = 0; j < grid.y.size(); ++j) {
      const ProtocolParams p{M, n_bar, grid.x[i], grid.y[j]};
      const std::uint64_t cell_seed =
          stream_key(seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
      map.at(i, j) = estimate_ser(p, model, trials, cell_seed, threads).p_hat;
    }
  }
  map.metadata = {{"quantity", "ser"},
                  {"M", std::to_string(M)},
                  {"nbar", format_double(n_bar)},
                  {"trials", std::to_string(trials)},
                  {"seed", std::to_string(seed)},
                  {"visibility", format_double(model.visibility)},
                  {"efficiency", format_double(model.efficiency)},
                  {"transmittance", format_double(model.transmittance)}};
  return map;
}

CfskOptimum optimize_cfsk(int M, double n_bar, const GridSpec& coarse, int refine_points,
                          int threads) {
  const SweepMap map = sweep_hb_map(M, n_bar, coarse, threads);
  const auto [bi, bj] = argmin_cell(map);
  CfskOptimum best{coarse.x[bi], coarse.y[bj], map.at(bi, bj)};
  if (refine_points < 2) return best;

  const double dx = local_step(coarse.x, bi);
  const double dy = local_step(coarse.y, bj);
  const double x_lo = std::max(0.0, best.delta_omega_T - dx);
  const GridSpec fine{Axis::linear("dwt", x_lo, best.delta_omega_T + dx, refine_points),
                      Axis::linear("dtheta", best.delta_theta - dy, best.delta_theta + dy,
                                   refine_points)};
  const SweepMap refined = sweep_hb_map(M, n_bar, fine, threads);
  const auto [ri, rj] = argmin_cell(refined);
  if (refined.at(ri, rj) < best.hb) best = {fine.x[ri], fine.y[rj], refined.at(ri, rj)};
  return best;
}

CfskOptimum optimize_cfsk(int M, double n_bar, int threads) {
  return optimize_cfsk(M, n_bar, GridSpec::default_optimization(), 9, threads);
}

int bits_per_symbol(int M) {
  if (M < 2 || !std::has_single_bit(static_cast<unsigned>(M))) {
    throw ConfigError("M=" + std::to_string(M) + " is not a power of two >= 2");
  }
  return std::countr_zero(static_cast<unsigned>(M));
}

Table scan_energy(int M, const std::vector<ConstellationKind>& kinds,
                  const std::vector<double>& n_bars, const ScanOptions& options) {
  if (n_bars.empty()) throw ConfigError("scan-energy needs at least one n_bar");
  const auto wants = [&](ConstellationKind k) {
    return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
  };
  if (wants(ConstellationKind::kQam16) && M != 16) throw ConfigError("QAM16 requires M=16");
  if (wants(ConstellationKind::kPpm) && M < 2) throw ConfigError("PPM needs M >= 2");

  Columns cols;
  for (std::size_t r = 0; r < n_bars.size(); ++r) {
    const double n_bar = n_bars[r];
    const auto seed_for = [&](std::uint64_t tag) { return stream_key(options.seed, r, tag); };
    cols.put("nbar", n_bar);
    if (wants(ConstellationKind::kCfsk)) {
      const CfskOptimum opt = optimize_cfsk(M, n_bar, options.optimization_grid, 9, options.threads);
      const ProtocolParams p{M, n_bar, opt.delta_omega_T, opt.delta_theta};
      cols.put("cfsk_dwt", opt.delta_omega_T);
      cols.put("cfsk_dtheta", opt.delta_theta);
      if (options.simulate) {
        put_ser(cols, "cfsk", estimate_ser(p, options.model, options.trials, seed_for(0), options.threads));
      }
      cols.put("cfsk_hb", opt.hb);
      put_sql(cols, "cfsk", sql_error_mc(Constellation::cfsk(p), options.sql_trials, seed_for(10), options.threads));
    }
    if (wants(ConstellationKind::kPsk)) {
      const ProtocolParams p = ProtocolParams::psk(M, n_bar);
      if (options.simulate) {
        put_ser(cols, "psk", estimate_ser(p, options.model, options.trials, seed_for(1), options.threads));
      }
      cols.put("psk_hb", psk_helstrom_circulant(M, n_bar).p_error);
      put_sql(cols, "psk", sql_error_mc(Constellation::psk(M, n_bar), options.sql_trials, seed_for(11), options.threads));
    }
    if (wants(ConstellationKind::kQam16)) {
      const Constellation c = Constellation::qam16(n_bar);
      cols.put("qam16_hb", helstrom_bound(c).p_error);
      put_sql(cols, "qam16", sql_error_mc(c, options.sql_trials, seed_for(12), options.threads));
    }
    if (wants(ConstellationKind::kPpm)) {
      const Constellation c = Constellation::ppm(M, n_bar);
      cols.put("ppm_hb", helstrom_bound(c).p_error);
      put_sql(cols, "ppm", sql_error_mc(c, options.sql_trials, seed_for(13), options.threads));
    }
    cols.end_row();
  }
  return std::move(cols.table);
}

Table scan_alphabet(double photons_per_bit, const std::vector<int>& Ms, const ScanOptions& options) {
  if (Ms.empty()) throw ConfigError("scan-alphabet needs at least one M");
  if (!(photons_per_bit >= 0.0)) throw ConfigError("photons per bit must be >= 0");
  for (int M : Ms) bits_per_symbol(M);

  Columns cols;
  for (std::size_t r = 0; r < Ms.size(); ++r) {
    const int M = Ms[r];
    const int bits = bits_per_symbol(M);
    const double n_bar = photons_per_bit * bits;
    const auto seed_for = [&](std::uint64_t tag) { return stream_key(options.seed, r, tag); };
    cols.put("M", std::int64_t{M});
    cols.put("bits", std::int64_t{bits});
    cols.put("nbar", n_bar);

    const CfskOptimum opt = optimize_cfsk(M, n_bar, options.optimization_grid, 9, options.threads);
    const ProtocolParams cfsk{M, n_bar, opt.delta_omega_T, opt.delta_theta};
    cols.put("cfsk_dwt", opt.delta_omega_T);
    cols.put("cfsk_dtheta", opt.delta_theta);
    if (options.simulate) {
      put_ser(cols, "cfsk", estimate_ser(cfsk, options.model, options.trials, seed_for(0), options.threads));
    }
    cols.put("cfsk_hb", opt.hb);
    put_sql(cols, "cfsk", sql_error_mc(Constellation::cfsk(cfsk), options.sql_trials, seed_for(10), options.threads));

    const ProtocolParams psk = ProtocolParams::psk(M, n_bar);
    if (options.simulate) {
      put_ser(cols, "psk", estimate_ser(psk, options.model, options.trials, seed_for(1), options.threads));
    }
    cols.put("psk_hb", psk_helstrom_circulant(M, n_bar).p_error);
    put_sql(cols, "psk", sql_error_mc(Constellation::psk(M, n_bar), options.sql_trials, seed_for(11), options.threads));
    cols.end_row();
  }
  return std::move(cols.table);
}

SweepMap hb_ratio_map(const std::vector<double>& energies, const std::vector<int>& Ms,
                      EnergyUnit unit, const GridSpec& coarse, int threads) {
  std::vector<double> m_values(Ms.begin(), Ms.end());
  const std::string x_name = unit == EnergyUnit::kPerBit ? "photons_per_bit" : "nbar";
  SweepMap map(GridSpec{Axis::list(x_name, energies), Axis::list("M", m_values)});
  if (unit == EnergyUnit::kPerBit) {
    for (int M : Ms) bits_per_symbol(M);
  }
  for (int i = 0; i < map.grid.x.size(); ++i) {
    for (int j = 0; j < map.grid.y.size(); ++j) {
      const int M = Ms[static_cast<std::size_t>(j)];
      const double n_bar = unit == EnergyUnit::kPerBit ? energies[i] * bits_per_symbol(M) : energies[i];
      const double cfsk = optimize_cfsk(M, n_bar, coarse, 9, threads).hb;
      const double psk = psk_helstrom_circulant(M, n_bar).p_error;
      map.at(i, j) = psk > 0.0 ? cfsk / psk : (cfsk > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    }
  }
  map.metadata = {{"quantity", "hb_ratio_cfsk_over_psk"},
                  {"energy_unit", unit == EnergyUnit::kPerBit ? "per_bit" : "per_symbol"}};
  return map;
}

}  // namespace cfsk
