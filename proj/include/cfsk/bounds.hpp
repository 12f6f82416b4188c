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

#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

#include "cfsk/alphabet.hpp"

namespace cfsk {

enum class BoundMethod {
  kSrmGeneric,
  kPskCirculant,
  kPpmClosed,
  kBinaryClosed,
  kSqlMc,  // heterodyne detection + minimum-distance decision, Monte Carlo
};

std::string_view to_string(BoundMethod method);

struct BoundResult {
  double p_error = 0.0;
  BoundMethod method = BoundMethod::kSrmGeneric;
  double ci95_halfwidth = 0.0;  // nonzero only for kSqlMc
  std::int64_t errors = 0;      // Monte Carlo tallies, kSqlMc only
  std::int64_t trials = 0;
};

/// Error probability of the square-root measurement for equiprobable pure
/// states with Gram matrix `G`.
///
/// The result is accumulated from the off-diagonal entries of sqrt(G), using
/// (sqrt G)_mm^2 = 1 - sum_{k != m} |(sqrt G)_mk|^2, so values far below
/// machine epsilon keep their relative precision. Eigenvalues below 1e-12 of
/// the largest are clipped to zero.
///
/// Throws NumericError if an eigenvalue is below -1e-8.
BoundResult srm_error(const GramMatrix& G);

/// Helstrom error for two equiprobable pure states with |<a|b>|^2 = overlap_sq.
double binary_helstrom(double overlap_sq);

/// Helstrom bound of M-PSK from the eigenvalues of its circulant Gram matrix.
BoundResult psk_helstrom_circulant(int M, double n_bar);

/// Helstrom bound of M-PPM from the closed form for Gram = (1-g) I + g J.
BoundResult ppm_helstrom_closed(int M, double n_bar);

/// Best available Helstrom/SRM value for a constellation: closed forms where
/// they exist, the generic SRM otherwise.
BoundResult helstrom_bound(const Constellation& c);

/// Mean heterodyne outcome vectors (rows) of each symbol in an orthonormal
/// mode basis: sqrt(n_bar) times the rows of L with L L^dagger = Gamma.
Eigen::MatrixXcd heterodyne_means(const Constellation& c);

/// Standard quantum limit estimate: ideal heterodyne measurement with unit
/// complex-Gaussian shot noise per mode and minimum-distance decisions.
/// Trial i sends symbol i mod M and draws its noise from stream (seed, i), so
/// the result does not depend on `threads` (0 = OpenMP default).
BoundResult sql_error_mc(const Constellation& c, std::int64_t trials, std::uint64_t seed,
                         int threads = 0);

/// Single-threaded reference for sql_error_mc; identical output.
BoundResult sql_error_mc_serial(const Constellation& c, std::int64_t trials,
                                std::uint64_t seed);

/// Symbol error of `channels` independent binary PSK links, each carrying
/// n_bar_per_channel photons: 1 - (1 - p)^channels.
double multiplexed_bpsk_error(double n_bar_per_channel, int channels);

}  // namespace cfsk
