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

// Modulation alphabets and the overlaps between their coherent states.
//
// All pulses are rectangular with the duration normalized to 1, so times are
// fractions of the pulse and the frequency spacing enters only through the
// product delta_omega_T.

#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cfsk {

using Complex = std::complex<double>;

enum class ConstellationKind { kCfsk, kPsk, kQam16, kPpm };

std::string_view to_string(ConstellationKind kind);
/// Accepts "cfsk", "psk", "qam16", "ppm" (case-insensitive).
ConstellationKind parse_kind(std::string_view name);

struct ProtocolParams {
  int M = 2;
  double n_bar = 0.0;          // mean photons per symbol
  double delta_omega_T = 0.0;  // frequency spacing times pulse duration
  double delta_theta = 0.0;    // phase spacing between adjacent symbols

  /// Throws ConfigError if M < 1, n_bar < 0 or delta_omega_T < 0.
  void validate() const;

  /// The PSK point of the CFSK family: no detuning, phases 2*pi/M apart.
  static ProtocolParams psk(int M, double n_bar) {
    return {M, n_bar, 0.0, 2.0 * std::numbers::pi / M};
  }
};

class Constellation {
 public:
  static Constellation cfsk(const ProtocolParams& params);
  static Constellation psk(int M, double n_bar);
  static Constellation qam16(double n_bar);
  static Constellation ppm(int M, double n_bar);

  /// Builds `kind` from `params`. PSK ignores the detuning and phase fields;
  /// QAM16 rejects M != 16.
  static Constellation make(ConstellationKind kind, const ProtocolParams& params);

  ConstellationKind kind() const { return kind_; }
  const ProtocolParams& params() const { return params_; }
  int size() const { return params_.M; }
  /// Complex amplitudes (sqrt of photon number); populated for QAM16 only.
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }

 private:
  Constellation(ConstellationKind kind, ProtocolParams params,
                std::vector<Complex> amplitudes = {});

  ConstellationKind kind_;
  ProtocolParams params_;
  std::vector<Complex> amplitudes_;
};

/// Normalized overlap of two rectangular temporal modes whose symbol indices
/// differ by `d`:  integral over [0,1] of exp(i*d*(delta_omega_T*t + delta_theta)).
Complex mode_overlap(int d, double delta_omega_T, double delta_theta);

/// Dense M x M matrix of pairwise state inner products <psi_j|psi_m>.
class GramMatrix {
 public:
  explicit GramMatrix(Eigen::MatrixXcd entries);

  int size() const { return static_cast<int>(entries_.rows()); }
  Complex operator()(int j, int m) const { return entries_(j, m); }
  const Eigen::MatrixXcd& entries() const { return entries_; }

  double min_eigenvalue() const;
  bool is_hermitian(double tol = 1e-12) const;
  bool has_unit_diagonal(double tol = 1e-12) const;

 private:
  Eigen::MatrixXcd entries_;
};

GramMatrix gram_matrix(const Constellation& c);

/// Inner products of the temporal mode functions (no photon-number factor).
/// CFSK/PSK: gamma(m - j); PPM: identity; QAM16: a single shared mode, so
/// the 1 x 1 matrix [1].
Eigen::MatrixXcd mode_overlap_matrix(const Constellation& c);

}  // namespace cfsk
