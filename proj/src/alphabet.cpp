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

#include "cfsk/alphabet.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "cfsk/errors.hpp"

namespace cfsk {

namespace {

// Below this |d * delta_omega_T| the closed form (e^{ix} - 1)/(ix) cancels
// badly; a fourth-order Taylor series is exact to double precision there.
constexpr double kSeriesThreshold = 1e-6;

Complex phase_average(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return {1.0 - x2 / 6.0 + x2 * x2 / 120.0, x / 2.0 - x2 * x / 24.0};
  }
  // (e^{ix} - 1)/(ix) = (sin x)/x + i (1 - cos x)/x, with 1 - cos x = 2 sin^2(x/2).
  const double s = std::sin(0.5 * x);
  return {std::sin(x) / x, 2.0 * s * s / x};
}

}  // namespace

std::string_view to_string(ConstellationKind kind) {
  switch (kind) {
    case ConstellationKind::kCfsk: return "cfsk";
    case ConstellationKind::kPsk: return "psk";
    case ConstellationKind::kQam16: return "qam16";
    case ConstellationKind::kPpm: return "ppm";
  }
  return "unknown";
}

ConstellationKind parse_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "cfsk") return ConstellationKind::kCfsk;
  if (lower == "psk") return ConstellationKind::kPsk;
  if (lower == "qam16" || lower == "qam") return ConstellationKind::kQam16;
  if (lower == "ppm") return ConstellationKind::kPpm;
  throw ConfigError("unknown constellation kind '" + std::string(name) +
                    "' (expected cfsk, psk, qam16 or ppm)");
}

void ProtocolParams::validate() const {
  if (M < 1) throw ConfigError("alphabet size M must be >= 1");
  if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) {
    throw ConfigError("mean photon number must be finite and >= 0");
  }
  if (!(delta_omega_T >= 0.0) || !std::isfinite(delta_omega_T)) {
    throw ConfigError("delta_omega_T must be finite and >= 0");
  }
  if (!std::isfinite(delta_theta)) throw ConfigError("delta_theta must be finite");
}

Constellation::Constellation(ConstellationKind kind, ProtocolParams params,
                             std::vector<Complex> amplitudes)
    : kind_(kind), params_(params), amplitudes_(std::move(amplitudes)) {
  params_.validate();
}

Constellation Constellation::cfsk(const ProtocolParams& params) {
  return Constellation(ConstellationKind::kCfsk, params);
}

Constellation Constellation::psk(int M, double n_bar) {
  if (M < 1) throw ConfigError("alphabet size M must be >= 1");
  return Constellation(ConstellationKind::kPsk, ProtocolParams::psk(M, n_bar));
}

Constellation Constellation::qam16(double n_bar) {
  // Square {+-1, +-3} x {+-1, +-3} grid; its mean |c|^2 is 10.
  const double scale = std::sqrt(n_bar / 10.0);
  std::vector<Complex> amps;
  amps.reserve(16);
  for (int re : {-3, -1, 1, 3}) {
    for (int im : {-3, -1, 1, 3}) amps.emplace_back(scale * re, scale * im);
  }
  return Constellation(ConstellationKind::kQam16, {16, n_bar, 0.0, 0.0}, std::move(amps));
}

Constellation Constellation::ppm(int M, double n_bar) {
  return Constellation(ConstellationKind::kPpm, {M, n_bar, 0.0, 0.0});
}

Constellation Constellation::make(ConstellationKind kind, const ProtocolParams& params) {
  switch (kind) {
    case ConstellationKind::kCfsk: return cfsk(params);
    case ConstellationKind::kPsk: return psk(params.M, params.n_bar);
    case ConstellationKind::kQam16:
      if (params.M != 16) throw ConfigError("QAM16 requires M=16");
      return qam16(params.n_bar);
    case ConstellationKind::kPpm: return ppm(params.M, params.n_bar);
  }
  throw ConfigError("unknown constellation kind");
}

Complex mode_overlap(int d, double delta_omega_T, double delta_theta) {
  if (d == 0) return {1.0, 0.0};
  const double dd = static_cast<double>(d);
  return std::polar(1.0, dd * delta_theta) * phase_average(dd * delta_omega_T);
}

GramMatrix::GramMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw ConfigError("Gram matrix must be square and non-empty");
  }
}

double GramMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool GramMatrix::is_hermitian(double tol) const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool GramMatrix::has_unit_diagonal(double tol) const {
  return (entries_.diagonal().array() - Complex(1.0, 0.0)).abs().maxCoeff() <= tol;
}

GramMatrix gram_matrix(const Constellation& c) {
  const int M = c.size();
  const auto& p = c.params();
  Eigen::MatrixXcd g(M, M);
  switch (c.kind()) {
    case ConstellationKind::kCfsk:
    case ConstellationKind::kPsk: {
      // Toeplitz in (m - j); fill the upper triangle and mirror it so the
      // result is Hermitian to the last bit.
      std::vector<Complex> by_offset(M);
      for (int d = 0; d < M; ++d) {
        by_offset[d] = std::exp(-p.n_bar * (1.0 - mode_overlap(d, p.delta_omega_T, p.delta_theta)));
      }
      for (int j = 0; j < M; ++j) {
        g(j, j) = 1.0;
        for (int m = j + 1; m < M; ++m) {
          g(j, m) = by_offset[m - j];
          g(m, j) = std::conj(by_offset[m - j]);
        }
      }
      break;
    }
    case ConstellationKind::kQam16: {
      const auto& a = c.amplitudes();
      for (int j = 0; j < M; ++j) {
        for (int m = 0; m < M; ++m) {
          g(j, m) = std::exp(-0.5 * std::norm(a[j]) - 0.5 * std::norm(a[m]) + std::conj(a[j]) * a[m]);
        }
        g(j, j) = 1.0;
      }
      break;
    }
    case ConstellationKind::kPpm: {
      g.setConstant(std::exp(-p.n_bar));
      g.diagonal().setOnes();
      break;
    }
  }
  return GramMatrix(std::move(g));
}

Eigen::MatrixXcd mode_overlap_matrix(const Constellation& c) {
  const int M = c.size();
  const auto& p = c.params();
  switch (c.kind()) {
    case ConstellationKind::kCfsk:
    case ConstellationKind::kPsk: {
      Eigen::MatrixXcd gamma(M, M);
      for (int j = 0; j < M; ++j) {
        gamma(j, j) = 1.0;
        for (int m = j + 1; m < M; ++m) {
          gamma(j, m) = mode_overlap(m - j, p.delta_omega_T, p.delta_theta);
          gamma(m, j) = std::conj(gamma(j, m));
        }
      }
      return gamma;
    }
    case ConstellationKind::kPpm:
      return Eigen::MatrixXcd::Identity(M, M);
    case ConstellationKind::kQam16:
      return Eigen::MatrixXcd::Ones(1, 1);
  }
  return {};
}

}  // namespace cfsk
