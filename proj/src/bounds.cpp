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

#include "cfsk/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <omp.h>

#include "cfsk/errors.hpp"
#include "cfsk/rng.hpp"
#include "cfsk/stats.hpp"

namespace cfsk {

namespace {

constexpr double kRelativeClip = 1e-12;
constexpr double kNegativeEigenvalueLimit = -1e-8;

// Sum over pairs of (sqrt(l_k) - sqrt(l_j))^2 equals M*sum(l) - (sum sqrt(l))^2;
// the pairwise form does not cancel when the error is tiny.
double circulant_error_from_roots(const std::vector<double>& roots) {
  const double M = static_cast<double>(roots.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    for (std::size_t j = k + 1; j < roots.size(); ++j) {
      const double diff = roots[k] - roots[j];
      acc += diff * diff;
    }
  }
  return acc / (M * M);
}

int decide_min_distance(const Eigen::MatrixXcd& means, const Eigen::VectorXcd& y) {
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int m = 0; m < means.rows(); ++m) {
    double dist = 0.0;
    for (int k = 0; k < means.cols(); ++k) dist += std::norm(y(k) - means(m, k));
    if (dist < best_dist) {
      best_dist = dist;
      best = m;
    }
  }
  return best;
}

// One heterodyne shot for trial `index`: 1 if misdecided, 0 otherwise.
int sql_trial(const Eigen::MatrixXcd& means, std::uint64_t seed, std::int64_t index,
              Eigen::VectorXcd& y) {
  const int M = static_cast<int>(means.rows());
  const int sent = static_cast<int>(index % M);
  Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(index));
  std::normal_distribution<double> noise(0.0, std::sqrt(0.5));
  for (int k = 0; k < means.cols(); ++k) {
    const double re = noise(rng);
    const double im = noise(rng);
    y(k) = means(sent, k) + Complex(re, im);
  }
  return decide_min_distance(means, y) != sent ? 1 : 0;
}

BoundResult sql_result(std::int64_t errors, std::int64_t trials) {
  const Interval ci = wilson_interval(errors, trials);
  BoundResult r;
  r.p_error = static_cast<double>(errors) / static_cast<double>(trials);
  r.method = BoundMethod::kSqlMc;
  r.ci95_halfwidth = ci.halfwidth();
  r.errors = errors;
  r.trials = trials;
  return r;
}

void check_trials(std::int64_t trials) {
  if (trials < 1) throw ConfigError("trials must be >= 1");
}

}  // namespace

std::string_view to_string(BoundMethod method) {
  switch (method) {
    case BoundMethod::kSrmGeneric: return "SRM_GENERIC";
    case BoundMethod::kPskCirculant: return "PSK_CIRCULANT";
    case BoundMethod::kPpmClosed: return "PPM_CLOSED";
    case BoundMethod::kBinaryClosed: return "BINARY_CLOSED";
    case BoundMethod::kSqlMc: return "SQL_MC";
  }
  return "UNKNOWN";
}

BoundResult srm_error(const GramMatrix& G) {
  const int M = G.size();
  if (!G.entries().allFinite()) throw NumericError("Gram matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(G.entries());
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigendecomposition of the Gram matrix did not converge");
  }
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  if (lambda.minCoeff() < kNegativeEigenvalueLimit) {
    throw NumericError("Gram matrix is not positive semidefinite (eigenvalue " +
                       std::to_string(lambda.minCoeff()) + ")");
  }
  const double cutoff = kRelativeClip * std::max(lambda.maxCoeff(), 0.0);
  Eigen::VectorXd roots(M);
  for (int k = 0; k < M; ++k) roots(k) = lambda(k) > cutoff ? std::sqrt(lambda(k)) : 0.0;

  const Eigen::MatrixXcd& U = solver.eigenvectors();
  const Eigen::MatrixXcd S = U * roots.asDiagonal() * U.adjoint();

  // Per symbol: success = S_mm^2 / (S S^dagger)_mm. The denominator is 1 up to
  // clipping; keeping it makes the off-diagonal sum an exact complement.
  double error = 0.0;
  for (int m = 0; m < M; ++m) {
    double off = 0.0;
    for (int k = 0; k < M; ++k) {
      if (k != m) off += std::norm(S(m, k));
    }
    const double diag = std::norm(S(m, m));
    const double total = off + diag;
    error += total > 0.0 ? off / total : 1.0 - 1.0 / M;
  }
  BoundResult r;
  r.p_error = std::clamp(error / M, 0.0, 1.0);
  r.method = BoundMethod::kSrmGeneric;
  return r;
}

double binary_helstrom(double overlap_sq) {
  if (!(overlap_sq >= 0.0 && overlap_sq <= 1.0)) {
    throw ConfigError("binary_helstrom: overlap_sq must lie in [0, 1]");
  }
  // (1 - sqrt(1 - s))/2 rewritten to avoid cancellation for small s.
  return 0.5 * overlap_sq / (1.0 + std::sqrt(1.0 - overlap_sq));
}

BoundResult psk_helstrom_circulant(int M, double n_bar) {
  if (M < 1) throw ConfigError("alphabet size M must be >= 1");
  if (!(n_bar >= 0.0)) throw ConfigError("mean photon number must be >= 0");
  const double step = 2.0 * std::numbers::pi / M;
  std::vector<Complex> row(M);
  for (int d = 0; d < M; ++d) {
    row[d] = std::exp(-n_bar * (1.0 - std::polar(1.0, step * d)));
  }
  std::vector<double> lambda(M);
  for (int k = 0; k < M; ++k) {
    Complex acc = 0.0;
    for (int d = 0; d < M; ++d) {
      acc += row[d] * std::polar(1.0, -step * static_cast<double>((static_cast<long>(k) * d) % M));
    }
    lambda[k] = acc.real();
  }
  const double cutoff = kRelativeClip * std::max(*std::max_element(lambda.begin(), lambda.end()), 0.0);
  std::vector<double> roots(M);
  for (int k = 0; k < M; ++k) roots[k] = lambda[k] > cutoff ? std::sqrt(lambda[k]) : 0.0;

  // Normalize by the trace actually retained so the complement form matches
  // the generic path's per-symbol renormalization.
  double trace = 0.0;
  for (double r : roots) trace += r * r;
  double error = circulant_error_from_roots(roots);
  error *= static_cast<double>(M) / trace;

  BoundResult r;
  r.p_error = std::clamp(error, 0.0, 1.0);
  r.method = BoundMethod::kPskCirculant;
  return r;
}

BoundResult ppm_helstrom_closed(int M, double n_bar) {
  if (M < 2) throw ConfigError("PPM bound needs M >= 2");
  if (!(n_bar >= 0.0)) throw ConfigError("mean photon number must be >= 0");
  const double g = std::exp(-n_bar);
  const double Mm1 = static_cast<double>(M - 1);
  const double a = std::sqrt(1.0 + Mm1 * g);
  const double b = std::sqrt(1.0 - g);
  // Success amplitude s = (a + (M-1) b)/M; 1 - s simplifies to
  // (M-1) g^2 / ((1+b)(1+a)(a+b)), which keeps precision as g -> 0.
  const double one_minus_s = Mm1 * g * g / ((1.0 + b) * (1.0 + a) * (a + b));
  const double s = 1.0 - one_minus_s;
  BoundResult r;
  r.p_error = std::clamp(one_minus_s * (1.0 + s), 0.0, 1.0);
  r.method = BoundMethod::kPpmClosed;
  return r;
}

BoundResult helstrom_bound(const Constellation& c) {
  const auto& p = c.params();
  switch (c.kind()) {
    case ConstellationKind::kPsk: return psk_helstrom_circulant(p.M, p.n_bar);
    case ConstellationKind::kPpm:
      if (p.M >= 2) return ppm_helstrom_closed(p.M, p.n_bar);
      break;
    default: break;
  }
  const GramMatrix G = gram_matrix(c);
  if (G.size() == 1) return {0.0, BoundMethod::kBinaryClosed};
  if (G.size() == 2) {
    return {binary_helstrom(std::min(std::norm(G(0, 1)), 1.0)), BoundMethod::kBinaryClosed};
  }
  return srm_error(G);
}

Eigen::MatrixXcd heterodyne_means(const Constellation& c) {
  const double amp = std::sqrt(c.params().n_bar);
  switch (c.kind()) {
    case ConstellationKind::kQam16: {
      Eigen::MatrixXcd means(16, 1);
      for (int m = 0; m < 16; ++m) means(m, 0) = c.amplitudes()[m];
      return means;
    }
    case ConstellationKind::kPpm:
      return amp * Eigen::MatrixXcd::Identity(c.size(), c.size());
    default: break;
  }
  // Gamma = U diag(l) U^dagger; L = U diag(sqrt l) restricted to the
  // retained eigenvalues gives L L^dagger = Gamma with rows in an orthonormal
  // basis of the span of the mode functions.
  const Eigen::MatrixXcd gamma = mode_overlap_matrix(c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gamma);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigendecomposition of the mode overlap matrix did not converge");
  }
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const double cutoff = kRelativeClip * std::max(lambda.maxCoeff(), 0.0);
  std::vector<int> kept;
  for (int k = 0; k < lambda.size(); ++k) {
    if (lambda(k) > cutoff) kept.push_back(k);
  }
  Eigen::MatrixXcd means(c.size(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t col = 0; col < kept.size(); ++col) {
    const int k = kept[col];
    means.col(static_cast<Eigen::Index>(col)) = amp * std::sqrt(lambda(k)) * solver.eigenvectors().col(k);
  }
  return means;
}

BoundResult sql_error_mc_serial(const Constellation& c, std::int64_t trials, std::uint64_t seed) {
  check_trials(trials);
  const Eigen::MatrixXcd means = heterodyne_means(c);
  Eigen::VectorXcd y(means.cols());
  std::int64_t errors = 0;
  for (std::int64_t i = 0; i < trials; ++i) errors += sql_trial(means, seed, i, y);
  return sql_result(errors, trials);
}

BoundResult sql_error_mc(const Constellation& c, std::int64_t trials, std::uint64_t seed,
                         int threads) {
  check_trials(trials);
  const Eigen::MatrixXcd means = heterodyne_means(c);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  std::int64_t errors = 0;
#pragma omp parallel num_threads(nthreads) reduction(+ : errors)
  {
    Eigen::VectorXcd y(means.cols());
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < trials; ++i) errors += sql_trial(means, seed, i, y);
  }
  return sql_result(errors, trials);
}

double multiplexed_bpsk_error(double n_bar_per_channel, int channels) {
  if (channels < 1) throw ConfigError("channels must be >= 1");
  if (!(n_bar_per_channel >= 0.0)) throw ConfigError("mean photon number must be >= 0");
  const double p = binary_helstrom(std::exp(-4.0 * n_bar_per_channel));
  return -std::expm1(channels * std::log1p(-p));
}

}  // namespace cfsk
