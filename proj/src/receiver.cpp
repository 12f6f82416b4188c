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

#include "cfsk/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include <omp.h>

#include "cfsk/errors.hpp"

namespace cfsk {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double rate_scale(const ProtocolParams& p, const ReceiverModel& r) {
  return 2.0 * r.efficiency * r.transmittance * p.n_bar;
}

void fill_uniform(std::span<double> weights) {
  std::fill(weights.begin(), weights.end(), 1.0 / static_cast<double>(weights.size()));
}

// Multiplies weights by likelihood_m = exp(-(L_m - min L)) * (rate_m or 1) and
// renormalizes. `rates` may be empty for the survival-only tail.
bool reweight(std::span<double> weights, std::span<const double> exponents,
              std::span<const double> rates) {
  const double shift = *std::min_element(exponents.begin(), exponents.end());
  double total = 0.0;
  for (std::size_t m = 0; m < weights.size(); ++m) {
    double w = weights[m] * std::exp(-(exponents[m] - shift));
    if (!rates.empty()) w *= rates[m];
    weights[m] = w;
    total += w;
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    fill_uniform(weights);
    return true;
  }
  for (double& w : weights) w /= total;
  return false;
}

struct TrialOutcome {
  int decision = 0;
  bool capped = false;
  bool degenerate = false;
};

// Shared kernel of run_trial and the SER estimators. `weights` is scratch of
// size M; `record` is filled when non-null.
TrialOutcome simulate(int true_symbol, const ProtocolParams& p, const ReceiverModel& r, Rng& rng,
                      std::span<double> weights, TrialRecord* record) {
  const int M = p.M;
  int h = r.initial.index;
  if (r.initial.mode == InitialHypothesis::Mode::kRandomUniform) {
    h = std::uniform_int_distribution<int>(0, M - 1)(rng);
  }
  fill_uniform(weights);
  if (record != nullptr) record->hypotheses.push_back(h);

  TrialOutcome out;
  double t = 0.0;
  int events = 0;
  while (true) {
    if (events >= r.max_events) {
      out.capped = true;
      break;
    }
    const std::optional<double> click = sample_next_arrival(true_symbol, h, t, p, r, rng);
    if (!click) break;
    ++events;
    out.degenerate |= apply_click_update(weights, h, t, *click, p, r);
    t = *click;
    h = argmax_lowest(weights);
    if (record != nullptr) {
      record->arrivals.push_back(t);
      record->hypotheses.push_back(h);
    }
  }
  out.degenerate |= apply_final_update(weights, h, t, p, r);
  out.decision = argmax_lowest(weights);
  return out;
}

SerEstimate make_estimate(std::int64_t errors, std::int64_t trials, std::int64_t capped,
                          std::int64_t degenerate) {
  SerEstimate est;
  est.errors = errors;
  est.trials = trials;
  est.p_hat = static_cast<double>(errors) / static_cast<double>(trials);
  est.ci95 = wilson_interval(errors, trials);
  est.capped_trials = capped;
  est.degenerate_trials = degenerate;
  return est;
}

void check_inputs(const ProtocolParams& p, const ReceiverModel& r, std::int64_t trials) {
  p.validate();
  r.validate_for(p.M);
  if (trials < 1) throw ConfigError("trials must be >= 1");
}

}  // namespace

void ReceiverModel::validate() const {
  if (!(visibility >= 0.0 && visibility <= 1.0)) throw ConfigError("visibility must lie in [0, 1]");
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw ConfigError("efficiency must lie in (0, 1]");
  if (!(transmittance > 0.0 && transmittance <= 1.0)) {
    throw ConfigError("transmittance must lie in (0, 1]");
  }
  if (max_events < 1) throw ConfigError("max_events must be >= 1");
}

void ReceiverModel::validate_for(int M) const {
  validate();
  if (initial.mode == InitialHypothesis::Mode::kFixed && (initial.index < 0 || initial.index >= M)) {
    throw ConfigError("initial hypothesis " + std::to_string(initial.index) +
                      " is outside 0.." + std::to_string(M - 1));
  }
}

Posterior::Posterior(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ConfigError("posterior needs at least one hypothesis");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0 && w <= 1.0)) throw ConfigError("posterior weights must lie in [0, 1]");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("posterior weights must sum to 1");
}

Posterior Posterior::uniform(int M) {
  if (M < 1) throw ConfigError("posterior needs at least one hypothesis");
  return Posterior(std::vector<double>(M, 1.0 / M));
}

int Posterior::argmax() const { return argmax_lowest(weights_); }

int argmax_lowest(std::span<const double> weights) {
  int best = 0;
  for (int m = 1; m < static_cast<int>(weights.size()); ++m) {
    if (weights[m] > weights[best]) best = m;
  }
  return best;
}

double displaced_rate(int m, int h, double t, const ProtocolParams& p, const ReceiverModel& r) {
  const double d = static_cast<double>(h - m);
  const double phase = d * (p.delta_omega_T * t + p.delta_theta);
  return std::max(0.0, rate_scale(p, r) * (1.0 - r.visibility * std::cos(phase)));
}

double rate_bound(const ProtocolParams& p, const ReceiverModel& r) {
  return rate_scale(p, r) * (1.0 + r.visibility);
}

double rate_integral(int m, int h, double t0, double t1, const ProtocolParams& p,
                     const ReceiverModel& r) {
  const double width = t1 - t0;
  if (width <= 0.0) return 0.0;
  // sin(d w t1 + d theta) - sin(d w t0 + d theta)
  //   = 2 cos(d (w t_mid + theta)) sin(d w width / 2),
  // so the oscillating part is width * cos(.) * sinc(d w width / 2); this has
  // no 1/(d w) singularity and reduces to the constant-rate case at d w = 0.
  const double d = static_cast<double>(h - m);
  const double mid = 0.5 * (t0 + t1);
  const double oscillation =
      std::cos(d * (p.delta_omega_T * mid + p.delta_theta)) * sinc(0.5 * d * p.delta_omega_T * width);
  return std::max(0.0, rate_scale(p, r) * width * (1.0 - r.visibility * oscillation));
}

std::optional<double> sample_next_arrival(int m, int h, double t0, const ProtocolParams& p,
                                          const ReceiverModel& r, Rng& rng) {
  const double bound = rate_bound(p, r);
  if (!(bound > 0.0)) return std::nullopt;
  if (m == h && r.visibility >= 1.0) return std::nullopt;  // perfectly nulled
  double t = t0;
  while (true) {
    t -= std::log(rng.uniform_open0()) / bound;
    if (t > 1.0) return std::nullopt;
    if (rng.uniform() * bound < displaced_rate(m, h, t, p, r)) return t;
  }
}

bool apply_click_update(std::span<double> weights, int h, double t_prev, double t_k,
                        const ProtocolParams& p, const ReceiverModel& r) {
  const std::size_t M = weights.size();
  // Small alphabets stay on the stack; the heap path is only for M > 128.
  constexpr std::size_t kInline = 128;
  double exp_buf[kInline];
  double rate_buf[kInline];
  std::vector<double> exp_heap, rate_heap;
  std::span<double> exponents(exp_buf, std::min(M, kInline));
  std::span<double> rates(rate_buf, std::min(M, kInline));
  if (M > kInline) {
    exp_heap.resize(M);
    rate_heap.resize(M);
    exponents = exp_heap;
    rates = rate_heap;
  }
  for (std::size_t m = 0; m < M; ++m) {
    const int mi = static_cast<int>(m);
    exponents[m] = rate_integral(mi, h, t_prev, t_k, p, r);
    rates[m] = displaced_rate(mi, h, t_k, p, r);
  }
  return reweight(weights, exponents, rates);
}

bool apply_final_update(std::span<double> weights, int h, double t_last, const ProtocolParams& p,
                        const ReceiverModel& r) {
  if (t_last >= 1.0) return false;
  const std::size_t M = weights.size();
  std::vector<double> exponents(M);
  for (std::size_t m = 0; m < M; ++m) {
    exponents[m] = rate_integral(static_cast<int>(m), h, t_last, 1.0, p, r);
  }
  return reweight(weights, exponents, {});
}

UpdateResult bayes_click_update(const Posterior& prior, int h, double t_prev, double t_k,
                                const ProtocolParams& p, const ReceiverModel& r) {
  if (!(t_prev < t_k)) throw ConfigError("click update needs t_prev < t_k");
  std::vector<double> w(prior.weights().begin(), prior.weights().end());
  const bool degenerate = apply_click_update(w, h, t_prev, t_k, p, r);
  return {Posterior(std::move(w)), degenerate};
}

UpdateResult bayes_final_update(const Posterior& prior, int h, double t_last,
                                const ProtocolParams& p, const ReceiverModel& r) {
  std::vector<double> w(prior.weights().begin(), prior.weights().end());
  const bool degenerate = apply_final_update(w, h, t_last, p, r);
  return {Posterior(std::move(w)), degenerate};
}

TrialRecord run_trial(int true_symbol, const ProtocolParams& p, const ReceiverModel& r, Rng& rng) {
  p.validate();
  r.validate_for(p.M);
  if (true_symbol < 0 || true_symbol >= p.M) throw ConfigError("true symbol out of range");
  TrialRecord record;
  record.true_symbol = true_symbol;
  std::vector<double> weights(p.M);
  const TrialOutcome out = simulate(true_symbol, p, r, rng, weights, &record);
  record.final_posterior = Posterior(std::move(weights));
  record.decision = out.decision;
  record.cap_exceeded = out.capped;
  record.degenerate = out.degenerate;
  return record;
}

SerEstimate estimate_ser_serial(const ProtocolParams& p, const ReceiverModel& r,
                                std::int64_t trials, std::uint64_t seed) {
  check_inputs(p, r, trials);
  std::vector<double> weights(p.M);
  std::int64_t errors = 0, capped = 0, degenerate = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    const int sent = static_cast<int>(i % p.M);
    Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(i));
    const TrialOutcome out = simulate(sent, p, r, rng, weights, nullptr);
    errors += out.decision != sent;
    capped += out.capped;
    degenerate += out.degenerate;
  }
  return make_estimate(errors, trials, capped, degenerate);
}

SerEstimate estimate_ser(const ProtocolParams& p, const ReceiverModel& r, std::int64_t trials,
                         std::uint64_t seed, int threads) {
  check_inputs(p, r, trials);
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
  std::int64_t errors = 0, capped = 0, degenerate = 0;
#pragma omp parallel num_threads(nthreads) reduction(+ : errors, capped, degenerate)
  {
    std::vector<double> weights(p.M);
#pragma omp for schedule(dynamic, 4096)
    for (std::int64_t i = 0; i < trials; ++i) {
      const int sent = static_cast<int>(i % p.M);
      Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(i));
      const TrialOutcome out = simulate(sent, p, r, rng, weights, nullptr);
      errors += out.decision != sent;
      capped += out.capped;
      degenerate += out.degenerate;
    }
  }
  return make_estimate(errors, trials, capped, degenerate);
}

}  // namespace cfsk
