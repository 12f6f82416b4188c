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

// Monte Carlo model of the adaptive displacement receiver.
//
// The receiver nulls the current hypothesis with a local oscillator and counts
// photons. Each click re-weights the hypotheses with the time-resolved
// likelihood of that click, after which the displacement switches to the most
// probable symbol. At the end of the pulse the silent tail contributes its
// survival factor and the most probable symbol is the decision.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cfsk/alphabet.hpp"
#include "cfsk/rng.hpp"
#include "cfsk/stats.hpp"

namespace cfsk {

struct InitialHypothesis {
  enum class Mode { kFixed, kRandomUniform };
  Mode mode = Mode::kFixed;
  int index = 0;

  static InitialHypothesis fixed(int index) { return {Mode::kFixed, index}; }
  static InitialHypothesis random_uniform() { return {Mode::kRandomUniform, 0}; }
};

struct ReceiverModel {
  double visibility = 1.0;     // interference contrast with the local oscillator
  double efficiency = 1.0;     // detector quantum efficiency
  double transmittance = 0.99; // signal tap ratio of the displacement splitter
  InitialHypothesis initial = InitialHypothesis::fixed(0);
  int max_events = 10000;

  /// Perfect visibility, efficiency and transmittance.
  static ReceiverModel ideal() {
    ReceiverModel r;
    r.transmittance = 1.0;
    return r;
  }

  void validate() const;
  void validate_for(int M) const;
};

class Posterior {
 public:
  explicit Posterior(std::vector<double> weights);
  static Posterior uniform(int M);

  int size() const { return static_cast<int>(weights_.size()); }
  std::span<const double> weights() const { return weights_; }
  double operator[](int m) const { return weights_[m]; }
  /// Most probable symbol; ties resolve to the lowest index.
  int argmax() const;

 private:
  std::vector<double> weights_;
};

/// Index of the largest entry, lowest index on ties.
int argmax_lowest(std::span<const double> weights);

/// Photon rate at the detector (photons per pulse duration) when the input is
/// symbol m and the displacement nulls hypothesis h:
/// 2 eta tau n_bar (1 - xi cos[(h - m)(delta_omega_T t + delta_theta)]).
double displaced_rate(int m, int h, double t, const ProtocolParams& p, const ReceiverModel& r);

/// Upper bound of displaced_rate over all m, h, t: 2 eta tau n_bar (1 + xi).
double rate_bound(const ProtocolParams& p, const ReceiverModel& r);

/// Expected detector counts on [t0, t1] for input m under hypothesis h.
double rate_integral(int m, int h, double t0, double t1, const ProtocolParams& p,
                     const ReceiverModel& r);

/// Next click after t0 of the inhomogeneous Poisson process with rate
/// displaced_rate(m, h, .), or nullopt if none occurs before the pulse ends.
/// Sampled by thinning a homogeneous process of rate rate_bound().
std::optional<double> sample_next_arrival(int m, int h, double t0, const ProtocolParams& p,
                                          const ReceiverModel& r, Rng& rng);

struct UpdateResult {
  Posterior posterior;
  bool degenerate = false;  // every hypothesis had zero likelihood
};

/// Posterior after a click at t_k given the displacement h held since t_prev.
UpdateResult bayes_click_update(const Posterior& prior, int h, double t_prev, double t_k,
                                const ProtocolParams& p, const ReceiverModel& r);

/// Posterior after the click-free tail (t_last, 1].
UpdateResult bayes_final_update(const Posterior& prior, int h, double t_last,
                                const ProtocolParams& p, const ReceiverModel& r);

/// In-place forms used by the trial kernel; `weights` must be normalized.
/// Return true when the update degenerated to a uniform posterior.
bool apply_click_update(std::span<double> weights, int h, double t_prev, double t_k,
                        const ProtocolParams& p, const ReceiverModel& r);
bool apply_final_update(std::span<double> weights, int h, double t_last, const ProtocolParams& p,
                        const ReceiverModel& r);

struct TrialRecord {
  int true_symbol = 0;
  std::vector<double> arrivals;
  std::vector<int> hypotheses;  // arrivals.size() + 1 entries
  Posterior final_posterior = Posterior::uniform(1);
  int decision = 0;
  bool cap_exceeded = false;
  bool degenerate = false;
};

TrialRecord run_trial(int true_symbol, const ProtocolParams& p, const ReceiverModel& r, Rng& rng);

struct SerEstimate {
  std::int64_t errors = 0;
  std::int64_t trials = 0;
  double p_hat = 0.0;
  Interval ci95;
  std::int64_t capped_trials = 0;
  std::int64_t degenerate_trials = 0;

  bool operator==(const SerEstimate&) const = default;
};

/// Symbol error rate over `trials` runs. Trial i sends symbol i mod M and uses
/// the random stream (seed, i), so the estimate is identical for any thread
/// count (0 = OpenMP default).
SerEstimate estimate_ser(const ProtocolParams& p, const ReceiverModel& r, std::int64_t trials,
                         std::uint64_t seed, int threads = 0);

/// Single-threaded reference; bit-identical to estimate_ser.
SerEstimate estimate_ser_serial(const ProtocolParams& p, const ReceiverModel& r,
                                std::int64_t trials, std::uint64_t seed);

}  // namespace cfsk
