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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cfsk/bounds.hpp"
#include "cfsk/errors.hpp"
#include "oracles.hpp"

using namespace cfsk;

namespace {

constexpr double kPi = std::numbers::pi;

ProtocolParams cfsk16(double n_bar) { return {16, n_bar, 5.812, 0.196}; }

ReceiverModel model(double xi, double eta, double tau) {
  ReceiverModel r;
  r.visibility = xi;
  r.efficiency = eta;
  r.transmittance = tau;
  return r;
}

double sigma(double p, std::int64_t n) { return std::sqrt(std::max(p * (1 - p), 1e-12) / n); }

}  // namespace

TEST(ReceiverModel, validation) {
  EXPECT_NO_THROW(ReceiverModel{}.validate());
  EXPECT_EQ(ReceiverModel{}.transmittance, 0.99);
  EXPECT_EQ(ReceiverModel::ideal().transmittance, 1.0);
  EXPECT_THROW(model(1.1, 1, 1).validate(), ConfigError);
  EXPECT_THROW(model(-0.1, 1, 1).validate(), ConfigError);
  EXPECT_THROW(model(1, 0, 1).validate(), ConfigError);
  EXPECT_THROW(model(1, 1, 1.5).validate(), ConfigError);
  ReceiverModel r;
  r.max_events = 0;
  EXPECT_THROW(r.validate(), ConfigError);
  r = ReceiverModel{};
  r.initial = InitialHypothesis::fixed(4);
  EXPECT_THROW(r.validate_for(4), ConfigError);
  EXPECT_NO_THROW(r.validate_for(5));
}

TEST(Posterior, validation) {
  EXPECT_NO_THROW(Posterior({0.25, 0.75}));
  EXPECT_THROW(Posterior({0.5, 0.6}), ConfigError);
  EXPECT_THROW(Posterior({-0.1, 1.1}), ConfigError);
  EXPECT_THROW(Posterior(std::vector<double>{}), ConfigError);
  const Posterior u = Posterior::uniform(4);
  for (int m = 0; m < 4; ++m) EXPECT_DOUBLE_EQ(u[m], 0.25);
}

TEST(argmax_lowest, ties_and_invariance) {
  EXPECT_EQ(argmax_lowest(std::vector<double>{0.2, 0.4, 0.4}), 1);
  EXPECT_EQ(argmax_lowest(std::vector<double>{0.5, 0.5}), 0);
  EXPECT_EQ(Posterior::uniform(7).argmax(), 0);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 9);
  for (int k = 0; k < 2000; ++k) {
    std::vector<double> w(10);
    for (double& x : w) x = u(gen);
    if (k % 3 == 0) w[pick(gen)] = w[pick(gen)];  // force some ties
    const int ref = argmax_lowest(w);
    for (double scale : {1e-300, 1e-7, 0.5, 3.0, 1e200}) {
      std::vector<double> s(w);
      for (double& x : s) x *= scale;
      ASSERT_EQ(argmax_lowest(s), ref);
    }
  }
}

TEST(displaced_rate, examples) {
  ProtocolParams p{16, 12.0, 3.0, 0.4};
  const ReceiverModel ideal = ReceiverModel::ideal();
  for (double t : {0.0, 0.3, 1.0}) EXPECT_EQ(displaced_rate(5, 5, t, p, ideal), 0.0);
  EXPECT_NEAR(displaced_rate(5, 5, 0.7, p, model(0.985, 1, 1)), 0.36, 1e-12);
  ProtocolParams q{2, 1.0, kPi, 0.0};
  EXPECT_NEAR(displaced_rate(0, 1, 1.0, q, ideal), 4.0, 1e-12);
}

TEST(displaced_rate, positive_and_bounded) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 1000000; ++k) {
    const ProtocolParams p{64, 20.0 * u(gen), 4 * kPi * u(gen), 2 * kPi * u(gen)};
    const ReceiverModel r = model(u(gen), 0.05 + 0.95 * u(gen), 0.05 + 0.95 * u(gen));
    const int m = static_cast<int>(gen() % 64);
    const int h = static_cast<int>(gen() % 64);
    const double lambda = displaced_rate(m, h, u(gen), p, r);
    ASSERT_GE(lambda, 0.0);
    ASSERT_LE(lambda, rate_bound(p, r) * (1 + 1e-15));
  }
}

TEST(rate_integral, examples) {
  const ReceiverModel ideal = ReceiverModel::ideal();
  EXPECT_EQ(rate_integral(0, 1, 0.4, 0.4, {2, 1.0, kPi, 0.0}, ideal), 0.0);
  EXPECT_NEAR(rate_integral(0, 1, 0.0, 1.0, {2, 1.0, 2 * kPi, 0.0}, ideal), 2.0, 1e-14);
  EXPECT_NEAR(rate_integral(0, 1, 0.0, 1.0, {2, 1.0, kPi, 0.0}, ideal), 2.0, 1e-14);
  EXPECT_NEAR(rate_integral(3, 3, 0.2, 0.7, {16, 12.0, 3.0, 0.4}, model(0.985, 1, 1)), 0.18, 1e-14);
}

TEST(rate_integral, matches_quadrature) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const ProtocolParams p{16, 12.0 * u(gen), 4 * kPi * u(gen), 2 * kPi * u(gen)};
    const ReceiverModel r = model(u(gen), 0.5 + 0.5 * u(gen), 0.9 + 0.1 * u(gen));
    const int m = static_cast<int>(gen() % 16);
    const int h = static_cast<int>(gen() % 16);
    double t0 = u(gen), t1 = u(gen);
    if (t0 > t1) std::swap(t0, t1);
    const double ref = oracle::rate_integral_by_quadrature(h - m, p.delta_omega_T, p.delta_theta, p.n_bar,
                                                           r.visibility, r.efficiency, r.transmittance,
                                                           t0, t1);
    ASSERT_NEAR(rate_integral(m, h, t0, t1, p, r), ref, 1e-11);
  }
}

TEST(rate_integral, small_frequency_limit) {
  const ReceiverModel ideal = ReceiverModel::ideal();
  const ProtocolParams psk{8, 2.0, 0.0, 0.5};
  for (double w : {1e-14, 1e-10, 1e-7, 1e-5}) {
    const ProtocolParams near{8, 2.0, w, 0.5};
    // |d Lambda / d w| is a few units here, so the gap shrinks linearly in w.
    EXPECT_NEAR(rate_integral(1, 4, 0.1, 0.9, near, ideal), rate_integral(1, 4, 0.1, 0.9, psk, ideal),
                10 * w + 1e-13);
  }
}

TEST(rate_integral, additivity) {
  std::mt19937_64 gen(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100000; ++k) {
    const ProtocolParams p{32, 15.0 * u(gen), 4 * kPi * u(gen), 2 * kPi * u(gen)};
    const ReceiverModel r = model(u(gen), 1.0, 1.0);
    const int m = static_cast<int>(gen() % 32);
    const int h = static_cast<int>(gen() % 32);
    double a = u(gen), b = u(gen), c = u(gen);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    const double whole = rate_integral(m, h, a, c, p, r);
    const double split = rate_integral(m, h, a, b, p, r) + rate_integral(m, h, b, c, p, r);
    ASSERT_NEAR(whole, split, 1e-12) << k;
  }
}

TEST(sample_next_arrival, absent_when_rate_vanishes) {
  Rng rng(1);
  const ProtocolParams p{4, 10.0, 2.0, 0.3};
  for (int k = 0; k < 1000; ++k) {
    EXPECT_FALSE(sample_next_arrival(2, 2, 0.0, p, ReceiverModel::ideal(), rng));
    EXPECT_FALSE(sample_next_arrival(0, 3, 0.0, {4, 0.0, 2.0, 0.3}, ReceiverModel::ideal(), rng));
  }
}

TEST(sample_next_arrival, within_interval) {
  Rng rng(2);
  const ProtocolParams p{4, 5.0, 2.0, 0.3};
  for (int k = 0; k < 10000; ++k) {
    const double t0 = rng.uniform();
    const auto t = sample_next_arrival(0, 1, t0, p, ReceiverModel::ideal(), rng);
    if (t) {
      ASSERT_GT(*t, t0);
      ASSERT_LE(*t, 1.0);
    }
  }
}

TEST(sample_next_arrival, homogeneous_interarrivals_pass_ks) {
  // h = m with partial visibility gives a constant rate 2 n (1 - xi).
  const ProtocolParams p{4, 12.0, 3.0, 0.4};
  const ReceiverModel r = model(0.6, 1.0, 1.0);
  const double rate = 2.0 * 12.0 * 0.4;
  Rng rng(99);
  std::int64_t events = 0;
  const int pulses = 20000;
  for (int k = 0; k < pulses; ++k) {
    double t = 0.0;
    while (auto next = sample_next_arrival(1, 1, t, p, r, rng)) {
      t = *next;
      ++events;
    }
  }
  // First arrival of each pulse against the exponential law truncated at 1.
  const double mean = static_cast<double>(events) / pulses;
  EXPECT_NEAR(mean, rate, 3 * std::sqrt(rate / pulses));

  std::vector<double> first;
  Rng rng2(100);
  for (int k = 0; k < pulses; ++k) {
    if (auto next = sample_next_arrival(1, 1, 0.0, p, r, rng2)) first.push_back(*next);
  }
  const double norm = -std::expm1(-rate);
  const double d = oracle::ks_statistic(first, [&](double x) { return -std::expm1(-rate * x) / norm; });
  EXPECT_LT(d, oracle::ks_critical_1pct(first.size()));
}

TEST(sample_next_arrival, inhomogeneous_first_arrival_passes_ks) {
  const ProtocolParams p{16, 3.0, 5.0, 0.7};
  const ReceiverModel r = model(0.9, 0.8, 1.0);
  Rng rng(5);
  std::vector<double> first;
  for (int k = 0; k < 20000; ++k) {
    if (auto next = sample_next_arrival(2, 5, 0.0, p, r, rng)) first.push_back(*next);
  }
  const double total = rate_integral(2, 5, 0.0, 1.0, p, r);
  const double norm = -std::expm1(-total);
  const double d = oracle::ks_statistic(
      first, [&](double x) { return -std::expm1(-rate_integral(2, 5, 0.0, x, p, r)) / norm; });
  EXPECT_LT(d, oracle::ks_critical_1pct(first.size()));
}

TEST(sample_next_arrival, mean_count_matches_rate_integral) {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int pulses = 100000;
  for (int set = 0; set < 20; ++set) {
    const ProtocolParams p{8, 0.5 + 4.5 * u(gen), 4 * kPi * u(gen), 2 * kPi * u(gen)};
    const double xi = u(gen);
    const double eta = 0.5 + 0.5 * u(gen);
    const ReceiverModel r = model(xi, eta, 1.0);
    const int m = static_cast<int>(gen() % 8);
    const int h = static_cast<int>(gen() % 8);
    const double expected = rate_integral(m, h, 0.0, 1.0, p, r);
    Rng rng = Rng::for_stream(2024, static_cast<std::uint64_t>(set));
    std::int64_t count = 0;
    for (int k = 0; k < pulses; ++k) {
      double t = 0.0;
      while (auto next = sample_next_arrival(m, h, t, p, r, rng)) {
        t = *next;
        ++count;
      }
    }
    const double mean = static_cast<double>(count) / pulses;
    EXPECT_NEAR(mean, expected, 3 * std::sqrt(std::max(expected, 1e-3) / pulses)) << set;
  }
}

TEST(bayes_click_update, hand_computed_two_state) {
  // PSK pair, lambda_0 = 0.2, lambda_1 = 3.8, Lambda = 0.3 lambda.
  // Ratio 19 e^{-1.08}, frozen with mpmath.
  const ProtocolParams p{2, 1.0, 0.0, kPi};
  const ReceiverModel r = model(0.9, 1.0, 1.0);
  const UpdateResult u = bayes_click_update(Posterior::uniform(2), 0, 0.0, 0.3, p, r);
  EXPECT_FALSE(u.degenerate);
  EXPECT_NEAR(u.posterior[1] / u.posterior[0], 6.4523149872538438, 1e-12);
  EXPECT_NEAR(u.posterior[1], 0.86581350872710534, 1e-14);
}

TEST(bayes_click_update, nulled_hypothesis_drops_out) {
  const ProtocolParams p{2, 1.0, 2.0, kPi};
  for (double t : {0.1, 0.5, 0.99}) {
    const UpdateResult u = bayes_click_update(Posterior({0.7, 0.3}), 1, 0.0, t, p, ReceiverModel::ideal());
    EXPECT_EQ(u.posterior[1], 0.0);
    EXPECT_DOUBLE_EQ(u.posterior[0], 1.0);
  }
}

TEST(bayes_click_update, symmetric_geometry_stays_uniform) {
  // With Delta theta = 0 and Delta omega T = 0 every symbol has the same rate.
  const ProtocolParams p{5, 2.0, 0.0, 0.0};
  const UpdateResult u = bayes_click_update(Posterior::uniform(5), 2, 0.1, 0.6, p, model(0.5, 1, 1));
  for (int m = 0; m < 5; ++m) EXPECT_NEAR(u.posterior[m], 0.2, 1e-15);
}

TEST(bayes_click_update, degenerate_falls_back_to_uniform) {
  // All mass on the nulled hypothesis: the numerator vanishes everywhere.
  const ProtocolParams p{3, 1.0, 1.0, 2.0};
  const UpdateResult u = bayes_click_update(Posterior({0.0, 1.0, 0.0}), 1, 0.0, 0.4, p, ReceiverModel::ideal());
  EXPECT_TRUE(u.degenerate);
  for (int m = 0; m < 3; ++m) EXPECT_DOUBLE_EQ(u.posterior[m], 1.0 / 3.0);
}

TEST(bayes_click_update, requires_increasing_times) {
  const ProtocolParams p{2, 1.0, 0.0, kPi};
  EXPECT_THROW(bayes_click_update(Posterior::uniform(2), 0, 0.5, 0.5, p, ReceiverModel::ideal()), ConfigError);
}

TEST(bayes_final_update, trivial_cases) {
  const ProtocolParams p{4, 3.0, 2.0, 0.6};
  const Posterior prior({0.1, 0.2, 0.3, 0.4});
  const UpdateResult same = bayes_final_update(prior, 2, 1.0, p, ReceiverModel::ideal());
  for (int m = 0; m < 4; ++m) EXPECT_EQ(same.posterior[m], prior[m]);
  for (int h = 0; h < 4; ++h) {
    EXPECT_EQ(bayes_final_update(Posterior::uniform(4), h, 0.0, p, ReceiverModel::ideal()).posterior.argmax(), h);
  }
}

TEST(bayes_final_update, matches_brute_force_likelihood_product) {
  const ProtocolParams p{4, 2.5, 3.3, 0.8};
  const ReceiverModel r = model(0.95, 0.8, 0.99);
  const std::vector<double> clicks{0.12, 0.35, 0.8};
  const std::vector<int> hyps{0, 2, 1, 3};

  std::vector<double> w(4, 0.25);
  double t = 0.0;
  for (std::size_t k = 0; k < clicks.size(); ++k) {
    apply_click_update(w, hyps[k], t, clicks[k], p, r);
    t = clicks[k];
  }
  apply_final_update(w, hyps.back(), t, p, r);

  std::vector<double> brute(4);
  double total = 0.0;
  for (int m = 0; m < 4; ++m) {
    double like = 1.0, start = 0.0;
    for (std::size_t k = 0; k < clicks.size(); ++k) {
      const int h = hyps[k];
      const double lam = 2 * 0.8 * 0.99 * 2.5 * (1 - 0.95 * std::cos((h - m) * (3.3 * clicks[k] + 0.8)));
      like *= lam * std::exp(-oracle::rate_integral_by_quadrature(h - m, 3.3, 0.8, 2.5, 0.95, 0.8, 0.99,
                                                                 start, clicks[k]));
      start = clicks[k];
    }
    like *= std::exp(-oracle::rate_integral_by_quadrature(hyps.back() - m, 3.3, 0.8, 2.5, 0.95, 0.8, 0.99,
                                                         start, 1.0));
    brute[m] = like;
    total += like;
  }
  for (int m = 0; m < 4; ++m) EXPECT_NEAR(w[m], brute[m] / total, 1e-12);
}

TEST(run_trial, nulled_start_never_clicks) {
  const ProtocolParams p = cfsk16(12.0);
  for (int s : {0, 5, 15}) {
    ReceiverModel r = ReceiverModel::ideal();
    r.initial = InitialHypothesis::fixed(s);
    Rng rng(s);
    const TrialRecord rec = run_trial(s, p, r, rng);
    EXPECT_TRUE(rec.arrivals.empty());
    EXPECT_EQ(rec.decision, s);
    EXPECT_EQ(rec.hypotheses.size(), 1u);
  }
}

TEST(run_trial, vacuum_decides_by_tie_break) {
  const ProtocolParams p = cfsk16(0.0);
  Rng rng(4);
  const TrialRecord rec = run_trial(7, p, ReceiverModel::ideal(), rng);
  EXPECT_TRUE(rec.arrivals.empty());
  EXPECT_EQ(rec.decision, 0);
}

TEST(run_trial, record_structure) {
  const ProtocolParams p = cfsk16(8.0);
  ReceiverModel r = model(0.98, 0.9, 0.99);
  for (int k = 0; k < 2000; ++k) {
    Rng rng = Rng::for_stream(5, k);
    const TrialRecord rec = run_trial(k % 16, p, r, rng);
    ASSERT_EQ(rec.hypotheses.size(), rec.arrivals.size() + 1);
    for (std::size_t i = 1; i < rec.arrivals.size(); ++i) ASSERT_LT(rec.arrivals[i - 1], rec.arrivals[i]);
    ASSERT_EQ(rec.decision, rec.final_posterior.argmax());
    ASSERT_FALSE(rec.cap_exceeded);
  }
}

TEST(run_trial, event_cap_is_flagged) {
  ReceiverModel r = model(0.0, 1.0, 1.0);
  r.max_events = 3;
  Rng rng(8);
  const TrialRecord rec = run_trial(0, {4, 50.0, 1.0, 1.0}, r, rng);
  EXPECT_TRUE(rec.cap_exceeded);
  EXPECT_EQ(rec.arrivals.size(), 3u);
}

TEST(run_trial, posterior_normalized_after_every_update) {
  const ProtocolParams p = cfsk16(8.0);
  const ReceiverModel r = model(0.985, 0.7, 0.99);
  std::int64_t updates = 0;
  for (int k = 0; k < 100000; ++k) {
    Rng rng = Rng::for_stream(6, k);
    const TrialRecord rec = run_trial(k % 16, p, r, rng);
    // Replay the updates, checking the normalization at each step.
    std::vector<double> w(16, 1.0 / 16);
    double t = 0.0;
    for (std::size_t i = 0; i < rec.arrivals.size(); ++i) {
      apply_click_update(w, rec.hypotheses[i], t, rec.arrivals[i], p, r);
      t = rec.arrivals[i];
      double s = 0.0;
      for (double x : w) s += x;
      ASSERT_NEAR(s, 1.0, 1e-12);
      ++updates;
    }
    apply_final_update(w, rec.hypotheses.back(), t, p, r);
    double s = 0.0;
    for (double x : w) s += x;
    ASSERT_NEAR(s, 1.0, 1e-12);
  }
  EXPECT_GT(updates, 100000);
}

TEST(estimate_ser, bright_ideal_has_no_errors) {
  const SerEstimate e = estimate_ser(cfsk16(50.0), ReceiverModel::ideal(), 16, 1);
  EXPECT_EQ(e.errors, 0);
  EXPECT_EQ(e.trials, 16);
  EXPECT_TRUE(e.ci95.contains(e.p_hat));
}

TEST(estimate_ser, thread_count_does_not_change_result) {
  const ProtocolParams p = cfsk16(4.0);
  const ReceiverModel r = model(0.985, 0.7, 0.99);
  const SerEstimate serial = estimate_ser_serial(p, r, 30000, 2024);
  for (int threads : {1, 2, 8}) EXPECT_EQ(estimate_ser(p, r, 30000, 2024, threads), serial);
  ReceiverModel rand = r;
  rand.initial = InitialHypothesis::random_uniform();
  EXPECT_EQ(estimate_ser(p, rand, 30000, 7, 1), estimate_ser(p, rand, 30000, 7, 8));
}

TEST(estimate_ser, rejects_bad_input) {
  EXPECT_THROW(estimate_ser(cfsk16(1.0), ReceiverModel::ideal(), 0, 1), ConfigError);
  EXPECT_THROW(estimate_ser({16, -1.0, 0.0, 0.0}, ReceiverModel::ideal(), 10, 1), ConfigError);
}

TEST(estimate_ser, matches_discrete_time_oracle) {
  const std::int64_t trials = 1000000;
  const ProtocolParams p = ProtocolParams::psk(2, 0.5);
  ReceiverModel r = ReceiverModel::ideal();
  r.visibility = 0.99;
  const SerEstimate e = estimate_ser(p, r, trials, 11);
  const double ref = oracle::psk_receiver_discrete(2, 0.5, 0.99, 10000, trials, 12);
  EXPECT_NEAR(e.p_hat, ref, 3 * std::sqrt(2.0) * sigma(ref, trials));
}

TEST(estimate_ser, never_beats_helstrom) {
  const std::int64_t trials = 40000;
  struct Case {
    ProtocolParams p;
    ReceiverModel r;
  };
  const std::vector<Case> cases{
      {ProtocolParams::psk(2, 0.3), ReceiverModel::ideal()},
      {ProtocolParams::psk(4, 1.0), ReceiverModel::ideal()},
      {ProtocolParams::psk(16, 4.0), ReceiverModel::ideal()},
      {{4, 2.0, 4.712, 0.785}, ReceiverModel::ideal()},
      {cfsk16(2.0), ReceiverModel::ideal()},
      {cfsk16(4.0), model(0.985, 0.7, 0.99)},
      {{8, 1.0, 3.0, 1.0}, model(0.9, 0.9, 0.99)},
  };
  for (const Case& c : cases) {
    const SerEstimate e = estimate_ser(c.p, c.r, trials, 3);
    const double hb = srm_error(gram_matrix(Constellation::cfsk(c.p))).p_error;
    EXPECT_GE(e.p_hat, hb - 3 * sigma(hb, trials)) << c.p.M << " " << c.p.n_bar;
  }
}

TEST(estimate_ser, bpsk_reduces_to_kennedy) {
  // With perfect nulling a click under h = 0 rules symbol 0 out and the new
  // hypothesis is never clicked again, so the error is P(no click | 1) / 2.
  const std::int64_t trials = 200000;
  for (double n : {0.1, 0.2, 0.5}) {
    const SerEstimate e = estimate_ser(ProtocolParams::psk(2, n), ReceiverModel::ideal(), trials, 13);
    const double kennedy = 0.5 * std::exp(-4.0 * n);
    EXPECT_NEAR(e.p_hat, kennedy, 3 * sigma(kennedy, trials)) << n;
  }
}

TEST(estimate_ser, beats_homodyne_for_bpsk) {
  // The Kennedy error e^{-4n}/2 drops below 0.5 erfc(sqrt(2n)) near n = 0.38.
  const std::int64_t trials = 200000;
  for (double n : {0.4, 0.5, 1.0, 1.5}) {
    const SerEstimate e = estimate_ser(ProtocolParams::psk(2, n), ReceiverModel::ideal(), trials, 13);
    EXPECT_LT(e.ci95.high, oracle::bpsk_homodyne(n)) << n;
  }
}

TEST(estimate_ser, monotone_in_efficiency_and_visibility) {
  const std::int64_t trials = 100000;
  const ProtocolParams p = cfsk16(8.0);
  double prev = 1.0;
  Interval prev_ci{0.0, 1.0};
  for (double eta : {0.5, 0.7, 0.85, 1.0}) {
    const SerEstimate e = estimate_ser(p, model(1.0, eta, 1.0), trials, 15);
    EXPECT_LE(e.ci95.low, prev_ci.high) << eta;
    EXPECT_LE(e.p_hat, prev + 4 * sigma(prev, trials));
    prev = e.p_hat;
    prev_ci = e.ci95;
  }
  prev = 1.0;
  prev_ci = {0.0, 1.0};
  for (double xi : {0.95, 0.98, 0.995, 1.0}) {
    const SerEstimate e = estimate_ser(p, model(xi, 1.0, 1.0), trials, 15);
    EXPECT_LE(e.ci95.low, prev_ci.high) << xi;
    EXPECT_LE(e.p_hat, prev + 4 * sigma(prev, trials));
    prev = e.p_hat;
    prev_ci = e.ci95;
  }
}
