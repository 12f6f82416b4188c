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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cfsk/errors.hpp"
#include "oracles.hpp"

using namespace cfsk;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(mode_overlap, identical_modes) {
  EXPECT_EQ(mode_overlap(0, 3.7, 1.1), Complex(1.0, 0.0));
}

TEST(mode_overlap, orthogonal_fsk_zero) {
  const Complex g = mode_overlap(1, 2 * kPi, 0.0);
  EXPECT_NEAR(g.real(), 0.0, 1e-15);
  EXPECT_NEAR(g.imag(), 0.0, 1e-15);
}

TEST(mode_overlap, half_period_matches_quadrature) {
  const Complex g = mode_overlap(1, kPi, 0.0);
  const Complex q = oracle::overlap_by_quadrature(1, kPi, 0.0);
  EXPECT_NEAR(g.real(), q.real(), 1e-14);
  EXPECT_NEAR(g.imag(), q.imag(), 1e-14);
  EXPECT_NEAR(g.imag(), 2.0 / kPi, 1e-15);
}

TEST(mode_overlap, psk_limit_is_continuous) {
  const int M = 8;
  const Complex psk = std::polar(1.0, 2 * kPi / M);
  EXPECT_EQ(mode_overlap(1, 0.0, 2 * kPi / M), psk);
  for (double w : {1e-3, 1e-6, 1e-7, 1e-9, 1e-12}) {
    EXPECT_NEAR(std::abs(mode_overlap(1, w, 2 * kPi / M) - psk), w / 2, w * w + 1e-16) << w;
  }
  // Across the series/closed-form switch the step matches |d gamma/dw| = 1/2.
  EXPECT_NEAR(std::abs(mode_overlap(1, 0.999999e-6, 0.3) - mode_overlap(1, 1.000001e-6, 0.3)), 1e-12,
              1e-14);
}

TEST(mode_overlap, bounded_and_conjugate_symmetric_on_grid) {
  for (int d = -20; d <= 20; ++d) {
    for (double w = 0.0; w <= 4 * kPi; w += 0.173) {
      for (double th = 0.0; th < 2 * kPi; th += 0.29) {
        const Complex g = mode_overlap(d, w, th);
        ASSERT_LE(std::abs(g), 1.0 + 1e-12);
        const Complex gm = mode_overlap(-d, w, th);
        ASSERT_NEAR(gm.real(), g.real(), 1e-14);
        ASSERT_NEAR(gm.imag(), -g.imag(), 1e-14);
      }
    }
  }
}

TEST(mode_overlap, closed_form_matches_quadrature_random_points) {
  std::mt19937_64 gen(42);
  std::uniform_int_distribution<int> dd(-15, 15);
  std::uniform_real_distribution<double> ww(0.0, 4 * kPi), tt(0.0, 2 * kPi);
  for (int k = 0; k < 1000; ++k) {
    const int d = dd(gen);
    const double w = ww(gen), th = tt(gen);
    const Complex g = mode_overlap(d, w, th);
    const Complex q = oracle::overlap_by_quadrature(d, w, th);
    ASSERT_NEAR(std::abs(g - q), 0.0, 1e-10) << d << " " << w << " " << th;
  }
}

TEST(gram_matrix, vacuum_is_all_ones) {
  const GramMatrix G = gram_matrix(Constellation::cfsk({6, 0.0, 1.3, 0.4}));
  for (int j = 0; j < 6; ++j) {
    for (int m = 0; m < 6; ++m) EXPECT_NEAR(std::abs(G(j, m) - 1.0), 0.0, 1e-15);
  }
}

TEST(gram_matrix, bpsk_overlap) {
  const GramMatrix G = gram_matrix(Constellation::psk(2, 1.0));
  EXPECT_NEAR(G(0, 1).real(), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(G(0, 1).imag(), 0.0, 1e-15);
}

TEST(gram_matrix, ppm_off_diagonals) {
  const GramMatrix G = gram_matrix(Constellation::ppm(4, 1.0));
  for (int j = 0; j < 4; ++j) {
    for (int m = 0; m < 4; ++m) {
      EXPECT_DOUBLE_EQ(G(j, m).real(), j == m ? 1.0 : std::exp(-1.0));
    }
  }
}

TEST(gram_matrix, qam16_requires_sixteen_symbols) {
  EXPECT_THROW(Constellation::make(ConstellationKind::kQam16, {8, 1.0, 0.0, 0.0}), ConfigError);
  EXPECT_NO_THROW(Constellation::make(ConstellationKind::kQam16, {16, 1.0, 0.0, 0.0}));
}

TEST(gram_matrix, qam16_average_energy_is_n_bar) {
  const Constellation c = Constellation::qam16(3.5);
  double total = 0.0;
  for (const Complex& a : c.amplitudes()) total += std::norm(a);
  EXPECT_NEAR(total / 16.0, 3.5, 1e-13);
}

TEST(gram_matrix, invariants_for_all_kinds) {
  for (double n : {0.0, 0.5, 1.0, 5.0, 12.0}) {
    for (int M : {2, 4, 16, 64}) {
      std::vector<Constellation> cs{Constellation::cfsk({M, n, 2.7, 0.4}),
                                    Constellation::cfsk({M, n, 0.0, 0.0}), Constellation::psk(M, n),
                                    Constellation::ppm(M, n)};
      if (M == 16) cs.push_back(Constellation::qam16(n));
      for (const auto& c : cs) {
        const GramMatrix G = gram_matrix(c);
        SCOPED_TRACE(std::string(to_string(c.kind())) + " M=" + std::to_string(M) +
                     " n=" + std::to_string(n));
        EXPECT_TRUE(G.is_hermitian(1e-14));
        EXPECT_TRUE(G.has_unit_diagonal(1e-14));
        EXPECT_GE(G.min_eigenvalue(), -1e-10);
        EXPECT_LE(G.entries().cwiseAbs().maxCoeff(), 1.0 + 1e-14);
      }
    }
  }
}

TEST(gram_matrix, psk_is_circulant) {
  for (int M : {3, 8, 16}) {
    const GramMatrix G = gram_matrix(Constellation::cfsk(ProtocolParams::psk(M, 2.0)));
    for (int j = 0; j < M; ++j) {
      for (int m = 0; m < M; ++m) {
        const int d = ((m - j) % M + M) % M;
        EXPECT_NEAR(std::abs(G(j, m) - G(0, d)), 0.0, 1e-14);
      }
    }
  }
}

TEST(gram_matrix, cfsk_is_toeplitz_not_circulant) {
  const GramMatrix G = gram_matrix(Constellation::cfsk({6, 1.0, 2.0, 0.3}));
  EXPECT_NEAR(std::abs(G(1, 3) - G(2, 4)), 0.0, 1e-15);
  // (0 - 5) mod 6 == 1, so a circulant matrix would have G(5, 0) == G(0, 1).
  EXPECT_GT(std::abs(G(5, 0) - G(0, 1)), 1e-3);
}

TEST(protocol_params, validation) {
  EXPECT_THROW((ProtocolParams{0, 1.0, 0.0, 0.0}.validate()), ConfigError);
  EXPECT_THROW((ProtocolParams{4, -1.0, 0.0, 0.0}.validate()), ConfigError);
  EXPECT_THROW((ProtocolParams{4, 1.0, -0.1, 0.0}.validate()), ConfigError);
  EXPECT_THROW(parse_kind("fsk"), ConfigError);
  EXPECT_EQ(parse_kind("QAM16"), ConstellationKind::kQam16);
}

TEST(mode_overlap_matrix, shapes) {
  EXPECT_EQ(mode_overlap_matrix(Constellation::qam16(1.0)).rows(), 1);
  EXPECT_TRUE(mode_overlap_matrix(Constellation::ppm(5, 1.0)).isIdentity());
  const auto gamma = mode_overlap_matrix(Constellation::cfsk({4, 1.0, 1.0, 0.2}));
  EXPECT_NEAR(std::abs(gamma(0, 2) - mode_overlap(2, 1.0, 0.2)), 0.0, 1e-15);
}
