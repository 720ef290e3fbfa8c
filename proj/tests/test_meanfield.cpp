// Copyright 2026 The qca-async Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qca/errors.hpp"
#include "qca/meanfield.hpp"

using namespace qca;

namespace {

MFState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // Random point in the Bloch ball.
  for (;;) {
    const double z = 2 * u(rng) - 1, x = 2 * u(rng) - 1, y = 2 * u(rng) - 1;
    if (x * x + y * y + z * z <= 1.0) return {(1.0 - z) / 2.0, x, y};
  }
}

}  // namespace

TEST(Coefficients, SynchronousLimit) {
  const GateParams p{0.3, 0.2, 0.6, 0.4, 0.0};
  const MFCoefficients r = coefficients(p);
  EXPECT_DOUBLE_EQ(r.r_dec, 0.7);
  EXPECT_DOUBLE_EQ(r.r_coag, 0.2);
  EXPECT_DOUBLE_EQ(r.r_branch, 0.6);
  EXPECT_EQ(r.r_star, 0.0);
}

TEST(Coefficients, FullyAsynchronous) {
  const GateParams p{0.5, 0.1, 0.5, 0.1, 1.0};
  const MFCoefficients r = coefficients(p);
  EXPECT_NEAR(r.r_star, 0.0, 1e-16);
  const double expect = std::pow(std::sqrt(0.5) * std::sqrt(0.9) + std::sqrt(0.1) * std::sqrt(0.5), 2);
  EXPECT_NEAR(r.r_coag, expect, 1e-15);
}

TEST(Coefficients, MatchBruteForceBranchProbabilities) {
  std::mt19937_64 rng(20);
  for (int i = 0; i < 100; ++i) {
    const GateParams p = oracle::random_params(rng);
    const LocalGate g = build_async_gate(p);
    const MFCoefficients r = coefficients(p);
    EXPECT_NEAR(r.r_dec, oracle::target_occupation(g, 0, 1, 0), 1e-12);
    for (auto [l, rr] : {std::pair{1, 0}, {0, 1}, {1, 1}}) {
      EXPECT_NEAR(r.r_coag, oracle::target_occupation(g, l, 1, rr), 1e-12);
      EXPECT_NEAR(r.r_branch, oracle::target_occupation(g, l, 0, rr), 1e-12);
    }
    // r_star: response of the target occupation to <sigma_y> of the center control
    // with an occupied left neighbour.
    Eigen::Matrix2cd e0 = Eigen::Matrix2cd::Zero(), e1 = Eigen::Matrix2cd::Zero();
    e0(0, 0) = 1.0;
    e1(1, 1) = 1.0;
    for (double y : {1.0, -1.0}) {
      Eigen::Matrix2cd c;  // n = 1/2, x = 0
      c << 0.5, cplx(0, y / 2), cplx(0, -y / 2), 0.5;
      double occ = 0.0;
      for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b) {
          const cplx in = e1((a >> 3) & 1, (b >> 3) & 1) * c((a >> 2) & 1, (b >> 2) & 1) *
                          e0((a >> 1) & 1, (b >> 1) & 1) * e0(a & 1, b & 1);
          if (in == cplx(0.0)) continue;
          for (int o = 1; o < 16; o += 2) occ += std::real(g(o, a) * in * std::conj(g(o, b)));
        }
      EXPECT_NEAR(occ, 0.5 * r.r_coag + 0.5 * r.r_branch + r.r_star * y, 1e-12);
    }
  }
}

TEST(Coefficients, RStarVanishesAtEndsAndIsContinuous) {
  GateParams p{0.3, 0.2, 0.6, 0.4, 0.0};
  EXPECT_EQ(coefficients(p).r_star, 0.0);
  p.lambda = 1.0;
  EXPECT_EQ(coefficients(p).r_star, 0.0);
  double prev = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    p.lambda = i / 1000.0;
    const double v = coefficients(p).r_star;
    EXPECT_LT(std::abs(v - prev), 0.1);
    prev = v;
  }
}

TEST(MeanField, AbsorbingStateIsFixed) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 10; ++i) {
    const MFState s = mf_step_full({0.0, 0.0, 0.0}, oracle::random_params(rng));
    EXPECT_EQ(s.n, 0.0);
    EXPECT_EQ(s.x, 0.0);
    EXPECT_EQ(s.y, 0.0);
  }
}

TEST(MeanField, SynchronousDensityRecursion) {
  const GateParams p{0.2, 0.3, 0.45, 0.7, 0.0};
  for (double n : {0.1, 0.5, 0.9}) {
    const MFState s = mf_step_full({n, 0.0, 0.0}, p);
    const double pi = (1 - n) * (1 - n);
    EXPECT_NEAR(s.n, 0.8 * pi * n + (1 - pi) * (0.3 * n + 0.45 * (1 - n)), 1e-14);
  }
}

TEST(MeanField, FullStepMatchesBruteForcePartialTrace) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 100; ++i) {
    const GateParams p = oracle::random_params(rng);
    const MFState s = random_state(rng);
    const MFState got = mf_step_full(s, p);
    const MFState want =
        MFState::from_density(oracle::mean_field_step(build_async_gate(p), s.density()));
    EXPECT_NEAR(got.n, want.n, 1e-12);
    EXPECT_NEAR(got.x, want.x, 1e-12);
    EXPECT_NEAR(got.y, want.y, 1e-12);
  }
}

TEST(MeanField, DensityComponentMatchesRecursion) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    const GateParams p = oracle::random_params(rng);
    const MFState s = random_state(rng);
    EXPECT_NEAR(mf_step_full(s, p).n, mf_step_density(s.n, s.y, p), 1e-12);
  }
}

TEST(MeanField, PreservesValidity) {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 200; ++i) {
    const GateParams p = oracle::random_params(rng);
    MFState s = random_state(rng);
    for (int k = 0; k < 20; ++k) {
      s = mf_step_full(s, p);
      ASSERT_TRUE(s.valid(1e-9));
    }
  }
}

TEST(MeanField, CompiledMapAgreesWithFullStep) {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 50; ++i) {
    const GateParams p = oracle::random_params(rng);
    const MFState s = random_state(rng);
    const MFState a = MFMap::compile(p).apply(s), b = mf_step_full(s, p);
    EXPECT_NEAR(a.n, b.n, 1e-13);
    EXPECT_NEAR(a.x, b.x, 1e-13);
    EXPECT_NEAR(a.y, b.y, 1e-13);
  }
}

TEST(MeanFieldDensity, Examples) {
  EXPECT_EQ(mf_step_density(0.0, 0.0, {0.3, 0.2, 0.6, 0.4, 0.7}), 0.0);
  EXPECT_DOUBLE_EQ(mf_step_density(1.0, 0.37, {0.3, 0.2, 0.6, 0.4, 0.0}), 0.2);
  // q_dec = 0.1, p_coag = p_plus = 0.1, lambda = 0.5, p_branch = 0.6, evaluated by hand.
  EXPECT_NEAR(mf_step_density(0.5, 0.2, {0.9, 0.1, 0.6, 0.1, 0.5}), 0.36192321766351687, 1e-14);
}

TEST(MeanFieldDensity, EqualsClassicalRecursionWhenSynchronous) {
  std::mt19937_64 rng(26);
  for (int i = 0; i < 50; ++i) {
    const GateParams p = oracle::random_params(rng, false);
    const double n = std::uniform_real_distribution<double>(0, 1)(rng);
    const double pi = (1 - n) * (1 - n);
    const double classical = p.q_dec() * pi * n + (1 - pi) * (p.p_coag * n + p.p_branch * (1 - n));
    EXPECT_NEAR(mf_step_density(n, 0.3, p), classical, 1e-15);
  }
}

TEST(MFState, Validity) {
  EXPECT_TRUE((MFState{0.5, 1.0, 0.0}.valid()));
  EXPECT_FALSE((MFState{0.5, 1.0, 0.1}.valid()));
  EXPECT_FALSE((MFState{1.2, 0.0, 0.0}.valid()));
  EXPECT_THROW(stationary({}, {0.5, 1.0, 0.5}), NumericalError);
}

TEST(Stationary, EmptyStaysEmpty) {
  const auto r = stationary({0.1, 0.1, 0.9, 0.1, 0.5}, {0.0, 0.0, 0.0}, 500);
  EXPECT_EQ(r.state.n, 0.0);
  EXPECT_EQ(r.last_delta, 0.0);
}

TEST(Stationary, ActivePhaseMatchesScalarRoot) {
  const GateParams p{0.1, 0.1, 0.9, 0.1, 0.0};
  // Root of f(n) = q_dec (1-n)^2 n + (1 - (1-n)^2)(p_coag n + p_branch (1-n)) - n on (0, 1].
  auto f = [&](double n) {
    const double pi = (1 - n) * (1 - n);
    return 0.9 * pi * n + (1 - pi) * (0.1 * n + 0.9 * (1 - n)) - n;
  };
  double lo = 0.01, hi = 1.0;
  ASSERT_GT(f(lo), 0.0);
  ASSERT_LT(f(hi), 0.0);
  for (int i = 0; i < 200; ++i) (f(0.5 * (lo + hi)) > 0 ? lo : hi) = 0.5 * (lo + hi);
  const auto r = stationary(p);
  EXPECT_NEAR(r.state.n, 0.5 * (lo + hi), 1e-10);
  EXPECT_LT(r.last_delta, 1e-12);
}

TEST(Stationary, AbsorbingPhase) {
  const auto r = stationary({0.1, 0.1, 0.01, 0.1, 0.0});
  EXPECT_LT(r.state.n, 1e-6);
}

TEST(Stationary, BatchBitIdenticalToSingle) {
  std::mt19937_64 rng(27);
  std::vector<GateParams> ps;
  for (int i = 0; i < 11; ++i) ps.push_back(oracle::random_params(rng));
  const MFState init{0.7, 0.2, -0.1};
  const auto batch = stationary_batch(ps, init, 333);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto one = stationary(ps[i], init, 333);
    EXPECT_EQ(batch[i].state.n, one.state.n);
    EXPECT_EQ(batch[i].state.x, one.state.x);
    EXPECT_EQ(batch[i].state.y, one.state.y);
    EXPECT_EQ(batch[i].last_delta, one.last_delta);
  }
}

TEST(Stationary, ZeroIterationsReturnsInit) {
  const auto r = stationary({}, {0.3, 0.1, 0.1}, 0);
  EXPECT_EQ(r.state.n, 0.3);
  const std::vector<GateParams> ps(3);
  EXPECT_EQ(stationary_batch(ps, {0.3, 0.1, 0.1}, 0)[2].state.x, 0.1);
}
