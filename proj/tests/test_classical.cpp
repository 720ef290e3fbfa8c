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
#include "qca/classical.hpp"
#include "qca/errors.hpp"
#include "qca/meanfield.hpp"

using namespace qca;

namespace {

unsigned hood(int l, int c, int r) { return (l << 2) | (c << 1) | r; }

}  // namespace

TEST(TargetProbability, Examples) {
  const GateParams p{0.3, 0.2, 0.6, 0.5, 0.8};  // lambda is ignored
  EXPECT_DOUBLE_EQ(target_occupation_prob(hood(0, 1, 0), p), 0.7);
  EXPECT_EQ(target_occupation_prob(hood(0, 0, 0), p), 0.0);
  EXPECT_DOUBLE_EQ(target_occupation_prob(hood(1, 0, 0), p), 0.6);
  EXPECT_DOUBLE_EQ(target_occupation_prob(hood(0, 0, 1), p), 0.6);
  EXPECT_DOUBLE_EQ(target_occupation_prob(hood(1, 1, 1), p), 0.2);
}

TEST(PcaStep, AbsorbingRow) {
  std::mt19937_64 rng(40);
  const BitRow zero(50, 0);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(pca_step(zero, {0.0, 1.0, 1.0, 0.5, 0.0}, Boundary::Periodic, rng), zero);
  }
}

TEST(PcaStep, FrequenciesMatchProbabilities) {
  const GateParams p{0.3, 0.25, 0.6, 0.5, 0.0};
  std::mt19937_64 rng(41);
  const int L = 10000;
  BitRow row(L);
  for (auto& b : row) b = rng() & 1;
  const BitRow next = pca_step(row, p, Boundary::Periodic, rng);
  std::array<int, 8> count{}, occupied{};
  for (int k = 0; k < L; ++k) {
    const unsigned h = hood(row[(k + L - 1) % L], row[k], row[(k + 1) % L]);
    ++count[h];
    occupied[h] += next[k];
  }
  for (unsigned h = 0; h < 8; ++h) {
    const double prob = target_occupation_prob(h, p);
    const double sigma = std::sqrt(prob * (1 - prob) / count[h]);
    EXPECT_LE(std::abs(static_cast<double>(occupied[h]) / count[h] - prob), 3 * sigma + 1e-12) << h;
  }
}

TEST(TransitionMatrix, ColumnStochastic) {
  const Eigen::MatrixXd T = transition_matrix(5, {0.3, 0.25, 0.6, 0.5, 0.0}, Boundary::FixedEmpty);
  EXPECT_LT((T.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-13);
  EXPECT_EQ(T(0, 0), 1.0);
  EXPECT_THROW(transition_matrix(13, {}, Boundary::FixedEmpty), CapacityError);
}

TEST(TransitionMatrix, EqualsExactChannelDiagonal) {
  std::mt19937_64 rng(42);
  for (auto b : {Boundary::FixedEmpty, Boundary::Periodic}) {
    for (int L : {2, 3, 4}) {
      const auto check = compare_with_exact(L, oracle::random_params(rng), b);
      EXPECT_LT(check.max_deviation, 1e-10) << L;
    }
  }
}

TEST(SampleStatistics, NoBranchingDiesOut) {
  const auto s = sample_statistics(60, 200, {0.3, 0.5, 0.0, 0.5, 0.0}, BitRow(20, 1), 1);
  for (std::size_t t = 1; t < s.survival.size(); ++t) {
    EXPECT_LE(s.survival[t], s.survival[t - 1]);
  }
  EXPECT_LT(s.density.back(), 0.01);
}

TEST(SampleStatistics, ActivePhaseStaysPopulated) {
  // p_dec = 0 keeps isolated particles, p_coag = 1 and p_branch = 1 fill every
  // neighbour of an occupied site.
  const auto s = sample_statistics(100, 50, {0.0, 1.0, 1.0, 0.5, 0.0}, BitRow(32, 1), 2);
  for (double d : s.density) EXPECT_GT(d, 0.5);
  EXPECT_EQ(s.survival.back(), 1.0);
}

TEST(SampleStatistics, StandardErrorShrinksWithTrials) {
  const GateParams p{0.2, 0.6, 0.5, 0.5, 0.0};
  const auto a = sample_statistics(30, 2000, p, BitRow(40, 1), 3);
  const auto b = sample_statistics(30, 4000, p, BitRow(40, 1), 4);
  const double ratio = b.density_stderr[30] / a.density_stderr[30];
  EXPECT_NEAR(ratio, 1.0 / std::sqrt(2.0), 0.08);
}

TEST(SampleStatistics, DeterministicAcrossThreads) {
  const GateParams p{0.2, 0.6, 0.5, 0.5, 0.0};
  const auto a = sample_statistics(25, 300, p, BitRow(30, 1), 5, Boundary::FixedEmpty, 1);
  const auto b = sample_statistics(25, 300, p, BitRow(30, 1), 5, Boundary::FixedEmpty, 4);
  EXPECT_EQ(a.density, b.density);
  EXPECT_EQ(a.survival_stderr, b.survival_stderr);
  EXPECT_THROW(sample_statistics(5, 0, p, BitRow(3, 1), 0), ParameterError);
}

TEST(SampleStatistics, MoreBranchingNeverLowersDensity) {
  double prev = -1.0, prev_se = 0.0;
  for (double pb : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto s = sample_statistics(100, 400, {0.2, 0.6, pb, 0.5, 0.0}, BitRow(40, 1), 6);
    const double d = s.density.back(), se = s.density_stderr.back();
    EXPECT_GE(d + 3 * std::hypot(se, prev_se), prev) << pb;
    prev = d;
    prev_se = se;
  }
}

TEST(ContinuousTime, RatesFromProbabilities) {
  const auto r = ct_rates_from_probs({0.9, 0.1, 0.5, 0.5, 0.0}, 0.01);
  EXPECT_NEAR(r.kappa_c, 0.0, 1e-12);
  EXPECT_NEAR(r.kappa_b, 50.0, 1e-12);
  EXPECT_NEAR(r.gamma, 90.0, 1e-12);
  EXPECT_FALSE(r.negative_kappa_c);
  EXPECT_NEAR(ct_rates_from_probs({0.8, 0.1, 0.5, 0.5, 0.0}, 1.0).kappa_c, 0.1, 1e-15);
  EXPECT_TRUE(ct_rates_from_probs({0.8, 0.3, 0.5, 0.5, 0.0}, 1.0).negative_kappa_c);
  EXPECT_THROW(ct_rates_from_probs({}, 0.0), ParameterError);
}

TEST(ContinuousTime, NoDecayStationaryDensity) {
  CPRates r{2.0, 3.0, 0.0, 1.0, false};
  const auto traj = cp_mf_ode(r, 0.3, 40.0, 1e-3);
  EXPECT_NEAR(traj.n.back(), 0.6, 1e-8);
  ASSERT_EQ(traj.stationary.size(), 2u);
  EXPECT_NEAR(traj.stationary[1], 0.6, 1e-14);
}

TEST(ContinuousTime, EmptyStaysEmpty) {
  const auto traj = cp_mf_ode({1.0, 2.0, 0.5, 1.0, false}, 0.0, 10.0, 0.01);
  for (double n : traj.n) EXPECT_EQ(n, 0.0);
}

TEST(ContinuousTime, StationaryRootsSatisfyFixedPoint) {
  const CPRates r{0.7, 2.5, 0.9, 1.0, false};
  const auto traj = cp_mf_ode(r, 0.5, 60.0, 1e-3);
  ASSERT_GE(traj.stationary.size(), 2u);
  for (double n : traj.stationary) {
    const double f = -0.9 * n + (1 - (1 - n) * (1 - n)) * (2.5 - 3.2 * n);
    EXPECT_NEAR(f, 0.0, 1e-12);
  }
  EXPECT_NEAR(traj.n.back(), traj.stationary.back(), 1e-8);
}

TEST(ContinuousTime, DiscreteRecursionIsFirstOrder) {
  const CPRates r{0.5, 2.0, 1.0, 1.0, false};
  const double T = 2.0, n0 = 0.8;
  const double exact = cp_mf_ode(r, n0, T, 1e-4).n.back();
  auto discrete = [&](double dt) {
    const GateParams p = probs_from_ct_rates(r, dt);
    double n = n0;
    for (int i = 0; i < static_cast<int>(std::lround(T / dt)); ++i) n = mf_step_density(n, 0.0, p);
    return n;
  };
  const double e1 = std::abs(discrete(0.01) - exact), e2 = std::abs(discrete(0.005) - exact);
  EXPECT_NEAR(e1 / e2, 2.0, 0.2);
}

TEST(ContinuousTime, RejectsInvalidInput) {
  EXPECT_THROW(cp_mf_ode({-1.0, 1.0, 1.0, 1.0, true}, 0.5, 1.0, 0.1), ParameterError);
  EXPECT_THROW(cp_mf_ode({1.0, 1.0, 1.0, 1.0, false}, 1.5, 1.0, 0.1), ParameterError);
  EXPECT_THROW(cp_mf_ode({1.0, 10.0, 1.0, 1.0, false}, 0.5, 10.0, 10.0), NumericalError);
}
