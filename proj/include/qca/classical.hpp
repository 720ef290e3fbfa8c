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

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qca/exact.hpp"
#include "qca/gates.hpp"

namespace qca {

using BitRow = std::vector<std::uint8_t>;

/// Neighbourhood bits packed as (left << 2) | (center << 1) | right.
double target_occupation_prob(unsigned neighborhood, const GateParams& params);

/// Synchronous probabilistic update: every target reads the frozen parent row.
BitRow pca_step(const BitRow& row, const GateParams& params, Boundary boundary,
                std::mt19937_64& rng);

/// Column-stochastic 2^L x 2^L matrix T(to, from) of the synchronous update, L <= 12.
Eigen::MatrixXd transition_matrix(int sites, const GateParams& params, Boundary boundary);

struct ExactDiagonalCheck {
  double max_deviation = 0.0;    // max |T(to, from) - <to| E(|from><from|) |to>|
  double max_offdiagonal = 0.0;  // largest coherence produced from a basis state
};

/// Runs the exact row channel (lambda forced to 0) on every basis row and compares the
/// output diagonal with `transition_matrix`. Sites are capped at kMaxDenseSites.
ExactDiagonalCheck compare_with_exact(int sites, const GateParams& params, Boundary boundary);

struct SampleStatistics {
  std::vector<double> density, density_stderr;
  std::vector<double> survival, survival_stderr;
};

/// Density and survival probability over `trials` independent runs of `steps` updates.
/// Deterministic given the seed; trial i draws from its own stream.
SampleStatistics sample_statistics(int steps, std::int64_t trials, const GateParams& params,
                                   const BitRow& initial, std::uint64_t seed,
                                   Boundary boundary = Boundary::FixedEmpty, int threads = 1);

struct CPRates {
  double kappa_c = 0.0;
  double kappa_b = 0.0;
  double gamma = 0.0;
  double dt = 1.0;
  /// Set when the coagulation rate came out negative (outside the contact-process family).
  bool negative_kappa_c = false;
};

CPRates ct_rates_from_probs(const GateParams& params, double dt);

/// Synchronous gate probabilities whose mean-field recursion is the Euler step of the
/// contact-process mean-field equation with the given rates and step.
GateParams probs_from_ct_rates(const CPRates& rates, double dt);

struct CPTrajectory {
  std::vector<double> t, n;
  /// Fixed points of the rate equation in [0, 1], ascending; always contains 0.
  std::vector<double> stationary;
};

/// RK4 integration of dn/dt = -gamma n + [1 - (1-n)^2][kappa_b - (kappa_b + kappa_c) n].
CPTrajectory cp_mf_ode(const CPRates& rates, double n0, double t_max, double dt_int);

}  // namespace qca
