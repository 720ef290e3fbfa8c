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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qca/gates.hpp"
#include "qca/meanfield.hpp"

namespace qca {

/// The three probabilities held fixed while (lambda, p_branch) is scanned.
struct BaseParams {
  double p_dec = 0.1;
  double p_coag = 0.1;
  double p_plus = 0.1;

  GateParams at(double lambda, double p_branch) const {
    return {p_dec, p_coag, p_branch, p_plus, lambda};
  }
  void validate() const { at(0.0, 0.0).validate(); }
};

enum class InitialCondition { HighDensity, LowDensity };

/// (1, 0, 0) for HighDensity, (1e-3, 0, 0) for LowDensity.
MFState initial_state(InitialCondition init);
std::string_view initial_label(InitialCondition init);

/// n points evenly spaced over [a, b] inclusive.
std::vector<double> linspace(double a, double b, std::size_t n);

struct PhaseDiagram {
  std::vector<double> lambda_grid;
  std::vector<double> p_branch_grid;
  Eigen::MatrixXd n_inf;  // rows follow lambda_grid, columns p_branch_grid
  std::string init_label;
  int iters = kDefaultIterations;
  BaseParams base;
};

PhaseDiagram sweep(const BaseParams& base, std::span<const double> lambda_grid,
                   std::span<const double> p_grid, int iters = kDefaultIterations,
                   InitialCondition init = InitialCondition::HighDensity, int threads = 1);

struct ContourPoint {
  double lambda = 0.0;
  std::optional<double> p_c;  // empty marks a gap (no bracket at this lambda)
};

struct ContourOptions {
  double level = 0.1;
  double tol = 1e-4;
  int iters = kDefaultIterations;
  std::size_t coarse_points = 1001;
  InitialCondition init = InitialCondition::HighDensity;
};

/// Level crossing read off a precomputed diagram by linear interpolation.
std::vector<ContourPoint> critical_contour(const PhaseDiagram& diagram, double level = 0.1);

/// Smallest p_branch where the stationary density reaches `level`, bracketed on a
/// coarse scan and refined by bisection to `tol`.
std::optional<double> critical_point(const BaseParams& base, double lambda,
                                     const ContourOptions& opts = {});

std::vector<ContourPoint> critical_contour(const BaseParams& base, std::span<const double> lambdas,
                                           const ContourOptions& opts = {}, int threads = 1);

/// p_branch at which the empty state loses linear stability (r_dec + 2 r_branch = 1),
/// empty if that point is not in [0, 1].
std::optional<double> linear_threshold(double lambda, const BaseParams& base);

/// `None` means the scan never reached the density level, i.e. no absorbing/active
/// boundary inside p_branch in [0, 1].
enum class TransitionOrder { Continuous, FirstOrder, None };
std::string_view order_name(TransitionOrder order);

struct ClassifierOptions {
  double p_resolution = 1e-3;
  double jump_threshold = 0.05;
  double hysteresis_threshold = 0.05;
  int iters = kDefaultIterations;
  double level = 0.1;
};

struct TransitionReport {
  double lambda = 0.0;
  std::optional<double> p_c;
  TransitionOrder order = TransitionOrder::None;
  double jump = 0.0;        // max adjacent difference on the high-density branch
  double hysteresis = 0.0;  // max |n_high - n_low| over the scan
};

TransitionReport classify_transition(double lambda, const BaseParams& base,
                                     const ClassifierOptions& opts = {});

/// Bisection on the classification for the boundary between continuous and
/// first-order transitions. If the upper end has no transition at all it is moved
/// down in steps of 0.01 until one appears. Throws ParameterError if the bracket
/// does not straddle the change.
double find_lambda_star(const BaseParams& base, double lo = 0.8, double hi = 1.0,
                        double tol = 5e-3, const ClassifierOptions& opts = {});

struct GCriticalRow {
  double lambda = 0.0;
  std::optional<double> p_c;
  std::optional<double> g_c;
};

struct GCriticalTable {
  std::vector<GCriticalRow> rows;
  std::optional<double> lambda_star;
  std::optional<double> p_star;
  std::optional<double> g_star;
};

GCriticalTable g_along_critical(const BaseParams& base, std::span<const double> lambdas,
                                std::optional<double> lambda_star,
                                const ContourOptions& opts = {}, int threads = 1);

struct BetaFitOptions {
  double window_lo = 1e-3;  // offsets above p_c
  double window_hi = 1e-2;
  int points = 9;
  int iters = 200000;
};

struct BetaFit {
  bool valid = false;
  std::string reason;
  double slope = 0.0;
  double p_c = 0.0;
  std::vector<double> delta, n_inf;
};

/// Log-log slope of the stationary density against p_branch - p_c just above the
/// linear threshold.
BetaFit fit_mf_beta(double lambda, const BaseParams& base, const BetaFitOptions& opts = {});

}  // namespace qca
