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

#include "qca/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qca/errors.hpp"
#include "qca/parallel.hpp"
#include "qca/qcp.hpp"

namespace qca {

namespace {

std::vector<double> stationary_densities(const BaseParams& base, double lambda,
                                         std::span<const double> p_grid, int iters,
                                         InitialCondition init) {
  std::vector<GateParams> points;
  points.reserve(p_grid.size());
  for (double p : p_grid) points.push_back(base.at(lambda, p));
  const auto res = stationary_batch(points, initial_state(init), iters);
  std::vector<double> n(res.size());
  for (std::size_t i = 0; i < res.size(); ++i) n[i] = res[i].state.n;
  return n;
}

// First upward crossing of `level`, linearly interpolated.
std::optional<double> first_crossing(std::span<const double> p, std::span<const double> n,
                                     double level) {
  for (std::size_t j = 0; j < n.size(); ++j) {
    if (n[j] >= level) {
      if (j == 0) return p[0];
      const double t = (level - n[j - 1]) / (n[j] - n[j - 1]);
      return p[j - 1] + t * (p[j] - p[j - 1]);
    }
  }
  return std::nullopt;
}

void check_grid(std::span<const double> g, const char* name) {
  if (g.empty()) throw ParameterError(std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] >= 0.0 && g[i] <= 1.0)) {
      throw ParameterError(std::string(name) + " grid values must lie in [0, 1]");
    }
    if (i > 0 && !(g[i] > g[i - 1])) {
      throw ParameterError(std::string(name) + " grid must be strictly ascending");
    }
  }
}

}  // namespace

MFState initial_state(InitialCondition init) {
  return init == InitialCondition::HighDensity ? MFState{1.0, 0.0, 0.0} : MFState{1e-3, 0.0, 0.0};
}

std::string_view initial_label(InitialCondition init) {
  return init == InitialCondition::HighDensity ? "high" : "low";
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {a};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  v.back() = b;
  return v;
}

PhaseDiagram sweep(const BaseParams& base, std::span<const double> lambda_grid,
                   std::span<const double> p_grid, int iters, InitialCondition init,
                   int threads) {
  check_grid(lambda_grid, "lambda");
  check_grid(p_grid, "p_branch");
  base.validate();
  PhaseDiagram d;
  d.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
  d.p_branch_grid.assign(p_grid.begin(), p_grid.end());
  d.n_inf.resize(static_cast<Eigen::Index>(lambda_grid.size()),
                 static_cast<Eigen::Index>(p_grid.size()));
  d.init_label = std::string(initial_label(init));
  d.iters = iters;
  d.base = base;
  parallel_for(lambda_grid.size(), threads, [&](std::size_t i) {
    std::vector<double> row;
    try {
      row = stationary_densities(base, lambda_grid[i], p_grid, iters, init);
    } catch (const NumericalError& e) {
      std::ostringstream os;
      os << e.what() << " [lambda=" << lambda_grid[i] << "]";
      throw NumericalError(os.str());
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      d.n_inf(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
    }
  });
  return d;
}

std::vector<ContourPoint> critical_contour(const PhaseDiagram& diagram, double level) {
  if (!(level > 0.0 && level < 1.0)) throw ParameterError("contour level must lie in (0, 1)");
  std::vector<ContourPoint> out;
  std::vector<double> row(diagram.p_branch_grid.size());
  for (std::size_t i = 0; i < diagram.lambda_grid.size(); ++i) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      row[j] = diagram.n_inf(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    out.push_back({diagram.lambda_grid[i], first_crossing(diagram.p_branch_grid, row, level)});
  }
  return out;
}

std::optional<double> critical_point(const BaseParams& base, double lambda,
                                     const ContourOptions& opts) {
  if (!(opts.level > 0.0 && opts.level < 1.0)) {
    throw ParameterError("contour level must lie in (0, 1)");
  }
  if (opts.coarse_points < 2) throw ParameterError("coarse scan needs at least two points");
  const auto p = linspace(0.0, 1.0, opts.coarse_points);
  const auto n = stationary_densities(base, lambda, p, opts.iters, opts.init);
  std::size_t j = 0;
  while (j < n.size() && n[j] < opts.level) ++j;
  if (j == n.size()) return std::nullopt;
  if (j == 0) return 0.0;

  double lo = p[j - 1], hi = p[j];
  const MFState init = initial_state(opts.init);
  while (hi - lo > opts.tol) {
    const double mid = 0.5 * (lo + hi);
    const double nm = stationary(base.at(lambda, mid), init, opts.iters).state.n;
    (nm >= opts.level ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<ContourPoint> critical_contour(const BaseParams& base, std::span<const double> lambdas,
                                           const ContourOptions& opts, int threads) {
  std::vector<ContourPoint> out(lambdas.size());
  parallel_for(lambdas.size(), threads, [&](std::size_t i) {
    out[i] = {lambdas[i], critical_point(base, lambdas[i], opts)};
  });
  return out;
}

std::optional<double> linear_threshold(double lambda, const BaseParams& base) {
  if (lambda >= 1.0) return std::nullopt;
  // r_branch = (1 - lambda) p_branch + lambda * k, k independent of p_branch.
  const GateParams at_zero = base.at(lambda, 0.0);
  const double k_part = coefficients(at_zero).r_branch;
  const double need = 0.5 * (1.0 - at_zero.q_dec());
  const double p = (need - k_part) / (1.0 - lambda);
  if (!(p >= 0.0 && p <= 1.0)) return std::nullopt;
  return p;
}

std::string_view order_name(TransitionOrder order) {
  switch (order) {
    case TransitionOrder::Continuous:
      return "continuous";
    case TransitionOrder::FirstOrder:
      return "first-order";
    case TransitionOrder::None:
      return "none";
  }
  return "unknown";
}

TransitionReport classify_transition(double lambda, const BaseParams& base,
                                     const ClassifierOptions& opts) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ParameterError("lambda must lie in [0, 1]");
  if (!(opts.p_resolution > 0.0 && opts.p_resolution <= 0.5)) {
    throw ParameterError("p_resolution must lie in (0, 0.5]");
  }
  const auto points = static_cast<std::size_t>(std::llround(1.0 / opts.p_resolution)) + 1;
  const auto p = linspace(0.0, 1.0, points);
  const auto high = stationary_densities(base, lambda, p, opts.iters, InitialCondition::HighDensity);
  const auto low = stationary_densities(base, lambda, p, opts.iters, InitialCondition::LowDensity);

  TransitionReport r;
  r.lambda = lambda;
  for (std::size_t j = 0; j < points; ++j) {
    if (j > 0) r.jump = std::max(r.jump, std::abs(high[j] - high[j - 1]));
    r.hysteresis = std::max(r.hysteresis, std::abs(high[j] - low[j]));
  }
  r.p_c = first_crossing(p, high, opts.level);
  if (r.jump > opts.jump_threshold || r.hysteresis > opts.hysteresis_threshold) {
    r.order = TransitionOrder::FirstOrder;
  } else if (r.p_c) {
    r.order = TransitionOrder::Continuous;
  } else {
    r.order = TransitionOrder::None;
  }
  return r;
}

double find_lambda_star(const BaseParams& base, double lo, double hi, double tol,
                        const ClassifierOptions& opts) {
  if (!(lo >= 0.0 && hi <= 1.0 && lo <= hi)) throw ParameterError("invalid lambda bracket");
  auto first_order = [&](double lam) {
    return classify_transition(lam, base, opts).order == TransitionOrder::FirstOrder;
  };
  TransitionOrder hi_order = classify_transition(hi, base, opts).order;
  while (hi_order == TransitionOrder::None && hi - 0.01 > lo) {
    hi -= 0.01;
    hi_order = classify_transition(hi, base, opts).order;
  }
  const bool lo_first = first_order(lo);
  const bool hi_first = hi_order == TransitionOrder::FirstOrder;
  if (lo_first == hi_first) {
    std::ostringstream os;
    os << "lambda bracket [" << lo << ", " << hi
       << "] does not straddle a change in transition order";
    throw ParameterError(os.str());
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (first_order(mid) == hi_first ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

GCriticalTable g_along_critical(const BaseParams& base, std::span<const double> lambdas,
                                std::optional<double> lambda_star, const ContourOptions& opts,
                                int threads) {
  auto g_at = [&](double lam, double p) -> std::optional<double> {
    const MFCoefficients r = coefficients(base.at(lam, p));
    if (!(r.r_branch > 0.0)) return std::nullopt;
    return g_ratio(base.at(lam, p));
  };
  GCriticalTable table;
  table.rows.resize(lambdas.size());
  const auto contour = critical_contour(base, lambdas, opts, threads);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    table.rows[i].lambda = lambdas[i];
    table.rows[i].p_c = contour[i].p_c;
    if (contour[i].p_c) table.rows[i].g_c = g_at(lambdas[i], *contour[i].p_c);
  }
  if (lambda_star) {
    table.lambda_star = lambda_star;
    table.p_star = critical_point(base, *lambda_star, opts);
    if (table.p_star) table.g_star = g_at(*lambda_star, *table.p_star);
  }
  return table;
}

BetaFit fit_mf_beta(double lambda, const BaseParams& base, const BetaFitOptions& opts) {
  if (!(opts.window_lo > 0.0 && opts.window_hi > opts.window_lo) || opts.points < 2) {
    throw ParameterError("invalid fit window");
  }
  BetaFit fit;
  if (classify_transition(lambda, base).order == TransitionOrder::FirstOrder) {
    fit.reason = "discontinuous onset";
    return fit;
  }
  const auto pc = linear_threshold(lambda, base);
  if (!pc || *pc + opts.window_hi > 1.0) {
    fit.reason = "no linear threshold inside [0, 1]";
    return fit;
  }
  fit.p_c = *pc;
  const double a = std::log(opts.window_lo), b = std::log(opts.window_hi);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < opts.points; ++i) {
    const double ld = a + (b - a) * i / (opts.points - 1);
    const double delta = std::exp(ld);
    const double n = stationary(base.at(lambda, fit.p_c + delta), {1.0, 0.0, 0.0}, opts.iters)
                         .state.n;
    fit.delta.push_back(delta);
    fit.n_inf.push_back(n);
    if (!(n > 1e-12)) {
      fit.reason = "window lies in the absorbing phase";
      return fit;
    }
    const double ln = std::log(n);
    sx += ld;
    sy += ln;
    sxx += ld * ld;
    sxy += ld * ln;
  }
  const double m = opts.points;
  fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.valid = true;
  return fit;
}

}  // namespace qca
