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

#include "qca/classical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qca/errors.hpp"
#include "qca/parallel.hpp"

namespace qca {

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

unsigned neighborhood(const BitRow& row, int k, Boundary boundary) {
  const int L = static_cast<int>(row.size());
  const bool periodic = boundary == Boundary::Periodic;
  unsigned left = 0, right = 0;
  if (k > 0) {
    left = row[k - 1];
  } else if (periodic) {
    left = row[L - 1];
  }
  if (k < L - 1) {
    right = row[k + 1];
  } else if (periodic) {
    right = row[0];
  }
  return (left << 2) | (static_cast<unsigned>(row[k] != 0) << 1) | right;
}

}  // namespace

double target_occupation_prob(unsigned neigh, const GateParams& params) {
  const bool outer_empty = (neigh & 0b101u) == 0;
  const bool center = (neigh & 0b010u) != 0;
  if (outer_empty) return center ? params.q_dec() : 0.0;
  return center ? params.p_coag : params.p_branch;
}

BitRow pca_step(const BitRow& row, const GateParams& params, Boundary boundary,
                std::mt19937_64& rng) {
  BitRow next(row.size(), 0);
  for (int k = 0; k < static_cast<int>(row.size()); ++k) {
    const double p = target_occupation_prob(neighborhood(row, k, boundary), params);
    next[k] = uniform01(rng) < p ? 1 : 0;
  }
  return next;
}

Eigen::MatrixXd transition_matrix(int sites, const GateParams& params, Boundary boundary) {
  if (sites < 1 || sites > 12) throw CapacityError("transition matrix supports 1..12 sites");
  params.validate();
  const int dim = 1 << sites;
  Eigen::MatrixXd T(dim, dim);
  BitRow row(sites);
  std::vector<double> p_occ(sites);
  for (int from = 0; from < dim; ++from) {
    for (int k = 0; k < sites; ++k) row[k] = (from >> k) & 1;
    for (int k = 0; k < sites; ++k) {
      p_occ[k] = target_occupation_prob(neighborhood(row, k, boundary), params);
    }
    for (int to = 0; to < dim; ++to) {
      double p = 1.0;
      for (int k = 0; k < sites; ++k) p *= ((to >> k) & 1) ? p_occ[k] : 1.0 - p_occ[k];
      T(to, from) = p;
    }
  }
  return T;
}

ExactDiagonalCheck compare_with_exact(int sites, const GateParams& params, Boundary boundary) {
  if (sites < 1 || sites > kMaxDenseSites) {
    throw CapacityError("exact comparison supports 1.." + std::to_string(kMaxDenseSites) +
                        " sites");
  }
  GateParams sync = params;
  sync.lambda = 0.0;
  const Eigen::MatrixXd T = transition_matrix(sites, sync, boundary);
  EvolutionConfig cfg;
  cfg.boundary = boundary;
  ExactDiagonalCheck out;
  BitRow bits(sites);
  for (int from = 0; from < T.cols(); ++from) {
    for (int k = 0; k < sites; ++k) bits[k] = (from >> k) & 1;
    const RowDensity next = step_dense(initial_row(bits), sync, cfg);
    for (int to = 0; to < T.rows(); ++to) {
      for (int col = 0; col < T.rows(); ++col) {
        const double v = std::abs(next.rho(to, col));
        if (col == to) {
          out.max_deviation =
              std::max(out.max_deviation, std::abs(next.rho(to, to).real() - T(to, from)));
        } else {
          out.max_offdiagonal = std::max(out.max_offdiagonal, v);
        }
      }
    }
  }
  return out;
}

SampleStatistics sample_statistics(int steps, std::int64_t trials, const GateParams& params,
                                   const BitRow& initial, std::uint64_t seed, Boundary boundary,
                                   int threads) {
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (steps < 0) throw ParameterError("steps must be non-negative");
  if (initial.empty()) throw ParameterError("initial row is empty");
  params.validate();
  const double L = static_cast<double>(initial.size());

  // Per-trial time series, reduced in trial order afterwards.
  std::vector<std::vector<double>> density(trials, std::vector<double>(steps + 1, 0.0));
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t trial) {
    auto rng = sample_rng(seed, trial);
    BitRow row = initial;
    auto& d = density[trial];
    for (int t = 0; t <= steps; ++t) {
      if (t > 0) row = pca_step(row, params, boundary, rng);
      const auto occupied = std::count(row.begin(), row.end(), std::uint8_t{1});
      d[t] = static_cast<double>(occupied) / L;
      if (occupied == 0) break;  // absorbed; remaining entries stay zero
    }
  });

  SampleStatistics s;
  s.density.assign(steps + 1, 0.0);
  s.density_stderr.assign(steps + 1, 0.0);
  s.survival.assign(steps + 1, 0.0);
  s.survival_stderr.assign(steps + 1, 0.0);
  const double n = static_cast<double>(trials);
  for (int t = 0; t <= steps; ++t) {
    double sum = 0.0, sum_sq = 0.0, alive = 0.0;
    for (const auto& d : density) {
      sum += d[t];
      sum_sq += d[t] * d[t];
      alive += d[t] > 0.0 ? 1.0 : 0.0;
    }
    const double mean = sum / n;
    s.density[t] = mean;
    s.survival[t] = alive / n;
    if (trials > 1) {
      const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
      s.density_stderr[t] = std::sqrt(var / n);
      const double ps = s.survival[t];
      s.survival_stderr[t] = std::sqrt(std::max(0.0, ps * (1.0 - ps) * n / (n - 1.0)) / n);
    }
  }
  return s;
}

CPRates ct_rates_from_probs(const GateParams& params, double dt) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  params.validate();
  CPRates r;
  r.dt = dt;
  r.kappa_c = (params.q_dec() - params.p_coag) / dt;
  r.kappa_b = params.p_branch / dt;
  r.gamma = params.p_dec / dt;
  // tolerance absorbs rounding in 1 - p_dec
  r.negative_kappa_c = params.q_dec() - params.p_coag < -1e-12;
  return r;
}

GateParams probs_from_ct_rates(const CPRates& rates, double dt) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  GateParams p;
  p.p_dec = rates.gamma * dt;
  p.p_coag = 1.0 - rates.gamma * dt - rates.kappa_c * dt;
  p.p_branch = rates.kappa_b * dt;
  p.validate();
  return p;
}

CPTrajectory cp_mf_ode(const CPRates& rates, double n0, double t_max, double dt_int) {
  if (rates.kappa_c < 0.0 || rates.kappa_b < 0.0 || rates.gamma < 0.0) {
    throw ParameterError("contact-process rates must be non-negative");
  }
  if (!(n0 >= 0.0 && n0 <= 1.0)) throw ParameterError("n0 must lie in [0, 1]");
  if (!(dt_int > 0.0) || !(t_max >= 0.0)) throw ParameterError("bad integration window");

  const double g = rates.gamma, kb = rates.kappa_b, kc = rates.kappa_c;
  auto rhs = [&](double n) {
    const double pibar = 1.0 - (1.0 - n) * (1.0 - n);
    return -g * n + pibar * (kb - (kb + kc) * n);
  };

  CPTrajectory out;
  const auto steps = static_cast<std::int64_t>(std::ceil(t_max / dt_int - 1e-9));
  out.t.reserve(steps + 1);
  out.n.reserve(steps + 1);
  double n = n0;
  out.t.push_back(0.0);
  out.n.push_back(n);
  for (std::int64_t i = 0; i < steps; ++i) {
    const double h = std::min(dt_int, t_max - static_cast<double>(i) * dt_int);
    const double k1 = rhs(n);
    const double k2 = rhs(n + 0.5 * h * k1);
    const double k3 = rhs(n + 0.5 * h * k2);
    const double k4 = rhs(n + h * k3);
    n += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (n < -1e-9 || n > 1.0 + 1e-9) {
      throw NumericalError("contact-process density left [0, 1]; reduce the integration step");
    }
    out.t.push_back(static_cast<double>(i + 1) * dt_int > t_max ? t_max
                                                                  : static_cast<double>(i + 1) * dt_int);
    out.n.push_back(n);
  }

  // Nonzero fixed points: (2 - n)(kb - K n) = g with K = kb + kc, i.e.
  // K n^2 - (2K + kb) n + (2 kb - g) = 0.
  out.stationary.push_back(0.0);
  const double K = kb + kc;
  const double a = K, b = -(2.0 * K + kb), c = 2.0 * kb - g;
  std::vector<double> roots;
  if (std::abs(a) < 1e-300) {
    if (std::abs(b) > 1e-300) roots.push_back(-c / b);
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      // Numerically stable pair.
      const double qv = -0.5 * (b + std::copysign(sq, b));
      roots.push_back(qv / a);
      if (qv != 0.0) roots.push_back(c / qv);
    }
  }
  for (double r : roots) {
    if (r > 1e-15 && r <= 1.0 + 1e-12) out.stationary.push_back(std::min(r, 1.0));
  }
  std::sort(out.stationary.begin(), out.stationary.end());
  out.stationary.erase(std::unique(out.stationary.begin(), out.stationary.end()),
                       out.stationary.end());
  return out;
}

}  // namespace qca
