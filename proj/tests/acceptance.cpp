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

// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qca/analysis.hpp"
#include "qca/classical.hpp"
#include "qca/exact.hpp"
#include "qca/gates.hpp"
#include "qca/meanfield.hpp"
#include "qca/qcp.hpp"

using namespace qca;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s [%2d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

void info(const std::string& text) { std::printf("INFO      %s\n", text.c_str()); }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

MFState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double n = u(rng);
  const double radius = 2.0 * std::sqrt(n * (1.0 - n)) * std::sqrt(u(rng));
  const double phi = 2.0 * M_PI * u(rng);
  return {n, radius * std::cos(phi), radius * std::sin(phi)};
}

RowDensity random_basis_row(int L, std::mt19937_64& rng) {
  std::vector<std::uint8_t> bits(L);
  for (auto& b : bits) b = rng() & 1;
  return initial_row(bits);
}

EvolutionConfig one_step(Boundary b = Boundary::FixedEmpty) {
  EvolutionConfig c;
  c.boundary = b;
  return c;
}

Outcome gate_unitarity() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const GateParams p = oracle::random_params(rng);
    worst = std::max({worst, unitarity_residual(build_sync_gate(p)),
                      unitarity_residual(build_async_gate(p))});
  }
  return {worst < 1e-12, fmt("max |G^dag G - 1| = %.3g over 100 draws, both gates", worst)};
}

Outcome synchronism() {
  std::mt19937_64 rng(102);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const GateParams p = oracle::random_params(rng, false);
    worst = std::max(worst, order_sensitivity(random_basis_row(4, rng), p, one_step()));
  }
  const RowDensity seeded = initial_row(parse_pattern("xoxx"));
  double smallest = 1.0;
  std::ostringstream ss;
  for (double lam : {0.3, 0.6, 0.9}) {
    const double d = order_sensitivity(seeded, {0.1, 0.1, 0.5, 0.1, lam}, one_step());
    smallest = std::min(smallest, d);
    ss << " " << lam << ":" << d;
  }
  return {worst < 1e-12 && smallest > 0.0,
          fmt("lambda=0 max = %.3g;", worst) + " lambda>0 ordering distance" + ss.str()};
}

Outcome coefficient_identity() {
  std::mt19937_64 rng(103);
  double coeff_err = 0.0, density_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const GateParams p = oracle::random_params(rng);
    const LocalGate g = build_async_gate(p);
    const MFCoefficients r = coefficients(p);
    coeff_err = std::max(coeff_err, std::abs(r.r_dec - oracle::target_occupation(g, 0, 1, 0)));
    for (auto [l, rr] : {std::pair{1, 0}, {0, 1}, {1, 1}}) {
      coeff_err = std::max(coeff_err, std::abs(r.r_coag - oracle::target_occupation(g, l, 1, rr)));
      coeff_err = std::max(coeff_err, std::abs(r.r_branch - oracle::target_occupation(g, l, 0, rr)));
    }
    const MFState s = random_state(rng);
    const MFState full = mf_step_full(s, p);
    const MFState brute = MFState::from_density(oracle::mean_field_step(g, s.density()));
    // the brute-force partial trace also checks r_star through the y-dependence
    density_err = std::max({density_err, std::abs(full.n - mf_step_density(s.n, s.y, p)),
                            std::abs(brute.n - mf_step_density(s.n, s.y, p))});
  }
  return {coeff_err < 1e-12 && density_err < 1e-12,
          fmt("branch probabilities %.3g", coeff_err) + fmt(", density recursion %.3g", density_err)};
}

Outcome classical_limit() {
  std::mt19937_64 rng(104);
  double dev = 0.0, dephase = 0.0, coherence = 0.0;
  for (int i = 0; i < 10; ++i) {
    const GateParams p = oracle::random_params(rng, false);
    for (auto b : {Boundary::FixedEmpty, Boundary::Periodic}) {
      const auto check = compare_with_exact(4, p, b);
      dev = std::max(dev, check.max_deviation);
      coherence = std::max(coherence, check.max_offdiagonal);
      const RowDensity in{4, oracle::random_density(16, rng)};
      RowDensity diag = in;
      diag.rho = Eigen::MatrixXcd(in.rho.diagonal().asDiagonal());
      dephase = std::max(dephase, (step_dense(in, p, one_step(b)).rho -
                                   step_dense(diag, p, one_step(b)).rho)
                                      .cwiseAbs()
                                      .maxCoeff());
    }
  }
  info(fmt("classical limit: largest coherence created from a basis row = %.3g", coherence));
  return {dev < 1e-10 && dephase < 1e-12,
          fmt("diagonal vs transition matrix %.3g", dev) +
              fmt(", output change when input coherences are removed %.3g", dephase)};
}

Outcome phase_diagram() {
  const BaseParams base;
  const auto grid = linspace(0.0, 1.0, 201);
  const auto d = sweep(base, grid, grid, 1000);
  int rows_with_boundary = 0;
  for (Eigen::Index i = 0; i < d.n_inf.rows(); ++i) {
    const bool absorbing = d.n_inf(i, 0) < 1e-9;
    const bool active = d.n_inf.row(i).maxCoeff() > 0.1;
    rows_with_boundary += absorbing && active;
  }
  bool orders_ok = true;
  std::ostringstream ss;
  for (double lam : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
    const auto o = classify_transition(lam, base).order;
    orders_ok &= o == TransitionOrder::Continuous;
  }
  for (double lam : {0.94, 0.96, 0.98, 1.0}) {
    const auto o = classify_transition(lam, base).order;
    orders_ok &= o == TransitionOrder::FirstOrder;
  }
  const double star = find_lambda_star(base);
  const auto literal = linear_threshold(0.6, BaseParams{0.9, 0.1, 0.1});
  info(std::string("phase diagram: with isolated-particle survival 0.1 the linear threshold at "
                   "lambda = 0.6 is ") +
       (literal ? fmt("%.3f", *literal) : std::string("outside [0, 1]")));
  ss << "201x201 grid, " << rows_with_boundary << "/201 lambda rows with absorbing and active "
     << "phases; orders " << (orders_ok ? "as expected" : "WRONG") << "; lambda* = " << star;
  return {rows_with_boundary == 201 && orders_ok && std::abs(star - 0.92) <= 0.02, ss.str()};
}

Outcome g_star() {
  const BaseParams base;
  const double star = find_lambda_star(base);
  const auto lam = linspace(0.5, 0.99, 50);
  const auto t = g_along_critical(base, lam, star);
  bool increasing = true;
  double prev = -1.0;
  for (const auto& row : t.rows) {
    if (!row.g_c) {
      increasing = false;
      continue;
    }
    increasing &= *row.g_c > prev;
    prev = *row.g_c;
  }
  const auto end = g_along_critical(base, std::vector<double>{1.0}, std::nullopt);
  const double rb1 = coefficients(base.at(1.0, 0.5)).r_branch;
  info(end.rows[0].g_c ? fmt("g_c(1) = %.3g", *end.rows[0].g_c)
                       : fmt("g_c(1) undefined: r_branch = %.3g at lambda = 1", rb1));
  std::ostringstream ss;
  ss << "g_c(0.5) = " << (t.rows.front().g_c ? *t.rows.front().g_c : NAN)
     << ", g_c(0.99) = " << (t.rows.back().g_c ? *t.rows.back().g_c : NAN)
     << (increasing ? ", increasing" : ", NOT increasing") << "; g* = "
     << (t.g_star ? *t.g_star : NAN) << " at lambda* = " << star;
  return {increasing && t.g_star && *t.g_star >= 3.75 && *t.g_star <= 4.35, ss.str()};
}

Outcome qcp_round_trip() {
  std::mt19937_64 rng(107);
  double err = 0.0, g_spread = 0.0;
  for (int i = 0; i < 100; ++i) {
    const GateParams p = oracle::random_params(rng);
    const MFCoefficients want = coefficients(p);
    std::optional<double> g_ref;
    for (double dt : {1e-3, 1e-2, 1e-1}) {
      const auto m = map_qca_to_qcp(p, dt);
      const MFCoefficients got = qcp_coefficients(m.rates).coeffs;
      err = std::max({err, std::abs(got.r_dec - want.r_dec), std::abs(got.r_coag - want.r_coag),
                      std::abs(got.r_branch - want.r_branch), std::abs(got.r_star - want.r_star)});
      if (m.rates.g) {
        if (!g_ref) g_ref = m.rates.g;
        g_spread = std::max(g_spread, std::abs(*m.rates.g - *g_ref));
      }
    }
  }
  return {err < 1e-14 && g_spread < 1e-12,
          fmt("round trip %.3g", err) + fmt(", g spread over dt %.3g", g_spread)};
}

Outcome continuous_time() {
  const CPRates r{0.5, 2.0, 1.0, 1.0, false};
  const double T = 2.0, n0 = 0.8;
  const double exact = cp_mf_ode(r, n0, T, 1e-4).n.back();
  auto discrete = [&](double dt) {
    const GateParams p = probs_from_ct_rates(r, dt);
    double n = n0;
    for (long i = 0; i < std::lround(T / dt); ++i) n = mf_step_density(n, 0.0, p);
    return std::abs(n - exact);
  };
  const double ratio = discrete(0.01) / discrete(0.005);
  const CPRates no_decay{2.0, 3.0, 0.0, 1.0, false};
  const double stat = std::abs(cp_mf_ode(no_decay, 0.3, 40.0, 1e-3).n.back() - 0.6);
  return {ratio >= 1.8 && ratio <= 2.2 && stat < 1e-8,
          fmt("error ratio dt/(dt/2) = %.4f", ratio) +
              fmt(", gamma=0 stationary error %.3g", stat)};
}

Outcome onset_exponent() {
  std::ostringstream ss;
  bool ok = true;
  for (double lam : {0.0, 0.5}) {
    const auto fit = fit_mf_beta(lam, BaseParams{});
    ok &= fit.valid && std::abs(fit.slope - 1.0) <= 0.05;
    ss << "lambda=" << lam << " slope " << fit.slope << " (p_c " << fit.p_c << ") ";
  }
  return {ok, ss.str()};
}

Outcome trajectory_equivalence() {
  const GateParams p{0.1, 0.1, 0.5, 0.1, 0.5};
  const RowDensity in = initial_row(parse_pattern("xxxx"));
  EvolutionConfig dense;
  dense.steps = 10;
  EvolutionConfig traj = dense;
  traj.mode = TrajectoryMode{100000, 2026};
  const auto a = evolve(in, p, dense);
  const auto b = evolve(in, p, traj);
  double worst = 0.0;
  for (int t = 1; t <= 10; ++t) {
    worst = std::max(worst, std::abs(a[t].mean_density - b[t].mean_density) / b[t].mean_density_stderr);
  }
  return {worst <= 4.0, fmt("max |dense - trajectory| = %.2f standard errors over t <= 10", worst)};
}

}  // namespace

int main() {
  criterion(1, "gate unitarity", gate_unitarity);
  criterion(2, "synchronism at lambda = 0", synchronism);
  criterion(3, "coefficient identity", coefficient_identity);
  criterion(4, "classical-limit oracle", classical_limit);
  criterion(5, "phase diagram and lambda*", phase_diagram);
  criterion(6, "g along the critical line", g_star);
  criterion(7, "QCP mapping round trip", qcp_round_trip);
  criterion(8, "continuous-time limit", continuous_time);
  criterion(9, "mean-field onset exponent", onset_exponent);
  criterion(10, "trajectory/dense equivalence", trajectory_equivalence);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
