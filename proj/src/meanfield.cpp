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

#include "qca/meanfield.hpp"

#include <cmath>
#include <sstream>

#include "qca/errors.hpp"

namespace qca {

namespace {

struct Branches {
  Eigen::Matrix2cd dec;         // U_dec nbar U_dec^dag
  Eigen::Matrix2cd coag;        // U_coag nbar U_coag^dag
  Eigen::Matrix2cd branch;      // U_branch nbar U_branch^dag
  Eigen::Matrix2cd lowered;     // U_branch U+^dag nbar U+ U_branch^dag
  Eigen::Matrix2cd raised;      // U_coag U+ nbar U+^dag U_coag^dag
  Eigen::Matrix2cd cross_minus; // U_coag nbar U+^dag U_coag^dag
  Eigen::Matrix2cd cross_plus;  // U_branch nbar U+ U_branch^dag
};

Branches branches(const GateParams& p) {
  const Unitary2 u_dec = flip_unitary(FlipKind::Decay, p);
  const Unitary2 u_coag = flip_unitary(FlipKind::Coagulation, p);
  const Unitary2 u_branch = flip_unitary(FlipKind::Branching, p);
  const Unitary2 u_plus = flip_unitary(FlipKind::Plus, p);
  const Eigen::Matrix2cd nbar = ops::empty();
  Branches b;
  b.dec = u_dec * nbar * u_dec.adjoint();
  b.coag = u_coag * nbar * u_coag.adjoint();
  b.branch = u_branch * nbar * u_branch.adjoint();
  b.lowered = u_branch * u_plus.adjoint() * nbar * u_plus * u_branch.adjoint();
  b.raised = u_coag * u_plus * nbar * u_plus.adjoint() * u_coag.adjoint();
  b.cross_minus = u_coag * nbar * u_plus.adjoint() * u_coag.adjoint();
  b.cross_plus = u_branch * nbar * u_plus * u_branch.adjoint();
  return b;
}

// (n, x, y) read-out of a Hermitian 2x2 matrix, without trace normalisation.
std::array<double, 3> components(const Eigen::Matrix2cd& m) {
  return {m(1, 1).real(), 2.0 * m(0, 1).real(), 2.0 * m(0, 1).imag()};
}

void require_valid(const MFState& s, const char* where) {
  if (!s.valid()) {
    std::ostringstream os;
    os.precision(17);
    os << where << ": invalid mean-field state (n=" << s.n << ", x=" << s.x << ", y=" << s.y
       << ")";
    throw NumericalError(os.str());
  }
}

}  // namespace

bool MFState::valid(double tol) const {
  if (!(n >= -tol && n <= 1.0 + tol)) return false;
  const double z = 2.0 * n - 1.0;
  return x * x + y * y + z * z <= 1.0 + tol;
}

Eigen::Matrix2cd MFState::density() const {
  Eigen::Matrix2cd rho;
  rho << 1.0 - n, cplx(x, y) / 2.0, cplx(x, -y) / 2.0, n;
  return rho;
}

MFState MFState::from_density(const Eigen::Matrix2cd& rho) {
  const auto c = components(rho);
  return {c[0], c[1], c[2]};
}

MFCoefficients coefficients(const GateParams& params) {
  params.validate();
  const double lam = params.lambda;
  const double q = params.q_plus();
  const double p = params.p_plus;
  const double pc = params.p_coag, qc = params.q_coag();
  const double pb = params.p_branch, qb = params.q_branch();

  MFCoefficients r;
  r.r_dec = params.q_dec();
  const double lowered = std::sqrt(pb) * std::sqrt(q) + std::sqrt(p) * std::sqrt(qb);
  const double raised = std::sqrt(pc) * std::sqrt(q) - std::sqrt(p) * std::sqrt(qc);
  r.r_coag = (1.0 - lam) * pc + lam * lowered * lowered;
  r.r_branch = (1.0 - lam) * pb + lam * raised * raised;
  // Coherent term as implied by the gate; its p_coag contributions enter with
  // the opposite sign to the p_branch ones.
  r.r_star = std::sqrt(lam) * std::sqrt(1.0 - lam) *
             (std::sqrt(q) * (pb - pc) +
              std::sqrt(p) * (std::sqrt(pb) * std::sqrt(qb) + std::sqrt(pc) * std::sqrt(qc)));
  return r;
}

MFState mf_step_full(const MFState& state, const GateParams& params) {
  params.validate();
  const Branches b = branches(params);
  const double lam = params.lambda;
  const double n = state.n;
  const double pi = (1.0 - n) * (1.0 - n);
  const double pibar = 1.0 - pi;
  const cplx s_minus(state.x / 2.0, -state.y / 2.0);  // <sigma->
  const cplx s_plus = std::conj(s_minus);

  const Eigen::Matrix2cd cross = s_minus * b.cross_minus - s_plus * b.cross_plus;
  const Eigen::Matrix2cd rho =
      pi * (n * b.dec + (1.0 - n) * ops::empty()) +
      pibar * ((1.0 - lam) * (n * b.coag + (1.0 - n) * b.branch) +
               lam * (n * b.lowered + (1.0 - n) * b.raised) +
               std::sqrt(lam) * std::sqrt(1.0 - lam) * (cross + cross.adjoint()));
  const MFState out = MFState::from_density(rho);
  require_valid(out, "mf_step_full");
  return out;
}

double mf_step_density(double n, double y, const GateParams& params) {
  const MFCoefficients r = coefficients(params);
  const double pi = (1.0 - n) * (1.0 - n);
  const double pibar = 1.0 - pi;
  return r.r_dec * pi * n + r.r_coag * pibar * n + r.r_branch * pibar * (1.0 - n) +
         r.r_star * pibar * y;
}

MFMap MFMap::compile(const GateParams& params) {
  params.validate();
  const Branches b = branches(params);
  const double lam = params.lambda;
  const double s = std::sqrt(lam) * std::sqrt(1.0 - lam);
  // <s-> K1 - <s+> K2 + h.c. = (x/2)(J + J^dag) - (y/2) i (J - J^dag), J = K1 - K2^dag.
  const Eigen::Matrix2cd j = b.cross_minus - b.cross_plus.adjoint();
  const Eigen::Matrix2cd x_term = s * 0.5 * (j + j.adjoint());
  const Eigen::Matrix2cd y_term = s * cplx(0.0, -0.5) * (j - j.adjoint());

  const std::array<Eigen::Matrix2cd, 5> terms = {
      b.dec,
      (1.0 - lam) * b.coag + lam * b.lowered,
      (1.0 - lam) * b.branch + lam * b.raised,
      x_term,
      y_term,
  };
  MFMap map;
  for (int t = 0; t < 5; ++t) {
    const auto c = components(terms[t]);
    for (int k = 0; k < 3; ++k) map.coeff_[3 * t + k] = c[k];
  }
  return map;
}

MFState MFMap::apply(const MFState& st) const {
  // Same operation order as the scalar kernel.
  const auto& c = coeff_;
  const double m = 1.0 - st.n;
  const double pi = m * m;
  const double pb = 1.0 - pi;
  double out[3];
  for (int comp = 0; comp < 3; ++comp) {
    double t = st.n * c[3 + comp] + m * c[6 + comp];
    t = t + st.x * c[9 + comp];
    t = t + st.y * c[12 + comp];
    out[comp] = pi * (st.n * c[comp]) + pb * t;
  }
  return {out[0], out[1], out[2]};
}

kernels::MFCoeffLanes compile_lanes(std::span<const GateParams> params) {
  kernels::MFCoeffLanes lanes(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const MFMap map = MFMap::compile(params[i]);
    const auto& c = map.coefficients();
    for (int k = 0; k < 15; ++k) lanes.coeff[k][i] = c[k];
  }
  return lanes;
}

StationaryResult stationary(const GateParams& params, MFState init, int iters) {
  require_valid(init, "stationary (initial state)");
  const MFMap map = MFMap::compile(params);
  StationaryResult res{init, 0.0};
  for (int i = 0; i < iters; ++i) {
    const MFState next = map.apply(res.state);
    require_valid(next, "stationary");
    res.last_delta = std::hypot(next.n - res.state.n, next.x - res.state.x, next.y - res.state.y);
    res.state = next;
  }
  return res;
}

std::vector<StationaryResult> stationary_batch(std::span<const GateParams> params, MFState init,
                                               int iters) {
  require_valid(init, "stationary_batch (initial state)");
  const kernels::MFCoeffLanes coeffs = compile_lanes(params);
  kernels::MFLanes lanes(params.size(), init.n, init.x, init.y);
  std::vector<StationaryResult> out(params.size());
  if (iters <= 0) {
    for (auto& r : out) r.state = init;
    return out;
  }

  auto check = [&] {
    for (std::size_t i = 0; i < lanes.size(); ++i) {
      require_valid({lanes.n[i], lanes.x[i], lanes.y[i]}, "stationary_batch");
    }
  };
  constexpr int kChunk = 100;
  int done = 0;
  while (done < iters - 1) {
    const int step = std::min(kChunk, iters - 1 - done);
    kernels::mf_iterate(lanes, coeffs, static_cast<std::size_t>(step));
    check();
    done += step;
  }
  const kernels::MFLanes before = lanes;
  kernels::mf_iterate(lanes, coeffs, 1);
  check();
  for (std::size_t i = 0; i < lanes.size(); ++i) {
    out[i].state = {lanes.n[i], lanes.x[i], lanes.y[i]};
    out[i].last_delta = std::hypot(lanes.n[i] - before.n[i], lanes.x[i] - before.x[i],
                                   lanes.y[i] - before.y[i]);
  }
  return out;
}

}  // namespace qca
