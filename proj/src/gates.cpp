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

#include "qca/gates.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "qca/errors.hpp"

namespace qca {

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ParameterError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

Eigen::Matrix<cplx, 16, 16> kron4(const Eigen::Matrix2cd& l, const Eigen::Matrix2cd& c,
                                  const Eigen::Matrix2cd& r, const Eigen::Matrix2cd& t) {
  Eigen::Matrix4cd lc = Eigen::kroneckerProduct(l, c);
  Eigen::Matrix4cd rt = Eigen::kroneckerProduct(r, t);
  return Eigen::kroneckerProduct(lc, rt);
}

// Outer-control projector pairs making up Pibar = 1 - nbar_l nbar_r.
struct OuterPair {
  Eigen::Matrix2cd left;
  Eigen::Matrix2cd right;
};

std::array<OuterPair, 3> pibar_terms() {
  return {{{ops::empty(), ops::occupied()},
           {ops::occupied(), ops::empty()},
           {ops::occupied(), ops::occupied()}}};
}

// Embeds a (l, c, r, t) gate into an n-qubit space; `pos` gives the bit position
// of each local qubit inside the global index.
Eigen::MatrixXcd embed(const LocalGate& g, const std::array<int, 4>& pos, int n_qubits) {
  const int dim = 1 << n_qubits;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  int mask = 0;
  for (int p : pos) mask |= 1 << p;
  for (int col = 0; col < dim; ++col) {
    int local_in = 0;
    for (int j = 0; j < 4; ++j) local_in |= ((col >> pos[j]) & 1) << (3 - j);
    for (int local_out = 0; local_out < 16; ++local_out) {
      const cplx v = g(local_out, local_in);
      if (v == cplx{}) continue;
      int row = col & ~mask;
      for (int j = 0; j < 4; ++j) row |= ((local_out >> (3 - j)) & 1) << pos[j];
      out(row, col) += v;
    }
  }
  return out;
}

}  // namespace

void GateParams::validate() const {
  check_unit(p_dec, "p_dec");
  check_unit(p_coag, "p_coag");
  check_unit(p_branch, "p_branch");
  check_unit(p_plus, "p_plus");
  check_unit(lambda, "lambda");
}

FlipKind parse_flip_kind(std::string_view text) {
  if (text == "dec" || text == "o*o" || text == "oxo") return FlipKind::Decay;
  if (text == "coag" || text == "*" || text == "x") return FlipKind::Coagulation;
  if (text == "branch" || text == "o") return FlipKind::Branching;
  if (text == "plus" || text == "+") return FlipKind::Plus;
  throw ParameterError("unknown flip unitary kind '" + std::string(text) + "'");
}

namespace ops {
Eigen::Matrix2cd identity() { return Eigen::Matrix2cd::Identity(); }
Eigen::Matrix2cd sigma_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
Eigen::Matrix2cd sigma_y() {
  Eigen::Matrix2cd m;
  m << 0, cplx(0, 1), cplx(0, -1), 0;
  return m;
}
Eigen::Matrix2cd sigma_plus() {
  Eigen::Matrix2cd m;
  m << 0, 0, 1, 0;
  return m;
}
Eigen::Matrix2cd sigma_minus() {
  Eigen::Matrix2cd m;
  m << 0, 1, 0, 0;
  return m;
}
Eigen::Matrix2cd occupied() {
  Eigen::Matrix2cd m;
  m << 0, 0, 0, 1;
  return m;
}
Eigen::Matrix2cd empty() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, 0;
  return m;
}
}  // namespace ops

Unitary2 flip_unitary(FlipKind kind, const GateParams& params) {
  params.validate();
  const cplx i(0.0, 1.0);
  const Eigen::Matrix2cd one = ops::identity();
  const Eigen::Matrix2cd sx = ops::sigma_x();
  switch (kind) {
    case FlipKind::Decay:
      return std::sqrt(params.p_dec) * one - i * std::sqrt(params.q_dec()) * sx;
    case FlipKind::Coagulation:
      return std::sqrt(params.q_coag()) * one - i * std::sqrt(params.p_coag) * sx;
    case FlipKind::Branching:
      return std::sqrt(params.q_branch()) * one - i * std::sqrt(params.p_branch) * sx;
    case FlipKind::Plus:
      return i * std::sqrt(params.q_plus()) * one - std::sqrt(params.p_plus) * sx;
  }
  throw ParameterError("invalid flip unitary kind");
}

LocalGate build_sync_gate(const GateParams& params) {
  const Unitary2 u_dec = flip_unitary(FlipKind::Decay, params);
  const Unitary2 u_coag = flip_unitary(FlipKind::Coagulation, params);
  const Unitary2 u_branch = flip_unitary(FlipKind::Branching, params);
  const auto n = ops::occupied();
  const auto nbar = ops::empty();

  LocalGate g = kron4(nbar, n, nbar, u_dec) + kron4(nbar, nbar, nbar, ops::identity());
  for (const auto& [l, r] : pibar_terms()) {
    g += kron4(l, n, r, u_coag) + kron4(l, nbar, r, u_branch);
  }
  return g;
}

LocalGate build_async_gate(const GateParams& params) {
  const Unitary2 u_dec = flip_unitary(FlipKind::Decay, params);
  const Unitary2 u_coag = flip_unitary(FlipKind::Coagulation, params);
  const Unitary2 u_branch = flip_unitary(FlipKind::Branching, params);
  const Unitary2 u_plus = flip_unitary(FlipKind::Plus, params);
  const auto n = ops::occupied();
  const auto nbar = ops::empty();
  const double a = std::sqrt(1.0 - params.lambda);
  const double b = std::sqrt(params.lambda);

  const Eigen::Matrix2cd raise_target = u_coag * u_plus;
  const Eigen::Matrix2cd lower_target = u_branch * u_plus.adjoint();

  LocalGate g = kron4(nbar, n, nbar, u_dec) + kron4(nbar, nbar, nbar, ops::identity());
  for (const auto& [l, r] : pibar_terms()) {
    g += a * (kron4(l, n, r, u_coag) + kron4(l, nbar, r, u_branch));
    g += b * (kron4(l, ops::sigma_plus(), r, raise_target) -
              kron4(l, ops::sigma_minus(), r, lower_target));
  }
  return g;
}

std::array<PairBlock, 4> control_blocks(const LocalGate& gate) {
  std::array<PairBlock, 4> blocks;
  for (int l = 0; l < 2; ++l) {
    for (int r = 0; r < 2; ++r) {
      PairBlock& blk = blocks[(l << 1) | r];
      for (int out = 0; out < 4; ++out) {
        for (int in = 0; in < 4; ++in) {
          const int row = (l << 3) | ((out >> 1) << 2) | (r << 1) | (out & 1);
          const int col = (l << 3) | ((in >> 1) << 2) | (r << 1) | (in & 1);
          blk(out, in) = gate(row, col);
        }
      }
    }
  }
  return blocks;
}

double commutator_norm(const GateParams& params, MatrixNorm norm) {
  const LocalGate g = build_async_gate(params);
  // Global order (s0, s1, s2, s3, t0, t1), s0 most significant.
  constexpr int kQubits = 6;
  auto bit = [](int qubit) { return kQubits - 1 - qubit; };
  const Eigen::MatrixXcd first = embed(g, {bit(0), bit(1), bit(2), bit(4)}, kQubits);
  const Eigen::MatrixXcd second = embed(g, {bit(1), bit(2), bit(3), bit(5)}, kQubits);
  const Eigen::MatrixXcd comm = first * second - second * first;
  if (norm == MatrixNorm::Spectral) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(comm);
    return svd.singularValues()(0);
  }
  return comm.norm();
}

double unitarity_residual(const Eigen::Ref<const Eigen::MatrixXcd>& gate) {
  const Eigen::MatrixXcd r =
      gate.adjoint() * gate - Eigen::MatrixXcd::Identity(gate.rows(), gate.cols());
  return r.cwiseAbs().maxCoeff();
}

}  // namespace qca
