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

#include <array>
#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace qca {

using cplx = std::complex<double>;

/// The five scalars parameterizing every gate. Complements (1 - p) are
/// computed at use sites and never stored.
struct GateParams {
  double p_dec = 0.0;     // no-flip amplitude^2 of U_dec (isolated occupied center)
  double p_coag = 0.0;    // flip probability of U_coag (center occupied, a neighbour occupied)
  double p_branch = 0.0;  // flip probability of U_branch (center empty, a neighbour occupied)
  double p_plus = 0.0;    // parameter of the auxiliary unitary U_plus
  double lambda = 0.0;    // asynchronism strength

  /// Throws ParameterError unless every field lies in [0, 1].
  void validate() const;

  double q_dec() const { return 1.0 - p_dec; }
  double q_coag() const { return 1.0 - p_coag; }
  double q_branch() const { return 1.0 - p_branch; }
  double q_plus() const { return 1.0 - p_plus; }
};

enum class FlipKind { Decay, Coagulation, Branching, Plus };

/// Accepts "dec"/"o*o", "coag"/"*", "branch"/"o", "plus"/"+". Throws ParameterError otherwise.
FlipKind parse_flip_kind(std::string_view text);

using Unitary2 = Eigen::Matrix2cd;
/// Dense gate on (left control, center control, right control, target).
/// Basis index is (l << 3) | (c << 2) | (r << 1) | t with 1 = occupied.
using LocalGate = Eigen::Matrix<cplx, 16, 16>;
/// Gate restricted to fixed outer controls; acts on (center, target), index (c << 1) | t.
using PairBlock = Eigen::Matrix4cd;

namespace ops {
/// Single-site operators in the (empty, occupied) basis.
Eigen::Matrix2cd identity();
Eigen::Matrix2cd sigma_x();
Eigen::Matrix2cd sigma_y();
Eigen::Matrix2cd sigma_plus();   // |occ><empty|
Eigen::Matrix2cd sigma_minus();  // |empty><occ|
Eigen::Matrix2cd occupied();     // n
Eigen::Matrix2cd empty();        // 1 - n
}  // namespace ops

Unitary2 flip_unitary(FlipKind kind, const GateParams& params);

/// Commuting gate: Pi n (x) U_dec + Pi nbar (x) 1 + Pibar n (x) U_coag + Pibar nbar (x) U_branch.
/// `params.lambda` is ignored.
LocalGate build_sync_gate(const GateParams& params);

/// Non-commuting gate; adds sqrt(lambda) Pibar [s+ (x) U_coag U_plus - s- (x) U_branch U_plus^dag]
/// on the center control and scales the Pibar sector of the synchronous gate by sqrt(1 - lambda).
LocalGate build_async_gate(const GateParams& params);

/// The four outer-control blocks of a gate, indexed by (left << 1) | right.
/// Both gate families are block diagonal in the outer controls.
std::array<PairBlock, 4> control_blocks(const LocalGate& gate);

enum class MatrixNorm { Frobenius, Spectral };

/// Norm of [G_k, G_{k+1}] for two adjacent gates embedded on four controls and two targets.
double commutator_norm(const GateParams& params, MatrixNorm norm = MatrixNorm::Frobenius);

/// max |G^dag G - 1| entrywise.
double unitarity_residual(const Eigen::Ref<const Eigen::MatrixXcd>& gate);

}  // namespace qca
