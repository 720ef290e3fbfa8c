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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qca/gates.hpp"
#include "qca/kernels.hpp"

namespace qca {

/// Homogeneous product-state single-site state: occupation and the two coherences.
struct MFState {
  double n = 0.0;
  double x = 0.0;  // <sigma_x>
  double y = 0.0;  // <sigma_y>

  /// Positive semidefinite 2x2 density matrix within `tol`.
  bool valid(double tol = 1e-9) const;

  /// [[1 - n, (x + iy)/2], [(x - iy)/2, n]] in the (empty, occupied) basis.
  Eigen::Matrix2cd density() const;
  static MFState from_density(const Eigen::Matrix2cd& rho);
};

/// Coefficients of the closed density recursion
///   n' = r_dec Pi n + r_coag Pibar n + r_branch Pibar (1 - n) + r_star Pibar y.
struct MFCoefficients {
  double r_dec = 0.0;
  double r_coag = 0.0;
  double r_branch = 0.0;
  double r_star = 0.0;
};

MFCoefficients coefficients(const GateParams& params);

/// One application of the full single-site density-matrix update
/// (trace over the three controls of G (rho x rho x rho x |empty><empty|) G^dag).
/// Throws NumericalError if the output is not a valid state within 1e-9.
MFState mf_step_full(const MFState& state, const GateParams& params);

/// Density recursion written in terms of `coefficients(params)`.
double mf_step_density(double n, double y, const GateParams& params);

/// The full update compiled to its linear-in-(n, x, y) form per outer sector,
/// see kernels::MFCoeffLanes for the layout.
class MFMap {
 public:
  static MFMap compile(const GateParams& params);

  MFState apply(const MFState& s) const;
  /// 15 coefficients, index 3 * term + component.
  const std::array<double, 15>& coefficients() const { return coeff_; }

 private:
  std::array<double, 15> coeff_{};
};

kernels::MFCoeffLanes compile_lanes(std::span<const GateParams> params);

struct StationaryResult {
  MFState state;
  double last_delta = 0.0;  // Euclidean norm of the final step's change in (n, x, y)
};

inline constexpr int kDefaultIterations = 1000;

/// State after `iters` map applications. Throws NumericalError on invariant violation.
StationaryResult stationary(const GateParams& params, MFState init = {1.0, 0.0, 0.0},
                            int iters = kDefaultIterations);

/// `stationary` for many parameter points at once through the SIMD kernel.
/// Results are bit-identical to calling `stationary` on each point.
std::vector<StationaryResult> stationary_batch(std::span<const GateParams> params, MFState init,
                                               int iters = kDefaultIterations);

}  // namespace qca
