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

// Data-parallel inner loops with a scalar reference implementation and
// SIMD variants selected at runtime. Every variant performs the same
// floating-point operations in the same order, so results are bit-identical
// across ISAs (the build disables FMA contraction).

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "qca/gates.hpp"

namespace qca::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

/// Compiled in and supported by the running CPU.
bool isa_supported(Isa isa);

std::vector<Isa> supported_isas();

/// Best supported ISA. The environment variable QCA_SIMD=scalar|avx2 overrides
/// the choice; an unsupported request falls back to scalar.
Isa default_isa();

/// Outer control index meaning "virtual site, permanently empty".
inline constexpr int kVirtualEmpty = -1;

/// Qubit (bit) positions of one local gate inside an amplitude vector.
/// `left` and `right` may coincide with each other but not with center/target.
struct PairSite {
  int left = kVirtualEmpty;
  int center = 0;
  int right = kVirtualEmpty;
  int target = 1;
};

/// Row-major 4x4 (center, target) blocks, indexed by (left << 1) | right.
using PairBlocks = std::array<std::array<cplx, 16>, 4>;

PairBlocks pack_blocks(const std::array<PairBlock, 4>& blocks, bool conjugate = false);

/// In-place application of a gate that is block diagonal in its outer controls.
void apply_pair_gate(std::span<cplx> amps, int n_qubits, const PairSite& site,
                     const PairBlocks& blocks, Isa isa);

inline void apply_pair_gate(std::span<cplx> amps, int n_qubits, const PairSite& site,
                            const PairBlocks& blocks) {
  apply_pair_gate(amps, n_qubits, site, blocks, default_isa());
}

/// Structure-of-arrays single-site mean-field states, one lane per parameter point.
struct MFLanes {
  std::vector<double> n, x, y;

  explicit MFLanes(std::size_t lanes = 0, double n0 = 0.0, double x0 = 0.0, double y0 = 0.0)
      : n(lanes, n0), x(lanes, x0), y(lanes, y0) {}
  std::size_t size() const { return n.size(); }
};

/// Per-lane linear coefficients of the compiled mean-field map. For each output
/// component c in (n, x, y):
///   c' = Pi * (n * A_c) + Pibar * (n * B_c + (1 - n) * D_c + x * X_c + y * Y_c),
/// with Pi = (1 - n)^2 and Pibar = 1 - Pi.
struct MFCoeffLanes {
  enum Term { A = 0, B = 1, D = 2, X = 3, Y = 4 };
  // coeff[3 * term + component]
  std::array<std::vector<double>, 15> coeff;

  explicit MFCoeffLanes(std::size_t lanes = 0) {
    for (auto& v : coeff) v.assign(lanes, 0.0);
  }
  std::size_t size() const { return coeff[0].size(); }
  double& at(Term term, int component, std::size_t lane) {
    return coeff[3 * term + component][lane];
  }
  double at(Term term, int component, std::size_t lane) const {
    return coeff[3 * term + component][lane];
  }
};

/// Applies the compiled map `steps` times to every lane.
void mf_iterate(MFLanes& state, const MFCoeffLanes& coeffs, std::size_t steps, Isa isa);

inline void mf_iterate(MFLanes& state, const MFCoeffLanes& coeffs, std::size_t steps) {
  mf_iterate(state, coeffs, steps, default_isa());
}

}  // namespace qca::kernels
