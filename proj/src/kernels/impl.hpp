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

#include "qca/kernels.hpp"

namespace qca::kernels {

namespace scalar {
void apply_pair_gate(std::span<cplx> amps, int n_qubits, const PairSite& site,
                     const PairBlocks& blocks);
void mf_iterate(MFLanes& state, const MFCoeffLanes& coeffs, std::size_t first,
                std::size_t last, std::size_t steps);
}  // namespace scalar

#if defined(QCA_BUILD_AVX2)
namespace avx2 {
void apply_pair_gate(std::span<cplx> amps, int n_qubits, const PairSite& site,
                     const PairBlocks& blocks);
void mf_iterate(MFLanes& state, const MFCoeffLanes& coeffs, std::size_t steps);
}  // namespace avx2
#endif

inline std::size_t insert_zero_bit(std::size_t k, int pos) {
  const std::size_t low = k & ((std::size_t{1} << pos) - 1);
  return ((k >> pos) << (pos + 1)) | low;
}

}  // namespace qca::kernels
