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

#include <cstdlib>
#include <string>

#include "impl.hpp"
#include "qca/errors.hpp"

namespace qca::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(QCA_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa detect() {
  const Isa best = cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
  if (const char* env = std::getenv("QCA_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::Scalar;
    if (want == "avx2" && best == Isa::Avx2) return Isa::Avx2;
  }
  return best;
}

void check_site(int n_qubits, const PairSite& site) {
  auto in_range = [&](int q) { return q >= 0 && q < n_qubits; };
  auto outer_ok = [&](int q) {
    return q == kVirtualEmpty || (in_range(q) && q != site.center && q != site.target);
  };
  if (n_qubits < 2 || n_qubits > 40 || !in_range(site.center) || !in_range(site.target) ||
      site.center == site.target || !outer_ok(site.left) || !outer_ok(site.right)) {
    throw ParameterError("invalid gate site for " + std::to_string(n_qubits) + " qubits");
  }
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) { return isa == Isa::Scalar || cpu_has_avx2(); }

std::vector<Isa> supported_isas() {
  std::vector<Isa> out{Isa::Scalar};
  if (cpu_has_avx2()) out.push_back(Isa::Avx2);
  return out;
}

Isa default_isa() {
  static const Isa isa = detect();
  return isa;
}

PairBlocks pack_blocks(const std::array<PairBlock, 4>& blocks, bool conjugate) {
  PairBlocks out;
  for (int b = 0; b < 4; ++b) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const cplx v = blocks[b](i, j);
        out[b][4 * i + j] = conjugate ? std::conj(v) : v;
      }
    }
  }
  return out;
}

void apply_pair_gate(std::span<cplx> amps, int n_qubits, const PairSite& site,
                     const PairBlocks& blocks, Isa isa) {
  check_site(n_qubits, site);
  if (amps.size() != (std::size_t{1} << n_qubits)) {
    throw ParameterError("amplitude buffer size does not match qubit count");
  }
#if defined(QCA_BUILD_AVX2)
  if (isa == Isa::Avx2 && isa_supported(Isa::Avx2)) {
    avx2::apply_pair_gate(amps, n_qubits, site, blocks);
    return;
  }
#endif
  (void)isa;
  scalar::apply_pair_gate(amps, n_qubits, site, blocks);
}

void mf_iterate(MFLanes& state, const MFCoeffLanes& coeffs, std::size_t steps, Isa isa) {
  if (coeffs.size() != state.size() || state.x.size() != state.size() ||
      state.y.size() != state.size()) {
    throw ParameterError("mean-field lane count mismatch");
  }
#if defined(QCA_BUILD_AVX2)
  if (isa == Isa::Avx2 && isa_supported(Isa::Avx2)) {
    avx2::mf_iterate(state, coeffs, steps);
    return;
  }
#endif
  (void)isa;
  scalar::mf_iterate(state, coeffs, 0, state.size(), steps);
}

}  // namespace qca::kernels
