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

#include <immintrin.h>

#include <algorithm>

#include "impl.hpp"

namespace qca::kernels::avx2 {

namespace {

inline __m256d load_pair(const double* lo, const double* hi) {
  return _mm256_insertf128_pd(_mm256_castpd128_pd256(_mm_loadu_pd(lo)), _mm_loadu_pd(hi), 1);
}

inline void store_pair(double* lo, double* hi, __m256d v) {
  _mm_storeu_pd(lo, _mm256_castpd256_pd128(v));
  _mm_storeu_pd(hi, _mm256_extractf128_pd(v, 1));
}

// (mr + i mi) * a for two complex values packed in a.
inline __m256d cmul_bcast(double mr, double mi, __m256d a) {
  const __m256d t1 = _mm256_mul_pd(_mm256_set1_pd(mr), a);
  const __m256d t2 = _mm256_mul_pd(_mm256_set1_pd(mi), _mm256_permute_pd(a, 0b0101));
  return _mm256_addsub_pd(t1, t2);
}

}  // namespace

void apply_pair_gate(std::span<cplx> amps, int n_qubits, const PairSite& site,
                     const PairBlocks& blocks) {
  // Two groups sharing the same block are processed per vector: they differ
  // only in a free qubit f outside {left, center, right, target}.
  int used = (1 << site.center) | (1 << site.target);
  if (site.left >= 0) used |= 1 << site.left;
  if (site.right >= 0) used |= 1 << site.right;
  int f = 0;
  while (f < n_qubits && (used >> f) & 1) ++f;
  if (f >= n_qubits) {
    scalar::apply_pair_gate(amps, n_qubits, site, blocks);
    return;
  }

  int zeros[3] = {site.center, site.target, f};
  std::sort(zeros, zeros + 3);
  const std::size_t groups = std::size_t{1} << (n_qubits - 3);
  const std::size_t c_bit = std::size_t{1} << site.center;
  const std::size_t t_bit = std::size_t{1} << site.target;
  const std::size_t f_off = std::size_t{2} << f;  // in doubles
  double* data = reinterpret_cast<double*>(amps.data());

  for (std::size_t k = 0; k < groups; ++k) {
    const std::size_t base =
        insert_zero_bit(insert_zero_bit(insert_zero_bit(k, zeros[0]), zeros[1]), zeros[2]);
    const int l = site.left < 0 ? 0 : static_cast<int>((base >> site.left) & 1);
    const int r = site.right < 0 ? 0 : static_cast<int>((base >> site.right) & 1);
    const double* m = reinterpret_cast<const double*>(blocks[(l << 1) | r].data());
    const std::size_t idx[4] = {base, base | t_bit, base | c_bit, base | c_bit | t_bit};

    __m256d a[4];
    for (int j = 0; j < 4; ++j) {
      double* p = data + 2 * idx[j];
      a[j] = load_pair(p, p + f_off);
    }
    __m256d out[4];
    for (int i = 0; i < 4; ++i) {
      __m256d acc = _mm256_setzero_pd();
      for (int j = 0; j < 4; ++j) {
        acc = _mm256_add_pd(acc, cmul_bcast(m[2 * (4 * i + j)], m[2 * (4 * i + j) + 1], a[j]));
      }
      out[i] = acc;
    }
    for (int i = 0; i < 4; ++i) {
      double* p = data + 2 * idx[i];
      store_pair(p, p + f_off, out[i]);
    }
  }
}

void mf_iterate(MFLanes& state, const MFCoeffLanes& coeffs, std::size_t steps) {
  const std::size_t lanes = state.size();
  const std::size_t vec_end = lanes - lanes % 4;
  const auto& c = coeffs.coeff;
  const __m256d one = _mm256_set1_pd(1.0);

  for (std::size_t lane = 0; lane < vec_end; lane += 4) {
    __m256d k[15];
    for (int i = 0; i < 15; ++i) k[i] = _mm256_loadu_pd(c[i].data() + lane);
    __m256d n = _mm256_loadu_pd(state.n.data() + lane);
    __m256d x = _mm256_loadu_pd(state.x.data() + lane);
    __m256d y = _mm256_loadu_pd(state.y.data() + lane);
    for (std::size_t s = 0; s < steps; ++s) {
      const __m256d m = _mm256_sub_pd(one, n);
      const __m256d pi = _mm256_mul_pd(m, m);
      const __m256d pb = _mm256_sub_pd(one, pi);
      __m256d out[3];
      for (int comp = 0; comp < 3; ++comp) {
        __m256d t = _mm256_add_pd(_mm256_mul_pd(n, k[3 + comp]), _mm256_mul_pd(m, k[6 + comp]));
        t = _mm256_add_pd(t, _mm256_mul_pd(x, k[9 + comp]));
        t = _mm256_add_pd(t, _mm256_mul_pd(y, k[12 + comp]));
        out[comp] = _mm256_add_pd(_mm256_mul_pd(pi, _mm256_mul_pd(n, k[comp])),
                                  _mm256_mul_pd(pb, t));
      }
      n = out[0];
      x = out[1];
      y = out[2];
    }
    _mm256_storeu_pd(state.n.data() + lane, n);
    _mm256_storeu_pd(state.x.data() + lane, x);
    _mm256_storeu_pd(state.y.data() + lane, y);
  }
  scalar::mf_iterate(state, coeffs, vec_end, lanes, steps);
}

}  // namespace qca::kernels::avx2
