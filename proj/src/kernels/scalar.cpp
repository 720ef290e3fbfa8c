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

#include <algorithm>

#include "impl.hpp"

namespace qca::kernels::scalar {

void apply_pair_gate(std::span<cplx> amps, int n_qubits, const PairSite& site,
                     const PairBlocks& blocks) {
  const int lo = std::min(site.center, site.target);
  const int hi = std::max(site.center, site.target);
  const std::size_t groups = std::size_t{1} << (n_qubits - 2);
  const std::size_t c_bit = std::size_t{1} << site.center;
  const std::size_t t_bit = std::size_t{1} << site.target;
  double* data = reinterpret_cast<double*>(amps.data());

  for (std::size_t k = 0; k < groups; ++k) {
    const std::size_t base = insert_zero_bit(insert_zero_bit(k, lo), hi);
    const int l = site.left < 0 ? 0 : static_cast<int>((base >> site.left) & 1);
    const int r = site.right < 0 ? 0 : static_cast<int>((base >> site.right) & 1);
    const double* m = reinterpret_cast<const double*>(blocks[(l << 1) | r].data());
    const std::size_t idx[4] = {base, base | t_bit, base | c_bit, base | c_bit | t_bit};

    double a[8];
    for (int j = 0; j < 4; ++j) {
      a[2 * j] = data[2 * idx[j]];
      a[2 * j + 1] = data[2 * idx[j] + 1];
    }
    for (int i = 0; i < 4; ++i) {
      double re = 0.0;
      double im = 0.0;
      for (int j = 0; j < 4; ++j) {
        const double mr = m[2 * (4 * i + j)];
        const double mi = m[2 * (4 * i + j) + 1];
        const double ar = a[2 * j];
        const double ai = a[2 * j + 1];
        re = re + (mr * ar - mi * ai);
        im = im + (mr * ai + mi * ar);
      }
      data[2 * idx[i]] = re;
      data[2 * idx[i] + 1] = im;
    }
  }
}

void mf_iterate(MFLanes& state, const MFCoeffLanes& coeffs, std::size_t first,
                std::size_t last, std::size_t steps) {
  const auto& c = coeffs.coeff;
  for (std::size_t lane = first; lane < last; ++lane) {
    double n = state.n[lane];
    double x = state.x[lane];
    double y = state.y[lane];
    for (std::size_t s = 0; s < steps; ++s) {
      const double m = 1.0 - n;
      const double pi = m * m;
      const double pb = 1.0 - pi;
      double out[3];
      for (int comp = 0; comp < 3; ++comp) {
        double t = n * c[3 + comp][lane] + m * c[6 + comp][lane];
        t = t + x * c[9 + comp][lane];
        t = t + y * c[12 + comp][lane];
        out[comp] = pi * (n * c[comp][lane]) + pb * t;
      }
      n = out[0];
      x = out[1];
      y = out[2];
    }
    state.n[lane] = n;
    state.x[lane] = x;
    state.y[lane] = y;
  }
}

}  // namespace qca::kernels::scalar
