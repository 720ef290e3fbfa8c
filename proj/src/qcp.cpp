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

#include "qca/qcp.hpp"

#include "qca/errors.hpp"

namespace qca {

namespace {
bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }
}  // namespace

QCPCoefficients qcp_coefficients(const QCPRates& rates) {
  if (!(rates.dt > 0.0)) throw ParameterError("dt must be positive");
  QCPCoefficients out;
  auto& c = out.coeffs;
  c.r_dec = 1.0 - rates.gamma * rates.dt;
  c.r_coag = 1.0 - rates.gamma * rates.dt - rates.kappa_c * rates.dt;
  c.r_branch = rates.kappa_b * rates.dt;
  c.r_star = rates.omega * rates.dt;
  out.valid = in_unit(c.r_dec) && in_unit(c.r_coag) && in_unit(c.r_branch) && in_unit(c.r_star);
  return out;
}

QCPMapping map_qca_to_qcp(const GateParams& params, double dt) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  const MFCoefficients r = coefficients(params);
  QCPMapping m;
  m.rates.dt = dt;
  m.rates.gamma = (1.0 - r.r_dec) / dt;
  m.rates.kappa_c = (r.r_dec - r.r_coag) / dt;
  m.rates.kappa_b = r.r_branch / dt;
  m.rates.omega = r.r_star / dt;
  if (r.r_branch > 0.0) m.rates.g = r.r_star / r.r_branch;
  m.negative_kappa_c = r.r_dec - r.r_coag < -1e-12;
  return m;
}

double g_ratio(const GateParams& params) {
  const MFCoefficients r = coefficients(params);
  if (!(r.r_branch > 0.0)) {
    throw ParameterError("g is undefined: classical branching coefficient is zero");
  }
  return r.r_star / r.r_branch;
}

}  // namespace qca
