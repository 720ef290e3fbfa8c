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

#include <optional>

#include "qca/gates.hpp"
#include "qca/meanfield.hpp"

namespace qca {

/// Rates of the quantum contact process and the discretisation step.
struct QCPRates {
  double gamma = 0.0;
  double kappa_c = 0.0;
  double kappa_b = 0.0;
  double omega = 0.0;
  double dt = 1.0;
  /// omega / kappa_b; empty when kappa_b == 0.
  std::optional<double> g;
};

struct QCPCoefficients {
  MFCoefficients coeffs;
  /// False if any coefficient falls outside [0, 1] (time step too large).
  bool valid = true;
};

/// Discretised QCP density recursion:
/// r_dec = 1 - gamma dt, r_coag = 1 - (gamma + kappa_c) dt, r_branch = kappa_b dt, r_star = omega dt.
QCPCoefficients qcp_coefficients(const QCPRates& rates);

struct QCPMapping {
  QCPRates rates;
  bool negative_kappa_c = false;
};

/// Inverts the discretised recursion on the automaton's mean-field coefficients.
QCPMapping map_qca_to_qcp(const GateParams& params, double dt);

/// r_star / r_branch. Throws ParameterError when r_branch == 0.
double g_ratio(const GateParams& params);

}  // namespace qca
