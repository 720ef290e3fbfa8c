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

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qca/gates.hpp"

namespace qca {

/// Dense row density matrices are capped at this many sites
/// (the joint two-row density matrix has 4^(2L) entries).
inline constexpr int kMaxDenseSites = 6;
/// Trajectory pure states are capped at this many sites (2^(2L) amplitudes).
inline constexpr int kMaxTrajectorySites = 12;

/// Density matrix of a single row; basis index bit k is site k (1 = occupied).
struct RowDensity {
  int sites = 0;
  Eigen::MatrixXcd rho;

  /// Hermitian within 1e-10, unit trace within 1e-10, min eigenvalue > -1e-8.
  void check_invariants() const;
};

enum class Boundary { FixedEmpty, Periodic };

struct DenseMode {};
struct TrajectoryMode {
  std::int64_t samples = 1;
  std::uint64_t seed = 0;
};

struct EvolutionConfig {
  enum class Order { LeftToRight, RightToLeft, Explicit };
  Order order = Order::LeftToRight;
  /// 1-based site order, used when order == Explicit.
  std::vector<int> permutation;
  Boundary boundary = Boundary::FixedEmpty;
  int steps = 0;
  std::variant<DenseMode, TrajectoryMode> mode = DenseMode{};

  /// 0-based order in which gates are applied for a row of `sites` sites.
  std::vector<int> gate_order(int sites) const;
  void validate(int sites) const;
};

struct RowObservables {
  std::vector<double> n, sx, sy;
  double mean_density = 0.0;
  /// Tr rho^2. In trajectory mode estimated from overlaps of independent sample pairs.
  double purity = 1.0;
  /// Standard error of mean_density; zero in dense mode.
  double mean_density_stderr = 0.0;
  std::optional<Eigen::MatrixXd> two_point;  // <n_j n_k>
};

/// Parses a site pattern of `o`/`x`, `0`/`1`, or the symbols for empty/occupied.
std::vector<std::uint8_t> parse_pattern(std::string_view pattern);
std::string format_pattern(std::span<const std::uint8_t> bits);

RowDensity initial_row(std::span<const std::uint8_t> pattern);

/// One row-to-row channel application: lift to rho (x) |empty...><empty...|, apply every
/// local gate in the configured order, trace out the old row.
RowDensity step_dense(const RowDensity& rho, const GateParams& params, const EvolutionConfig& cfg);

/// Result of a single trajectory step. `ok` is false when the sampled outcome had
/// vanishing norm and the caller should resample.
struct TrajectoryStep {
  bool ok = true;
  Eigen::VectorXcd row;
  std::vector<std::uint8_t> record;
};

/// Applies every gate to |row> (x) |empty...>, samples the old row in the computational
/// basis and returns the normalised conditional state of the new row.
TrajectoryStep step_trajectory(const Eigen::VectorXcd& row, int sites, const GateParams& params,
                               const EvolutionConfig& cfg, std::mt19937_64& rng);

RowObservables observables(const RowDensity& rho, bool two_point = false);
RowObservables observables(const Eigen::VectorXcd& row, int sites, bool two_point = false);

/// T + 1 snapshots, t = 0 .. cfg.steps.
std::vector<RowObservables> evolve(const RowDensity& rho0, const GateParams& params,
                                   const EvolutionConfig& cfg, int threads = 1);

/// Trace distance between one-step results under left-to-right and right-to-left order.
double order_sensitivity(const RowDensity& rho, const GateParams& params,
                         const EvolutionConfig& cfg);

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Seeds the per-sample generator used by trajectory mode.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t stream);

}  // namespace qca
