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

#include "qca/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "qca/errors.hpp"
#include "qca/kernels.hpp"
#include "qca/parallel.hpp"

namespace qca {

namespace {

using kernels::PairBlocks;
using kernels::PairSite;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Gate for target k: old-row bits live at [0, L), new-row bits at [L, 2L); `shift`
// moves the whole site onto the bra half of a vectorised density matrix.
PairSite gate_site(int k, int sites, Boundary boundary, int shift) {
  PairSite s;
  s.center = k + shift;
  s.target = sites + k + shift;
  const bool periodic = boundary == Boundary::Periodic;
  if (k > 0) {
    s.left = k - 1 + shift;
  } else {
    s.left = periodic ? sites - 1 + shift : kernels::kVirtualEmpty;
  }
  if (k < sites - 1) {
    s.right = k + 1 + shift;
  } else {
    s.right = periodic ? shift : kernels::kVirtualEmpty;
  }
  return s;
}

struct GateSet {
  PairBlocks ket;
  PairBlocks bra;
};

GateSet gate_set(const GateParams& params) {
  const auto blocks = control_blocks(build_async_gate(params));
  return {kernels::pack_blocks(blocks, false), kernels::pack_blocks(blocks, true)};
}

void check_sites(int sites, int cap, const char* mode) {
  if (sites < 1) throw ParameterError("row must contain at least one site");
  if (sites > cap) {
    std::ostringstream os;
    os << mode << " mode supports at most " << cap << " sites, got " << sites;
    throw CapacityError(os.str());
  }
}

// Applies every gate of one time step to a pure joint state of 2L qubits.
void apply_row_gates(Eigen::VectorXcd& psi, int sites, const GateSet& gates,
                     const EvolutionConfig& cfg) {
  std::span<cplx> amps(psi.data(), static_cast<std::size_t>(psi.size()));
  for (int k : cfg.gate_order(sites)) {
    kernels::apply_pair_gate(amps, 2 * sites, gate_site(k, sites, cfg.boundary, 0), gates.ket);
  }
}

TrajectoryStep trajectory_step(const Eigen::VectorXcd& row, int sites, const GateSet& gates,
                               const EvolutionConfig& cfg, std::mt19937_64& rng) {
  const int L = sites;
  const Eigen::Index row_dim = Eigen::Index{1} << L;
  if (row.size() != row_dim) throw ParameterError("row state size does not match site count");

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(row_dim * row_dim);
  psi.head(row_dim) = row;
  apply_row_gates(psi, L, gates, cfg);

  const double u = uniform01(rng);
  double acc = 0.0;
  Eigen::Index outcome = -1;
  double prob = 0.0;
  for (Eigen::Index o = 0; o < row_dim; ++o) {
    double p = 0.0;
    for (Eigen::Index a = 0; a < row_dim; ++a) p += std::norm(psi(o + (a << L)));
    acc += p;
    if (p > 0.0) {
      outcome = o;
      prob = p;
    }
    if (u < acc && p > 0.0) break;
  }

  TrajectoryStep st;
  if (outcome < 0 || prob < 1e-300) {
    st.ok = false;
    return st;
  }
  st.row.resize(row_dim);
  const double scale = 1.0 / std::sqrt(prob);
  for (Eigen::Index a = 0; a < row_dim; ++a) st.row(a) = psi(outcome + (a << L)) * scale;
  st.record.resize(L);
  for (int k = 0; k < L; ++k) st.record[k] = static_cast<std::uint8_t>((outcome >> k) & 1);
  return st;
}

// Per-step sums over trajectory samples.
struct Accumulator {
  std::vector<double> n, sx, sy, two_point;
  double density = 0.0;
  double density_sq = 0.0;
  double overlap = 0.0;
  std::int64_t pairs = 0;

  explicit Accumulator(int sites, bool with_two_point)
      : n(sites, 0.0), sx(sites, 0.0), sy(sites, 0.0),
        two_point(with_two_point ? sites * sites : 0, 0.0) {}

  void add(const RowObservables& o) {
    for (std::size_t k = 0; k < n.size(); ++k) {
      n[k] += o.n[k];
      sx[k] += o.sx[k];
      sy[k] += o.sy[k];
    }
    if (!two_point.empty()) {
      const int L = static_cast<int>(n.size());
      for (int j = 0; j < L; ++j)
        for (int k = 0; k < L; ++k) two_point[j * L + k] += (*o.two_point)(j, k);
    }
    density += o.mean_density;
    density_sq += o.mean_density * o.mean_density;
  }

  void merge(const Accumulator& other) {
    for (std::size_t k = 0; k < n.size(); ++k) {
      n[k] += other.n[k];
      sx[k] += other.sx[k];
      sy[k] += other.sy[k];
    }
    for (std::size_t k = 0; k < two_point.size(); ++k) two_point[k] += other.two_point[k];
    density += other.density;
    density_sq += other.density_sq;
    overlap += other.overlap;
    pairs += other.pairs;
  }
};

bool is_diagonal(const Eigen::MatrixXcd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != cplx(0.0, 0.0)) return false;
  return true;
}

// Samples a pure state from the spectral decomposition of rho0. A diagonal rho0 is
// its own decomposition, which avoids an eigensolver on large rows.
class InitialSampler {
 public:
  explicit InitialSampler(const Eigen::MatrixXcd& rho) : diagonal_(is_diagonal(rho)) {
    if (diagonal_) {
      weights_ = rho.diagonal().real();
    } else {
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
      weights_ = eig.eigenvalues();
      vectors_ = eig.eigenvectors();
    }
  }

  Eigen::VectorXcd operator()(std::mt19937_64& rng) const {
    const double u = uniform01(rng);
    double acc = 0.0;
    Eigen::Index pick = weights_.size() - 1;
    while (pick > 0 && weights_(pick) <= 0.0) --pick;
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      acc += std::max(0.0, weights_(i));
      if (u < acc) {
        pick = i;
        break;
      }
    }
    if (diagonal_) return Eigen::VectorXcd::Unit(weights_.size(), pick);
    return vectors_.col(pick);
  }

 private:
  bool diagonal_;
  Eigen::VectorXd weights_;
  Eigen::MatrixXcd vectors_;
};

std::vector<RowObservables> evolve_trajectories(const RowDensity& rho0, const GateParams& params,
                                                const EvolutionConfig& cfg,
                                                const TrajectoryMode& mode, int threads) {
  const int L = rho0.sites;
  const GateSet gates = gate_set(params);
  const InitialSampler sample_initial(rho0.rho);
  const bool with_two_point = false;
  const int steps = cfg.steps;

  // Fixed chunking keeps the reduction order independent of the thread count.
  constexpr std::int64_t kChunk = 256;
  const std::int64_t samples = mode.samples;
  const std::int64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::vector<Accumulator>> partial(
      chunks, std::vector<Accumulator>(steps + 1, Accumulator(L, with_two_point)));

  parallel_for(static_cast<std::size_t>(chunks), threads, [&](std::size_t chunk) {
    auto& acc = partial[chunk];
    const std::int64_t first = static_cast<std::int64_t>(chunk) * kChunk;
    const std::int64_t last = std::min(samples, first + kChunk);
    for (std::int64_t s = first; s < last; s += 2) {
      const bool paired = s + 1 < last;
      std::vector<std::mt19937_64> rngs;
      std::vector<Eigen::VectorXcd> rows;
      for (std::int64_t i = s; i < s + (paired ? 2 : 1); ++i) {
        rngs.push_back(sample_rng(mode.seed, static_cast<std::uint64_t>(i)));
        rows.push_back(sample_initial(rngs.back()));
      }
      for (int t = 0; t <= steps; ++t) {
        if (t > 0) {
          for (std::size_t r = 0; r < rows.size(); ++r) {
            TrajectoryStep st;
            int attempts = 0;
            do {
              st = trajectory_step(rows[r], L, gates, cfg, rngs[r]);
              if (++attempts > 64) throw NumericalError("trajectory resampling did not succeed");
            } while (!st.ok);
            rows[r] = std::move(st.row);
          }
        }
        for (const auto& row : rows) acc[t].add(observables(row, L, with_two_point));
        if (paired) {
          acc[t].overlap += std::norm(rows[0].dot(rows[1]));
          acc[t].pairs += 1;
        }
      }
    }
  });

  std::vector<RowObservables> out(steps + 1);
  for (int t = 0; t <= steps; ++t) {
    Accumulator total(L, with_two_point);
    for (const auto& p : partial) total.merge(p[t]);
    const double inv = 1.0 / static_cast<double>(samples);
    RowObservables& o = out[t];
    o.n.resize(L);
    o.sx.resize(L);
    o.sy.resize(L);
    for (int k = 0; k < L; ++k) {
      o.n[k] = total.n[k] * inv;
      o.sx[k] = total.sx[k] * inv;
      o.sy[k] = total.sy[k] * inv;
    }
    o.mean_density = total.density * inv;
    if (samples > 1) {
      const double var = std::max(0.0, (total.density_sq * inv - o.mean_density * o.mean_density) *
                                            static_cast<double>(samples) /
                                            static_cast<double>(samples - 1));
      o.mean_density_stderr = std::sqrt(var * inv);
    }
    o.purity = total.pairs > 0 ? total.overlap / static_cast<double>(total.pairs)
                               : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace

void RowDensity::check_invariants() const {
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const double trace_err = std::abs(rho.trace() - cplx(1.0, 0.0));
  std::ostringstream os;
  os.precision(3);
  if (herm >= 1e-10) {
    os << "row density not Hermitian (asymmetry " << herm << ")";
    throw NumericalError(os.str());
  }
  if (trace_err >= 1e-10) {
    os << "row density trace deviates from 1 by " << trace_err;
    throw NumericalError(os.str());
  }
  double min_eig = 0.0;
  if (is_diagonal(rho)) {
    min_eig = rho.diagonal().real().minCoeff();
  } else {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho, Eigen::EigenvaluesOnly);
    min_eig = eig.eigenvalues().minCoeff();
  }
  if (min_eig <= -1e-8) {
    os << "row density has negative eigenvalue " << min_eig;
    throw NumericalError(os.str());
  }
}

std::vector<int> EvolutionConfig::gate_order(int sites) const {
  std::vector<int> order(sites);
  switch (this->order) {
    case Order::LeftToRight:
      std::iota(order.begin(), order.end(), 0);
      break;
    case Order::RightToLeft:
      std::iota(order.rbegin(), order.rend(), 0);
      break;
    case Order::Explicit:
      for (int i = 0; i < sites; ++i) order[i] = permutation.at(i) - 1;
      break;
  }
  return order;
}

void EvolutionConfig::validate(int sites) const {
  if (steps < 0) throw ParameterError("steps must be non-negative");
  if (boundary == Boundary::Periodic && sites < 2) {
    throw ParameterError("periodic boundary needs at least two sites");
  }
  if (order == Order::Explicit) {
    std::vector<int> sorted = permutation;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(sites);
    std::iota(expect.begin(), expect.end(), 1);
    if (sorted != expect) throw ParameterError("gate order is not a permutation of 1..L");
  }
  if (const auto* t = std::get_if<TrajectoryMode>(&mode); t && t->samples < 1) {
    throw ParameterError("trajectory mode needs at least one sample");
  }
}

std::vector<std::uint8_t> parse_pattern(std::string_view pattern) {
  std::vector<std::uint8_t> bits;
  for (std::size_t i = 0; i < pattern.size();) {
    const unsigned char c = static_cast<unsigned char>(pattern[i]);
    if (c == 'o' || c == '0' || c == '.') {
      bits.push_back(0);
      ++i;
    } else if (c == 'x' || c == '1' || c == '*') {
      bits.push_back(1);
      ++i;
    } else if (pattern.substr(i, 3) == "◦" || pattern.substr(i, 3) == "○") {
      bits.push_back(0);
      i += 3;
    } else if (pattern.substr(i, 3) == "•" || pattern.substr(i, 3) == "●") {
      bits.push_back(1);
      i += 3;
    } else {
      throw ParameterError("unrecognised site symbol in pattern '" + std::string(pattern) + "'");
    }
  }
  return bits;
}

std::string format_pattern(std::span<const std::uint8_t> bits) {
  std::string s;
  for (auto b : bits) s.push_back(b ? 'x' : 'o');
  return s;
}

RowDensity initial_row(std::span<const std::uint8_t> pattern) {
  const int L = static_cast<int>(pattern.size());
  check_sites(L, kMaxTrajectorySites, "row");
  const Eigen::Index dim = Eigen::Index{1} << L;
  Eigen::Index index = 0;
  for (int k = 0; k < L; ++k) index |= static_cast<Eigen::Index>(pattern[k] ? 1 : 0) << k;
  RowDensity r{L, Eigen::MatrixXcd::Zero(dim, dim)};
  r.rho(index, index) = 1.0;
  return r;
}

RowDensity step_dense(const RowDensity& rho, const GateParams& params,
                      const EvolutionConfig& cfg) {
  const int L = rho.sites;
  check_sites(L, kMaxDenseSites, "dense");
  cfg.validate(L);
  params.validate();
  const GateSet gates = gate_set(params);

  const Eigen::Index row_dim = Eigen::Index{1} << L;
  const Eigen::Index joint_dim = row_dim * row_dim;
  const int ket_qubits = 2 * L;
  // Column-major (ket, bra) storage is the vectorised density matrix with ket bits
  // [0, 2L) and bra bits [2L, 4L).
  Eigen::MatrixXcd joint = Eigen::MatrixXcd::Zero(joint_dim, joint_dim);
  joint.topLeftCorner(row_dim, row_dim) = rho.rho;

  std::span<cplx> amps(joint.data(), static_cast<std::size_t>(joint.size()));
  for (int k : cfg.gate_order(L)) {
    kernels::apply_pair_gate(amps, 2 * ket_qubits, gate_site(k, L, cfg.boundary, 0), gates.ket);
    kernels::apply_pair_gate(amps, 2 * ket_qubits, gate_site(k, L, cfg.boundary, ket_qubits),
                             gates.bra);
  }

  RowDensity out{L, Eigen::MatrixXcd::Zero(row_dim, row_dim)};
  for (Eigen::Index b = 0; b < row_dim; ++b) {
    for (Eigen::Index a = 0; a < row_dim; ++a) {
      cplx sum = 0.0;
      for (Eigen::Index o = 0; o < row_dim; ++o) sum += joint(o + (a << L), o + (b << L));
      out.rho(a, b) = sum;
    }
  }
  return out;
}

TrajectoryStep step_trajectory(const Eigen::VectorXcd& row, int sites, const GateParams& params,
                               const EvolutionConfig& cfg, std::mt19937_64& rng) {
  check_sites(sites, kMaxTrajectorySites, "trajectory");
  cfg.validate(sites);
  params.validate();
  return trajectory_step(row, sites, gate_set(params), cfg, rng);
}

RowObservables observables(const RowDensity& rho, bool two_point) {
  const int L = rho.sites;
  const Eigen::Index dim = rho.rho.rows();
  RowObservables o;
  o.n.assign(L, 0.0);
  o.sx.assign(L, 0.0);
  o.sy.assign(L, 0.0);
  for (int k = 0; k < L; ++k) {
    const Eigen::Index bit = Eigen::Index{1} << k;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (i & bit) {
        o.n[k] += rho.rho(i, i).real();
      } else {
        const cplx c = rho.rho(i, i | bit);
        o.sx[k] += 2.0 * c.real();
        o.sy[k] += 2.0 * c.imag();
      }
    }
  }
  o.mean_density = std::accumulate(o.n.begin(), o.n.end(), 0.0) / L;
  o.purity = rho.rho.squaredNorm();
  if (two_point) {
    Eigen::MatrixXd nn = Eigen::MatrixXd::Zero(L, L);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double p = rho.rho(i, i).real();
      for (int j = 0; j < L; ++j)
        for (int k = 0; k < L; ++k)
          if (((i >> j) & 1) && ((i >> k) & 1)) nn(j, k) += p;
    }
    o.two_point = nn;
  }
  return o;
}

RowObservables observables(const Eigen::VectorXcd& row, int sites, bool two_point) {
  const int L = sites;
  const Eigen::Index dim = row.size();
  RowObservables o;
  o.n.assign(L, 0.0);
  o.sx.assign(L, 0.0);
  o.sy.assign(L, 0.0);
  for (int k = 0; k < L; ++k) {
    const Eigen::Index bit = Eigen::Index{1} << k;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (i & bit) {
        o.n[k] += std::norm(row(i));
      } else {
        const cplx c = row(i) * std::conj(row(i | bit));  // rho(i, i | bit)
        o.sx[k] += 2.0 * c.real();
        o.sy[k] += 2.0 * c.imag();
      }
    }
  }
  o.mean_density = std::accumulate(o.n.begin(), o.n.end(), 0.0) / L;
  o.purity = 1.0;
  if (two_point) {
    Eigen::MatrixXd nn = Eigen::MatrixXd::Zero(L, L);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double p = std::norm(row(i));
      for (int j = 0; j < L; ++j)
        for (int k = 0; k < L; ++k)
          if (((i >> j) & 1) && ((i >> k) & 1)) nn(j, k) += p;
    }
    o.two_point = nn;
  }
  return o;
}

std::vector<RowObservables> evolve(const RowDensity& rho0, const GateParams& params,
                                   const EvolutionConfig& cfg, int threads) {
  params.validate();
  cfg.validate(rho0.sites);
  rho0.check_invariants();
  if (const auto* traj = std::get_if<TrajectoryMode>(&cfg.mode)) {
    check_sites(rho0.sites, kMaxTrajectorySites, "trajectory");
    return evolve_trajectories(rho0, params, cfg, *traj, threads);
  }
  check_sites(rho0.sites, kMaxDenseSites, "dense");
  std::vector<RowObservables> out;
  out.reserve(cfg.steps + 1);
  RowDensity rho = rho0;
  out.push_back(observables(rho));
  for (int t = 0; t < cfg.steps; ++t) {
    rho = step_dense(rho, params, cfg);
    rho.check_invariants();
    out.push_back(observables(rho));
  }
  return out;
}

double order_sensitivity(const RowDensity& rho, const GateParams& params,
                         const EvolutionConfig& cfg) {
  EvolutionConfig ltr = cfg;
  ltr.order = EvolutionConfig::Order::LeftToRight;
  ltr.mode = DenseMode{};
  EvolutionConfig rtl = ltr;
  rtl.order = EvolutionConfig::Order::RightToLeft;
  return trace_distance(step_dense(rho, params, ltr).rho, step_dense(rho, params, rtl).rho);
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  const Eigen::MatrixXcd d = a - b;
  const Eigen::MatrixXcd h = 0.5 * (d + d.adjoint());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace qca
