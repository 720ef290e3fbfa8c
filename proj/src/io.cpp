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

#include "qca/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "qca/errors.hpp"
#include "qca/version.hpp"

namespace qca::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void CsvWriter::sep() {
  if (!first_) os_ << ',';
  first_ = false;
}

void CsvWriter::header(std::span<const std::string> names) {
  for (const auto& n : names) cell(std::string_view(n));
  end_row();
}

CsvWriter& CsvWriter::cell(double v) {
  sep();
  os_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(std::int64_t v) {
  sep();
  os_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view v) {
  sep();
  os_ << v;
  return *this;
}

CsvWriter& CsvWriter::empty() {
  sep();
  return *this;
}

void CsvWriter::end_row() {
  os_ << '\n';
  first_ = true;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const nlohmann::json& config) {
  // nlohmann::json objects are std::map backed, so dump() is key-sorted.
  const std::uint64_t h = fnv1a64(config.dump());
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 0; i < 16; ++i) buf[i] = digits[(h >> (60 - 4 * i)) & 0xF];
  buf[16] = '\0';
  return buf;
}

nlohmann::json make_manifest(std::string_view command, const nlohmann::json& config,
                             std::span<const std::string> outputs) {
  nlohmann::json m;
  m["tool"] = "qca";
  m["version"] = kVersion;
  m["command"] = std::string(command);
  m["config"] = config;
  m["config_hash"] = config_hash(config);
  m["outputs"] = std::vector<std::string>(outputs.begin(), outputs.end());
  return m;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

void write_phase_diagram_csv(std::ostream& os, const PhaseDiagram& d) {
  CsvWriter w(os);
  const std::string names[] = {"lambda", "p_branch", "n_inf"};
  w.header(names);
  for (std::size_t i = 0; i < d.lambda_grid.size(); ++i) {
    for (std::size_t j = 0; j < d.p_branch_grid.size(); ++j) {
      w.cell(d.lambda_grid[i]).cell(d.p_branch_grid[j]);
      w.cell(d.n_inf(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
      w.end_row();
    }
  }
}

void write_pgm(std::ostream& os, const PhaseDiagram& d) {
  const auto rows = d.n_inf.rows(), cols = d.n_inf.cols();
  os << "P5\n" << cols << ' ' << rows << "\n255\n";
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double v = std::clamp(d.n_inf(i, j), 0.0, 1.0);
      os.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v))));
    }
  }
}

void write_observables_csv(std::ostream& os, std::span<const RowObservables> series) {
  if (series.empty()) throw ParameterError("empty observable series");
  const std::size_t sites = series.front().n.size();
  std::vector<std::string> names{"t", "mean_density", "mean_density_stderr", "purity"};
  for (std::size_t k = 0; k < sites; ++k) names.push_back("n_" + std::to_string(k + 1));
  for (std::size_t k = 0; k < sites; ++k) names.push_back("sx_" + std::to_string(k + 1));
  for (std::size_t k = 0; k < sites; ++k) names.push_back("sy_" + std::to_string(k + 1));
  CsvWriter w(os);
  w.header(names);
  for (std::size_t t = 0; t < series.size(); ++t) {
    const auto& o = series[t];
    w.cell(static_cast<std::int64_t>(t)).cell(o.mean_density).cell(o.mean_density_stderr);
    w.cell(o.purity);
    for (double v : o.n) w.cell(v);
    for (double v : o.sx) w.cell(v);
    for (double v : o.sy) w.cell(v);
    w.end_row();
  }
}

void write_statistics_csv(std::ostream& os, const SampleStatistics& s) {
  CsvWriter w(os);
  const std::string names[] = {"t", "density", "density_stderr", "survival", "survival_stderr"};
  w.header(names);
  for (std::size_t t = 0; t < s.density.size(); ++t) {
    w.cell(static_cast<std::int64_t>(t)).cell(s.density[t]).cell(s.density_stderr[t]);
    w.cell(s.survival[t]).cell(s.survival_stderr[t]);
    w.end_row();
  }
}

}  // namespace qca::io
