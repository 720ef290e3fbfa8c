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
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qca/analysis.hpp"
#include "qca/classical.hpp"
#include "qca/exact.hpp"

namespace qca::io {

/// Shortest decimal that round-trips, '.' separator regardless of locale.
std::string format_double(double v);

/// Minimal CSV emitter; cells are written as given (no quoting needed for our data).
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void header(std::span<const std::string> names);
  CsvWriter& cell(double v);
  CsvWriter& cell(std::int64_t v);
  CsvWriter& cell(std::string_view v);
  CsvWriter& empty();
  void end_row();

 private:
  void sep();
  std::ostream& os_;
  bool first_ = true;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);

/// Hash of the canonical (sorted-key, compact) JSON dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& config);

/// Manifest shared by every run: tool, version, command, config, its hash, outputs.
nlohmann::json make_manifest(std::string_view command, const nlohmann::json& config,
                             std::span<const std::string> outputs);

void write_text(const std::filesystem::path& path, std::string_view text);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

/// Long format: lambda, p_branch, n_inf.
void write_phase_diagram_csv(std::ostream& os, const PhaseDiagram& d);
/// Binary greyscale image, one pixel per grid point, lambda increasing downwards.
void write_pgm(std::ostream& os, const PhaseDiagram& d);

/// t, mean_density, mean_density_stderr, purity, then n_k, sx_k, sy_k per site.
void write_observables_csv(std::ostream& os, std::span<const RowObservables> series);

/// t, density, density_stderr, survival, survival_stderr.
void write_statistics_csv(std::ostream& os, const SampleStatistics& s);

}  // namespace qca::io
