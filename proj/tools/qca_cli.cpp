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

// Command-line driver: sweeps, exact evolution, classical sampling, critical-line
// analysis, QCP mapping and single mean-field trajectories.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qca/analysis.hpp"
#include "qca/classical.hpp"
#include "qca/errors.hpp"
#include "qca/exact.hpp"
#include "qca/io.hpp"
#include "qca/meanfield.hpp"
#include "qca/parallel.hpp"
#include "qca/qcp.hpp"
#include "qca/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

const std::vector<std::string> kCommands = {"sweep",    "exact",    "classical",
                                            "map-qcp",  "critical", "meanfield"};

// "a:b:N" (N evenly spaced points), "a,b,c", or a single value.
std::vector<double> parse_grid(const std::string& text, const char* what) {
  auto fail = [&](const std::string& why) -> std::vector<double> {
    throw qca::ParameterError(std::string(what) + " grid '" + text + "': " + why);
  };
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      fail("'" + s + "' is not a number");
    }
    if (used != s.size() || !std::isfinite(v)) fail("'" + s + "' is not a number");
    return v;
  };
  if (text.empty()) return fail("empty");
  std::vector<std::string> parts;
  const char delim = text.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, delim);) parts.push_back(item);
  if (text.back() == delim) parts.push_back("");
  std::vector<double> v;
  if (delim == ':') {
    if (parts.size() != 3) return fail("expected a:b:N");
    const double n = number(parts[2]);
    if (n < 1 || n != std::floor(n)) return fail("point count must be a positive integer");
    const double a = number(parts[0]), b = number(parts[1]);
    if (n > 1 && !(b > a)) return fail("range must be ascending");
    v = qca::linspace(a, b, static_cast<std::size_t>(n));
  } else {
    for (const auto& p : parts) v.push_back(number(p));
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0.0 && v[i] <= 1.0)) return fail("values must lie in [0, 1]");
    if (i > 0 && !(v[i] > v[i - 1])) return fail("values must be strictly ascending");
  }
  return v;
}

std::string default_output_dir() {
  if (const char* env = std::getenv("QCA_OUTPUT_DIR"); env && *env) return env;
  return "qca-output";
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Options shared by every subcommand.
struct Common {
  double q_dec = 0.9;
  double p_coag = 0.1;
  double p_plus = 0.1;
  int threads = 0;
  std::string out = default_output_dir();

  qca::BaseParams base() const {
    qca::BaseParams b{1.0 - q_dec, p_coag, p_plus};
    b.validate();
    return b;
  }
  void add_to(json& cfg) const {
    cfg["q_dec"] = q_dec;
    cfg["p_coag"] = p_coag;
    cfg["p_plus"] = p_plus;
  }
};

void add_common(CLI::App* sub, Common& c, bool writes_files = true) {
  sub->add_option("--q-dec", c.q_dec, "survival probability of an isolated particle")
      ->capture_default_str();
  sub->add_option("--p-coag", c.p_coag, "flip probability with the center occupied")
      ->capture_default_str();
  sub->add_option("--p-plus", c.p_plus, "parameter of the auxiliary unitary")
      ->capture_default_str();
  sub->add_option("--threads", c.threads, "worker threads (0: all cores)")->capture_default_str();
  if (writes_files) {
    sub->add_option("--out", c.out, "output directory (default from QCA_OUTPUT_DIR)")
        ->capture_default_str();
  }
}

struct Outputs {
  fs::path dir;
  std::vector<std::string> names;

  explicit Outputs(const std::string& d) : dir(d) { fs::create_directories(dir); }

  template <class Fn>
  void write(const std::string& name, Fn&& fn) {
    std::ostringstream os;
    fn(os);
    qca::io::write_text(dir / name, os.str());
    names.push_back(name);
  }

  void manifest(std::string_view command, const json& cfg, const json& results,
                const json& run) {
    json m = qca::io::make_manifest(command, cfg, names);
    if (!results.is_null()) m["results"] = results;
    m["run"] = run;
    qca::io::write_json(dir / "manifest.json", m);
  }
};

json run_info(const Common& c) { return {{"threads", resolve_threads(c.threads)}, {"out", c.out}}; }

json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

qca::Boundary parse_boundary(const std::string& s) {
  if (s == "fixed") return qca::Boundary::FixedEmpty;
  if (s == "periodic") return qca::Boundary::Periodic;
  throw qca::ParameterError("boundary must be 'fixed' or 'periodic'");
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  Common c;
  std::string lambda = "0:1:201";
  std::string p_branch = "0:1:201";
  int iters = qca::kDefaultIterations;
  std::string init = "high";
  bool pgm = false;
};

int cmd_sweep(const SweepArgs& a) {
  const auto lambdas = parse_grid(a.lambda, "lambda");
  const auto ps = parse_grid(a.p_branch, "p-branch");
  if (a.iters < 0) throw qca::ParameterError("iters must be non-negative");
  if (a.init != "high" && a.init != "low") throw qca::ParameterError("init must be high or low");
  const auto init =
      a.init == "high" ? qca::InitialCondition::HighDensity : qca::InitialCondition::LowDensity;
  const auto d = qca::sweep(a.c.base(), lambdas, ps, a.iters, init, resolve_threads(a.c.threads));

  Outputs out(a.c.out);
  out.write("phase_diagram.csv", [&](std::ostream& os) { qca::io::write_phase_diagram_csv(os, d); });
  if (a.pgm) out.write("phase_diagram.pgm", [&](std::ostream& os) { qca::io::write_pgm(os, d); });

  json cfg;
  a.c.add_to(cfg);
  cfg["lambda"] = a.lambda;
  cfg["p_branch"] = a.p_branch;
  cfg["iters"] = a.iters;
  cfg["init"] = a.init;
  cfg["pgm"] = a.pgm;
  const auto contour = qca::critical_contour(d);
  std::size_t found = 0;
  for (const auto& pt : contour) found += pt.p_c.has_value();
  out.manifest("sweep", cfg, {{"rows", lambdas.size()}, {"cols", ps.size()}, {"contour_points", found}},
               run_info(a.c));
  std::cout << "wrote " << (out.dir / "phase_diagram.csv").string() << " (" << lambdas.size()
            << " x " << ps.size() << ")\n";
  return 0;
}

// ---------------------------------------------------------------- exact

struct ExactArgs {
  Common c;
  int sites = 0;
  std::string pattern;
  double lambda = 0.5;
  double p_branch = 0.5;
  int steps = 10;
  std::string mode = "dense";
  std::int64_t samples = 1000;
  std::uint64_t seed = 0;
  std::string boundary = "fixed";
  std::string order = "ltr";
};

int cmd_exact(const ExactArgs& a) {
  std::vector<std::uint8_t> bits;
  if (!a.pattern.empty()) {
    bits = qca::parse_pattern(a.pattern);
    if (a.sites != 0 && a.sites != static_cast<int>(bits.size())) {
      throw qca::ParameterError("--L does not match the pattern length");
    }
  } else {
    if (a.sites < 1) throw qca::ParameterError("give --L or --pattern");
    bits.assign(static_cast<std::size_t>(a.sites), 1);
  }
  const int L = static_cast<int>(bits.size());

  qca::EvolutionConfig cfg;
  cfg.boundary = parse_boundary(a.boundary);
  cfg.steps = a.steps;
  if (a.order == "ltr") {
    cfg.order = qca::EvolutionConfig::Order::LeftToRight;
  } else if (a.order == "rtl") {
    cfg.order = qca::EvolutionConfig::Order::RightToLeft;
  } else {
    cfg.order = qca::EvolutionConfig::Order::Explicit;
    std::stringstream ss(a.order);
    for (std::string item; std::getline(ss, item, ',');) {
      try {
        cfg.permutation.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw qca::ParameterError("order must be ltr, rtl or a comma-separated permutation");
      }
    }
  }
  if (a.mode == "dense") {
    if (L > qca::kMaxDenseSites) {
      throw qca::CapacityError("dense mode supports at most " +
                               std::to_string(qca::kMaxDenseSites) + " sites");
    }
    cfg.mode = qca::DenseMode{};
  } else if (a.mode == "trajectory") {
    cfg.mode = qca::TrajectoryMode{a.samples, a.seed};
  } else {
    throw qca::ParameterError("mode must be dense or trajectory");
  }
  const qca::GateParams params = a.c.base().at(a.lambda, a.p_branch);
  params.validate();
  cfg.validate(L);

  const auto series =
      qca::evolve(qca::initial_row(bits), params, cfg, resolve_threads(a.c.threads));
  Outputs out(a.c.out);
  out.write("exact.csv", [&](std::ostream& os) { qca::io::write_observables_csv(os, series); });

  json jc;
  a.c.add_to(jc);
  jc["L"] = L;
  jc["pattern"] = qca::format_pattern(bits);
  jc["lambda"] = a.lambda;
  jc["p_branch"] = a.p_branch;
  jc["steps"] = a.steps;
  jc["mode"] = a.mode;
  jc["boundary"] = a.boundary;
  jc["order"] = a.order;
  if (a.mode == "trajectory") {
    jc["samples"] = a.samples;
    jc["seed"] = a.seed;
  }
  out.manifest("exact", jc, {{"final_mean_density", series.back().mean_density}},
               run_info(a.c));
  std::cout << "wrote " << (out.dir / "exact.csv").string() << " (" << series.size()
            << " snapshots)\n";
  return 0;
}

// ---------------------------------------------------------------- classical

struct ClassicalArgs {
  Common c;
  int sites = 64;
  std::string pattern;
  double p_branch = 0.5;
  int steps = 100;
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  std::string boundary = "fixed";
  bool verify_exact = false;
};

int cmd_classical(const ClassicalArgs& a) {
  qca::BitRow initial;
  if (!a.pattern.empty()) {
    initial = qca::parse_pattern(a.pattern);
  } else {
    if (a.sites < 1) throw qca::ParameterError("L must be positive");
    initial.assign(static_cast<std::size_t>(a.sites), 1);
  }
  const qca::GateParams params = a.c.base().at(0.0, a.p_branch);
  params.validate();
  const auto boundary = parse_boundary(a.boundary);

  json results;
  if (a.verify_exact) {
    const auto check =
        qca::compare_with_exact(static_cast<int>(initial.size()), params, boundary);
    std::cout << "exact diagonal check: max-abs deviation " << check.max_deviation
              << ", max coherence " << check.max_offdiagonal << "\n";
    results["exact_max_deviation"] = check.max_deviation;
    results["exact_max_coherence"] = check.max_offdiagonal;
  }
  const auto stats = qca::sample_statistics(a.steps, a.trials, params, initial, a.seed, boundary,
                                            resolve_threads(a.c.threads));
  Outputs out(a.c.out);
  out.write("classical.csv", [&](std::ostream& os) { qca::io::write_statistics_csv(os, stats); });

  json jc;
  a.c.add_to(jc);
  jc["pattern"] = qca::format_pattern(initial);
  jc["p_branch"] = a.p_branch;
  jc["steps"] = a.steps;
  jc["trials"] = a.trials;
  jc["seed"] = a.seed;
  jc["boundary"] = a.boundary;
  jc["verify_exact"] = a.verify_exact;
  results["final_density"] = stats.density.back();
  results["final_survival"] = stats.survival.back();
  out.manifest("classical", jc, results, run_info(a.c));
  std::cout << "wrote " << (out.dir / "classical.csv").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- map-qcp

struct MapArgs {
  Common c;
  double lambda = 0.0;
  double p_branch = 0.5;
  double dt = 0.01;
};

int cmd_map_qcp(const MapArgs& a) {
  if (!(a.dt > 0.0)) throw qca::ParameterError("dt must be positive");
  const qca::GateParams params = a.c.base().at(a.lambda, a.p_branch);
  params.validate();
  const auto m = qca::map_qca_to_qcp(params, a.dt);
  const auto back = qca::qcp_coefficients(m.rates);
  const auto r = qca::coefficients(params);

  json res;
  res["coefficients"] = {{"r_dec", r.r_dec}, {"r_coag", r.r_coag}, {"r_branch", r.r_branch},
                         {"r_star", r.r_star}};
  res["rates"] = {{"gamma", m.rates.gamma},     {"kappa_c", m.rates.kappa_c},
                  {"kappa_b", m.rates.kappa_b}, {"omega", m.rates.omega},
                  {"dt", m.rates.dt},           {"g", optional_number(m.rates.g)}};
  res["negative_kappa_c"] = m.negative_kappa_c;
  res["discretization_valid"] = back.valid;
  std::cout << res.dump(2) << "\n";
  if (!m.rates.g) std::cerr << "warning: r_branch = 0, g is undefined\n";
  if (m.negative_kappa_c) std::cerr << "warning: negative coagulation rate\n";
  if (!back.valid) std::cerr << "warning: time step too large, coefficients leave [0, 1]\n";

  json jc;
  a.c.add_to(jc);
  jc["lambda"] = a.lambda;
  jc["p_branch"] = a.p_branch;
  jc["dt"] = a.dt;
  Outputs out(a.c.out);
  out.manifest("map-qcp", jc, res, run_info(a.c));
  return 0;
}

// ---------------------------------------------------------------- critical

struct CriticalArgs {
  Common c;
  std::string lambda = "0.5:1:51";
  double level = 0.1;
  double tol = 1e-4;
  int iters = qca::kDefaultIterations;
  double star_tol = 5e-3;
};

int cmd_critical(const CriticalArgs& a) {
  const auto lambdas = parse_grid(a.lambda, "lambda");
  const auto base = a.c.base();
  const int threads = resolve_threads(a.c.threads);
  qca::ContourOptions copts;
  copts.level = a.level;
  copts.tol = a.tol;
  copts.iters = a.iters;
  qca::ClassifierOptions kopts;
  kopts.iters = a.iters;
  kopts.level = a.level;

  std::vector<qca::TransitionReport> reports(lambdas.size());
  qca::parallel_for(lambdas.size(), threads, [&](std::size_t i) {
    reports[i] = qca::classify_transition(lambdas[i], base, kopts);
  });

  std::optional<double> lambda_star;
  try {
    lambda_star = qca::find_lambda_star(base, lambdas.front(), lambdas.back(), a.star_tol, kopts);
  } catch (const qca::ParameterError& e) {
    std::cerr << "warning: no lambda* in range: " << e.what() << "\n";
  }
  const auto table = qca::g_along_critical(base, lambdas, lambda_star, copts, threads);

  std::size_t found = 0;
  for (const auto& row : table.rows) {
    if (row.p_c) {
      ++found;
    } else {
      std::cerr << "warning: no critical point at lambda = " << row.lambda << "\n";
    }
  }

  Outputs out(a.c.out);
  out.write("critical.csv", [&](std::ostream& os) {
    qca::io::CsvWriter w(os);
    const std::string names[] = {"lambda", "p_c", "g_c", "order", "jump", "hysteresis"};
    w.header(names);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const auto& row = table.rows[i];
      w.cell(row.lambda);
      row.p_c ? w.cell(*row.p_c) : w.empty();
      row.g_c ? w.cell(*row.g_c) : w.empty();
      w.cell(qca::order_name(reports[i].order)).cell(reports[i].jump).cell(reports[i].hysteresis);
      w.end_row();
    }
  });

  json res;
  res["lambda_star"] = optional_number(table.lambda_star);
  res["p_star"] = optional_number(table.p_star);
  res["g_star"] = optional_number(table.g_star);
  res["critical_points"] = found;
  json jc;
  a.c.add_to(jc);
  jc["lambda"] = a.lambda;
  jc["level"] = a.level;
  jc["tol"] = a.tol;
  jc["iters"] = a.iters;
  jc["star_tol"] = a.star_tol;
  out.manifest("critical", jc, res, run_info(a.c));

  std::cout << "wrote " << (out.dir / "critical.csv").string() << "\n";
  if (table.lambda_star) {
    std::cout << "lambda* = " << *table.lambda_star;
    if (table.p_star) std::cout << "  p_c = " << *table.p_star;
    if (table.g_star) std::cout << "  g* = " << *table.g_star;
    std::cout << "\n";
  }
  if (found == 0) {
    std::cerr << "error: no critical point found at any lambda\n";
    return kExitNumerical;
  }
  return 0;
}

// ---------------------------------------------------------------- meanfield

struct MeanfieldArgs {
  Common c;
  double lambda = 0.5;
  double p_branch = 0.5;
  int iters = qca::kDefaultIterations;
  double n0 = 1.0, x0 = 0.0, y0 = 0.0;
  int every = 1;
};

int cmd_meanfield(const MeanfieldArgs& a) {
  if (a.iters < 0) throw qca::ParameterError("iters must be non-negative");
  if (a.every < 1) throw qca::ParameterError("every must be at least 1");
  const qca::GateParams params = a.c.base().at(a.lambda, a.p_branch);
  params.validate();
  qca::MFState s{a.n0, a.x0, a.y0};
  if (!s.valid()) throw qca::ParameterError("initial state is not a valid density matrix");

  double last_delta = 0.0;
  Outputs out(a.c.out);
  out.write("meanfield.csv", [&](std::ostream& os) {
    qca::io::CsvWriter w(os);
    const std::string names[] = {"t", "n", "x", "y"};
    w.header(names);
    for (int t = 0; t <= a.iters; ++t) {
      if (t > 0) {
        const qca::MFState next = qca::mf_step_full(s, params);
        last_delta = std::hypot(next.n - s.n, next.x - s.x, next.y - s.y);
        s = next;
      }
      if (t % a.every == 0 || t == a.iters) {
        w.cell(static_cast<std::int64_t>(t)).cell(s.n).cell(s.x).cell(s.y);
        w.end_row();
      }
    }
  });

  json jc;
  a.c.add_to(jc);
  jc["lambda"] = a.lambda;
  jc["p_branch"] = a.p_branch;
  jc["iters"] = a.iters;
  jc["n0"] = a.n0;
  jc["x0"] = a.x0;
  jc["y0"] = a.y0;
  jc["every"] = a.every;
  out.manifest("meanfield", jc,
               {{"n", s.n}, {"x", s.x}, {"y", s.y}, {"last_delta", last_delta}}, run_info(a.c));
  std::cout << "n = " << s.n << "  x = " << s.x << "  y = " << s.y
            << "  last delta = " << last_delta << "\n";
  return 0;
}

// ---------------------------------------------------------------- config files

std::string value_to_arg(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_float()) return qca::io::format_double(v.get<double>());
  throw qca::ParameterError("unsupported config value " + v.dump());
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// JSON object (a manifest's "config"/"command" fields are honoured) or key = value lines.
json load_config(const std::string& path, std::string& command) {
  std::ifstream f(path);
  if (!f) throw qca::ParameterError("cannot read config file " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  const std::string head = trim(text);
  if (!head.empty() && head.front() == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw qca::ParameterError("config " + path + ": " + e.what());
    }
    if (j.contains("config") && j["config"].is_object()) {
      if (j.contains("command") && j["command"].is_string()) command = j["command"];
      return j["config"];
    }
    return j;
  }
  json j = json::object();
  std::stringstream ss(text);
  int lineno = 0;
  for (std::string line; std::getline(ss, line);) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw qca::ParameterError("config " + path + ":" + std::to_string(lineno) +
                                ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && (val.front() == '"' || val.front() == '\'') &&
        val.back() == val.front()) {
      val = val.substr(1, val.size() - 2);
    }
    if (val == "true" || val == "false") {
      j[key] = val == "true";
    } else {
      j[key] = val;
    }
  }
  return j;
}

// Expands --config into ordinary flags placed directly after the subcommand, so that
// flags given on the command line (which come later) take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;

  std::string command;
  const json cfg = load_config(path, command);
  std::vector<std::string> extra;
  for (const auto& [key, value] : cfg.items()) {
    std::string flag = "--" + key;
    for (auto& ch : flag) ch = ch == '_' ? '-' : ch;
    if (value.is_boolean()) {
      if (value.get<bool>()) extra.push_back(flag);
      continue;
    }
    if (value.is_null()) continue;
    extra.push_back(flag);
    extra.push_back(value_to_arg(value));
  }
  std::size_t pos = 0;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (std::find(kCommands.begin(), kCommands.end(), args[i]) != kCommands.end()) {
      pos = i;
      break;
    }
  }
  if (pos == 0) {
    if (command.empty()) throw qca::ParameterError("no subcommand given and none in config");
    args.insert(args.begin() + 1, command);
    pos = 1;
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(pos + 1), extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asynchronous quantum cellular automaton toolkit"};
  app.set_version_flag("--version", std::string(qca::kVersion));
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON or key = value file supplying option values (flags override it)");

  SweepArgs sw;
  auto* s_sweep = app.add_subcommand("sweep", "stationary mean-field density over a (lambda, p_branch) grid");
  add_common(s_sweep, sw.c);
  s_sweep->add_option("--lambda", sw.lambda, "grid a:b:N or a,b,c")->capture_default_str();
  s_sweep->add_option("--p-branch", sw.p_branch, "grid a:b:N or a,b,c")->capture_default_str();
  s_sweep->add_option("--iters", sw.iters)->capture_default_str();
  s_sweep->add_option("--init", sw.init, "high or low")->capture_default_str();
  s_sweep->add_flag("--pgm", sw.pgm, "also write a greyscale heatmap");

  ExactArgs ex;
  auto* s_exact = app.add_subcommand("exact", "exact row-channel evolution of a small system");
  add_common(s_exact, ex.c);
  s_exact->add_option("--L", ex.sites, "number of sites (all occupied unless --pattern)");
  s_exact->add_option("--pattern", ex.pattern, "initial row, e.g. oxxo");
  s_exact->add_option("--lambda", ex.lambda)->capture_default_str();
  s_exact->add_option("--p-branch", ex.p_branch)->capture_default_str();
  s_exact->add_option("--steps", ex.steps)->capture_default_str();
  s_exact->add_option("--mode", ex.mode, "dense or trajectory")->capture_default_str();
  s_exact->add_option("--samples", ex.samples)->capture_default_str();
  s_exact->add_option("--seed", ex.seed)->capture_default_str();
  s_exact->add_option("--boundary", ex.boundary, "fixed or periodic")->capture_default_str();
  s_exact->add_option("--order", ex.order, "ltr, rtl or a 1-based permutation")
      ->capture_default_str();

  ClassicalArgs cl;
  auto* s_classical = app.add_subcommand("classical", "stochastic sampling of the synchronous limit");
  add_common(s_classical, cl.c);
  s_classical->add_option("--L", cl.sites, "number of sites (all occupied unless --pattern)")
      ->capture_default_str();
  s_classical->add_option("--pattern", cl.pattern, "initial row");
  s_classical->add_option("--p-branch", cl.p_branch)->capture_default_str();
  s_classical->add_option("--steps", cl.steps)->capture_default_str();
  s_classical->add_option("--trials", cl.trials)->capture_default_str();
  s_classical->add_option("--seed", cl.seed)->capture_default_str();
  s_classical->add_option("--boundary", cl.boundary, "fixed or periodic")->capture_default_str();
  s_classical->add_flag("--verify-exact", cl.verify_exact,
                        "compare the transition matrix with the exact channel");

  MapArgs mp;
  auto* s_map = app.add_subcommand("map-qcp", "quantum contact process rates for a gate");
  add_common(s_map, mp.c);
  s_map->add_option("--lambda", mp.lambda)->capture_default_str();
  s_map->add_option("--p-branch", mp.p_branch)->capture_default_str();
  s_map->add_option("--dt", mp.dt)->capture_default_str();

  CriticalArgs cr;
  auto* s_crit = app.add_subcommand("critical", "critical line, transition order, lambda* and g*");
  add_common(s_crit, cr.c);
  s_crit->add_option("--lambda", cr.lambda, "grid a:b:N or a,b,c")->capture_default_str();
  s_crit->add_option("--level", cr.level)->capture_default_str();
  s_crit->add_option("--tol", cr.tol)->capture_default_str();
  s_crit->add_option("--iters", cr.iters)->capture_default_str();
  s_crit->add_option("--star-tol", cr.star_tol)->capture_default_str();

  MeanfieldArgs mf;
  auto* s_mf = app.add_subcommand("meanfield", "dump a single mean-field trajectory");
  add_common(s_mf, mf.c);
  s_mf->add_option("--lambda", mf.lambda)->capture_default_str();
  s_mf->add_option("--p-branch", mf.p_branch)->capture_default_str();
  s_mf->add_option("--iters", mf.iters)->capture_default_str();
  s_mf->add_option("--n0", mf.n0)->capture_default_str();
  s_mf->add_option("--x0", mf.x0)->capture_default_str();
  s_mf->add_option("--y0", mf.y0)->capture_default_str();
  s_mf->add_option("--every", mf.every, "write every k-th step")->capture_default_str();

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(std::move(args));
    std::vector<const char*> cargs;
    for (const auto& s : args) cargs.push_back(s.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*s_sweep) return cmd_sweep(sw);
    if (*s_exact) return cmd_exact(ex);
    if (*s_classical) return cmd_classical(cl);
    if (*s_map) return cmd_map_qcp(mp);
    if (*s_crit) return cmd_critical(cr);
    if (*s_mf) return cmd_meanfield(mf);
  } catch (const qca::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
