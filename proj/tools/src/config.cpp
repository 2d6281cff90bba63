// Copyright 2026 The qdc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <qdc_app/config.hpp>

#include <qdc/error.hpp>

#include <openssl/evp.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <iomanip>

namespace qdc::app {
namespace {

using nlohmann::json;

class Section {
 public:
  Section(const json& node, std::string path, std::set<std::string> allowed) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      throw ConfigError(path_ + ": expected an object");
    }
    for (const auto& [key, value] : node_.items()) {
      if (!allowed.contains(key)) {
        throw ConfigError(path_ + ": unknown key '" + key + "'");
      }
    }
  }

  [[nodiscard]] bool has(const std::string& key) const { return node_.contains(key); }
  [[nodiscard]] const json& at(const std::string& key) const { return node_.at(key); }
  [[nodiscard]] std::string name(const std::string& key) const { return path_ + "." + key; }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) {
      return fallback;
    }
    const json& v = node_.at(key);
    if (!v.is_number()) {
      throw ConfigError(name(key) + ": expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      throw ConfigError(name(key) + ": must be finite");
    }
    return x;
  }

  int integer(const std::string& key, int fallback) const {
    if (!has(key)) {
      return fallback;
    }
    const json& v = node_.at(key);
    if (!v.is_number_integer()) {
      throw ConfigError(name(key) + ": expected an integer");
    }
    return v.get<int>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) {
      return fallback;
    }
    const json& v = node_.at(key);
    if (!v.is_number_unsigned()) {
      throw ConfigError(name(key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) {
      return fallback;
    }
    if (!node_.at(key).is_boolean()) {
      throw ConfigError(name(key) + ": expected true or false");
    }
    return node_.at(key).get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) {
      return fallback;
    }
    if (!node_.at(key).is_string()) {
      throw ConfigError(name(key) + ": expected a string");
    }
    return node_.at(key).get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) {
      return fallback;
    }
    const json& v = node_.at(key);
    if (!v.is_array() || v.empty()) {
      throw ConfigError(name(key) + ": expected a non-empty array of numbers");
    }
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number() || !std::isfinite(x.get<double>())) {
        throw ConfigError(name(key) + ": expected a non-empty array of numbers");
      }
      out.push_back(x.get<double>());
    }
    return out;
  }

 private:
  const json& node_;
  std::string path_;
};

void require(bool ok, const std::string& message) {
  if (!ok) {
    throw ConfigError(message);
  }
}

const std::set<std::string> kStates{"X", "Y", "Z", "0", "1"};

ProblemConfig parse_problem(const json& node, const std::string& base_dir) {
  Section s(node, "problem", {"kind", "D", "initial", "target", "haar_seed", "params", "frame", "n_qubits", "note"});
  ProblemConfig p;
  p.kind = s.string("kind", p.kind);
  require(p.kind == "noisy_qubit" || p.kind == "nmr" || p.kind == "spin_chain",
          "problem.kind: expected noisy_qubit, nmr or spin_chain");
  if (s.has("D")) {
    p.d = s.number("D", 0.0);
    require(*p.d >= 0.0, "problem.D: must be >= 0");
  } else {
    require(p.kind == "nmr", "problem.D: required for " + p.kind);
  }
  p.initial = s.string("initial", p.initial);
  p.target = s.string("target", p.target);
  p.haar_seed = s.unsigned_integer("haar_seed", p.haar_seed);
  p.frame = s.string("frame", p.frame);
  p.n_qubits = s.integer("n_qubits", p.n_qubits);
  if (p.kind == "noisy_qubit") {
    require(kStates.contains(p.initial), "problem.initial: expected X, Y, Z, 0 or 1");
    require(kStates.contains(p.target) || p.target == "haar", "problem.target: expected X, Y, Z, 0, 1 or haar");
  } else {
    require(!s.has("initial") && !s.has("target"), "problem.initial/target: only for noisy_qubit");
  }
  if (p.kind == "nmr") {
    require(s.has("params"), "problem.params: required for nmr");
    std::filesystem::path path(s.string("params", ""));
    if (path.is_relative()) {
      path = std::filesystem::path(base_dir) / path;
    }
    p.params = path.string();
    require(p.frame == "rotating" || p.frame == "lab", "problem.frame: expected rotating or lab");
  }
  if (p.kind == "spin_chain") {
    require(p.n_qubits >= 2, "problem.n_qubits: must be >= 2");
  }
  return p;
}

std::vector<WindowStep> parse_window(const json& v) {
  if (v.is_number_integer()) {
    const int w = v.get<int>();
    require(w >= 1, "is.window: must be >= 1");
    return {{1, w}};
  }
  require(v.is_array() && !v.empty(), "is.window: expected an integer or a non-empty array of {from, w}");
  std::vector<WindowStep> steps;
  for (const auto& item : v) {
    Section s(item, "is.window[]", {"from", "w"});
    WindowStep step{s.integer("from", 1), s.integer("w", 1)};
    require(step.w >= 1, "is.window[].w: must be >= 1");
    require(steps.empty() ? step.from_iteration == 1 : step.from_iteration > steps.back().from_iteration,
            "is.window[].from: must start at 1 and increase");
    steps.push_back(step);
  }
  return steps;
}

}  // namespace

RunConfig parse_config(const json& doc, const std::string& base_dir) {
  Section root(doc, "config", {"problem", "grid", "cost", "is", "anneal", "grape", "benchmark", "robustness",
                               "transfer", "seed", "threads", "record_wall_time", "note"});
  RunConfig c;
  require(root.has("problem"), "config.problem: required");
  c.problem = parse_problem(root.at("problem"), base_dir);

  if (root.has("grid")) {
    Section s(root.at("grid"), "grid", {"T", "N_T", "K"});
    c.grid.t = s.number("T", c.grid.t);
    c.grid.n_t = s.integer("N_T", c.grid.n_t);
    c.grid.k = s.integer("K", c.grid.k);
  }
  try {
    (void)make_grid(c);
  } catch (const ValueError& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }

  if (root.has("cost")) {
    Section s(root.at("cost"), "cost", {"Q", "R", "end_cost"});
    c.cost.q = s.number("Q", c.cost.q);
    c.cost.r = s.number("R", c.cost.r);
    const std::string form = s.string("end_cost", "linear");
    require(form == "linear" || form == "logarithmic", "cost.end_cost: expected linear or logarithmic");
    c.cost.form = form == "linear" ? EndCostForm::linear : EndCostForm::logarithmic;
  }
  require(c.cost.q >= 0.0, "cost.Q: must be >= 0");
  require(c.cost.r > 0.0, "cost.R: must be > 0");

  if (root.has("is")) {
    Section s(root.at("is"), "is", {"N_traj", "n_IS", "window", "spline", "early_stop"});
    c.is.n_traj = s.integer("N_traj", c.is.n_traj);
    c.is.n_is = s.integer("n_IS", c.is.n_is);
    if (s.has("window")) {
      c.is.window = parse_window(s.at("window"));
    }
    if (s.has("spline")) {
      Section sp(s.at("spline"), "is.spline", {"knots", "every"});
      SplineConfig spline;
      spline.knots = sp.integer("knots", spline.knots);
      spline.every = sp.integer("every", spline.every);
      require(spline.knots >= 4 && spline.knots <= c.grid.k, "is.spline.knots: must lie in [4, K]");
      require(spline.every >= 1, "is.spline.every: must be >= 1");
      c.is.spline = spline;
    }
    c.is.early_stop = s.boolean("early_stop", c.is.early_stop);
  }
  require(c.is.n_traj >= 1, "is.N_traj: must be >= 1");
  require(c.is.n_is >= 1, "is.n_IS: must be >= 1");

  if (root.has("anneal")) {
    Section s(root.at("anneal"), "anneal", {"D0", "Df", "N_steps"});
    AnnealSchedule a;
    a.d0 = s.number("D0", a.d0);
    a.df = s.number("Df", a.df);
    a.n_steps = s.integer("N_steps", a.n_steps);
    a.n_is = c.is.n_is;
    try {
      a.validate();
    } catch (const ValueError& e) {
      throw ConfigError(std::string("anneal: ") + e.what());
    }
    c.anneal = a;
  }

  if (root.has("grape")) {
    Section s(root.at("grape"), "grape", {"epsilon0", "max_reductions", "max_iterations"});
    c.grape.epsilon0 = s.number("epsilon0", c.grape.epsilon0);
    c.grape.max_reductions = s.integer("max_reductions", c.grape.max_reductions);
    c.grape.max_iterations = s.integer("max_iterations", c.grape.max_iterations);
  }
  require(c.grape.epsilon0 > 0.0, "grape.epsilon0: must be > 0");
  require(c.grape.max_reductions >= 0, "grape.max_reductions: must be >= 0");
  require(c.grape.max_iterations >= 1, "grape.max_iterations: must be >= 1");

  if (root.has("benchmark")) {
    Section s(root.at("benchmark"), "benchmark", {"n_runs"});
    c.benchmark.n_runs = s.integer("n_runs", c.benchmark.n_runs);
  }
  require(c.benchmark.n_runs >= 1, "benchmark.n_runs: must be >= 1");

  if (root.has("robustness")) {
    Section s(root.at("robustness"), "robustness", {"schedule", "sigmas", "n_realizations"});
    c.robustness.schedule = s.string("schedule", "");
    if (!c.robustness.schedule.empty() && std::filesystem::path(c.robustness.schedule).is_relative()) {
      c.robustness.schedule = (std::filesystem::path(base_dir) / c.robustness.schedule).string();
    }
    c.robustness.sigmas = s.numbers("sigmas", c.robustness.sigmas);
    c.robustness.n_realizations = s.integer("n_realizations", c.robustness.n_realizations);
  }
  for (double sigma : c.robustness.sigmas) {
    require(sigma >= 0.0, "robustness.sigmas: must be >= 0");
  }
  require(c.robustness.n_realizations >= 1, "robustness.n_realizations: must be >= 1");

  if (root.has("transfer")) {
    Section s(root.at("transfer"), "transfer", {"D_values", "n_targets", "Q_values", "iterations_per_Q", "threshold"});
    c.transfer.d_values = s.numbers("D_values", c.transfer.d_values);
    c.transfer.n_targets = s.integer("n_targets", c.transfer.n_targets);
    c.transfer.q_values = s.numbers("Q_values", c.transfer.q_values);
    c.transfer.iterations_per_q = s.integer("iterations_per_Q", c.transfer.iterations_per_q);
    c.transfer.threshold = s.number("threshold", c.transfer.threshold);
  }
  for (double d : c.transfer.d_values) {
    require(d >= 0.0, "transfer.D_values: must be >= 0");
  }
  for (double q : c.transfer.q_values) {
    require(q >= 0.0, "transfer.Q_values: must be >= 0");
  }
  require(c.transfer.n_targets >= 1, "transfer.n_targets: must be >= 1");
  require(c.transfer.iterations_per_q >= 1, "transfer.iterations_per_Q: must be >= 1");

  c.seed = root.unsigned_integer("seed", c.seed);
  c.threads = root.integer("threads", c.threads);
  require(c.threads >= 0, "config.threads: must be >= 0");
  c.record_wall_time = root.boolean("record_wall_time", c.record_wall_time);
  c.echo = doc;
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(doc, std::filesystem::path(path).parent_path().string());
}

void apply_overrides(RunConfig& config, std::optional<std::uint64_t> seed, std::optional<int> threads) {
  if (seed) {
    config.seed = *seed;
    config.echo["seed"] = *seed;
  }
  if (threads) {
    if (*threads < 0) {
      throw ConfigError("--threads: must be >= 0");
    }
    config.threads = *threads;
    config.echo["threads"] = *threads;
  }
}

std::string config_hash(const RunConfig& config) {
  json canonical = config.echo;
  canonical.erase("threads");
  const std::string text = canonical.dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

TimeGrid make_grid(const RunConfig& config) { return {config.grid.t, config.grid.n_t, config.grid.k}; }

namespace {

QuantumState named_state(const std::string& name) {
  if (name == "X") {
    return axis_state(PauliAxis::x);
  }
  if (name == "Y") {
    return axis_state(PauliAxis::y);
  }
  if (name == "Z" || name == "0") {
    return QuantumState::basis(1, 0);
  }
  return QuantumState::basis(1, 1);
}

}  // namespace

ProblemBundle make_problem(const RunConfig& config, std::optional<double> d_override,
                           std::optional<QuantumState> target) {
  const ProblemConfig& p = config.problem;
  if (p.kind == "noisy_qubit") {
    const double d = d_override.value_or(*p.d);
    QuantumState goal = target ? *target
                               : (p.target == "haar" ? haar_random_state(1, p.haar_seed) : named_state(p.target));
    return build_noisy_qubit(d, config.cost.r, config.cost.q, named_state(p.initial), goal, config.cost.form);
  }
  if (p.kind == "nmr") {
    NmrParams params;
    try {
      params = NmrParams::from_json_file(p.params);
    } catch (const ValueError& e) {
      throw ConfigError(std::string("problem.params: ") + e.what());
    }
    NmrOptions options;
    options.d = d_override.value_or(p.d.value_or(1.0 / params.t1));
    options.r = config.cost.r;
    options.q = config.cost.q;
    options.horizon = config.grid.t;
    options.frame = p.frame == "lab" ? Frame::lab : Frame::rotating;
    options.form = config.cost.form;
    return build_nmr(params, options);
  }
  return build_spin_chain(p.n_qubits, d_override.value_or(*p.d), config.cost.r, config.cost.q);
}

OptimizeConfig make_optimize_config(const RunConfig& config) {
  OptimizeConfig o;
  o.n_traj = config.is.n_traj;
  o.n_iterations = config.is.n_is;
  o.window = config.is.window;
  o.spline = config.is.spline;
  o.early_stop = config.is.early_stop;
  o.threads = config.threads;
  o.seed = config.seed;
  return o;
}

}  // namespace qdc::app
