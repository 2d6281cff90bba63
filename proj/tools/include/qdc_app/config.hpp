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

#ifndef QDC_APP_CONFIG_HPP
#define QDC_APP_CONFIG_HPP

#include <qdc/cost.hpp>
#include <qdc/grape.hpp>
#include <qdc/picontrol.hpp>
#include <qdc/problems.hpp>
#include <qdc/schedule.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdc::app {

/// Schema violation in a run configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ProblemConfig {
  std::string kind = "noisy_qubit";  ///< noisy_qubit | nmr | spin_chain
  std::optional<double> d;           ///< noise rate; required except for nmr (defaults to 1 / T1)
  std::string initial = "X";
  std::string target = "Y";          ///< X | Y | Z | 0 | 1 | haar
  std::uint64_t haar_seed = 0;
  std::string params;                ///< NMR parameter file
  std::string frame = "rotating";
  int n_qubits = 2;
};

struct GridConfig {
  double t = 1.0;
  int n_t = 128;
  int k = 128;
};

struct CostConfig {
  double q = 10.0;
  double r = 1.0;
  EndCostForm form = EndCostForm::linear;
};

struct IsConfig {
  int n_traj = 400;
  int n_is = 1000;
  std::vector<WindowStep> window{{1, 1}};
  std::optional<SplineConfig> spline;
  bool early_stop = false;
};

struct BenchmarkConfig {
  int n_runs = 50;
};

struct RobustnessConfig {
  std::string schedule;
  std::vector<double> sigmas{0.0, 0.01, 0.02, 0.05, 0.1, 0.2};
  int n_realizations = 20;
};

struct TransferConfig {
  std::vector<double> d_values{0.1};
  int n_targets = 20;
  std::vector<double> q_values{5.0, 50.0, 100.0};
  int iterations_per_q = 300;
  double threshold = 0.98;
};

struct RunConfig {
  ProblemConfig problem;
  GridConfig grid;
  CostConfig cost;
  IsConfig is;
  std::optional<AnnealSchedule> anneal;
  GrapeOptions grape;
  BenchmarkConfig benchmark;
  RobustnessConfig robustness;
  TransferConfig transfer;
  std::uint64_t seed = 0;
  int threads = 0;
  bool record_wall_time = false;
  /// Effective configuration (input plus command-line overrides) echoed into manifests.
  nlohmann::json echo;
};

/// Parses and validates a configuration document. Unknown keys, wrong types and out-of-range values
/// throw ConfigError. `base_dir` resolves relative file paths.
RunConfig parse_config(const nlohmann::json& doc, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// Applies command-line overrides and refreshes the echo.
void apply_overrides(RunConfig& config, std::optional<std::uint64_t> seed, std::optional<int> threads);

/// SHA-256 (hex) of the canonical echo without the `threads` key.
std::string config_hash(const RunConfig& config);

TimeGrid make_grid(const RunConfig& config);

/// Builds the problem bundle; `d_override` replaces the problem's noise rate and `target` the target
/// state (noisy qubit only).
ProblemBundle make_problem(const RunConfig& config, std::optional<double> d_override = std::nullopt,
                           std::optional<QuantumState> target = std::nullopt);

OptimizeConfig make_optimize_config(const RunConfig& config);

}  // namespace qdc::app

#endif
