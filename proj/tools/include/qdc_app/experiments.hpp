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

#ifndef QDC_APP_EXPERIMENTS_HPP
#define QDC_APP_EXPERIMENTS_HPP

#include <qdc_app/config.hpp>

#include <string>
#include <vector>

namespace qdc::app {

/// Deterministic figures of merit of a schedule under the problem's Lindblad model.
struct ScheduleMetrics {
  double cost = 0.0;
  double fidelity = 0.0;
  double fluence = 0.0;
};

ScheduleMetrics lindblad_metrics(const ProblemBundle& bundle, const ControlSchedule& schedule);

struct SeedSchedule {
  std::string family;
  ControlSchedule schedule;
};

/// Run i draws one schedule from standard family i mod 5 on its own stream.
std::vector<SeedSchedule> benchmark_seeds(int n_runs, Eigen::Index n_controls, const TimeGrid& grid,
                                          std::uint64_t seed);

std::string family_name(const SeedSpec& spec);

struct BenchmarkRow {
  int run = 0;
  std::string method;
  std::string family;
  double cost = 0.0;
  double fidelity = 0.0;
  double fluence = 0.0;
  int iterations = 0;
  std::optional<ControlSchedule> schedule;
};

BenchmarkRow run_grape(const ProblemBundle& bundle, const SeedSchedule& seed, const GrapeOptions& options, int run);

/// QDC started from the seed schedule; noise streams keyed by (seed, run).
BenchmarkRow run_qdc(const ProblemBundle& bundle, const TimeGrid& grid, const OptimizeConfig& config,
                     const SeedSchedule& seed, int run);

struct Summary {
  std::string method;
  int n = 0;
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation (n - 1)
  double min = 0.0;
};

Summary summarize(const std::vector<BenchmarkRow>& rows, const std::string& method);

struct TransferRow {
  int target = 0;
  double d = 0.0;
  double q = 0.0;
  int iterations = 0;
  double f_open = 0.0;
  double f_closed = 0.0;
};

/// Trains on the noisy qubit at rate d towards `target`, raising Q through transfer.Q_values until
/// F_avg exceeds the threshold (or the values run out), then evaluates the closed-system fidelity.
TransferRow transfer_one(const RunConfig& config, const QuantumState& target, double d, int target_index);

/// Haar target i of a transfer run.
QuantumState transfer_target(std::uint64_t seed, int index);

}  // namespace qdc::app

#endif
