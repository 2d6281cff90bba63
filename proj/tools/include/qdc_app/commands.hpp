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

#ifndef QDC_APP_COMMANDS_HPP
#define QDC_APP_COMMANDS_HPP

#include <qdc_app/config.hpp>

#include <iosfwd>
#include <string>

namespace qdc::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// optimize: metrics.csv, schedule.json, manifest.json.
void cmd_optimize(const RunConfig& config, const std::string& out_dir);
/// anneal: as optimize plus anneal.csv; the manifest reports F_closed.
void cmd_anneal(const RunConfig& config, const std::string& out_dir);
/// grape: GRAPE from benchmark.n_runs seeds; benchmark.csv, benchmark_summary.csv, schedule.json (best run).
void cmd_grape(const RunConfig& config, const std::string& out_dir);
/// benchmark: GRAPE and QDC from the same seeds; benchmark.csv, benchmark_summary.csv.
void cmd_benchmark(const RunConfig& config, const std::string& out_dir);
/// robustness: robustness.csv of (sigma, max_delta_C) for robustness.schedule.
void cmd_robustness(const RunConfig& config, const std::string& out_dir);
/// transfer: transfer.csv of closed-system fidelities of open-system solutions.
void cmd_transfer(const RunConfig& config, const std::string& out_dir);

/// Loads the config, applies overrides, dispatches the verb and maps errors to exit codes.
int run_command(const std::string& verb, const std::string& config_path, std::optional<std::uint64_t> seed,
                std::optional<int> threads, const std::string& out_dir, std::ostream& err);

}  // namespace qdc::app

#endif
