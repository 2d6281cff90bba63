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

#include <qdc_app/commands.hpp>

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"qdc: open-system quantum optimal control by path-integral diffusion"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;

  const std::vector<std::pair<std::string, std::string>> verbs{
      {"optimize", "Run importance-sampling optimization"},
      {"anneal", "Run optimization with an annealed noise level"},
      {"grape", "Run Open GRAPE from random seed schedules"},
      {"benchmark", "Run GRAPE and the sampler from the same seed schedules"},
      {"robustness", "Probe a stored schedule under random pulse perturbations"},
      {"transfer", "Evaluate open-system solutions on the closed system"}};
  for (const auto& [name, help] : verbs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override the configured seed");
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--threads", threads, "Worker threads (0 = runtime default)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qdc::app::kExitConfig;
  }
  const std::string verb = app.get_subcommands().front()->get_name();
  return qdc::app::run_command(verb, config_path, seed, threads, out_dir, std::cerr);
}
