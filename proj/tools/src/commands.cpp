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

#include <qdc_app/experiments.hpp>
#include <qdc_app/output.hpp>

#include <qdc/error.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <ostream>

#ifndef QDC_VERSION
#define QDC_VERSION "unknown"
#endif

namespace qdc::app {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& file) { return (fs::path(dir) / file).string(); }

json design_flags() {
  return {{"renormalize_every_step", true},
          {"noise_streams", "splitmix64(seed, iteration, trajectory) -> mt19937_64"},
          {"smoothing", "window over raw iterates; next batch sampled under the smoothed schedule"},
          {"anneal_lambda", "R fixed, lambda recomputed per interval"},
          {"log_clamp", kLogClamp},
          {"lindblad_propagation", "exact per-bin exponential"},
          {"metric_C", "mean end cost + quadratic cost of the sampler"}};
}

json manifest(const RunConfig& config, const std::string& verb, const std::vector<std::string>& outputs,
              json results) {
  return {{"tool", "qdc"},
          {"version", QDC_VERSION},
          {"verb", verb},
          {"config_hash", config_hash(config)},
          {"config", config.echo},
          {"design", design_flags()},
          {"outputs", outputs},
          {"results", std::move(results)}};
}

void prepare(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory " + out_dir + ": " + ec.message());
  }
}

struct RunOutput {
  OptimizeResult result;
  std::vector<double> seconds;
};

RunOutput run_optimizer(const RunConfig& config, const ProblemBundle& bundle, OptimizeConfig o) {
  std::vector<double> seconds;
  const auto start = std::chrono::steady_clock::now();
  if (config.record_wall_time) {
    o.on_iteration = [&](const IterationRecord&) {
      seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    };
  }
  OptimizeResult result = optimize(bundle.control, bundle.cost, make_grid(config), o);
  return {std::move(result), std::move(seconds)};
}

json run_results(const ProblemBundle& bundle, const OptimizeResult& result) {
  const IterationRecord& last = result.run.trace.back();
  json r = {{"iterations", result.run.trace.size()},
            {"F_avg", last.f_avg},
            {"F_min", last.f_min},
            {"C", last.cost},
            {"ESS", last.ess},
            {"D_tilde", last.d_tilde},
            {"lambda", last.lambda},
            {"stopped_early", result.run.stopped_early},
            {"clamped_total", result.run.clamped_total},
            {"fluence", fluence(result.schedule)}};
  if (bundle.lindblad) {
    const ScheduleMetrics m = lindblad_metrics(bundle, result.schedule);
    r["lindblad_C"] = m.cost;
    r["lindblad_F"] = m.fidelity;
  }
  return r;
}

void write_benchmark(const RunConfig& config, const std::string& out_dir, const std::vector<BenchmarkRow>& rows,
                     const std::vector<std::string>& methods) {
  const std::string hash = config_hash(config);
  CsvTable table(hash, {"run", "method", "family", "C", "F", "U", "iterations"});
  for (const auto& r : rows) {
    table.add_row({std::to_string(r.run), r.method, r.family, format_number(r.cost), format_number(r.fidelity),
                   format_number(r.fluence), std::to_string(r.iterations)});
  }
  table.write(join(out_dir, "benchmark.csv"));
  CsvTable summary(hash, {"method", "n", "mean_C", "std_C", "min_C"});
  for (const auto& method : methods) {
    const Summary s = summarize(rows, method);
    summary.add_row({method, std::to_string(s.n), format_number(s.mean), format_number(s.stddev),
                     format_number(s.min)});
  }
  summary.write(join(out_dir, "benchmark_summary.csv"));
}

}  // namespace

void cmd_optimize(const RunConfig& config, const std::string& out_dir) {
  if (config.anneal) {
    throw ConfigError("optimize: config has an anneal block; use the anneal verb");
  }
  prepare(out_dir);
  const ProblemBundle bundle = make_problem(config);
  const RunOutput run = run_optimizer(config, bundle, make_optimize_config(config));
  const std::string hash = config_hash(config);
  metrics_table(hash, run.result.run.trace, run.seconds).write(join(out_dir, "metrics.csv"));
  write_json(join(out_dir, "schedule.json"), schedule_to_json(run.result.schedule, bundle.frame, hash));
  write_json(join(out_dir, "manifest.json"), manifest(config, "optimize", {"metrics.csv", "schedule.json"},
                                                      run_results(bundle, run.result)));
}

void cmd_anneal(const RunConfig& config, const std::string& out_dir) {
  if (!config.anneal) {
    throw ConfigError("anneal: config needs an anneal block");
  }
  prepare(out_dir);
  const ProblemBundle bundle = make_problem(config);
  OptimizeConfig o = make_optimize_config(config);
  o.anneal = config.anneal;
  const RunOutput run = run_optimizer(config, bundle, o);
  const std::string hash = config_hash(config);
  const auto& trace = run.result.run.trace;
  metrics_table(hash, trace, run.seconds).write(join(out_dir, "metrics.csv"));
  CsvTable staircase(hash, {"interval", "first_p", "D_tilde", "lambda"});
  int interval = 0;
  for (const auto& r : trace) {
    const int i = anneal_interval(r.p - 1, *config.anneal);
    if (i != interval) {
      interval = i;
      staircase.add_row({std::to_string(i), std::to_string(r.p), format_number(r.d_tilde), format_number(r.lambda)});
    }
  }
  staircase.write(join(out_dir, "anneal.csv"));
  write_json(join(out_dir, "schedule.json"), schedule_to_json(run.result.schedule, bundle.frame, hash));
  json results = run_results(bundle, run.result);
  results["F_closed"] = unitary_transfer_eval(bundle, run.result.schedule);
  results["anneal_intervals"] = interval;
  write_json(join(out_dir, "manifest.json"),
             manifest(config, "anneal", {"metrics.csv", "anneal.csv", "schedule.json"}, results));
}

void cmd_grape(const RunConfig& config, const std::string& out_dir) {
  prepare(out_dir);
  const ProblemBundle bundle = make_problem(config);
  const TimeGrid grid = make_grid(config);
  std::vector<BenchmarkRow> rows;
  const auto seeds = benchmark_seeds(config.benchmark.n_runs, bundle.control.n_controls(), grid, config.seed);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    rows.push_back(run_grape(bundle, seeds[i], config.grape, static_cast<int>(i)));
  }
  write_benchmark(config, out_dir, rows, {"grape"});
  const auto best = std::min_element(rows.begin(), rows.end(),
                                     [](const BenchmarkRow& a, const BenchmarkRow& b) { return a.cost < b.cost; });
  const std::string hash = config_hash(config);
  write_json(join(out_dir, "schedule.json"), schedule_to_json(*best->schedule, bundle.frame, hash));
  const Summary s = summarize(rows, "grape");
  write_json(join(out_dir, "manifest.json"),
             manifest(config, "grape", {"benchmark.csv", "benchmark_summary.csv", "schedule.json"},
                      {{"best_run", best->run}, {"best_C", best->cost}, {"mean_C", s.mean}, {"std_C", s.stddev}}));
}

void cmd_benchmark(const RunConfig& config, const std::string& out_dir) {
  prepare(out_dir);
  const ProblemBundle bundle = make_problem(config);
  const TimeGrid grid = make_grid(config);
  const OptimizeConfig o = make_optimize_config(config);
  std::vector<BenchmarkRow> rows;
  const auto seeds = benchmark_seeds(config.benchmark.n_runs, bundle.control.n_controls(), grid, config.seed);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    rows.push_back(run_grape(bundle, seeds[i], config.grape, static_cast<int>(i)));
    rows.push_back(run_qdc(bundle, grid, o, seeds[i], static_cast<int>(i)));
  }
  write_benchmark(config, out_dir, rows, {"grape", "qdc"});
  json results = json::object();
  for (const std::string method : {"grape", "qdc"}) {
    const Summary s = summarize(rows, method);
    results[method] = {{"n", s.n}, {"mean_C", s.mean}, {"std_C", s.stddev}, {"min_C", s.min}};
  }
  write_json(join(out_dir, "manifest.json"),
             manifest(config, "benchmark", {"benchmark.csv", "benchmark_summary.csv"}, results));
}

void cmd_robustness(const RunConfig& config, const std::string& out_dir) {
  if (config.robustness.schedule.empty()) {
    throw ConfigError("robustness.schedule: required");
  }
  prepare(out_dir);
  const ProblemBundle bundle = make_problem(config);
  const LoadedSchedule loaded = load_schedule(config.robustness.schedule);
  if (!(loaded.schedule.grid() == make_grid(config))) {
    throw ConfigError("robustness: schedule grid does not match the config grid");
  }
  if (loaded.frame != bundle.frame) {
    throw ConfigError("robustness: schedule frame does not match the problem frame");
  }
  if (loaded.schedule.n_controls() != bundle.control.n_controls()) {
    throw ConfigError("robustness: schedule has the wrong number of control channels");
  }
  const CostEvaluator evaluate = [&](const ControlSchedule& s) { return lindblad_metrics(bundle, s).cost; };
  const std::string hash = config_hash(config);
  CsvTable table(hash, {"sigma", "max_delta_C"});
  json results = json::array();
  for (std::size_t i = 0; i < config.robustness.sigmas.size(); ++i) {
    const double sigma = config.robustness.sigmas[i];
    const double delta = robustness_probe(loaded.schedule, sigma, evaluate,
                                          stream_seed({config.seed, 0x40bULL, i}), config.robustness.n_realizations);
    table.add_row({format_number(sigma), format_number(delta)});
    results.push_back({{"sigma", sigma}, {"max_delta_C", delta}});
  }
  table.write(join(out_dir, "robustness.csv"));
  write_json(join(out_dir, "manifest.json"),
             manifest(config, "robustness", {"robustness.csv"},
                      {{"C", evaluate(loaded.schedule)}, {"probes", results}}));
}

void cmd_transfer(const RunConfig& config, const std::string& out_dir) {
  if (config.problem.kind != "noisy_qubit") {
    throw ConfigError("transfer: only the noisy_qubit problem is supported");
  }
  prepare(out_dir);
  const bool haar = config.problem.target == "haar";
  const int n_targets = haar ? config.transfer.n_targets : 1;
  const std::string hash = config_hash(config);
  CsvTable table(hash, {"target", "D", "Q", "iterations", "F_open", "F_closed"});
  json results = json::array();
  for (double d : config.transfer.d_values) {
    int passed = 0;
    for (int t = 0; t < n_targets; ++t) {
      const QuantumState target = haar ? transfer_target(config.seed, t) : make_problem(config).cost.target;
      const TransferRow row = transfer_one(config, target, d, t);
      passed += row.f_closed >= config.transfer.threshold;
      table.add_row({std::to_string(row.target), format_number(row.d), format_number(row.q),
                     std::to_string(row.iterations), format_number(row.f_open), format_number(row.f_closed)});
    }
    results.push_back({{"D", d}, {"targets", n_targets}, {"F_closed_above_threshold", passed}});
  }
  table.write(join(out_dir, "transfer.csv"));
  write_json(join(out_dir, "manifest.json"), manifest(config, "transfer", {"transfer.csv"}, results));
}

int run_command(const std::string& verb, const std::string& config_path, std::optional<std::uint64_t> seed,
                std::optional<int> threads, const std::string& out_dir, std::ostream& err) {
  try {
    RunConfig config = load_config(config_path);
    apply_overrides(config, seed, threads);
    if (verb == "optimize") {
      cmd_optimize(config, out_dir);
    } else if (verb == "anneal") {
      cmd_anneal(config, out_dir);
    } else if (verb == "grape") {
      cmd_grape(config, out_dir);
    } else if (verb == "benchmark") {
      cmd_benchmark(config, out_dir);
    } else if (verb == "robustness") {
      cmd_robustness(config, out_dir);
    } else if (verb == "transfer") {
      cmd_transfer(config, out_dir);
    } else {
      err << "error: unknown verb '" << verb << "'\n";
      return kExitConfig;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical abort";
    if (e.iteration()) {
      err << " at iteration " << *e.iteration();
    }
    err << ": " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ValueError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace qdc::app
