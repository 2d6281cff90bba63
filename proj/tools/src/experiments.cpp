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

#include <qdc_app/experiments.hpp>

#include <qdc/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace qdc::app {

ScheduleMetrics lindblad_metrics(const ProblemBundle& bundle, const ControlSchedule& schedule) {
  if (!bundle.lindblad) {
    throw ConfigError(bundle.name + ": register too large for deterministic Lindblad evaluation");
  }
  const DensityMatrix rho0 = DensityMatrix::pure(bundle.control.initial);
  ScheduleMetrics m;
  m.cost = lindblad_cost(*bundle.lindblad, schedule, rho0, bundle.cost);
  m.fidelity = fidelity(lindblad_final_state(*bundle.lindblad, schedule, rho0), bundle.cost.target);
  m.fluence = fluence(schedule);
  return m;
}

std::string family_name(const SeedSpec& spec) {
  char buf[64];
  if (spec.family == SeedFamily::normal) {
    std::snprintf(buf, sizeof buf, "normal(%g,%g)", spec.mean, spec.stddev);
  } else {
    std::snprintf(buf, sizeof buf, "uniform[%d,%d]x%g", spec.low, spec.high, spec.scale);
  }
  return buf;
}

std::vector<SeedSchedule> benchmark_seeds(int n_runs, Eigen::Index n_controls, const TimeGrid& grid,
                                          std::uint64_t seed) {
  const auto families = standard_seed_families();
  std::vector<SeedSchedule> out;
  out.reserve(static_cast<std::size_t>(n_runs));
  for (int i = 0; i < n_runs; ++i) {
    const SeedSpec& spec = families[static_cast<std::size_t>(i) % families.size()];
    const std::uint64_t stream = stream_seed({seed, 0x5eedULL, static_cast<std::uint64_t>(i)});
    out.push_back({family_name(spec), seed_schedules(spec, 1, n_controls, grid, stream).front()});
  }
  return out;
}

BenchmarkRow run_grape(const ProblemBundle& bundle, const SeedSchedule& seed, const GrapeOptions& options, int run) {
  if (!bundle.lindblad) {
    throw ConfigError(bundle.name + ": GRAPE needs the Lindblad model");
  }
  const GrapeState state =
      grape_optimize(*bundle.lindblad, bundle.cost, DensityMatrix::pure(bundle.control.initial), seed.schedule, options);
  const ScheduleMetrics m = lindblad_metrics(bundle, state.schedule);
  return {run, "grape", seed.family, m.cost, m.fidelity, m.fluence, state.iterations, state.schedule};
}

BenchmarkRow run_qdc(const ProblemBundle& bundle, const TimeGrid& grid, const OptimizeConfig& config,
                     const SeedSchedule& seed, int run) {
  OptimizeConfig c = config;
  c.initial = seed.schedule;
  c.seed = stream_seed({config.seed, 0x9dcULL, static_cast<std::uint64_t>(run)});
  const OptimizeResult result = optimize(bundle.control, bundle.cost, grid, c);
  const ScheduleMetrics m = lindblad_metrics(bundle, result.schedule);
  return {run, "qdc", seed.family, m.cost, m.fidelity, m.fluence, static_cast<int>(result.run.trace.size()),
          result.schedule};
}

Summary summarize(const std::vector<BenchmarkRow>& rows, const std::string& method) {
  Summary s;
  s.method = method;
  double sum = 0.0;
  double sq = 0.0;
  s.min = INFINITY;
  for (const auto& row : rows) {
    if (row.method != method) {
      continue;
    }
    ++s.n;
    sum += row.cost;
    sq += row.cost * row.cost;
    s.min = std::min(s.min, row.cost);
  }
  if (s.n == 0) {
    s.min = NAN;
    s.mean = NAN;
    s.stddev = NAN;
    return s;
  }
  s.mean = sum / s.n;
  s.stddev = s.n > 1 ? std::sqrt(std::max(0.0, (sq - s.n * s.mean * s.mean) / (s.n - 1))) : 0.0;
  return s;
}

QuantumState transfer_target(std::uint64_t seed, int index) {
  return haar_random_state(1, stream_seed({seed, 0x4aa7ULL, static_cast<std::uint64_t>(index)}));
}

TransferRow transfer_one(const RunConfig& config, const QuantumState& target, double d, int target_index) {
  if (config.problem.kind != "noisy_qubit") {
    throw ConfigError("transfer: only the noisy_qubit problem is supported");
  }
  const TimeGrid grid = make_grid(config);
  TransferRow row;
  row.target = target_index;
  row.d = d;
  std::optional<ControlSchedule> warm;
  RunConfig staged = config;
  for (double q : config.transfer.q_values) {
    staged.cost.q = q;
    const ProblemBundle bundle = make_problem(staged, d, target);
    OptimizeConfig o = make_optimize_config(staged);
    o.n_iterations = config.transfer.iterations_per_q;
    o.seed = stream_seed({config.seed, 0x7eaULL, static_cast<std::uint64_t>(target_index)});
    o.initial = warm;
    const double threshold = config.transfer.threshold;
    o.stop = [threshold](const IterationRecord& r) { return r.f_avg > threshold; };
    const OptimizeResult result = optimize(bundle.control, bundle.cost, grid, o);
    warm = result.schedule;
    row.q = q;
    row.iterations += static_cast<int>(result.run.trace.size());
    row.f_open = result.run.trace.back().f_avg;
    row.f_closed = unitary_transfer_eval(bundle, *warm);
    if (row.f_open > threshold) {
      break;
    }
  }
  return row;
}

}  // namespace qdc::app
