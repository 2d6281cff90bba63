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

#include <qdc/grape.hpp>

#include <qdc/error.hpp>

#include <cmath>
#include <random>
#include <string>

namespace qdc {
namespace {

constexpr Complex kI{0.0, 1.0};

std::vector<LindbladGenerator> bin_generators(const OperatorSet& problem, const ControlSchedule& schedule) {
  problem.check();
  if (schedule.n_controls() != static_cast<Eigen::Index>(problem.controls.size())) {
    throw DimensionError("grape: schedule has " + std::to_string(schedule.n_controls()) + " controls, problem has " +
                         std::to_string(problem.controls.size()));
  }
  std::vector<LindbladGenerator> out;
  out.reserve(static_cast<std::size_t>(schedule.n_bins()));
  for (int k = 0; k < schedule.n_bins(); ++k) {
    out.emplace_back(problem.hamiltonian(schedule.pulses().col(k)), problem.lindblad, problem.noise);
  }
  return out;
}

}  // namespace

ForwardBackward forward_backward(const OperatorSet& problem, const ControlSchedule& schedule,
                                 const DensityMatrix& rho0, const CMatrix& target) {
  const auto gens = bin_generators(problem, schedule);
  if (rho0.dimension() != problem.dimension() || target.rows() != problem.dimension()) {
    throw DimensionError("grape: state dimension differs from the problem");
  }
  const TimeGrid& grid = schedule.grid();
  const int m = grid.steps_per_bin();
  const double half = 0.5 * grid.dt();
  const auto n_steps = static_cast<std::size_t>(grid.n_steps());
  ForwardBackward out;
  out.rho.reserve(gens.size() + 1);
  out.rho_mid.reserve(n_steps);
  out.rho.push_back(rho0.entries());
  CMatrix state = rho0.entries();
  for (const auto& gen : gens) {
    for (int s = 0; s < m; ++s) {
      state = gen.propagate(state, half);
      out.rho_mid.push_back(state);
      state = gen.propagate(state, half);
    }
    out.rho.push_back(state);
  }
  out.lambda.resize(gens.size() + 1);
  out.lambda_mid.resize(n_steps);
  state = target;
  out.lambda.back() = state;
  for (std::size_t k = gens.size(); k-- > 0;) {
    for (int s = m; s-- > 0;) {
      state = gens[k].propagate_adjoint(state, half);
      out.lambda_mid[k * static_cast<std::size_t>(m) + static_cast<std::size_t>(s)] = state;
      state = gens[k].propagate_adjoint(state, half);
    }
    out.lambda[k] = state;
  }
  return out;
}

Eigen::MatrixXd grape_gradient(const OperatorSet& problem, const ControlSchedule& schedule,
                               const ForwardBackward& states, double q, const Eigen::MatrixXd& r) {
  const TimeGrid& grid = schedule.grid();
  if (states.rho_mid.size() != static_cast<std::size_t>(grid.n_steps()) ||
      states.lambda_mid.size() != static_cast<std::size_t>(grid.n_steps())) {
    throw DimensionError("grape gradient: states were not computed on this schedule's grid");
  }
  const auto n_c = static_cast<Eigen::Index>(problem.controls.size());
  Eigen::MatrixXd grad = r * schedule.pulses() * grid.bin_width();
  const double dt = grid.dt();
  for (int j = 0; j < grid.n_steps(); ++j) {
    const CMatrix& rho = states.rho_mid[static_cast<std::size_t>(j)];
    const CMatrix& lam = states.lambda_mid[static_cast<std::size_t>(j)];
    const int k = grid.bin_of_step(j);
    for (Eigen::Index a = 0; a < n_c; ++a) {
      const CMatrix& h = problem.controls[static_cast<std::size_t>(a)].entries();
      const Complex tr = (lam * (h * rho - rho * h)).trace();
      grad(a, k) += (kI * 0.5 * q * tr).real() * dt;
    }
  }
  return grad;
}

DensityMatrix lindblad_final_state(const OperatorSet& problem, const ControlSchedule& schedule,
                                   const DensityMatrix& rho0) {
  const auto gens = bin_generators(problem, schedule);
  CMatrix state = rho0.entries();
  const double width = schedule.grid().bin_width();
  for (const auto& gen : gens) {
    state = gen.propagate(state, width);
  }
  return DensityMatrix(std::move(state));
}

double lindblad_cost(const OperatorSet& problem, const ControlSchedule& schedule, const DensityMatrix& rho0,
                     const CostSpec& cost) {
  const DensityMatrix rho_t = lindblad_final_state(problem, schedule, rho0);
  const double f = fidelity(rho_t, cost.target);
  const Eigen::MatrixXd& u = schedule.pulses();
  const double quadratic = 0.5 * (u.transpose() * cost.r * u).trace() * schedule.grid().bin_width();
  return cost.end_cost(f).value + quadratic;
}

GrapeState grape_optimize(const OperatorSet& problem, const CostSpec& cost, const DensityMatrix& rho0,
                          const ControlSchedule& seed, const GrapeOptions& options) {
  if (!(options.epsilon0 > 0.0)) {
    throw ValueError("grape: epsilon0 must be positive");
  }
  if (options.max_reductions < 0 || options.max_iterations < 0) {
    throw ValueError("grape: limits must be non-negative");
  }
  if (cost.form != EndCostForm::linear) {
    throw ValueError("grape: only the linear end cost is supported");
  }
  const CMatrix target = cost.target.amplitudes() * cost.target.amplitudes().adjoint();
  GrapeState state{seed, options.epsilon0, 0, 0, {}};
  double current = lindblad_cost(problem, seed, rho0, cost);
  state.cost_trace.push_back(current);
  while (state.iterations < options.max_iterations) {
    const ForwardBackward fb = forward_backward(problem, state.schedule, rho0, target);
    const Eigen::MatrixXd grad = grape_gradient(problem, state.schedule, fb, cost.q, cost.r);
    if (!grad.allFinite()) {
      throw NumericalError("grape: non-finite gradient");
    }
    if (grad.cwiseAbs().maxCoeff() == 0.0) {
      break;
    }
    bool accepted = false;
    while (true) {
      const ControlSchedule trial = state.schedule.with_pulses(state.schedule.pulses() - state.epsilon * grad);
      const double c = lindblad_cost(problem, trial, rho0, cost);
      if (c < current) {
        state.schedule = trial;
        current = c;
        accepted = true;
        break;
      }
      if (state.reductions >= options.max_reductions) {
        break;
      }
      state.epsilon /= 10.0;
      ++state.reductions;
    }
    if (!accepted) {
      break;
    }
    ++state.iterations;
    state.cost_trace.push_back(current);
  }
  return state;
}

std::vector<SeedSpec> standard_seed_families() {
  std::vector<SeedSpec> out;
  for (const double mean : {0.0, 1.0, -1.0}) {
    out.push_back({SeedFamily::normal, mean, 2.0, -10, 10, 1.0});
  }
  for (const double scale : {1.0, 0.5}) {
    out.push_back({SeedFamily::uniform, 0.0, 2.0, -10, 10, scale});
  }
  return out;
}

std::vector<ControlSchedule> seed_schedules(const SeedSpec& spec, int count, Eigen::Index n_controls,
                                            const TimeGrid& grid, std::uint64_t seed) {
  if (count < 0) {
    throw ValueError("seed schedules: count must be >= 0");
  }
  if (spec.family == SeedFamily::normal && !(spec.stddev >= 0.0)) {
    throw ValueError("seed schedules: stddev must be >= 0");
  }
  if (spec.family == SeedFamily::uniform && spec.low > spec.high) {
    throw ValueError("seed schedules: need low <= high");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(spec.mean, spec.stddev);
  std::uniform_int_distribution<int> uniform(spec.low, spec.high);
  std::vector<ControlSchedule> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) {
    Eigen::MatrixXd pulses(n_controls, grid.n_bins());
    for (Eigen::Index k = 0; k < pulses.cols(); ++k) {
      for (Eigen::Index a = 0; a < pulses.rows(); ++a) {
        pulses(a, k) = spec.family == SeedFamily::normal ? normal(rng) : spec.scale * uniform(rng);
      }
    }
    out.emplace_back(std::move(pulses), grid);
  }
  return out;
}

}  // namespace qdc
