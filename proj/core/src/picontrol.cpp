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

#include <qdc/picontrol.hpp>

#include <qdc/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace qdc {

PathCost path_cost(const Trajectory& trajectory, const CostSpec& cost) {
  const EndCost end = cost.end_cost(trajectory.fidelity);
  return {end.value + trajectory.quadratic_cost + trajectory.stochastic_cost, end.clamped};
}

Weights weights_and_ess(const Eigen::VectorXd& costs, double lambda) {
  if (!(lambda > 0.0)) {
    throw ValueError("weights: lambda must be positive");
  }
  const Eigen::Index n = costs.size();
  double lowest = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::isfinite(costs(i))) {
      lowest = std::min(lowest, costs(i));
    }
  }
  if (!std::isfinite(lowest)) {
    throw NumericalError("weights: no finite path cost in the batch");
  }
  Weights out;
  out.omega.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.omega(i) = std::isfinite(costs(i)) ? std::exp(-(costs(i) - lowest) / lambda) : 0.0;
  }
  out.omega /= out.omega.sum();
  const double ess = 1.0 / (static_cast<double>(n) * out.omega.squaredNorm());
  out.ess = std::clamp(ess, 1.0 / static_cast<double>(n), 1.0);
  return out;
}

double cost_to_go_estimate(const Eigen::VectorXd& costs, double lambda) {
  if (!(lambda > 0.0)) {
    throw ValueError("cost-to-go: lambda must be positive");
  }
  if (costs.size() == 0 || !costs.allFinite()) {
    throw NumericalError("cost-to-go: costs must be finite and non-empty");
  }
  const double lowest = costs.minCoeff();
  const double mean = ((-(costs.array() - lowest) / lambda).exp()).mean();
  return lowest - lambda * std::log(mean);
}

ControlSchedule is_update_piecewise(const ControlSchedule& sampler, const TrajectoryBatch& batch) {
  if (batch.weights.size() != batch.size()) {
    throw ValueError("IS update: batch weights have not been assigned");
  }
  const Eigen::Index n_c = sampler.n_controls();
  const int k_bins = sampler.n_bins();
  Eigen::MatrixXd drive = Eigen::MatrixXd::Zero(k_bins, n_c);
  for (Eigen::Index i = 0; i < batch.size(); ++i) {
    const double w = batch.weights(i);
    if (w == 0.0) {
      continue;
    }
    const Eigen::MatrixXd& binned = batch.binned_noise[static_cast<std::size_t>(i)];
    if (binned.rows() != k_bins || binned.cols() != n_c) {
      throw DimensionError("IS update: binned noise does not match the schedule");
    }
    drive.noalias() += w * binned;
  }
  return sampler.with_pulses(sampler.pulses() + drive.transpose() / sampler.grid().bin_width());
}

Eigen::MatrixXd is_update_basis(const Eigen::MatrixXd& coefficients, const TrajectoryBatch& batch,
                                std::optional<double> ridge) {
  if (!batch.basis) {
    throw ValueError("basis update: batch carries no basis statistics");
  }
  if (batch.weights.size() != batch.size()) {
    throw ValueError("basis update: batch weights have not been assigned");
  }
  const auto& stats = *batch.basis;
  const Eigen::Index n_b = coefficients.cols();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n_b, n_b);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(coefficients.rows(), n_b);
  for (Eigen::Index i = 0; i < batch.size(); ++i) {
    b.noalias() += batch.weights(i) * stats.gram[static_cast<std::size_t>(i)];
    c.noalias() += batch.weights(i) * stats.drive[static_cast<std::size_t>(i)];
  }
  const double reg = ridge.value_or(1e-8 * b.trace() / static_cast<double>(n_b));
  if (!(reg >= 0.0)) {
    throw ValueError("basis update: ridge must be >= 0");
  }
  b.diagonal().array() += reg;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
  const auto& s = svd.singularValues();
  const double cond = s(s.size() - 1) > 0.0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e12)) {
    throw NumericalError("basis update: B + ridge I has condition number " + std::to_string(cond) +
                         "; increase the ridge or use fewer basis functions");
  }
  const Eigen::MatrixXd solved = b.ldlt().solve(c.transpose());
  return coefficients + solved.transpose();
}

Eigen::MatrixXd smooth_window(const std::deque<Eigen::MatrixXd>& history, int w) {
  if (history.empty()) {
    throw ValueError("smooth_window: history is empty");
  }
  if (w < 1) {
    throw ValueError("smooth_window: w must be >= 1");
  }
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(w), history.size());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(history.back().rows(), history.back().cols());
  for (std::size_t i = history.size() - take; i < history.size(); ++i) {
    sum += history[i];
  }
  return sum / static_cast<double>(take);
}

ControlSchedule smooth_window(std::span<const ControlSchedule> history, int w) {
  if (history.empty()) {
    throw ValueError("smooth_window: history is empty");
  }
  std::deque<Eigen::MatrixXd> pulses;
  for (const auto& s : history) {
    pulses.push_back(s.pulses());
  }
  return history.back().with_pulses(smooth_window(pulses, w));
}

void AnnealSchedule::validate() const {
  if (!(df > 0.0) || !(d0 >= df) || !std::isfinite(d0)) {
    throw ValueError("anneal: need D0 >= Df > 0");
  }
  if (n_steps < 1) {
    throw ValueError("anneal: N_steps must be >= 1");
  }
  if (n_is < 1) {
    throw ValueError("anneal: n_IS must be >= 1");
  }
}

double anneal_value(int i, const AnnealSchedule& schedule) {
  schedule.validate();
  if (i < 1 || i > schedule.n_steps) {
    throw ValueError("anneal: interval index " + std::to_string(i) + " outside [1, " +
                     std::to_string(schedule.n_steps) + "]");
  }
  if (schedule.n_steps == 1) {
    return schedule.d0;
  }
  if (i == schedule.n_steps) {
    return schedule.df;
  }
  const double frac = static_cast<double>(i - 1) / static_cast<double>(schedule.n_steps - 1);
  return schedule.d0 * std::pow(schedule.df / schedule.d0, frac);
}

int anneal_interval(int p, const AnnealSchedule& schedule) {
  const long long scaled = static_cast<long long>(p) * schedule.n_steps / schedule.n_is;
  return std::clamp(static_cast<int>(scaled) + 1, 1, schedule.n_steps);
}

double fluence(const ControlSchedule& schedule) {
  return schedule.pulses().squaredNorm() * schedule.grid().bin_width();
}

double quadratic_cost(const ControlSchedule& schedule, const Eigen::MatrixXd& r) {
  const Eigen::MatrixXd& u = schedule.pulses();
  return 0.5 * (u.transpose() * r * u).trace() * schedule.grid().bin_width();
}

double robustness_probe(const ControlSchedule& schedule, double sigma, const CostEvaluator& evaluate,
                        std::uint64_t seed, int n_realizations) {
  if (!(sigma >= 0.0)) {
    throw ValueError("robustness: sigma must be >= 0");
  }
  if (n_realizations < 1) {
    throw ValueError("robustness: need at least one realization");
  }
  const double base = evaluate(schedule);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < n_realizations; ++r) {
    Eigen::MatrixXd xi(schedule.n_controls(), schedule.n_bins());
    for (Eigen::Index k = 0; k < xi.cols(); ++k) {
      for (Eigen::Index a = 0; a < xi.rows(); ++a) {
        xi(a, k) = normal(rng);
      }
    }
    if (sigma == 0.0) {
      worst = std::max(worst, 0.0);
      continue;
    }
    worst = std::max(worst, evaluate(schedule.with_pulses(schedule.pulses() + sigma * xi)) - base);
  }
  return worst;
}

int window_at(const std::vector<WindowStep>& steps, int p) {
  int w = 1;
  int from = std::numeric_limits<int>::min();
  for (const auto& s : steps) {
    if (s.w < 1) {
      throw ValueError("window: w must be >= 1");
    }
    if (s.from_iteration <= p && s.from_iteration >= from) {
      w = s.w;
      from = s.from_iteration;
    }
  }
  return w;
}

namespace {

bool ess_plateau(const std::vector<IterationRecord>& trace) {
  constexpr std::size_t kSpan = 50;
  constexpr std::size_t kAvg = 10;
  if (trace.size() < kSpan + kAvg) {
    return false;
  }
  auto mean_ess = [&](std::size_t end) {
    double s = 0.0;
    for (std::size_t i = end - kAvg; i < end; ++i) {
      s += trace[i].ess;
    }
    return s / kAvg;
  };
  const double now = mean_ess(trace.size());
  const double before = mean_ess(trace.size() - kSpan);
  return std::abs(now - before) < 1e-3 * std::abs(before);
}

}  // namespace

OptimizeResult optimize(const ControlProblem& problem, const CostSpec& cost, const TimeGrid& grid,
                        const OptimizeConfig& config) {
  problem.check();
  cost.validate();
  if (config.n_traj < 1 || config.n_iterations < 1) {
    throw ValueError("optimize: N_traj and n_IS must be >= 1");
  }
  if (cost.r.rows() != problem.n_controls()) {
    throw DimensionError("optimize: R does not match the number of controls");
  }
  const NoiseMatrix& base_noise = problem.unraveling.d_tilde();
  const double base_level = base_noise.entries().diagonal().mean();
  if (config.anneal) {
    config.anneal->validate();
    if (!(base_level > 0.0)) {
      throw ValueError("optimize: annealing needs a non-zero noise shape");
    }
  }
  pi_lambda(cost.r, base_noise);
  if (config.spline && (config.spline->every < 1)) {
    throw ValueError("optimize: spline cadence must be >= 1");
  }

  const ControlSchedule start = config.initial.value_or(ControlSchedule::zeros(problem.n_controls(), grid));
  if (start.n_controls() != problem.n_controls() || !(start.grid() == grid)) {
    throw DimensionError("optimize: initial schedule does not match the problem and grid");
  }
  int max_w = 1;
  for (const auto& s : config.window) {
    max_w = std::max(max_w, s.w);
  }

  OptimizeResult result{ISRun{}, start};
  ISRun& run = result.run;
  run.seed = config.seed;
  run.history.push_back(start.pulses());
  ControlSchedule sampler = start;

  for (int p = 1; p <= config.n_iterations; ++p) {
    NoiseMatrix noise = base_noise;
    if (config.anneal) {
      run.anneal_interval = anneal_interval(p - 1, *config.anneal);
      noise = base_noise.scaled(anneal_value(run.anneal_interval, *config.anneal) / base_level);
    }
    const double lambda = pi_lambda(cost.r, noise);
    const ControlProblem sampling = config.anneal ? problem.with_noise(noise) : problem;

    TrajectoryBatch batch = simulate_batch(sampling, sampler, cost,
                                           {config.n_traj, config.seed, static_cast<std::uint64_t>(p), config.threads});
    if (!batch.fidelities.allFinite() || !batch.costs.allFinite()) {
      throw NumericalError("optimize: non-finite trajectory at IS iteration " + std::to_string(p), p);
    }
    Weights w;
    try {
      w = weights_and_ess(batch.costs, lambda);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " at IS iteration " + std::to_string(p), p);
    }
    batch.weights = w.omega;
    ControlSchedule next = is_update_piecewise(sampler, batch);

    IterationRecord rec;
    rec.p = p;
    rec.f_avg = batch.fidelities.mean();
    rec.f_min = batch.fidelities.minCoeff();
    rec.cost = batch.end_costs.mean() + quadratic_cost(sampler, cost.r);
    rec.ess = w.ess;
    rec.d_tilde = noise.entries().diagonal().mean();
    rec.lambda = lambda;
    rec.clamped = batch.clamped;
    if (!std::isfinite(rec.cost) || !std::isfinite(rec.ess) || !next.pulses().allFinite()) {
      throw NumericalError("optimize: non-finite metric at IS iteration " + std::to_string(p), p);
    }
    run.clamped_total += batch.clamped;
    run.trace.push_back(rec);
    if (config.on_iteration) {
      config.on_iteration(rec);
    }

    run.history.push_back(next.pulses());
    while (static_cast<int>(run.history.size()) > max_w) {
      run.history.pop_front();
    }
    sampler = sampler.with_pulses(smooth_window(run.history, window_at(config.window, p + 1)));
    if (config.spline && p % config.spline->every == 0) {
      sampler = spline_smooth(sampler, config.spline->knots);
    }

    if ((config.stop && config.stop(rec)) || (config.early_stop && ess_plateau(run.trace))) {
      run.stopped_early = p < config.n_iterations;
      break;
    }
  }
  result.schedule = sampler;
  return result;
}

}  // namespace qdc
