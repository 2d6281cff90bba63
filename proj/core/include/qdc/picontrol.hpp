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

#ifndef QDC_PICONTROL_HPP
#define QDC_PICONTROL_HPP

#include <qdc/basis.hpp>
#include <qdc/cost.hpp>
#include <qdc/schedule.hpp>
#include <qdc/sse.hpp>

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

/**
 * \file
 * \brief Path-integral weights, adaptive importance-sampling updates, smoothing,
 * annealing and the outer optimization loop.
 */

namespace qdc {

struct PathCost {
  double value = 0.0;
  bool clamped = false;
};

/// S = Phi(psi_T) + quadratic + stochastic.
PathCost path_cost(const Trajectory& trajectory, const CostSpec& cost);

struct Weights {
  Eigen::VectorXd omega;  ///< normalized, sums to 1
  double ess = 0.0;       ///< 1 / (N sum omega^2), in [1/N, 1]
};

/// Softmax of -S/lambda via log-sum-exp. Non-finite costs get zero weight.
/// Throws ValueError if lambda <= 0 and NumericalError if no cost is finite.
Weights weights_and_ess(const Eigen::VectorXd& costs, double lambda);

/// -lambda log mean exp(-S/lambda).
double cost_to_go_estimate(const Eigen::VectorXd& costs, double lambda);

/// A_k + sum_i omega_i dW_ik / dtau_k for every bin; `batch.weights` must be set.
ControlSchedule is_update_piecewise(const ControlSchedule& sampler, const TrajectoryBatch& batch);

/// A + C (B + ridge I)^-1 with B = sum_i omega_i int h h^T dt and C = sum_i omega_i int dW h^T.
/// Default ridge is 1e-8 tr(B) / n_b. Throws NumericalError if the regularized B has
/// condition number above 1e12.
Eigen::MatrixXd is_update_basis(const Eigen::MatrixXd& coefficients, const TrajectoryBatch& batch,
                                std::optional<double> ridge = std::nullopt);

/// Elementwise mean of the last min(w, size) pulse matrices of `history` (oldest first).
ControlSchedule smooth_window(std::span<const ControlSchedule> history, int w);
Eigen::MatrixXd smooth_window(const std::deque<Eigen::MatrixXd>& history, int w);

/// Least-squares cubic B-spline fit per channel with `knots` basis functions on uniform
/// breakpoints over [0, T], re-sampled at the bin midpoints. Requires 4 <= knots <= K.
ControlSchedule spline_smooth(const ControlSchedule& schedule, int knots);

struct AnnealSchedule {
  double d0 = 3e-3;
  double df = 1e-12;
  int n_steps = 20;
  int n_is = 1000;

  void validate() const;
};

/// d_i = D0 (Df / D0)^((i - 1) / (N_steps - 1)) for 1 <= i <= N_steps.
double anneal_value(int i, const AnnealSchedule& schedule);
/// Interval (1-based) that contains zero-based iteration p.
int anneal_interval(int p, const AnnealSchedule& schedule);

/// sum_k sum_a u_ak^2 dtau_k.
double fluence(const ControlSchedule& schedule);
/// (1/2) sum_k u_k^T R u_k dtau_k.
double quadratic_cost(const ControlSchedule& schedule, const Eigen::MatrixXd& r);

using CostEvaluator = std::function<double(const ControlSchedule&)>;

/// max_r C(u + sigma xi_r) - C(u) over i.i.d. standard normal xi_r drawn from `seed`.
/// The xi_r do not depend on sigma, so probes at different sigma are nested.
double robustness_probe(const ControlSchedule& schedule, double sigma, const CostEvaluator& evaluate,
                        std::uint64_t seed, int n_realizations = 20);

/// One row of the optimization trace.
struct IterationRecord {
  int p = 0;               ///< 1-based IS iteration
  double f_avg = 0.0;
  double f_min = 0.0;
  double cost = 0.0;       ///< mean Phi + quadratic cost of the sampler
  double ess = 0.0;
  double d_tilde = 0.0;    ///< mean diagonal of the sampling noise matrix
  double lambda = 0.0;
  int clamped = 0;
};

/// Window size w in force from `from_iteration` (1-based) on.
struct WindowStep {
  int from_iteration = 1;
  int w = 1;
};

struct SplineConfig {
  int knots = 8;
  int every = 1;  ///< apply after every `every`-th iteration
};

struct OptimizeConfig {
  int n_traj = 400;
  int n_iterations = 1000;
  std::vector<WindowStep> window{{1, 1}};
  std::optional<AnnealSchedule> anneal;
  std::optional<SplineConfig> spline;
  bool early_stop = false;  ///< stop when ESS changes by < 1e-3 (relative) over 50 iterations
  int threads = 0;
  std::uint64_t seed = 0;
  std::optional<ControlSchedule> initial;
  std::function<void(const IterationRecord&)> on_iteration;
  std::function<bool(const IterationRecord&)> stop;  ///< optional extra stopping rule
};

struct ISRun {
  std::vector<IterationRecord> trace;
  std::deque<Eigen::MatrixXd> history;  ///< at most max(w) raw iterates, oldest first
  int anneal_interval = 0;
  std::uint64_t seed = 0;
  int clamped_total = 0;
  bool stopped_early = false;
};

struct OptimizeResult {
  ISRun run;
  ControlSchedule schedule;  ///< smoothed sampler after the last update
};

/// Window size in force at 1-based iteration p.
int window_at(const std::vector<WindowStep>& steps, int p);

/// Sample, weight, update, smooth (and anneal) for n_iterations. Throws NumericalError
/// with the iteration index on a non-finite trace value.
OptimizeResult optimize(const ControlProblem& problem, const CostSpec& cost, const TimeGrid& grid,
                        const OptimizeConfig& config);

}  // namespace qdc

#endif
