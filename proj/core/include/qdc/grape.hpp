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

#ifndef QDC_GRAPE_HPP
#define QDC_GRAPE_HPP

#include <qdc/cost.hpp>
#include <qdc/quantum_core.hpp>
#include <qdc/schedule.hpp>

#include <cstdint>
#include <vector>

/**
 * \file
 * \brief First-order Open GRAPE on the Lindblad equation with learning-rate backoff.
 *
 * States are propagated with the exact exponential of each bin's generator, split into the
 * schedule grid's integrator steps. The gradient sums the first-order formula over those steps,
 * with forward and backward states taken at each step midpoint.
 */

namespace qdc {

struct ForwardBackward {
  std::vector<CMatrix> rho;         ///< forward states at the bin edges (K + 1)
  std::vector<CMatrix> lambda;      ///< backward states at the bin edges (K + 1)
  std::vector<CMatrix> rho_mid;     ///< forward states at integrator-step midpoints (N_T)
  std::vector<CMatrix> lambda_mid;  ///< backward states at integrator-step midpoints (N_T)
};

/// Forward propagation of rho0 and adjoint propagation of `target` (an observable, e.g. a projector).
ForwardBackward forward_backward(const OperatorSet& problem, const ControlSchedule& schedule,
                                 const DensityMatrix& rho0, const CMatrix& target);

/// dC/dA_ak = sum over the bin's steps of (iQ/2) tr(lambda [H_a, rho]) dt, plus (R A)_ak dtau.
Eigen::MatrixXd grape_gradient(const OperatorSet& problem, const ControlSchedule& schedule,
                               const ForwardBackward& states, double q, const Eigen::MatrixXd& r);

/// Deterministic cost -(Q/2) F(rho_T) + (1/2) sum_k u_k^T R u_k dtau with exact per-bin propagation
/// (linear end cost; the logarithmic form uses (Q/2) log(1 - F)).
double lindblad_cost(const OperatorSet& problem, const ControlSchedule& schedule, const DensityMatrix& rho0,
                     const CostSpec& cost);

/// Final density matrix under exact per-bin propagation.
DensityMatrix lindblad_final_state(const OperatorSet& problem, const ControlSchedule& schedule,
                                   const DensityMatrix& rho0);

struct GrapeOptions {
  double epsilon0 = 0.1;
  int max_reductions = 10;
  int max_iterations = 100000;
};

struct GrapeState {
  ControlSchedule schedule;
  double epsilon = 0.0;
  int reductions = 0;
  int iterations = 0;           ///< accepted steps
  std::vector<double> cost_trace;  ///< cost of the seed followed by every accepted step
};

/// Gradient descent A' = A - eps grad. A step that does not lower the cost divides eps by 10 and
/// is retried; the run stops when the reduction budget is spent, the gradient vanishes or the
/// iteration limit is reached.
GrapeState grape_optimize(const OperatorSet& problem, const CostSpec& cost, const DensityMatrix& rho0,
                          const ControlSchedule& seed, const GrapeOptions& options = {});

enum class SeedFamily { normal, uniform };

struct SeedSpec {
  SeedFamily family = SeedFamily::normal;
  double mean = 0.0;   ///< normal
  double stddev = 2.0; ///< normal
  int low = -10;       ///< uniform integers in [low, high]
  int high = 10;
  double scale = 1.0;  ///< uniform
};

/// The five seed families: normal around 0, 1 and -1 with sigma 2; uniform integers in [-10, 10]
/// scaled by 1 and 0.5.
std::vector<SeedSpec> standard_seed_families();

std::vector<ControlSchedule> seed_schedules(const SeedSpec& spec, int count, Eigen::Index n_controls,
                                            const TimeGrid& grid, std::uint64_t seed);

}  // namespace qdc

#endif
