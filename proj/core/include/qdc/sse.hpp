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

#ifndef QDC_SSE_HPP
#define QDC_SSE_HPP

#include <qdc/basis.hpp>
#include <qdc/cost.hpp>
#include <qdc/gauge.hpp>
#include <qdc/quantum_core.hpp>
#include <qdc/schedule.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

/**
 * \file
 * \brief Euler-Maruyama integration of the nonlinear and the linear (anti-Hermitian)
 * stochastic Schroedinger unravelings, single trajectories and batches.
 *
 * Every step is followed by an explicit renormalization of psi.
 */

namespace qdc {

/// Wiener increments of one trajectory.
struct NoisePath {
  Eigen::MatrixXd increments;  ///< N_T x n_c, row j = dW over step j
  Eigen::MatrixXd binned;      ///< K x n_c, row k = sum of the rows of bin k
};

/// Counter-style stream identifier. The generator state is a pure function of the triple.
struct StreamKey {
  std::uint64_t base_seed = 0;
  std::uint64_t iteration = 0;
  std::uint64_t trajectory = 0;
};

/// 64-bit seed derived from a stream key (SplitMix64 mixing).
std::uint64_t stream_seed(const StreamKey& key);

/// Gaussian increments with covariance noise * dt per step, via the eigen factor of `noise`.
NoisePath sample_noise(const NoiseMatrix& noise, const TimeGrid& grid, std::uint64_t seed);
NoisePath sample_noise(const NoiseMatrix& noise, const TimeGrid& grid, const StreamKey& key);

/// psi + dpsi for one Euler-Maruyama step of the nonlinear unraveling, not renormalized.
CVector nonlinear_increment(const CVector& psi, const CMatrix& hamiltonian, std::span<const OperatorMatrix> lindblad,
                            const NoiseMatrix& noise, const Eigen::VectorXd& dw, double dt);

/// psi + dpsi for dpsi = -i H0 psi dt - 1/2 D~_ab H_a H_b psi dt - i H_a psi (u_a dt + dW_a), not renormalized.
CVector linear_increment(const CVector& psi, const CMatrix& drift, std::span<const OperatorMatrix> generators,
                         const Eigen::VectorXd& u, const NoiseMatrix& noise, const Eigen::VectorXd& dw, double dt);

QuantumState step_nonlinear(const QuantumState& psi, const CMatrix& hamiltonian,
                            std::span<const OperatorMatrix> lindblad, const NoiseMatrix& noise,
                            const Eigen::VectorXd& dw, double dt);

QuantumState step_linear(const QuantumState& psi, const CMatrix& drift, std::span<const OperatorMatrix> generators,
                         const Eigen::VectorXd& u, const NoiseMatrix& noise, const Eigen::VectorXd& dw, double dt);

/// Sampling problem: drift H0 plus the unraveling whose generators H_a are also the control channels.
struct ControlProblem {
  OperatorMatrix drift;
  UnravelingSpec unraveling;
  QuantumState initial;

  [[nodiscard]] Eigen::Index dimension() const noexcept { return drift.dimension(); }
  [[nodiscard]] Eigen::Index n_controls() const noexcept {
    return static_cast<Eigen::Index>(unraveling.n_channels());
  }
  /// Throws DimensionError on inconsistent sizes.
  void check() const;
  /// Copy with the unraveling noise replaced.
  [[nodiscard]] ControlProblem with_noise(const NoiseMatrix& d_tilde) const {
    return {drift, unraveling.with_noise(d_tilde), initial};
  }
};

/// One sampled trajectory and the pieces of its path cost.
struct Trajectory {
  QuantumState final_state;
  double fidelity = 0.0;
  double quadratic_cost = 0.0;   ///< (1/2) sum_k u_k^T R u_k dtau
  double stochastic_cost = 0.0;  ///< sum_k u_k^T R dW_k
  Eigen::MatrixXd binned_noise;  ///< K x n_c
};

/// Trajectory of states at every grid time (n_steps + 1 entries) under the nonlinear unraveling
/// of `problem` with the schedule's controls on `problem.controls`.
std::vector<QuantumState> nonlinear_path(const OperatorSet& problem, const ControlSchedule& schedule,
                                         const QuantumState& psi0, const NoisePath& noise);

/// Trajectory of states at every grid time under the linear unraveling.
std::vector<QuantumState> linear_path(const ControlProblem& problem, const ControlSchedule& schedule,
                                      const QuantumState& psi0, const NoisePath& noise);

/// Integrates the linear unraveling over [0, T] from problem.initial and accumulates the control costs.
Trajectory simulate_trajectory(const ControlProblem& problem, const ControlSchedule& schedule, const CostSpec& cost,
                               const NoisePath& noise);

/// Weighted statistics for the general-basis update.
struct BasisStats {
  std::vector<Eigen::MatrixXd> gram;   ///< per trajectory, int h h^T dt (n_b x n_b)
  std::vector<Eigen::MatrixXd> drive;  ///< per trajectory, int dW h^T (n_c x n_b)
};

struct TrajectoryBatch {
  Eigen::VectorXd fidelities;
  Eigen::VectorXd quadratic_costs;
  Eigen::VectorXd stochastic_costs;
  Eigen::VectorXd end_costs;
  Eigen::VectorXd costs;                    ///< S = Phi + quadratic + stochastic
  std::vector<Eigen::MatrixXd> binned_noise;  ///< per trajectory, K x n_c
  std::vector<CVector> final_states;
  std::optional<BasisStats> basis;
  Eigen::VectorXd weights;  ///< empty until assigned by the weighting step
  int clamped = 0;          ///< trajectories whose logarithmic end cost was clamped

  [[nodiscard]] Eigen::Index size() const noexcept { return costs.size(); }
};

struct BatchOptions {
  int n_traj = 1;
  std::uint64_t base_seed = 0;
  std::uint64_t iteration = 0;
  int threads = 0;  ///< 0 uses the runtime default
};

/// N_traj independent trajectories; trajectory i uses stream (base_seed, iteration, i).
/// Results do not depend on the number of threads.
TrajectoryBatch simulate_batch(const ControlProblem& problem, const ControlSchedule& schedule, const CostSpec& cost,
                               const BatchOptions& options);

/// Batch under the feedback parametrization u = A h(t, psi), evaluated at the left end of each step.
/// Fills `basis` statistics.
TrajectoryBatch simulate_batch_basis(const ControlProblem& problem, const BasisSet& basis,
                                     const Eigen::MatrixXd& coefficients, const CostSpec& cost, const TimeGrid& grid,
                                     const BatchOptions& options);

}  // namespace qdc

#endif
