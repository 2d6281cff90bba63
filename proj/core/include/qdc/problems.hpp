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

#ifndef QDC_PROBLEMS_HPP
#define QDC_PROBLEMS_HPP

#include <qdc/cost.hpp>
#include <qdc/gauge.hpp>
#include <qdc/quantum_core.hpp>
#include <qdc/schedule.hpp>
#include <qdc/sse.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace qdc {

enum class Frame { lab, rotating };

/// A complete control problem: the sampling dynamics, the Lindblad model it unravels, and the cost.
struct ProblemBundle {
  std::string name;
  ControlProblem control;
  /// Lindblad model with controls on the same channels; absent for registers too large to hold
  /// the original dissipators densely.
  std::optional<OperatorSet> lindblad;
  CostSpec cost;
  Frame frame = Frame::lab;
  double lambda = 0.0;  ///< R D~ = lambda I; 0 when the noise vanishes
};

/// +1 eigenstate of sigma_x, sigma_y or sigma_z on one qubit.
QuantumState axis_state(PauliAxis axis);

/// Single qubit, H0 = 0, controls sigma_x, sigma_y, emission/absorption at rate D unraveled with D~ = D/2.
ProblemBundle build_noisy_qubit(double d, double r, double q, const QuantumState& initial, const QuantumState& target,
                                EndCostForm form = EndCostForm::linear);

struct NmrParams {
  int n_qubits = 0;
  Eigen::VectorXd shifts;    ///< nu_i
  Eigen::MatrixXd couplings; ///< J_ij, symmetric with zero diagonal
  double t1 = 1.0;

  /// Throws ValueError on shape or value violations.
  void validate() const;
  /// Reads {"n_qubits", "shifts", "couplings", "T1"}; throws ValueError on schema errors.
  static NmrParams from_json_file(const std::string& path);
};

/// H_I = sum_{i<j} (pi/2) J_ij sigma^z_i sigma^z_j.
OperatorMatrix nmr_coupling_hamiltonian(const NmrParams& params);
/// H_Z = sum_i pi nu_i sigma^z_i.
OperatorMatrix nmr_zeeman_hamiltonian(const NmrParams& params);

struct NmrOptions {
  double d = 0.0;  ///< emission/absorption rate
  double r = 1.0;  ///< total control weight, split as R / n_c per channel
  double q = 1.0;
  double horizon = 1.0;
  Frame frame = Frame::rotating;
  EndCostForm form = EndCostForm::linear;
};

/// NMR register: drift H_I (rotating frame) or H_Z + H_I (lab frame), controls sigma_x^i, sigma_y^i,
/// start |0...0>, target GHZ (phase-rotated in the rotating frame).
ProblemBundle build_nmr(const NmrParams& params, const NmrOptions& options);

/// 1-D chain, H0 = 0, site and bond controls, D2 = 2 D1, R split as R / n_c, |0...0> to GHZ.
ProblemBundle build_spin_chain(int n_qubits, double d1, double r, double q);

/// (|0...0> + |1...1>) / sqrt(2).
QuantumState ghz_state(int n_qubits);
/// (e^{i 2 pi w T} |0...0> + e^{-i 2 pi w T} |1...1>) / sqrt(2) with w = (1/2) sum nu.
QuantumState ghz_target_rotating(int n_qubits, const Eigen::VectorXd& shifts, double horizon);

enum class FrameDirection { to_rotating, to_lab };

/// Applies S_i(t) (or its transpose) at each bin midpoint to the (x, y) channel pair of qubit i.
ControlSchedule rotating_frame_controls(const ControlSchedule& schedule, const Eigen::VectorXd& shifts,
                                        FrameDirection direction);

/// Lab-frame image S(t)^T u'_k of a rotating-frame schedule, rotated at the exact time t.
ControlFunction lab_frame_control(const ControlSchedule& rotating, const Eigen::VectorXd& shifts);

/// Normalized i.i.d. complex Gaussian amplitudes.
QuantumState haar_random_state(int n_qubits, std::uint64_t seed);

/// Fidelity at T of the closed (D = 0) evolution under the schedule, with exact per-bin exponentials.
double unitary_transfer_eval(const ControlSchedule& schedule, const OperatorMatrix& drift,
                             std::span<const OperatorMatrix> controls, const QuantumState& initial,
                             const QuantumState& target);
double unitary_transfer_eval(const ProblemBundle& bundle, const ControlSchedule& schedule);

}  // namespace qdc

#endif
