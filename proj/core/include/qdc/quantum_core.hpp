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

#ifndef QDC_QUANTUM_CORE_HPP
#define QDC_QUANTUM_CORE_HPP

#include <qdc/schedule.hpp>

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <utility>
#include <vector>

/**
 * \file
 * \brief Dense complex linear algebra for multi-qubit states and operators, and
 * the deterministic Lindblad integrator used as a reference for the samplers.
 *
 * Qubit 0 is the leftmost Kronecker factor: the basis index of |b_0 b_1 ... b_{n-1}>
 * is sum_i b_i 2^(n-1-i).
 */

namespace qdc {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-9;

class DensityMatrix;

/// Normalized pure state of n qubits.
class QuantumState {
 public:
  /// Computational basis state |index>.
  static QuantumState basis(int n_qubits, Eigen::Index index);
  /// Normalizes `amplitudes`; throws unless the length is a power of two and the norm is non-zero.
  static QuantumState from_amplitudes(CVector amplitudes);

  [[nodiscard]] const CVector& amplitudes() const noexcept { return amplitudes_; }
  [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
  [[nodiscard]] Eigen::Index dimension() const noexcept { return amplitudes_.size(); }
  [[nodiscard]] DensityMatrix projector() const;

 private:
  QuantumState(CVector amplitudes, int n_qubits) : amplitudes_(std::move(amplitudes)), n_qubits_(n_qubits) {}

  CVector amplitudes_;
  int n_qubits_;
};

/// Density matrix. Construction only checks shape; `validate` checks the physical invariants.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix entries);

  static DensityMatrix pure(const QuantumState& state);
  static DensityMatrix maximally_mixed(Eigen::Index dimension);

  [[nodiscard]] const CMatrix& entries() const noexcept { return entries_; }
  [[nodiscard]] Eigen::Index dimension() const noexcept { return entries_.rows(); }
  [[nodiscard]] Complex trace() const { return entries_.trace(); }

  /// Throws ValueError unless Hermitian to 1e-12, trace 1 to `trace_tolerance` and
  /// eigenvalues >= -1e-9.
  void validate(double trace_tolerance = kNormTolerance) const;

 private:
  CMatrix entries_;
};

enum class Hermiticity { hermitian, anti_hermitian, general };

/// Square operator with a cached Hermiticity classification (tolerance 1e-12).
class OperatorMatrix {
 public:
  explicit OperatorMatrix(CMatrix entries);

  static OperatorMatrix identity(Eigen::Index dimension);

  [[nodiscard]] const CMatrix& entries() const noexcept { return entries_; }
  [[nodiscard]] Eigen::Index dimension() const noexcept { return entries_.rows(); }
  [[nodiscard]] Hermiticity hermiticity() const noexcept { return tag_; }
  [[nodiscard]] bool is_hermitian() const noexcept { return tag_ == Hermiticity::hermitian; }
  [[nodiscard]] bool is_anti_hermitian() const noexcept { return tag_ == Hermiticity::anti_hermitian; }

  [[nodiscard]] OperatorMatrix adjoint() const { return OperatorMatrix(entries_.adjoint()); }
  /// C^(h) = (C + C^dagger) / 2.
  [[nodiscard]] OperatorMatrix hermitian_part() const;

 private:
  CMatrix entries_;
  Hermiticity tag_;
};

OperatorMatrix operator*(Complex scale, const OperatorMatrix& op);
OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
OperatorMatrix operator+(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

/// Real symmetric positive-semidefinite noise (covariance-rate) matrix.
class NoiseMatrix {
 public:
  /// Throws ValueError unless symmetric to 1e-12 and min eigenvalue >= `psd_tolerance`.
  explicit NoiseMatrix(Eigen::MatrixXd entries, double psd_tolerance = -1e-10);

  static NoiseMatrix scaled_identity(Eigen::Index size, double value);

  [[nodiscard]] const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return entries_.rows(); }
  [[nodiscard]] double operator()(Eigen::Index a, Eigen::Index b) const { return entries_(a, b); }
  [[nodiscard]] double min_eigenvalue() const;
  [[nodiscard]] bool is_zero() const { return entries_.isZero(0.0); }

  /// L with L L^T = D, from the symmetric eigendecomposition (negative round-off eigenvalues clamped).
  [[nodiscard]] Eigen::MatrixXd square_root_factor() const;

  [[nodiscard]] NoiseMatrix scaled(double factor) const;

 private:
  Eigen::MatrixXd entries_;
};

/// One Lindblad control problem: H = H0 + u_a H_a with dissipator D[D, C].
struct OperatorSet {
  OperatorMatrix drift;
  std::vector<OperatorMatrix> controls;
  std::vector<OperatorMatrix> lindblad;
  NoiseMatrix noise;

  [[nodiscard]] Eigen::Index dimension() const noexcept { return drift.dimension(); }
  /// H0 + sum_a u_a H_a.
  [[nodiscard]] CMatrix hamiltonian(const Eigen::VectorXd& u) const;
  /// Throws DimensionError on inconsistent operator or noise sizes.
  void check() const;
};

enum class PauliAxis { x, y, z, plus, minus };

/// Single-qubit operator for `axis`; sigma^+- = (sigma_x +- i sigma_y) / 2.
CMatrix pauli_matrix(PauliAxis axis);

/// `axis` acting on `qubit` of an n-qubit register, identity elsewhere.
OperatorMatrix pauli_operator(PauliAxis axis, int qubit, int n_qubits);

/// Kronecker product of single-qubit operators placed at the given qubits,
/// identity on the others. Throws on duplicate or out-of-range qubits.
OperatorMatrix tensor_chain(std::span<const std::pair<CMatrix, int>> factors, int n_qubits);

/// |<phi|psi>|^2.
double fidelity(const QuantumState& psi, const QuantumState& phi);
/// <phi|rho|phi>.
double fidelity(const DensityMatrix& rho, const QuantumState& phi);

/// Trace distance (1/2) ||a - b||_1 of two Hermitian matrices.
double trace_distance(const CMatrix& a, const CMatrix& b);

/// sum_ab D_ab (C_a rho C_b^dagger - 1/2 {C_b^dagger C_a, rho}), evaluated term by term.
CMatrix dissipator_apply(const NoiseMatrix& noise, std::span<const OperatorMatrix> lindblad,
                         const CMatrix& rho);

/// Lindblad generator L(rho) = -i[H, rho] + D[D, C] rho for a fixed Hamiltonian.
///
/// The dissipator is stored in diagonal form (eigen-decomposition of D) so one
/// application costs one product pair per non-zero noise eigenvalue.
class LindbladGenerator {
 public:
  LindbladGenerator(CMatrix hamiltonian, std::span<const OperatorMatrix> lindblad, const NoiseMatrix& noise);

  [[nodiscard]] CMatrix apply(const CMatrix& rho) const;
  /// Heisenberg-picture adjoint: tr(X L(rho)) = tr(L^dagger(X) rho).
  [[nodiscard]] CMatrix apply_adjoint(const CMatrix& x) const;
  /// exp(t L) rho via a truncated Taylor series on sub-steps with t ||L|| <= 1/2.
  [[nodiscard]] CMatrix propagate(const CMatrix& rho, double t) const;
  [[nodiscard]] CMatrix propagate_adjoint(const CMatrix& x, double t) const;

  [[nodiscard]] const CMatrix& hamiltonian() const noexcept { return hamiltonian_; }

 private:
  template <class Apply>
  CMatrix exponential_action(const CMatrix& x, double t, Apply&& apply) const;

  CMatrix hamiltonian_;
  std::vector<CMatrix> jumps_;       // L_k = sqrt(lambda_k) sum_a C_a V_ak
  CMatrix decay_;                    // sum_ab D_ab C_b^dagger C_a
  double norm_bound_;
};

/// Fixed-step RK4 integration of the Lindblad equation on `grid` with the
/// piecewise-constant Hamiltonian H0 + u_k H_a. Returns rho at every grid time
/// (n_steps + 1 entries). Throws DimensionError if `schedule` is not on `grid`'s bins.
std::vector<DensityMatrix> integrate_lindblad(const OperatorSet& problem, const ControlSchedule& schedule,
                                              const DensityMatrix& rho0, const TimeGrid& grid);

/// RK4 integration with a continuous control u(t) evaluated at every stage time.
std::vector<DensityMatrix> integrate_lindblad(const OperatorSet& problem, const ControlFunction& control,
                                              const DensityMatrix& rho0, const TimeGrid& grid);

/// exp(-i H t) for Hermitian H.
CMatrix unitary_propagator(const CMatrix& hamiltonian, double t);

}  // namespace qdc

#endif
