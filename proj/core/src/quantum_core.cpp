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

#include <qdc/quantum_core.hpp>

#include <qdc/error.hpp>

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <string>

namespace qdc {
namespace {

constexpr Complex kI{0.0, 1.0};

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(Eigen::Index n) {
  int k = 0;
  while ((Eigen::Index{1} << k) < n) {
    ++k;
  }
  return k;
}

Hermiticity classify(const CMatrix& m) {
  const CMatrix adj = m.adjoint();
  if ((m - adj).cwiseAbs().maxCoeff() <= kHermiticityTolerance) {
    return Hermiticity::hermitian;
  }
  if ((m + adj).cwiseAbs().maxCoeff() <= kHermiticityTolerance) {
    return Hermiticity::anti_hermitian;
  }
  return Hermiticity::general;
}

// Diagonal form of a dissipator: sum_k L_k rho L_k^dagger - 1/2 {decay, rho}.
struct DiagonalDissipator {
  std::vector<CMatrix> jumps;
  CMatrix decay;
};

DiagonalDissipator diagonalize(std::span<const OperatorMatrix> lindblad, const NoiseMatrix& noise,
                               Eigen::Index dim) {
  if (static_cast<Eigen::Index>(lindblad.size()) != noise.size()) {
    throw DimensionError("dissipator: " + std::to_string(lindblad.size()) + " Lindblad operators for a " +
                         std::to_string(noise.size()) + "x" + std::to_string(noise.size()) + " noise matrix");
  }
  DiagonalDissipator out{{}, CMatrix::Zero(dim, dim)};
  if (lindblad.empty()) {
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(noise.entries());
  for (Eigen::Index k = 0; k < noise.size(); ++k) {
    const double rate = eig.eigenvalues()(k);
    if (rate <= 0.0) {
      continue;
    }
    CMatrix jump = CMatrix::Zero(dim, dim);
    for (std::size_t a = 0; a < lindblad.size(); ++a) {
      if (lindblad[a].dimension() != dim) {
        throw DimensionError("dissipator: Lindblad operator " + std::to_string(a) + " has the wrong dimension");
      }
      jump += eig.eigenvectors()(static_cast<Eigen::Index>(a), k) * lindblad[a].entries();
    }
    jump *= std::sqrt(rate);
    out.decay.noalias() += jump.adjoint() * jump;
    out.jumps.push_back(std::move(jump));
  }
  return out;
}

CMatrix lindblad_rhs(const CMatrix& h, const DiagonalDissipator& diss, const CMatrix& rho) {
  CMatrix out = -kI * (h * rho - rho * h);
  for (const auto& jump : diss.jumps) {
    out.noalias() += jump * rho * jump.adjoint();
  }
  out.noalias() -= 0.5 * (diss.decay * rho + rho * diss.decay);
  return out;
}

CMatrix lindblad_adjoint_rhs(const CMatrix& h, const DiagonalDissipator& diss, const CMatrix& x) {
  CMatrix out = kI * (h * x - x * h);
  for (const auto& jump : diss.jumps) {
    out.noalias() += jump.adjoint() * x * jump;
  }
  out.noalias() -= 0.5 * (diss.decay * x + x * diss.decay);
  return out;
}

template <class Rhs>
std::vector<DensityMatrix> rk4(const DensityMatrix& rho0, const TimeGrid& grid, Rhs&& rhs) {
  std::vector<DensityMatrix> out;
  out.reserve(static_cast<std::size_t>(grid.n_steps()) + 1);
  out.push_back(rho0);
  CMatrix rho = rho0.entries();
  const double dt = grid.dt();
  for (int j = 0; j < grid.n_steps(); ++j) {
    const double t = grid.step_time(j);
    const int bin = grid.bin_of_step(j);
    const CMatrix k1 = rhs(t, bin, rho);
    const CMatrix k2 = rhs(t + 0.5 * dt, bin, rho + 0.5 * dt * k1);
    const CMatrix k3 = rhs(t + 0.5 * dt, bin, rho + 0.5 * dt * k2);
    const CMatrix k4 = rhs(t + dt, bin, rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.emplace_back(rho);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// QuantumState / DensityMatrix

QuantumState QuantumState::basis(int n_qubits, Eigen::Index index) {
  if (n_qubits < 1 || n_qubits > 30) {
    throw ValueError("basis state: n_qubits out of range: " + std::to_string(n_qubits));
  }
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (index < 0 || index >= dim) {
    throw ValueError("basis state: index " + std::to_string(index) + " out of range");
  }
  CVector amps = CVector::Zero(dim);
  amps(index) = 1.0;
  return {std::move(amps), n_qubits};
}

QuantumState QuantumState::from_amplitudes(CVector amplitudes) {
  if (!is_power_of_two(amplitudes.size()) || amplitudes.size() < 2) {
    throw DimensionError("quantum state: length " + std::to_string(amplitudes.size()) + " is not 2^n");
  }
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValueError("quantum state: amplitudes have zero or non-finite norm");
  }
  amplitudes /= norm;
  const int n = log2_exact(amplitudes.size());
  return {std::move(amplitudes), n};
}

DensityMatrix QuantumState::projector() const { return DensityMatrix::pure(*this); }

DensityMatrix::DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw DimensionError("density matrix must be square and non-empty");
  }
}

DensityMatrix DensityMatrix::pure(const QuantumState& state) {
  return DensityMatrix(state.amplitudes() * state.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dimension) {
  return DensityMatrix(CMatrix::Identity(dimension, dimension) / static_cast<double>(dimension));
}

void DensityMatrix::validate(double trace_tolerance) const {
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kHermiticityTolerance) {
    throw ValueError("density matrix is not Hermitian");
  }
  if (std::abs(entries_.trace() - 1.0) > trace_tolerance) {
    throw ValueError("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(entries_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-9) {
    throw ValueError("density matrix has a negative eigenvalue");
  }
}

// ---------------------------------------------------------------------------
// OperatorMatrix / NoiseMatrix

OperatorMatrix::OperatorMatrix(CMatrix entries) : entries_(std::move(entries)), tag_(Hermiticity::general) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw DimensionError("operator must be square and non-empty");
  }
  tag_ = classify(entries_);
}

OperatorMatrix OperatorMatrix::identity(Eigen::Index dimension) {
  return OperatorMatrix(CMatrix::Identity(dimension, dimension));
}

OperatorMatrix OperatorMatrix::hermitian_part() const { return OperatorMatrix(0.5 * (entries_ + entries_.adjoint())); }

OperatorMatrix operator*(Complex scale, const OperatorMatrix& op) { return OperatorMatrix(scale * op.entries()); }

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  if (lhs.dimension() != rhs.dimension()) {
    throw DimensionError("operator product: dimension mismatch");
  }
  return OperatorMatrix(lhs.entries() * rhs.entries());
}

OperatorMatrix operator+(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  if (lhs.dimension() != rhs.dimension()) {
    throw DimensionError("operator sum: dimension mismatch");
  }
  return OperatorMatrix(lhs.entries() + rhs.entries());
}

NoiseMatrix::NoiseMatrix(Eigen::MatrixXd entries, double psd_tolerance) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw DimensionError("noise matrix must be square");
  }
  if (!entries_.allFinite()) {
    throw ValueError("noise matrix has non-finite entries");
  }
  if (entries_.size() == 0) {
    return;
  }
  if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > kHermiticityTolerance) {
    throw ValueError("noise matrix is not symmetric");
  }
  const double min_eig = min_eigenvalue();
  if (min_eig < psd_tolerance) {
    throw ValueError("noise matrix is not positive semidefinite (min eigenvalue " + std::to_string(min_eig) + ")");
  }
}

NoiseMatrix NoiseMatrix::scaled_identity(Eigen::Index size, double value) {
  return NoiseMatrix(value * Eigen::MatrixXd::Identity(size, size));
}

double NoiseMatrix::min_eigenvalue() const {
  if (entries_.size() == 0) {
    return 0.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries_, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

Eigen::MatrixXd NoiseMatrix::square_root_factor() const {
  if (entries_.size() == 0) {
    return entries_;
  }
  if (entries_.isDiagonal(0.0)) {
    return entries_.diagonal().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries_);
  return eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

NoiseMatrix NoiseMatrix::scaled(double factor) const {
  if (!(factor >= 0.0)) {
    throw ValueError("noise matrix scale must be non-negative");
  }
  return NoiseMatrix(factor * entries_);
}

CMatrix OperatorSet::hamiltonian(const Eigen::VectorXd& u) const {
  CMatrix h = drift.entries();
  for (std::size_t a = 0; a < controls.size(); ++a) {
    h += u(static_cast<Eigen::Index>(a)) * controls[a].entries();
  }
  return h;
}

void OperatorSet::check() const {
  const auto dim = drift.dimension();
  for (const auto& op : controls) {
    if (op.dimension() != dim) {
      throw DimensionError("operator set: control Hamiltonian dimension mismatch");
    }
  }
  for (const auto& op : lindblad) {
    if (op.dimension() != dim) {
      throw DimensionError("operator set: Lindblad operator dimension mismatch");
    }
  }
  if (noise.size() != static_cast<Eigen::Index>(lindblad.size())) {
    throw DimensionError("operator set: noise matrix size does not match the Lindblad operator count");
  }
}

// ---------------------------------------------------------------------------
// Pauli algebra

CMatrix pauli_matrix(PauliAxis axis) {
  CMatrix m(2, 2);
  switch (axis) {
    case PauliAxis::x:
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case PauliAxis::y:
      m << 0.0, -kI, kI, 0.0;
      break;
    case PauliAxis::z:
      m << 1.0, 0.0, 0.0, -1.0;
      break;
    case PauliAxis::plus:
      m << 0.0, 1.0, 0.0, 0.0;
      break;
    case PauliAxis::minus:
      m << 0.0, 0.0, 1.0, 0.0;
      break;
  }
  return m;
}

OperatorMatrix pauli_operator(PauliAxis axis, int qubit, int n_qubits) {
  const std::pair<CMatrix, int> factor{pauli_matrix(axis), qubit};
  return tensor_chain(std::span(&factor, 1), n_qubits);
}

OperatorMatrix tensor_chain(std::span<const std::pair<CMatrix, int>> factors, int n_qubits) {
  if (n_qubits < 1) {
    throw ValueError("tensor chain: n_qubits must be >= 1");
  }
  std::vector<const CMatrix*> slot(static_cast<std::size_t>(n_qubits), nullptr);
  for (const auto& [op, qubit] : factors) {
    if (qubit < 0 || qubit >= n_qubits) {
      throw ValueError("tensor chain: qubit index " + std::to_string(qubit) + " out of range for " +
                       std::to_string(n_qubits) + " qubits");
    }
    if (op.rows() != 2 || op.cols() != 2) {
      throw DimensionError("tensor chain: factors must be single-qubit (2x2) operators");
    }
    if (slot[static_cast<std::size_t>(qubit)] != nullptr) {
      throw ValueError("tensor chain: duplicate qubit index " + std::to_string(qubit));
    }
    slot[static_cast<std::size_t>(qubit)] = &op;
  }
  const CMatrix id2 = CMatrix::Identity(2, 2);
  CMatrix out = CMatrix::Identity(1, 1);
  for (const CMatrix* op : slot) {
    out = Eigen::kroneckerProduct(out, op ? *op : id2).eval();
  }
  return OperatorMatrix(std::move(out));
}

// ---------------------------------------------------------------------------
// Measures

double fidelity(const QuantumState& psi, const QuantumState& phi) {
  if (psi.dimension() != phi.dimension()) {
    throw DimensionError("fidelity: dimension mismatch");
  }
  return std::norm(phi.amplitudes().dot(psi.amplitudes()));
}

double fidelity(const DensityMatrix& rho, const QuantumState& phi) {
  if (rho.dimension() != phi.dimension()) {
    throw DimensionError("fidelity: dimension mismatch");
  }
  return (phi.amplitudes().adjoint() * rho.entries() * phi.amplitudes())(0).real();
}

double trace_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("trace distance: dimension mismatch");
  }
  const CMatrix diff = a - b;
  const CMatrix herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

CMatrix dissipator_apply(const NoiseMatrix& noise, std::span<const OperatorMatrix> lindblad, const CMatrix& rho) {
  if (static_cast<Eigen::Index>(lindblad.size()) != noise.size()) {
    throw DimensionError("dissipator: noise matrix is " + std::to_string(noise.size()) + "x" +
                         std::to_string(noise.size()) + " but " + std::to_string(lindblad.size()) +
                         " Lindblad operators were given");
  }
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (std::size_t a = 0; a < lindblad.size(); ++a) {
    const CMatrix& ca = lindblad[a].entries();
    if (ca.rows() != rho.rows()) {
      throw DimensionError("dissipator: operator/state dimension mismatch");
    }
    for (std::size_t b = 0; b < lindblad.size(); ++b) {
      const double d = noise(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (d == 0.0) {
        continue;
      }
      const CMatrix& cb = lindblad[b].entries();
      const CMatrix cbd_ca = cb.adjoint() * ca;
      out.noalias() += d * (ca * rho * cb.adjoint() - 0.5 * (cbd_ca * rho + rho * cbd_ca));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// LindbladGenerator

LindbladGenerator::LindbladGenerator(CMatrix hamiltonian, std::span<const OperatorMatrix> lindblad,
                                     const NoiseMatrix& noise)
    : hamiltonian_(std::move(hamiltonian)) {
  auto diss = diagonalize(lindblad, noise, hamiltonian_.rows());
  jumps_ = std::move(diss.jumps);
  decay_ = std::move(diss.decay);
  // ||L|| <= 2||H|| + sum_k ||L_k||^2 + ||decay||, using Frobenius norms as upper bounds.
  norm_bound_ = 2.0 * hamiltonian_.norm() + decay_.norm();
  for (const auto& jump : jumps_) {
    norm_bound_ += jump.squaredNorm();
  }
}

CMatrix LindbladGenerator::apply(const CMatrix& rho) const {
  return lindblad_rhs(hamiltonian_, DiagonalDissipator{jumps_, decay_}, rho);
}

CMatrix LindbladGenerator::apply_adjoint(const CMatrix& x) const {
  return lindblad_adjoint_rhs(hamiltonian_, DiagonalDissipator{jumps_, decay_}, x);
}

template <class Apply>
CMatrix LindbladGenerator::exponential_action(const CMatrix& x, double t, Apply&& apply) const {
  const int substeps = std::max(1, static_cast<int>(std::ceil(2.0 * std::abs(t) * norm_bound_)));
  const double h = t / substeps;
  CMatrix state = x;
  for (int s = 0; s < substeps; ++s) {
    CMatrix term = state;
    CMatrix sum = state;
    for (int n = 1; n <= 40; ++n) {
      term = (h / n) * apply(term);
      sum += term;
      if (term.norm() <= 1e-17 * sum.norm()) {
        break;
      }
    }
    state = std::move(sum);
  }
  return state;
}

CMatrix LindbladGenerator::propagate(const CMatrix& rho, double t) const {
  const DiagonalDissipator diss{jumps_, decay_};
  return exponential_action(rho, t, [&](const CMatrix& m) { return lindblad_rhs(hamiltonian_, diss, m); });
}

CMatrix LindbladGenerator::propagate_adjoint(const CMatrix& x, double t) const {
  const DiagonalDissipator diss{jumps_, decay_};
  return exponential_action(x, t, [&](const CMatrix& m) { return lindblad_adjoint_rhs(hamiltonian_, diss, m); });
}

// ---------------------------------------------------------------------------
// Integrators

std::vector<DensityMatrix> integrate_lindblad(const OperatorSet& problem, const ControlSchedule& schedule,
                                              const DensityMatrix& rho0, const TimeGrid& grid) {
  problem.check();
  if (schedule.grid().n_bins() != grid.n_bins() || schedule.grid().horizon() != grid.horizon()) {
    throw DimensionError("integrate_lindblad: schedule bins are not aligned with the time grid");
  }
  if (schedule.n_controls() != static_cast<Eigen::Index>(problem.controls.size())) {
    throw DimensionError("integrate_lindblad: schedule has the wrong number of controls");
  }
  if (rho0.dimension() != problem.dimension()) {
    throw DimensionError("integrate_lindblad: initial state dimension mismatch");
  }
  const auto diss = diagonalize(problem.lindblad, problem.noise, problem.dimension());
  std::vector<CMatrix> hamiltonians;
  hamiltonians.reserve(static_cast<std::size_t>(grid.n_bins()));
  for (int k = 0; k < grid.n_bins(); ++k) {
    hamiltonians.push_back(problem.hamiltonian(schedule.pulses().col(k)));
  }
  return rk4(rho0, grid, [&](double, int bin, const CMatrix& rho) {
    return lindblad_rhs(hamiltonians[static_cast<std::size_t>(bin)], diss, rho);
  });
}

std::vector<DensityMatrix> integrate_lindblad(const OperatorSet& problem, const ControlFunction& control,
                                              const DensityMatrix& rho0, const TimeGrid& grid) {
  problem.check();
  if (rho0.dimension() != problem.dimension()) {
    throw DimensionError("integrate_lindblad: initial state dimension mismatch");
  }
  const auto diss = diagonalize(problem.lindblad, problem.noise, problem.dimension());
  return rk4(rho0, grid, [&](double t, int bin, const CMatrix& rho) {
    return lindblad_rhs(problem.hamiltonian(control(t, bin)), diss, rho);
  });
}

CMatrix unitary_propagator(const CMatrix& hamiltonian, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(hamiltonian);
  const CVector phases = (eig.eigenvalues().cast<Complex>() * (-kI * t)).array().exp();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace qdc
