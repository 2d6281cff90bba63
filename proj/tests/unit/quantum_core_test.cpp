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

#include <qdc/error.hpp>
#include <qdc/gauge.hpp>
#include <qdc/quantum_core.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../support.hpp"

namespace qdc {
namespace {

using testing::max_abs;

const Complex kI(0.0, 1.0);

TEST(Pauli, SingleQubitMatrices) {
  CMatrix x(2, 2);
  x << 0, 1, 1, 0;
  EXPECT_EQ(pauli_operator(PauliAxis::x, 0, 1).entries(), x);
  const CMatrix plus = 0.5 * (pauli_matrix(PauliAxis::x) + kI * pauli_matrix(PauliAxis::y));
  EXPECT_EQ(pauli_operator(PauliAxis::plus, 0, 1).entries(), plus);
  const CMatrix minus = 0.5 * (pauli_matrix(PauliAxis::x) - kI * pauli_matrix(PauliAxis::y));
  EXPECT_EQ(pauli_matrix(PauliAxis::minus), minus);
}

TEST(Pauli, EmbeddedZ) {
  const CMatrix z = pauli_operator(PauliAxis::z, 0, 2).entries();
  EXPECT_EQ(z, CMatrix(Eigen::Vector4cd(1, 1, -1, -1).asDiagonal()));
}

TEST(Pauli, AlgebraIsExact) {
  const CMatrix x = pauli_matrix(PauliAxis::x);
  const CMatrix y = pauli_matrix(PauliAxis::y);
  const CMatrix z = pauli_matrix(PauliAxis::z);
  EXPECT_EQ(x * y, kI * z);
  EXPECT_EQ(y * z, kI * x);
  EXPECT_EQ(z * x, kI * y);
  for (const CMatrix& s : {x, y, z}) {
    EXPECT_EQ(s * s, CMatrix::Identity(2, 2));
  }
}

TEST(TensorChain, ZZ) {
  const std::vector<std::pair<CMatrix, int>> f{{pauli_matrix(PauliAxis::z), 0}, {pauli_matrix(PauliAxis::z), 1}};
  EXPECT_EQ(tensor_chain(f, 2).entries(), CMatrix(Eigen::Vector4cd(1, -1, -1, 1).asDiagonal()));
}

TEST(TensorChain, EmptyIsIdentity) {
  EXPECT_EQ(tensor_chain({}, 1).entries(), CMatrix::Identity(2, 2));
}

TEST(TensorChain, XOnFirstQubit) {
  const std::vector<std::pair<CMatrix, int>> f{{pauli_matrix(PauliAxis::x), 0}};
  CMatrix expected = CMatrix::Zero(4, 4);
  expected.block(0, 2, 2, 2) = CMatrix::Identity(2, 2);
  expected.block(2, 0, 2, 2) = CMatrix::Identity(2, 2);
  EXPECT_EQ(tensor_chain(f, 2).entries(), expected);
}

TEST(TensorChain, RejectsDuplicateQubit) {
  const std::vector<std::pair<CMatrix, int>> f{{pauli_matrix(PauliAxis::x), 0}, {pauli_matrix(PauliAxis::y), 0}};
  EXPECT_THROW((void)tensor_chain(f, 2), Error);
}

TEST(Fidelity, Examples) {
  const QuantumState zero = QuantumState::basis(1, 0);
  const QuantumState one = QuantumState::basis(1, 1);
  const QuantumState x = QuantumState::from_amplitudes(Eigen::Vector2cd(1, 1));
  const QuantumState y = QuantumState::from_amplitudes(Eigen::Vector2cd(1, kI));
  EXPECT_NEAR(fidelity(x, x), 1.0, 1e-15);
  EXPECT_EQ(fidelity(zero, one), 0.0);
  // |<X|Y>|^2 = |1 + i|^2 / 4.
  EXPECT_NEAR(fidelity(x, y), std::norm(Complex(1, 1)) / 4.0, 1e-15);
}

TEST(Fidelity, SymmetricAndPhaseInvariant) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const QuantumState a = testing::random_state(2, rng);
    const QuantumState b = testing::random_state(2, rng);
    const QuantumState b_phase = QuantumState::from_amplitudes(std::polar(1.0, 0.37 * trial) * b.amplitudes());
    EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-14);
    EXPECT_NEAR(fidelity(a, b), fidelity(a, b_phase), 1e-14);
    EXPECT_GE(fidelity(a, b), 0.0);
    EXPECT_LE(fidelity(a, b), 1.0 + 1e-14);
    EXPECT_NEAR(fidelity(DensityMatrix::pure(a), b), fidelity(a, b), 1e-14);
  }
}

TEST(Dissipator, IdentityOperatorGivesZero) {
  std::mt19937_64 rng(1);
  const std::vector<OperatorMatrix> c{OperatorMatrix::identity(2)};
  const CMatrix out = dissipator_apply(NoiseMatrix::scaled_identity(1, 0.7), c, testing::random_density(2, rng).entries());
  EXPECT_LT(max_abs(out), 1e-15);
}

TEST(Dissipator, EmissionAbsorptionFixesMaximallyMixed) {
  const auto ops = emission_absorption_operators(1);
  const CMatrix out = dissipator_apply(NoiseMatrix::scaled_identity(2, 0.3), ops, CMatrix::Identity(2, 2) / 2.0);
  EXPECT_LT(max_abs(out), 1e-15);
}

TEST(Dissipator, HermitianAndTraceless) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<OperatorMatrix> c;
    for (int a = 0; a < 3; ++a) {
      c.emplace_back(testing::random_complex(4, 4, rng));
    }
    const NoiseMatrix d(testing::random_psd(3, rng));
    const CMatrix out = dissipator_apply(d, c, testing::random_density(4, rng).entries());
    EXPECT_LT(max_abs(out - out.adjoint()), 1e-12);
    EXPECT_LT(std::abs(out.trace()), 1e-12);
  }
}

TEST(NoiseMatrix, RejectsIndefinite) {
  Eigen::Matrix2d m;
  m << 1, 0, 0, -1e-6;
  EXPECT_THROW(NoiseMatrix{m}, ValueError);
  m << 1, 0.5, 0.4, 1;
  EXPECT_THROW(NoiseMatrix{m}, ValueError);
}

TEST(NoiseMatrix, SquareRootFactor) {
  std::mt19937_64 rng(3);
  Eigen::MatrixXd m = testing::random_psd(3, rng);
  const Eigen::VectorXd v = Eigen::Vector3d(1, -2, 0.5);
  m = m + (v * v.transpose());
  const NoiseMatrix d(m);
  const Eigen::MatrixXd l = d.square_root_factor();
  EXPECT_LT((l * l.transpose() - m).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::MatrixXd singular = v * v.transpose();
  const Eigen::MatrixXd ls = NoiseMatrix(singular).square_root_factor();
  EXPECT_LT((ls * ls.transpose() - singular).cwiseAbs().maxCoeff(), 1e-12);
}

OperatorSet noisy_qubit_set(double d, const CMatrix& drift = CMatrix::Zero(2, 2)) {
  return {OperatorMatrix(drift),
          {pauli_operator(PauliAxis::x, 0, 1), pauli_operator(PauliAxis::y, 0, 1)},
          emission_absorption_operators(1),
          NoiseMatrix::scaled_identity(2, d)};
}

TEST(IntegrateLindblad, UnitaryLimit) {
  std::mt19937_64 rng(17);
  const CMatrix h = testing::random_hermitian(2, rng);
  const OperatorSet set = noisy_qubit_set(0.0, h);
  const TimeGrid grid(1.3, 200, 4);
  const DensityMatrix rho0 = testing::random_density(2, rng);
  const auto path = integrate_lindblad(set, ControlSchedule::zeros(2, grid), rho0, grid);
  const CMatrix u = unitary_propagator(h, 1.3);
  EXPECT_LT(max_abs(path.back().entries() - u * rho0.entries() * u.adjoint()), 1e-8);
}

TEST(IntegrateLindblad, RelaxesMonotonicallyToMaximallyMixed) {
  const OperatorSet set = noisy_qubit_set(0.5);
  const CMatrix mixed = CMatrix::Identity(2, 2) / 2.0;
  const TimeGrid grid(3.0, 300, 1);
  const auto path = integrate_lindblad(set, ControlSchedule::zeros(2, grid), DensityMatrix::pure(QuantumState::basis(1, 0)), grid);
  double previous = trace_distance(path.front().entries(), mixed);
  for (const auto& rho : path) {
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-8);
    const double distance = trace_distance(rho.entries(), mixed);
    EXPECT_LE(distance, previous + 1e-15);
    previous = distance;
  }
  // The z-polarization decays as exp(-2 D t).
  EXPECT_NEAR(previous, 0.5 * std::exp(-2.0 * 0.5 * 3.0), 1e-7);
  const auto halved = integrate_lindblad(set, ControlSchedule::zeros(2, grid.refined(600)),
                                         DensityMatrix::pure(QuantumState::basis(1, 0)), grid.refined(600));
  EXPECT_LT(trace_distance(halved.back().entries(), path.back().entries()), 1e-9);
}

TEST(IntegrateLindblad, FourthOrderConvergence) {
  std::mt19937_64 rng(23);
  const OperatorSet set = noisy_qubit_set(0.2, testing::random_hermitian(2, rng));
  Eigen::MatrixXd pulses = Eigen::MatrixXd::Random(2, 4) * 3.0;
  const DensityMatrix rho0 = DensityMatrix::pure(QuantumState::basis(1, 0));
  auto final_state = [&](int n) {
    const TimeGrid grid(1.0, n, 4);
    return integrate_lindblad(set, ControlSchedule(pulses, grid), rho0, grid).back().entries();
  };
  const CMatrix reference = final_state(4096);
  const double e1 = trace_distance(final_state(16), reference);
  const double e2 = trace_distance(final_state(32), reference);
  EXPECT_GE(std::log2(e1 / e2), 3.5);
}

TEST(IntegrateLindblad, TracePreservedOnNoisyQubit) {
  const OperatorSet set = noisy_qubit_set(0.005);
  const TimeGrid grid(1.0, 128, 8);
  const ControlSchedule s(Eigen::MatrixXd::Random(2, 8) * 2.0, grid);
  for (const auto& rho : integrate_lindblad(set, s, DensityMatrix::pure(QuantumState::basis(1, 0)), grid)) {
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-8);
    EXPECT_NO_THROW(rho.validate(1e-8));
  }
}

TEST(LindbladGenerator, PropagateMatchesRk4AndAdjointDuality) {
  std::mt19937_64 rng(29);
  const OperatorSet set = noisy_qubit_set(0.3, testing::random_hermitian(2, rng));
  const LindbladGenerator gen(set.drift.entries(), set.lindblad, set.noise);
  const DensityMatrix rho0 = testing::random_density(2, rng);
  const TimeGrid grid(0.7, 700, 1);
  const auto path = integrate_lindblad(set, ControlSchedule::zeros(2, grid), rho0, grid);
  EXPECT_LT(max_abs(gen.propagate(rho0.entries(), 0.7) - path.back().entries()), 1e-11);
  const CMatrix x = testing::random_hermitian(2, rng);
  const Complex lhs = (x * gen.propagate(rho0.entries(), 0.7)).trace();
  const Complex rhs = (gen.propagate_adjoint(x, 0.7) * rho0.entries()).trace();
  EXPECT_LT(std::abs(lhs - rhs), 1e-12);
}

TEST(TraceDistance, OrthogonalPureStates) {
  EXPECT_NEAR(trace_distance(DensityMatrix::pure(QuantumState::basis(1, 0)).entries(),
                             DensityMatrix::pure(QuantumState::basis(1, 1)).entries()),
              1.0, 1e-15);
}

}  // namespace
}  // namespace qdc
