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

#include <qdc/gauge.hpp>
#include <qdc/problems.hpp>
#include <qdc/sse.hpp>

#include <gtest/gtest.h>

#include <cmath>

#include "../support.hpp"

namespace qdc {
namespace {

using testing::max_abs;

TEST(SampleNoise, ZeroNoiseGivesZeroIncrements) {
  const NoisePath p = sample_noise(NoiseMatrix::scaled_identity(2, 0.0), TimeGrid(1.0, 64, 8), 5);
  EXPECT_TRUE(p.increments.isZero(0.0));
  EXPECT_TRUE(p.binned.isZero(0.0));
}

TEST(SampleNoise, CovarianceMatchesNoiseTimesDt) {
  const int n = 100000;
  const double d = 0.3;
  const TimeGrid grid(1.0, n, 1);
  const NoisePath p = sample_noise(NoiseMatrix::scaled_identity(2, d), grid, 77);
  const double v = d * grid.dt();
  const double se_var = std::sqrt(2.0 / n) * v;
  const double se_cross = v / std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXd cov = p.increments.transpose() * p.increments / n;
  EXPECT_NEAR(cov(0, 0), v, 5 * se_var);
  EXPECT_NEAR(cov(1, 1), v, 5 * se_var);
  EXPECT_NEAR(cov(0, 1), 0.0, 5 * se_cross);
  EXPECT_NEAR(p.increments.col(0).mean(), 0.0, 5 * std::sqrt(v / n));
}

TEST(SampleNoise, DeterministicAndBinned) {
  const TimeGrid grid(1.0, 64, 8);
  const NoiseMatrix d = NoiseMatrix::scaled_identity(2, 0.1);
  const NoisePath a = sample_noise(d, grid, StreamKey{3, 4, 5});
  const NoisePath b = sample_noise(d, grid, StreamKey{3, 4, 5});
  EXPECT_EQ(a.increments, b.increments);
  EXPECT_NE(a.increments, sample_noise(d, grid, StreamKey{3, 4, 6}).increments);
  for (int k = 0; k < 8; ++k) {
    const Eigen::RowVectorXd sum = a.increments.middleRows(8 * k, 8).colwise().sum();
    EXPECT_LT((sum - a.binned.row(k)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

struct QubitFixture {
  std::vector<OperatorMatrix> h{pauli_operator(PauliAxis::x, 0, 1), pauli_operator(PauliAxis::y, 0, 1)};
  std::vector<OperatorMatrix> c_tilde;
  NoiseMatrix d_tilde = NoiseMatrix::scaled_identity(2, 0.35);
  QubitFixture() {
    for (const auto& op : h) {
      c_tilde.push_back(Complex(0, -1) * op);
    }
  }
};

TEST(StepNonlinear, AntiHermitianOperatorsMatchLinearStep) {
  std::mt19937_64 rng(21);
  const QubitFixture f;
  for (int trial = 0; trial < 20; ++trial) {
    const QuantumState psi = testing::random_state(1, rng);
    const CMatrix h0 = testing::random_hermitian(2, rng);
    const Eigen::Vector2d u = Eigen::Vector2d::Random();
    const Eigen::Vector2d dw = Eigen::Vector2d::Random() * 0.05;
    const CMatrix h = h0 + u(0) * f.h[0].entries() + u(1) * f.h[1].entries();
    const QuantumState a = step_nonlinear(psi, h, f.c_tilde, f.d_tilde, dw, 0.01);
    const QuantumState b = step_linear(psi, h0, f.h, u, f.d_tilde, dw, 0.01);
    EXPECT_LT((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(StepNonlinear, NoiselessStepIsSchrodingerEuler) {
  std::mt19937_64 rng(22);
  const QuantumState psi = testing::random_state(1, rng);
  const CMatrix h = testing::random_hermitian(2, rng);
  const auto ops = emission_absorption_operators(1);
  const QuantumState next = step_nonlinear(psi, h, ops, NoiseMatrix::scaled_identity(2, 0.0), Eigen::Vector2d::Zero(), 0.01);
  const CVector euler = psi.amplitudes() - Complex(0, 0.01) * (h * psi.amplitudes());
  EXPECT_LT((next.amplitudes() - euler.normalized()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(StepNonlinear, NormDriftIsFirstOrder) {
  std::mt19937_64 rng(23);
  const auto ops = emission_absorption_operators(1);
  const NoiseMatrix d = NoiseMatrix::scaled_identity(2, 0.5);
  const CMatrix h = testing::random_hermitian(2, rng);
  std::normal_distribution<double> g;
  auto mean_drift = [&](double dt) {
    std::mt19937_64 local(99);
    std::mt19937_64 noise(100);
    double total = 0.0;
    for (int i = 0; i < 4000; ++i) {
      const QuantumState psi = testing::random_state(1, local);
      const Eigen::Vector2d dw(std::sqrt(0.5 * dt) * g(noise), std::sqrt(0.5 * dt) * g(noise));
      total += std::abs(nonlinear_increment(psi.amplitudes(), h, ops, d, dw, dt).squaredNorm() - 1.0);
    }
    return total / 4000;
  };
  const double order = std::log2(mean_drift(1e-3) / mean_drift(5e-4));
  EXPECT_GE(order, 0.9);
}

TEST(StepLinear, SingleQubitDecayIsMinusDTilde) {
  const QubitFixture f;
  std::mt19937_64 rng(24);
  const QuantumState psi = testing::random_state(1, rng);
  const CVector next = linear_increment(psi.amplitudes(), CMatrix::Zero(2, 2), f.h, Eigen::Vector2d::Zero(), f.d_tilde,
                                        Eigen::Vector2d::Zero(), 0.01);
  EXPECT_LT((next - (1.0 - 0.35 * 0.01) * psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(StepLinear, NmrDecayIsMinusNDTilde) {
  const int n = 3;
  const UnravelingSpec spec = nmr_transform(n, 0.2);
  std::mt19937_64 rng(25);
  const QuantumState psi = testing::random_state(n, rng);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2 * n);
  const CVector next = linear_increment(psi.amplitudes(), CMatrix::Zero(8, 8), spec.hamiltonians(), zero,
                                        spec.d_tilde(), zero, 0.01);
  EXPECT_LT((next - (1.0 - n * 0.1 * 0.01) * psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-14);
}

ControlProblem qubit_problem(double d_tilde, const CMatrix& drift = CMatrix::Zero(2, 2)) {
  const QubitFixture f;
  return {OperatorMatrix(drift), UnravelingSpec(f.h, NoiseMatrix::scaled_identity(2, d_tilde)), QuantumState::basis(1, 0)};
}

TEST(LinearPath, FreeEvolutionAndUnitNorm) {
  std::mt19937_64 rng(26);
  const CMatrix h0 = testing::random_hermitian(2, rng);
  const ControlProblem p = qubit_problem(0.0, h0);
  auto error = [&](int steps) {
    const TimeGrid grid(1.0, steps, 1);
    const auto path = linear_path(p, ControlSchedule::zeros(2, grid), p.initial, sample_noise(p.unraveling.d_tilde(), grid, 1));
    for (const auto& psi : path) {
      EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-12);
    }
    return (path.back().amplitudes() - unitary_propagator(h0, 1.0) * p.initial.amplitudes()).norm();
  };
  const double e1 = error(1000);
  EXPECT_LT(e1, 5e-3);
  EXPECT_NEAR(e1 / error(2000), 2.0, 0.2);
}

TEST(LinearPath, NormIsOneWithNoise) {
  const ControlProblem p = qubit_problem(0.4);
  const TimeGrid grid(1.0, 200, 10);
  const ControlSchedule s(Eigen::MatrixXd::Random(2, 10), grid);
  for (const auto& psi : linear_path(p, s, p.initial, sample_noise(p.unraveling.d_tilde(), grid, 8))) {
    EXPECT_NEAR(psi.amplitudes().norm(), 1.0, 1e-12);
  }
}

CostSpec qubit_cost(double r) {
  return {10.0, scalar_weight(2, r), axis_state(PauliAxis::y), EndCostForm::linear};
}

TEST(SimulateTrajectory, ZeroControlHasNoControlCost) {
  const ControlProblem p = qubit_problem(0.2);
  const TimeGrid grid(1.0, 64, 8);
  const Trajectory t = simulate_trajectory(p, ControlSchedule::zeros(2, grid), qubit_cost(1.0),
                                           sample_noise(p.unraveling.d_tilde(), grid, 3));
  EXPECT_EQ(t.quadratic_cost, 0.0);
  EXPECT_EQ(t.stochastic_cost, 0.0);
  EXPECT_GE(t.fidelity, 0.0);
  EXPECT_LE(t.fidelity, 1.0);
}

TEST(SimulateTrajectory, ConstantControlMatchesExponential) {
  const ControlProblem p = qubit_problem(0.0);
  const Eigen::Vector2d u(1.3, -0.4);
  const CMatrix h = u(0) * pauli_matrix(PauliAxis::x) + u(1) * pauli_matrix(PauliAxis::y);
  const CVector exact = unitary_propagator(h, 1.0) * p.initial.amplitudes();
  auto error = [&](int steps) {
    const TimeGrid grid(1.0, steps, 4);
    const ControlSchedule s = ControlSchedule::constant(u, grid);
    const Trajectory t = simulate_trajectory(p, s, qubit_cost(2.0), sample_noise(p.unraveling.d_tilde(), grid, 4));
    EXPECT_NEAR(t.quadratic_cost, 0.5 * 2.0 * u.squaredNorm(), 1e-12);
    return (t.final_state.amplitudes() - exact).norm();
  };
  const double e1 = error(2000);
  EXPECT_LT(e1, 2e-3);
  EXPECT_NEAR(e1 / error(4000), 4.0, 0.4);
}

TEST(SimulateBatch, SingleTrajectoryMatchesDirectSimulation) {
  const ControlProblem p = qubit_problem(0.1);
  const TimeGrid grid(1.0, 64, 8);
  const ControlSchedule s(Eigen::MatrixXd::Random(2, 8), grid);
  const TrajectoryBatch b = simulate_batch(p, s, qubit_cost(1.0), {1, 42, 7, 1});
  const Trajectory t = simulate_trajectory(p, s, qubit_cost(1.0), sample_noise(p.unraveling.d_tilde(), grid, StreamKey{42, 7, 0}));
  EXPECT_NEAR(b.fidelities(0), t.fidelity, 1e-14);
  EXPECT_NEAR(b.stochastic_costs(0), t.stochastic_cost, 1e-14);
  EXPECT_NEAR(b.quadratic_costs(0), t.quadratic_cost, 1e-14);
  EXPECT_EQ(b.binned_noise[0], t.binned_noise);
}

TEST(SimulateBatch, IndependentOfThreadCount) {
  const ControlProblem p = qubit_problem(0.1);
  const TimeGrid grid(1.0, 64, 8);
  const ControlSchedule s(Eigen::MatrixXd::Random(2, 8), grid);
  const TrajectoryBatch one = simulate_batch(p, s, qubit_cost(1.0), {300, 5, 2, 1});
  const TrajectoryBatch many = simulate_batch(p, s, qubit_cost(1.0), {300, 5, 2, 4});
  EXPECT_EQ(one.costs, many.costs);
  EXPECT_EQ(one.fidelities, many.fidelities);
}

TEST(SimulateBatch, BinnedNoiseMoments) {
  const ControlProblem p = qubit_problem(0.2);
  const TimeGrid grid(1.0, 32, 4);
  const int n = 4000;
  const TrajectoryBatch b = simulate_batch(p, ControlSchedule::zeros(2, grid), qubit_cost(1.0), {n, 9, 0, 0});
  const double v = 0.2 * grid.bin_width();
  for (int k = 0; k < 4; ++k) {
    for (int a = 0; a < 2; ++a) {
      double sum = 0.0;
      double sq = 0.0;
      for (const auto& w : b.binned_noise) {
        sum += w(k, a);
        sq += w(k, a) * w(k, a);
      }
      EXPECT_NEAR(sum / n, 0.0, 5 * std::sqrt(v / n));
      EXPECT_NEAR(sq / n, v, 5 * std::sqrt(2.0 / n) * v);
    }
  }
}

TEST(Unraveling, NonlinearAndLinearAgreeStatistically) {
  const ProblemBundle bundle = build_noisy_qubit(0.5, 1.0, 10.0, axis_state(PauliAxis::x), axis_state(PauliAxis::y));
  const TimeGrid grid(1.0, 64, 8);
  const ControlSchedule s(Eigen::MatrixXd::Random(2, 8), grid);
  const int n = 2000;
  const std::array<CMatrix, 3> paulis{pauli_matrix(PauliAxis::x), pauli_matrix(PauliAxis::y), pauli_matrix(PauliAxis::z)};
  auto bloch = [&](bool linear) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(grid.n_steps() + 1, 3);
    Eigen::MatrixXd sq = sum;
    for (int i = 0; i < n; ++i) {
      const std::vector<QuantumState> path =
          linear ? linear_path(bundle.control, s, bundle.control.initial,
                               sample_noise(bundle.control.unraveling.d_tilde(), grid, StreamKey{1, 0, static_cast<std::uint64_t>(i)}))
                 : nonlinear_path(*bundle.lindblad, s, bundle.control.initial,
                                  sample_noise(bundle.lindblad->noise, grid, StreamKey{2, 0, static_cast<std::uint64_t>(i)}));
      for (std::size_t j = 0; j < path.size(); ++j) {
        for (int c = 0; c < 3; ++c) {
          const double m = path[j].amplitudes().dot(paulis[static_cast<std::size_t>(c)] * path[j].amplitudes()).real();
          sum(static_cast<Eigen::Index>(j), c) += m;
          sq(static_cast<Eigen::Index>(j), c) += m * m;
        }
      }
    }
    const Eigen::MatrixXd mean = sum / n;
    const Eigen::MatrixXd var = (sq / n - mean.cwiseProduct(mean)) / (n - 1);
    return std::pair{mean, var};
  };
  const auto [m_lin, v_lin] = bloch(true);
  const auto [m_non, v_non] = bloch(false);
  const Eigen::MatrixXd z = (m_lin - m_non).cwiseAbs().cwiseQuotient((v_lin + v_non).cwiseSqrt().array().max(1e-12).matrix());
  EXPECT_LT(z.maxCoeff(), 5.0);
}

}  // namespace
}  // namespace qdc
