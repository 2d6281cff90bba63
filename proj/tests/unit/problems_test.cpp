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
#include <qdc/grape.hpp>
#include <qdc/problems.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "../support.hpp"

namespace qdc {
namespace {

using testing::max_abs;

NmrParams two_qubit_params() {
  NmrParams p;
  p.n_qubits = 2;
  p.shifts = Eigen::Vector2d(1.3, 2.1);
  p.couplings = Eigen::Matrix2d::Zero();
  p.couplings(0, 1) = p.couplings(1, 0) = 0.7;
  p.t1 = 5.0;
  return p;
}

TEST(NoisyQubit, LambdaAndDecay) {
  std::mt19937_64 rng(1);
  const ProblemBundle b = build_noisy_qubit(0.005, 1.0, 10.0, axis_state(PauliAxis::x), axis_state(PauliAxis::y));
  EXPECT_NEAR(b.lambda, 0.0025, 1e-15);
  const QuantumState psi = testing::random_state(1, rng);
  const CVector next = linear_increment(psi.amplitudes(), b.control.drift.entries(), b.control.unraveling.hamiltonians(),
                                        Eigen::Vector2d::Zero(), b.control.unraveling.d_tilde(), Eigen::Vector2d::Zero(), 0.1);
  EXPECT_LT((next - (1.0 - 0.0025 * 0.1) * psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE(dissipator_invariance_gap(b.lindblad->lindblad, b.lindblad->noise, b.control.unraveling, 10, rng), 1e-12);
}

TEST(AxisState, Eigenstates) {
  for (PauliAxis axis : {PauliAxis::x, PauliAxis::y, PauliAxis::z}) {
    const CVector psi = axis_state(axis).amplitudes();
    EXPECT_LT((pauli_matrix(axis) * psi - psi).norm(), 1e-15);
  }
}

TEST(Nmr, SingleQubitWithoutCouplingIsNoisyQubit) {
  NmrParams p;
  p.n_qubits = 1;
  p.shifts = Eigen::VectorXd::Zero(1);
  p.couplings = Eigen::MatrixXd::Zero(1, 1);
  NmrOptions o;
  o.d = 0.01;
  const ProblemBundle nmr = build_nmr(p, o);
  const ProblemBundle q = build_noisy_qubit(0.01, 0.5, 1.0, QuantumState::basis(1, 0), ghz_state(1));
  EXPECT_TRUE(nmr.control.drift.entries().isZero(0.0));
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_LT(max_abs(nmr.control.unraveling.hamiltonians()[a].entries() - q.control.unraveling.hamiltonians()[a].entries()), 1e-15);
  }
  EXPECT_NEAR(nmr.lambda, q.lambda, 1e-15);
}

TEST(Nmr, DecayCoefficient) {
  NmrParams p = two_qubit_params();
  NmrOptions o;
  o.d = 0.2;
  const ProblemBundle b = build_nmr(p, o);
  std::mt19937_64 rng(2);
  const QuantumState psi = testing::random_state(2, rng);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
  const CVector next = linear_increment(psi.amplitudes(), CMatrix::Zero(4, 4), b.control.unraveling.hamiltonians(), zero,
                                        b.control.unraveling.d_tilde(), zero, 0.01);
  EXPECT_LT((next - (1.0 - 2 * 0.1 * 0.01) * psi.amplitudes()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Nmr, ParamsFromJson) {
  const auto path = std::filesystem::temp_directory_path() / "qdc_nmr_params_test.json";
  {
    std::ofstream out(path);
    out << R"({"n_qubits": 2, "shifts": [1.0, 2.0], "couplings": [[0, 3], [3, 0]], "T1": 4.0, "placeholder": true})";
  }
  const NmrParams p = NmrParams::from_json_file(path.string());
  EXPECT_EQ(p.n_qubits, 2);
  EXPECT_DOUBLE_EQ(p.couplings(0, 1), 3.0);
  EXPECT_DOUBLE_EQ(p.t1, 4.0);
  {
    std::ofstream out(path);
    out << R"({"n_qubits": 2, "shifts": [1.0, 2.0], "couplings": [[0, 3], [2, 0]], "T1": 4.0})";
  }
  EXPECT_THROW((void)NmrParams::from_json_file(path.string()), ValueError);
  {
    std::ofstream out(path);
    out << R"({"n_qubits": 2, "shifts": [1.0, 2.0], "couplings": [[0, 3], [3, 0]], "T1": 4.0, "extra": 1})";
  }
  EXPECT_THROW((void)NmrParams::from_json_file(path.string()), ValueError);
  std::filesystem::remove(path);
}

TEST(RotatingFrame, RoundTripAndQuarterTurn) {
  const TimeGrid grid(1.0, 8, 4);
  const Eigen::Vector2d shifts(0.3, 1.7);
  const ControlSchedule s(Eigen::MatrixXd::Random(4, 4), grid);
  const ControlSchedule there = rotating_frame_controls(s, shifts, FrameDirection::to_rotating);
  const ControlSchedule back = rotating_frame_controls(there, shifts, FrameDirection::to_lab);
  EXPECT_LT((back.pulses() - s.pulses()).cwiseAbs().maxCoeff(), 1e-12);
  // nu t = 1/4 at the first bin midpoint.
  const Eigen::VectorXd quarter = Eigen::VectorXd::Constant(1, 0.25 / grid.bin_midpoint(0));
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(2, 4);
  p(0, 0) = 0.8;
  p(1, 0) = -0.3;
  const ControlSchedule r = rotating_frame_controls(ControlSchedule(p, grid), quarter, FrameDirection::to_rotating);
  EXPECT_NEAR(r(0, 0), -0.3, 1e-12);
  EXPECT_NEAR(r(1, 0), -0.8, 1e-12);
  const ControlFunction lab = lab_frame_control(ControlSchedule(p, grid), Eigen::VectorXd::Zero(1));
  EXPECT_LT((lab(0.0, 0) - p.col(0)).norm(), 1e-15);
}

TEST(GhzTarget, Phases) {
  const QuantumState plain = ghz_state(2);
  EXPECT_NEAR(plain.amplitudes()(0).real(), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(plain.amplitudes()(3).real(), std::sqrt(0.5), 1e-15);
  EXPECT_LT((ghz_target_rotating(2, Eigen::Vector2d::Zero(), 1.0).amplitudes() - plain.amplitudes()).norm(), 1e-15);
  // omega T = 3 is an integer.
  EXPECT_NEAR(fidelity(ghz_target_rotating(2, Eigen::Vector2d(2.5, 3.5), 1.0), plain), 1.0, 1e-12);
  const Eigen::Vector3d shifts(0.3, 0.1, 0.45);
  const double omega = 0.5 * shifts.sum();
  for (double t : {0.1, 0.7, 1.3}) {
    const double c = std::cos(2 * std::numbers::pi * omega * t);
    EXPECT_NEAR(fidelity(ghz_target_rotating(3, shifts, t), ghz_state(3)), c * c, 1e-12);
  }
}

TEST(SpinChain, ControlCounts) {
  EXPECT_EQ(build_spin_chain(2, 0.01, 1.0, 1.0).control.n_controls(), 8);
  const UnravelingSpec ten = spin_chain_transform(10, 0.01, 0.02);
  EXPECT_EQ(ten.n_channels(), 56u);
  const ProblemBundle b = build_spin_chain(3, 0.01, 1.0, 1.0);
  const Eigen::MatrixXd& d = b.control.unraveling.d_tilde().entries();
  EXPECT_LT((d - d(0, 0) * Eigen::MatrixXd::Identity(d.rows(), d.cols())).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_GT(b.lambda, 0.0);
}

TEST(HaarState, NormSeedAndMoment) {
  const QuantumState a = haar_random_state(2, 17);
  EXPECT_NEAR(a.amplitudes().norm(), 1.0, 1e-12);
  EXPECT_EQ(a.amplitudes(), haar_random_state(2, 17).amplitudes());
  const int n = 10000;
  double sum = 0.0;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p = std::norm(haar_random_state(2, 1000 + i).amplitudes()(0));
    sum += p;
    sq += p * p;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sq / n - mean * mean) / (n - 1));
  EXPECT_NEAR(mean, 0.25, 5 * se);
}

TEST(UnitaryTransfer, Examples) {
  const ProblemBundle b = build_noisy_qubit(0.005, 1.0, 10.0, axis_state(PauliAxis::x), axis_state(PauliAxis::y));
  const TimeGrid grid(1.0, 16, 8);
  EXPECT_NEAR(unitary_transfer_eval(b, ControlSchedule::zeros(2, grid)), 0.5, 1e-14);
  const ProblemBundle closed = build_noisy_qubit(0.0, 1.0, 10.0, axis_state(PauliAxis::x), axis_state(PauliAxis::y));
  const ControlSchedule s(Eigen::MatrixXd::Random(2, 8), grid);
  const DensityMatrix rho_t = lindblad_final_state(*closed.lindblad, s, DensityMatrix::pure(closed.control.initial));
  EXPECT_NEAR(unitary_transfer_eval(closed, s), fidelity(rho_t, closed.cost.target), 1e-12);
}

TEST(RotatingFrame, CostEquivalenceTwoQubits) {
  const NmrParams p = two_qubit_params();
  NmrOptions o;
  o.d = 0.05;
  o.q = 2.0;
  o.r = 0.4;
  o.horizon = 1.0;
  o.frame = Frame::rotating;
  const ProblemBundle rot = build_nmr(p, o);
  o.frame = Frame::lab;
  const ProblemBundle lab = build_nmr(p, o);
  const TimeGrid grid(1.0, 4000, 8);
  const ControlSchedule u(Eigen::MatrixXd::Random(4, 8) * 2.0, grid);
  const DensityMatrix rho0 = DensityMatrix::pure(rot.control.initial);
  const DensityMatrix rot_final = integrate_lindblad(*rot.lindblad, u, rho0, grid).back();
  const DensityMatrix lab_final = integrate_lindblad(*lab.lindblad, lab_frame_control(u, p.shifts), rho0, grid).back();
  const double c_rot = rot.cost.end_cost(fidelity(rot_final, rot.cost.target)).value;
  const double c_lab = lab.cost.end_cost(fidelity(lab_final, lab.cost.target)).value;
  EXPECT_NEAR(c_rot, c_lab, 1e-6);
}

}  // namespace
}  // namespace qdc
