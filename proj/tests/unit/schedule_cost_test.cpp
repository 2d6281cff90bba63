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

#include <qdc/basis.hpp>
#include <qdc/cost.hpp>
#include <qdc/error.hpp>
#include <qdc/schedule.hpp>

#include <gtest/gtest.h>

#include <cmath>

namespace qdc {
namespace {

TEST(TimeGrid, RejectsNonDividingBins) {
  try {
    TimeGrid grid(1.0, 100, 30);
    FAIL() << "expected ValueError";
  } catch (const ValueError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("K=30"), std::string::npos);
    EXPECT_NE(what.find("N_T=100"), std::string::npos);
  }
  EXPECT_THROW(TimeGrid(0.0, 10, 1), ValueError);
  EXPECT_THROW(TimeGrid(1.0, 0, 1), ValueError);
}

TEST(TimeGrid, Geometry) {
  const TimeGrid g(2.0, 12, 4);
  EXPECT_DOUBLE_EQ(g.dt(), 2.0 / 12);
  EXPECT_EQ(g.steps_per_bin(), 3);
  EXPECT_DOUBLE_EQ(g.bin_edge(4), 2.0);
  EXPECT_DOUBLE_EQ(g.bin_midpoint(0), 0.25);
  EXPECT_EQ(g.bin_of_step(11), 3);
}

TEST(ControlSchedule, AtTime) {
  const TimeGrid g(1.0, 4, 4);
  Eigen::MatrixXd p(1, 4);
  p << 1, 2, 3, 4;
  const ControlSchedule s(p, g);
  EXPECT_EQ(s.at_time(0.0)(0), 1);
  EXPECT_EQ(s.at_time(0.25)(0), 2);
  EXPECT_EQ(s.at_time(1.0)(0), 4);
  EXPECT_THROW(ControlSchedule(Eigen::MatrixXd::Zero(1, 3), g), DimensionError);
  Eigen::MatrixXd bad = p;
  bad(0, 1) = NAN;
  EXPECT_THROW(ControlSchedule(bad, g), ValueError);
}

CostSpec qubit_cost(double q, double r, EndCostForm form = EndCostForm::linear) {
  return {q, scalar_weight(2, r), QuantumState::basis(1, 0), form};
}

TEST(CostSpec, EndCostForms) {
  EXPECT_DOUBLE_EQ(qubit_cost(10, 1).end_cost(0.9).value, -4.5);
  const EndCost log_cost = qubit_cost(10, 1, EndCostForm::logarithmic).end_cost(0.9);
  EXPECT_NEAR(log_cost.value, 5.0 * std::log(0.1), 1e-12);
  EXPECT_FALSE(log_cost.clamped);
  const EndCost clamped = qubit_cost(10, 1, EndCostForm::logarithmic).end_cost(1.0);
  EXPECT_TRUE(clamped.clamped);
  EXPECT_NEAR(clamped.value, 5.0 * std::log(kLogClamp), 1e-9);
}

TEST(CostSpec, Validation) {
  EXPECT_THROW(qubit_cost(-1, 1).validate(), ValueError);
  EXPECT_THROW(qubit_cost(1, 0).validate(), ValueError);
  EXPECT_NO_THROW(qubit_cost(0, 0.1).validate());
  EXPECT_DOUBLE_EQ(qubit_cost(1, 2).running_cost(Eigen::Vector2d(1, 1)), 2.0);
}

TEST(PiLambda, ScalarAndMismatch) {
  EXPECT_NEAR(pi_lambda(scalar_weight(2, 1.0), NoiseMatrix::scaled_identity(2, 0.0025)), 0.0025, 1e-18);
  Eigen::Matrix2d d;
  d << 0.1, 0, 0, 0.2;
  EXPECT_THROW((void)pi_lambda(scalar_weight(2, 1.0), NoiseMatrix(d)), ValueError);
  Eigen::Matrix2d r;
  r << 2, 0, 0, 1;
  EXPECT_NEAR(pi_lambda(r, NoiseMatrix(d)), 0.2, 1e-15);
  EXPECT_THROW((void)pi_lambda(scalar_weight(2, 1.0), NoiseMatrix::scaled_identity(2, 0.0)), ValueError);
}

TEST(BasisSet, IndicatorsPartitionTheHorizon) {
  const TimeGrid g(1.0, 8, 4);
  const BasisSet b = BasisSet::indicators(g);
  const CVector psi = CVector::Zero(2);
  for (double t : {0.0, 0.1, 0.25, 0.49, 0.5, 0.75, 0.99, 1.0}) {
    const Eigen::VectorXd h = b.evaluate(t, psi);
    EXPECT_DOUBLE_EQ(h.sum(), 1.0);
    EXPECT_DOUBLE_EQ(h(std::min(3, static_cast<int>(t / 0.25))), 1.0);
  }
  EXPECT_DOUBLE_EQ(BasisSet::constant().evaluate(0.3, psi)(0), 1.0);
}

TEST(BasisSet, NonFiniteEvaluationIsNumericalError) {
  const BasisSet b({[](double, const CVector&) { return NAN; }});
  EXPECT_THROW((void)b.evaluate(0.0, CVector::Zero(2)), NumericalError);
}

}  // namespace
}  // namespace qdc
