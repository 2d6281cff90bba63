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

#include <gtest/gtest.h>

#include "../support.hpp"

namespace qdc {
namespace {

using testing::max_abs;

const Complex kI(0.0, 1.0);

std::vector<OperatorMatrix> random_operators(int count, Eigen::Index dim, std::mt19937_64& rng) {
  std::vector<OperatorMatrix> ops;
  for (int a = 0; a < count; ++a) {
    ops.emplace_back(testing::random_complex(dim, dim, rng));
  }
  return ops;
}

CMatrix random_invertible(Eigen::Index n, std::mt19937_64& rng) {
  return testing::random_complex(n, n, rng) + 2.0 * CMatrix::Identity(n, n);
}

TEST(GaugeTransform, RejectsSingular) {
  CMatrix a(2, 2);
  a << 1, 2, 2, 4;
  EXPECT_THROW(GaugeTransform{a}, ValueError);
}

TEST(TransformDissipators, HermitianTimesI) {
  std::mt19937_64 rng(2);
  std::vector<OperatorMatrix> c{OperatorMatrix(testing::random_hermitian(2, rng)),
                                OperatorMatrix(testing::random_hermitian(2, rng))};
  const NoiseMatrix d(testing::random_psd(2, rng));
  const UnravelingSpec spec = transform_dissipators(c, d, GaugeTransform(kI * CMatrix::Identity(2, 2)));
  const auto ct = spec.c_tilde();
  for (std::size_t a = 0; a < c.size(); ++a) {
    EXPECT_TRUE(ct[a].is_anti_hermitian());
    EXPECT_LT(max_abs(ct[a].entries() - kI * c[a].entries()), 1e-14);
  }
  EXPECT_LT((spec.d_tilde().entries() - d.entries()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(TransformDissipators, QubitPair) {
  const auto ops = emission_absorption_operators(1);
  const UnravelingSpec spec = transform_dissipators(ops, NoiseMatrix::scaled_identity(2, 0.8), GaugeTransform::qubit_pair());
  const auto ct = spec.c_tilde();
  EXPECT_LT(max_abs(ct[0].entries() + kI * pauli_matrix(PauliAxis::x)), 1e-15);
  EXPECT_LT(max_abs(ct[1].entries() + kI * pauli_matrix(PauliAxis::y)), 1e-15);
  EXPECT_LT((spec.d_tilde().entries() - 0.4 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TransformDissipators, IdentityOnAntiHermitian) {
  std::vector<OperatorMatrix> c{OperatorMatrix(kI * pauli_matrix(PauliAxis::z))};
  const UnravelingSpec spec = transform_dissipators(c, NoiseMatrix::scaled_identity(1, 0.2), GaugeTransform(CMatrix::Identity(1, 1)));
  EXPECT_LT(max_abs(spec.c_tilde()[0].entries() - c[0].entries()), 1e-15);
  EXPECT_DOUBLE_EQ(spec.d_tilde()(0, 0), 0.2);
}

TEST(TransformDissipators, NamesOffendingOperator) {
  const auto ops = emission_absorption_operators(1);
  try {
    (void)transform_dissipators(ops, NoiseMatrix::scaled_identity(2, 1.0), GaugeTransform(CMatrix::Identity(2, 2)));
    FAIL() << "sigma^+ is not anti-Hermitian";
  } catch (const ValueError& e) {
    EXPECT_NE(std::string(e.what()).find('0'), std::string::npos);
  }
}

TEST(InvarianceGap, QubitPair) {
  std::mt19937_64 rng(4);
  const auto ops = emission_absorption_operators(1);
  const NoiseMatrix d = NoiseMatrix::scaled_identity(2, 0.005);
  const UnravelingSpec spec = transform_dissipators(ops, d, GaugeTransform::qubit_pair());
  EXPECT_LE(dissipator_invariance_gap(ops, d, spec, 20, rng), 1e-12);
}

TEST(InvarianceGap, RandomInvertibleTransforms) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const int n_ops = 1 + trial % 3;
    const Eigen::Index dim = trial % 2 ? 4 : 2;
    const auto c = random_operators(n_ops, dim, rng);
    const CMatrix d = testing::random_psd(n_ops, rng).cast<Complex>();
    const GaugeTransform a(random_invertible(n_ops, rng));
    const GaugeImage image = apply_gauge(c, d, a);
    EXPECT_LE(dissipator_invariance_gap(c, d, image.operators, image.noise, 5, rng), 1e-10);
  }
}

TEST(InvarianceGap, DetectsInconsistentNoise) {
  std::mt19937_64 rng(8);
  const auto c = random_operators(2, 2, rng);
  const CMatrix d = testing::random_psd(2, rng).cast<Complex>();
  const GaugeTransform a(random_invertible(2, rng));
  const GaugeImage image = apply_gauge(c, d, a);
  EXPECT_GT(dissipator_invariance_gap(c, d, image.operators, 2.0 * image.noise, 5, rng), 1e-6);
}

TEST(ApplyGauge, InverseRecoversOriginal) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = random_operators(3, 2, rng);
    const CMatrix d = testing::random_psd(3, rng).cast<Complex>();
    const GaugeTransform a(random_invertible(3, rng));
    const GaugeImage image = apply_gauge(c, d, a);
    const GaugeImage back = apply_gauge(image.operators, image.noise, GaugeTransform(a.inverse()));
    for (std::size_t i = 0; i < c.size(); ++i) {
      EXPECT_LT(max_abs(back.operators[i].entries() - c[i].entries()), 1e-12);
    }
    EXPECT_LT(max_abs(back.noise - d), 1e-12);
  }
}

TEST(UnravelingSpec, ZeroExpectationOfHermitianPart) {
  std::mt19937_64 rng(12);
  for (const UnravelingSpec& spec : {nmr_transform(2, 0.3), spin_chain_transform(3, 0.1, 0.2)}) {
    for (int trial = 0; trial < 10; ++trial) {
      const QuantumState psi = testing::random_state(static_cast<int>(std::log2(spec.dimension())), rng);
      for (const auto& c : spec.c_tilde()) {
        const Complex e = psi.amplitudes().dot(c.hermitian_part().entries() * psi.amplitudes());
        EXPECT_LT(std::abs(e), 1e-12);
      }
    }
  }
}

TEST(NmrTransform, SingleQubitMatchesPair) {
  const UnravelingSpec one = nmr_transform(1, 0.4);
  const UnravelingSpec pair =
      transform_dissipators(emission_absorption_operators(1), NoiseMatrix::scaled_identity(2, 0.4), GaugeTransform::qubit_pair());
  ASSERT_EQ(one.n_channels(), 2u);
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_LT(max_abs(one.hamiltonians()[a].entries() - pair.hamiltonians()[a].entries()), 1e-15);
  }
  EXPECT_LT((one.d_tilde().entries() - pair.d_tilde().entries()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(NmrTransform, FourQubits) {
  std::mt19937_64 rng(14);
  const UnravelingSpec spec = nmr_transform(4, 0.1);
  ASSERT_EQ(spec.n_channels(), 8u);
  for (const auto& c : spec.c_tilde()) {
    EXPECT_TRUE(c.is_anti_hermitian());
  }
  EXPECT_LT((spec.d_tilde().entries() - 0.05 * Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-15);
  const NoiseMatrix d = NoiseMatrix::scaled_identity(8, 0.1);
  EXPECT_LE(dissipator_invariance_gap(emission_absorption_operators(4), d, spec, 5, rng), 1e-10);
  EXPECT_TRUE(nmr_transform(3, 0.0).d_tilde().is_zero());
}

TEST(SpinChainTransform, TwoQubits) {
  std::mt19937_64 rng(16);
  const UnravelingSpec spec = spin_chain_transform(2, 0.3, 0.8);
  ASSERT_EQ(spec.n_channels(), 8u);
  const Eigen::MatrixXd& d = spec.d_tilde().entries();
  for (int a = 0; a < 4; ++a) {
    EXPECT_NEAR(d(a, a), 0.15, 1e-15);
    EXPECT_NEAR(d(4 + a, 4 + a), 0.2, 1e-15);
  }
  const auto& h = spec.hamiltonians();
  const std::vector<std::pair<CMatrix, int>> xy{{pauli_matrix(PauliAxis::x), 0}, {pauli_matrix(PauliAxis::y), 1}};
  EXPECT_LT(max_abs(h[5].entries() - tensor_chain(xy, 2).entries()), 1e-15);
  EXPECT_LE(dissipator_invariance_gap(spin_chain_operators(2), spin_chain_noise(2, 0.3, 0.8), spec, 10, rng), 1e-10);
}

}  // namespace
}  // namespace qdc
