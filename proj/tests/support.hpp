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

#ifndef QDC_TESTS_SUPPORT_HPP
#define QDC_TESTS_SUPPORT_HPP

#include <qdc/quantum_core.hpp>

#include <random>

namespace qdc::testing {

inline CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = Complex(g(rng), g(rng));
    }
  }
  return m;
}

inline QuantumState random_state(int n_qubits, std::mt19937_64& rng) {
  return QuantumState::from_amplitudes(random_complex(Eigen::Index{1} << n_qubits, 1, rng).col(0));
}

inline CMatrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  const CMatrix m = random_complex(dim, dim, rng);
  return 0.5 * (m + m.adjoint());
}

inline DensityMatrix random_density(Eigen::Index dim, std::mt19937_64& rng) {
  const CMatrix m = random_complex(dim, dim, rng);
  CMatrix rho = m * m.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

inline Eigen::MatrixXd random_psd(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    m.data()[i] = g(rng);
  }
  return m * m.transpose();
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace qdc::testing

#endif
