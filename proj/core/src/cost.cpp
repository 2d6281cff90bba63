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

#include <qdc/cost.hpp>

#include <qdc/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace qdc {

void CostSpec::validate() const {
  if (!(q >= 0.0) || !std::isfinite(q)) {
    throw ValueError("cost: Q must be finite and >= 0");
  }
  if (r.rows() != r.cols() || r.size() == 0 || !r.allFinite()) {
    throw ValueError("cost: R must be a finite non-empty square matrix");
  }
  if ((r - r.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, r.cwiseAbs().maxCoeff())) {
    throw ValueError("cost: R must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw ValueError("cost: R must be positive definite");
  }
}

EndCost CostSpec::end_cost(double fidelity) const {
  if (form == EndCostForm::linear) {
    return {-0.5 * q * fidelity, false};
  }
  const double infidelity = 1.0 - fidelity;
  if (infidelity < kLogClamp) {
    return {0.5 * q * std::log(kLogClamp), true};
  }
  return {0.5 * q * std::log(infidelity), false};
}

Eigen::MatrixXd scalar_weight(Eigen::Index n_c, double value) {
  return value * Eigen::MatrixXd::Identity(n_c, n_c);
}

double pi_lambda(const Eigen::MatrixXd& r, const NoiseMatrix& d_tilde) {
  if (r.rows() != d_tilde.size() || r.cols() != d_tilde.size()) {
    throw DimensionError("PI condition: R is " + std::to_string(r.rows()) + "x" + std::to_string(r.cols()) +
                         " but the noise matrix is " + std::to_string(d_tilde.size()) + "x" +
                         std::to_string(d_tilde.size()));
  }
  const Eigen::MatrixXd m = r * d_tilde.entries();
  const double lambda = m.diagonal().mean();
  if (!(lambda > 0.0)) {
    throw ValueError("PI condition: lambda = " + std::to_string(lambda) + " must be positive");
  }
  const Eigen::MatrixXd residual = m - lambda * Eigen::MatrixXd::Identity(m.rows(), m.cols());
  if (residual.cwiseAbs().maxCoeff() > 1e-8 * lambda) {
    throw ValueError("PI condition: R * D~ is not a multiple of the identity");
  }
  return lambda;
}

}  // namespace qdc
