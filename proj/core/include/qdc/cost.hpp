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

#ifndef QDC_COST_HPP
#define QDC_COST_HPP

#include <qdc/quantum_core.hpp>

namespace qdc {

enum class EndCostForm {
  linear,       ///< Phi = -(Q/2) F
  logarithmic,  ///< Phi = (Q/2) log(1 - F), with 1 - F clamped at kLogClamp
};

inline constexpr double kLogClamp = 1e-16;

struct EndCost {
  double value = 0.0;
  bool clamped = false;
};

/// Objective Phi(psi_T) + int (1/2) u^T R u dt. The state path cost is identically zero.
struct CostSpec {
  double q = 0.0;
  Eigen::MatrixXd r;
  QuantumState target;
  EndCostForm form = EndCostForm::linear;

  /// Throws ValueError unless Q >= 0 and R is finite, symmetric and positive definite.
  void validate() const;
  [[nodiscard]] EndCost end_cost(double fidelity) const;
  /// (1/2) u^T R u.
  [[nodiscard]] double running_cost(const Eigen::VectorXd& u) const { return 0.5 * u.dot(r * u); }
};

/// R scaled by value * identity of size n_c.
Eigen::MatrixXd scalar_weight(Eigen::Index n_c, double value);

/// lambda with R * D~ = lambda I, to relative tolerance 1e-8. Throws ValueError otherwise
/// or when lambda <= 0.
double pi_lambda(const Eigen::MatrixXd& r, const NoiseMatrix& d_tilde);

}  // namespace qdc

#endif
