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

#ifndef QDC_BASIS_HPP
#define QDC_BASIS_HPP

#include <qdc/quantum_core.hpp>
#include <qdc/schedule.hpp>

#include <functional>
#include <vector>

namespace qdc {

/// h_k(t, psi).
using BasisFunction = std::function<double(double t, const CVector& psi)>;

/// Linear control parametrization u_a(t, psi) = sum_k A_ak h_k(t, psi).
class BasisSet {
 public:
  explicit BasisSet(std::vector<BasisFunction> functions);

  /// h_k = indicator of control bin k (half-open [tau_k, tau_{k+1}), last bin closed).
  static BasisSet indicators(const TimeGrid& grid);
  /// Single function h = 1.
  static BasisSet constant();

  [[nodiscard]] std::size_t size() const noexcept { return functions_.size(); }
  /// Throws NumericalError on a non-finite evaluation.
  [[nodiscard]] Eigen::VectorXd evaluate(double t, const CVector& psi) const;

 private:
  std::vector<BasisFunction> functions_;
};

}  // namespace qdc

#endif
