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

#include <qdc/error.hpp>

#include <algorithm>
#include <cmath>

namespace qdc {

BasisSet::BasisSet(std::vector<BasisFunction> functions) : functions_(std::move(functions)) {
  if (functions_.empty()) {
    throw ValueError("basis set must contain at least one function");
  }
}

BasisSet BasisSet::indicators(const TimeGrid& grid) {
  std::vector<BasisFunction> fns;
  fns.reserve(static_cast<std::size_t>(grid.n_bins()));
  const double width = grid.bin_width();
  const int last = grid.n_bins() - 1;
  for (int k = 0; k < grid.n_bins(); ++k) {
    fns.emplace_back([k, width, last](double t, const CVector&) {
      // Round to the nearest edge first so step times that land on an edge are not split by round-off.
      const double x = t / width;
      const double nearest = std::round(x);
      const double pos = std::abs(x - nearest) < 1e-9 ? nearest : std::floor(x);
      const int bin = std::clamp(static_cast<int>(pos), 0, last);
      return bin == k ? 1.0 : 0.0;
    });
  }
  return BasisSet(std::move(fns));
}

BasisSet BasisSet::constant() {
  return BasisSet({[](double, const CVector&) { return 1.0; }});
}

Eigen::VectorXd BasisSet::evaluate(double t, const CVector& psi) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(functions_.size()));
  for (std::size_t k = 0; k < functions_.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = functions_[k](t, psi);
  }
  if (!out.allFinite()) {
    throw NumericalError("basis set: non-finite basis function value");
  }
  return out;
}

}  // namespace qdc
