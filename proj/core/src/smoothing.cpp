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
#include <qdc/picontrol.hpp>

#include <gsl/gsl_bspline.h>
#include <gsl/gsl_vector.h>

#include <memory>
#include <string>

namespace qdc {
namespace {

struct BsplineDeleter {
  void operator()(gsl_bspline_workspace* w) const { gsl_bspline_free(w); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

// Cubic B-spline basis with `n_basis` functions on uniform breakpoints over [0, horizon],
// evaluated at the given points (rows) .
Eigen::MatrixXd bspline_design(int n_basis, double horizon, const Eigen::VectorXd& points) {
  constexpr std::size_t kOrder = 4;
  const auto n_break = static_cast<std::size_t>(n_basis - 2);
  std::unique_ptr<gsl_bspline_workspace, BsplineDeleter> ws(gsl_bspline_alloc(kOrder, n_break));
  std::unique_ptr<gsl_vector, VectorDeleter> values(gsl_vector_alloc(static_cast<std::size_t>(n_basis)));
  if (!ws || !values) {
    throw NumericalError("spline: GSL allocation failed");
  }
  gsl_bspline_knots_uniform(0.0, horizon, ws.get());
  Eigen::MatrixXd design(points.size(), n_basis);
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    gsl_bspline_eval(points(i), values.get(), ws.get());
    for (int j = 0; j < n_basis; ++j) {
      design(i, j) = gsl_vector_get(values.get(), static_cast<std::size_t>(j));
    }
  }
  return design;
}

}  // namespace

ControlSchedule spline_smooth(const ControlSchedule& schedule, int knots) {
  const int k_bins = schedule.n_bins();
  if (knots < 4 || knots > k_bins) {
    throw ValueError("spline: knots=" + std::to_string(knots) + " must lie in [4, K=" + std::to_string(k_bins) + "]");
  }
  const TimeGrid& grid = schedule.grid();
  Eigen::VectorXd mid(k_bins);
  for (int k = 0; k < k_bins; ++k) {
    mid(k) = grid.bin_midpoint(k);
  }
  const Eigen::MatrixXd design = bspline_design(knots, grid.horizon(), mid);
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  const Eigen::MatrixXd coeffs = qr.solve(schedule.pulses().transpose());
  return schedule.with_pulses((design * coeffs).transpose());
}

}  // namespace qdc
