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

#include <qdc/schedule.hpp>

#include <qdc/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace qdc {

TimeGrid::TimeGrid(double horizon, int n_steps, int n_bins) : horizon_(horizon), n_steps_(n_steps), n_bins_(n_bins) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ValueError("time grid: horizon T must be positive and finite, got " + std::to_string(horizon));
  }
  if (n_steps < 1 || n_bins < 1) {
    throw ValueError("time grid: N_T and K must be >= 1 (N_T=" + std::to_string(n_steps) +
                     ", K=" + std::to_string(n_bins) + ")");
  }
  if (n_steps % n_bins != 0) {
    throw ValueError("time grid: K=" + std::to_string(n_bins) + " does not divide N_T=" + std::to_string(n_steps));
  }
}

ControlSchedule::ControlSchedule(Eigen::MatrixXd pulses, TimeGrid grid) : pulses_(std::move(pulses)), grid_(grid) {
  if (pulses_.cols() != grid_.n_bins()) {
    throw DimensionError("control schedule: " + std::to_string(pulses_.cols()) + " pulse columns for K=" +
                         std::to_string(grid_.n_bins()) + " bins");
  }
  if (!pulses_.allFinite()) {
    throw ValueError("control schedule: non-finite pulse amplitude");
  }
}

ControlSchedule ControlSchedule::zeros(Eigen::Index n_controls, const TimeGrid& grid) {
  return {Eigen::MatrixXd::Zero(n_controls, grid.n_bins()), grid};
}

ControlSchedule ControlSchedule::constant(const Eigen::VectorXd& value, const TimeGrid& grid) {
  return {value.replicate(1, grid.n_bins()), grid};
}

Eigen::VectorXd ControlSchedule::at_time(double t) const {
  const int k = std::clamp(static_cast<int>(std::floor(t / grid_.bin_width())), 0, grid_.n_bins() - 1);
  return pulses_.col(k);
}

}  // namespace qdc
