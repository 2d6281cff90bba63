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

#ifndef QDC_SCHEDULE_HPP
#define QDC_SCHEDULE_HPP

#include <Eigen/Dense>

#include <functional>

namespace qdc {

/// Uniform simulation grid on [0, T] with `n_steps` integrator steps grouped
/// into `n_bins` equal control intervals.
///
/// Step j covers [j*dt, (j+1)*dt]; bin k covers steps
/// [k*steps_per_bin, (k+1)*steps_per_bin).
class TimeGrid {
 public:
  /// Throws ValueError unless horizon > 0, n_bins >= 1 and n_bins divides n_steps.
  TimeGrid(double horizon, int n_steps, int n_bins);

  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  [[nodiscard]] int n_steps() const noexcept { return n_steps_; }
  [[nodiscard]] int n_bins() const noexcept { return n_bins_; }
  [[nodiscard]] int steps_per_bin() const noexcept { return n_steps_ / n_bins_; }
  [[nodiscard]] double dt() const noexcept { return horizon_ / n_steps_; }
  [[nodiscard]] double bin_width() const noexcept { return horizon_ / n_bins_; }

  [[nodiscard]] double step_time(int j) const noexcept { return j * dt(); }
  [[nodiscard]] double bin_edge(int k) const noexcept { return k * bin_width(); }
  [[nodiscard]] double bin_midpoint(int k) const noexcept { return (k + 0.5) * bin_width(); }
  [[nodiscard]] int bin_of_step(int j) const noexcept { return j / steps_per_bin(); }

  /// Same grid with a different number of integrator steps.
  [[nodiscard]] TimeGrid refined(int n_steps) const { return {horizon_, n_steps, n_bins_}; }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

 private:
  double horizon_;
  int n_steps_;
  int n_bins_;
};

/// Piecewise-constant open-loop control u_a(t) = sum_k pulses(a, k) [t in bin k].
class ControlSchedule {
 public:
  /// `pulses` is n_controls x n_bins; throws on a column-count mismatch or
  /// non-finite entries.
  ControlSchedule(Eigen::MatrixXd pulses, TimeGrid grid);

  static ControlSchedule zeros(Eigen::Index n_controls, const TimeGrid& grid);
  static ControlSchedule constant(const Eigen::VectorXd& value, const TimeGrid& grid);

  [[nodiscard]] const Eigen::MatrixXd& pulses() const noexcept { return pulses_; }
  [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
  [[nodiscard]] Eigen::Index n_controls() const noexcept { return pulses_.rows(); }
  [[nodiscard]] int n_bins() const noexcept { return grid_.n_bins(); }
  [[nodiscard]] double operator()(Eigen::Index a, Eigen::Index k) const { return pulses_(a, k); }

  /// Control vector in force at time t (right-continuous; t = T maps to the last bin).
  [[nodiscard]] Eigen::VectorXd at_time(double t) const;

  /// Copy of this schedule with new pulses on the same grid.
  [[nodiscard]] ControlSchedule with_pulses(Eigen::MatrixXd pulses) const {
    return {std::move(pulses), grid_};
  }

 private:
  Eigen::MatrixXd pulses_;
  TimeGrid grid_;
};

/// Time-dependent control u(t) on a binned grid, used where a schedule is not
/// piecewise constant (lab-frame images of rotating-frame pulses). `bin` is the
/// control bin of the integrator step that contains t, so discontinuities at bin
/// edges resolve to the step's own bin.
using ControlFunction = std::function<Eigen::VectorXd(double t, int bin)>;

}  // namespace qdc

#endif
