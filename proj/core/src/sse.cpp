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

#include <qdc/sse.hpp>

#include <qdc/error.hpp>

#include <Eigen/Sparse>

#include <cmath>
#include <exception>
#include <random>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qdc {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr Eigen::Index kDenseLimit = 32;

using SparseC = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void renormalize(CVector& psi) {
  const double norm = psi.norm();
  psi /= norm;
}

QuantumState as_state(const CVector& psi) {
  if (!psi.allFinite()) {
    throw NumericalError("stochastic step produced a non-finite state");
  }
  return QuantumState::from_amplitudes(psi);
}

// Linear unraveling with the generators -i H_a prepared once per problem.
// Small systems use dense per-bin step matrices G_k = I + dt (M0 - i u_k.H); large ones use
// sparse products.
class LinearKernel {
 public:
  explicit LinearKernel(const ControlProblem& problem) {
    problem.check();
    const auto& gens = problem.unraveling.hamiltonians();
    const auto& d = problem.unraveling.d_tilde();
    dim_ = problem.dimension();
    n_c_ = static_cast<Eigen::Index>(gens.size());
    dense_ = dim_ <= kDenseLimit;
    std::vector<SparseC> h_sparse;
    h_sparse.reserve(gens.size());
    for (const auto& h : gens) {
      h_sparse.push_back(h.entries().sparseView());
    }
    SparseC m0 = (-kI * problem.drift.entries()).sparseView();
    for (Eigen::Index a = 0; a < n_c_; ++a) {
      for (Eigen::Index b = 0; b < n_c_; ++b) {
        const double dab = d(a, b);
        if (dab == 0.0) {
          continue;
        }
        SparseC prod = h_sparse[static_cast<std::size_t>(a)] * h_sparse[static_cast<std::size_t>(b)];
        m0 -= Complex{0.5 * dab, 0.0} * prod;
      }
    }
    m0.prune(Complex{0.0, 0.0});
    for (auto& h : h_sparse) {
      h *= -kI;
    }
    if (dense_) {
      m0_dense_ = CMatrix(m0);
      for (const auto& b : h_sparse) {
        b_dense_.emplace_back(b);
      }
    } else {
      m0_sparse_ = std::move(m0);
      b_sparse_ = std::move(h_sparse);
    }
  }

  [[nodiscard]] Eigen::Index dimension() const noexcept { return dim_; }
  [[nodiscard]] Eigen::Index n_controls() const noexcept { return n_c_; }

  // Per-bin step matrices for a piecewise-constant schedule (dense mode only).
  void bind(const Eigen::MatrixXd& pulses, double dt) {
    pulses_ = pulses;
    dt_ = dt;
    g_.clear();
    if (!dense_) {
      return;
    }
    for (Eigen::Index k = 0; k < pulses.cols(); ++k) {
      CMatrix g = CMatrix::Identity(dim_, dim_) + dt * m0_dense_;
      for (Eigen::Index a = 0; a < n_c_; ++a) {
        g += (dt * pulses(a, k)) * b_dense_[static_cast<std::size_t>(a)];
      }
      g_.push_back(std::move(g));
    }
  }

  void step_bin(int k, const Eigen::Ref<const Eigen::RowVectorXd>& dw, CVector& psi, CVector& tmp) const {
    if (dense_) {
      tmp.noalias() = g_[static_cast<std::size_t>(k)] * psi;
      for (Eigen::Index a = 0; a < n_c_; ++a) {
        if (dw(a) != 0.0) {
          tmp.noalias() += Complex{dw(a), 0.0} * (b_dense_[static_cast<std::size_t>(a)] * psi);
        }
      }
    } else {
      tmp = psi;
      tmp.noalias() += Complex{dt_, 0.0} * (m0_sparse_ * psi);
      for (Eigen::Index a = 0; a < n_c_; ++a) {
        const double coeff = pulses_(a, k) * dt_ + dw(a);
        if (coeff != 0.0) {
          tmp.noalias() += Complex{coeff, 0.0} * (b_sparse_[static_cast<std::size_t>(a)] * psi);
        }
      }
    }
    renormalize(tmp);
    psi.swap(tmp);
  }

  void step_control(const Eigen::VectorXd& u, const Eigen::Ref<const Eigen::RowVectorXd>& dw, double dt,
                    CVector& psi, CVector& tmp) const {
    tmp = psi;
    if (dense_) {
      tmp.noalias() += Complex{dt, 0.0} * (m0_dense_ * psi);
    } else {
      tmp.noalias() += Complex{dt, 0.0} * (m0_sparse_ * psi);
    }
    for (Eigen::Index a = 0; a < n_c_; ++a) {
      const double coeff = u(a) * dt + dw(a);
      if (coeff == 0.0) {
        continue;
      }
      if (dense_) {
        tmp.noalias() += Complex{coeff, 0.0} * (b_dense_[static_cast<std::size_t>(a)] * psi);
      } else {
        tmp.noalias() += Complex{coeff, 0.0} * (b_sparse_[static_cast<std::size_t>(a)] * psi);
      }
    }
    renormalize(tmp);
    psi.swap(tmp);
  }

 private:
  Eigen::Index dim_ = 0;
  Eigen::Index n_c_ = 0;
  bool dense_ = true;
  CMatrix m0_dense_;
  std::vector<CMatrix> b_dense_;
  SparseC m0_sparse_;
  std::vector<SparseC> b_sparse_;
  std::vector<CMatrix> g_;
  Eigen::MatrixXd pulses_;
  double dt_ = 0.0;
};

// Draws z ~ N(0, I) per step and maps it through the noise factor.
class NoiseSampler {
 public:
  NoiseSampler(const NoiseMatrix& noise, const TimeGrid& grid)
      : factor_(noise.square_root_factor()), diagonal_(factor_.isDiagonal(0.0)), grid_(grid) {}

  void sample(std::uint64_t seed, NoisePath& out) const {
    const Eigen::Index n_c = factor_.rows();
    const double sqrt_dt = std::sqrt(grid_.dt());
    out.increments.resize(grid_.n_steps(), n_c);
    out.binned.setZero(grid_.n_bins(), n_c);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(n_c);
    for (int j = 0; j < grid_.n_steps(); ++j) {
      for (Eigen::Index a = 0; a < n_c; ++a) {
        z(a) = normal(rng);
      }
      if (diagonal_) {
        out.increments.row(j) = (sqrt_dt * factor_.diagonal().cwiseProduct(z)).transpose();
      } else {
        out.increments.row(j) = (sqrt_dt * (factor_ * z)).transpose();
      }
      out.binned.row(grid_.bin_of_step(j)) += out.increments.row(j);
    }
  }

 private:
  Eigen::MatrixXd factor_;
  bool diagonal_;
  TimeGrid grid_;
};

void check_schedule(const ControlProblem& problem, const ControlSchedule& schedule) {
  if (schedule.n_controls() != problem.n_controls()) {
    throw DimensionError("schedule has " + std::to_string(schedule.n_controls()) + " controls, problem has " +
                         std::to_string(problem.n_controls()));
  }
}

void check_noise(const NoisePath& noise, const TimeGrid& grid, Eigen::Index n_c) {
  if (noise.increments.rows() != grid.n_steps() || noise.increments.cols() != n_c ||
      noise.binned.rows() != grid.n_bins() || noise.binned.cols() != n_c) {
    throw DimensionError("noise path does not match the grid and channel count");
  }
}

struct CostPieces {
  double quadratic = 0.0;
  double stochastic = 0.0;
};

CostPieces piecewise_costs(const ControlSchedule& schedule, const Eigen::MatrixXd& binned, const Eigen::MatrixXd& r) {
  CostPieces out;
  const double width = schedule.grid().bin_width();
  for (int k = 0; k < schedule.n_bins(); ++k) {
    const Eigen::VectorXd u = schedule.pulses().col(k);
    const Eigen::VectorXd ru = r * u;
    out.quadratic += 0.5 * u.dot(ru) * width;
    out.stochastic += ru.dot(binned.row(k).transpose());
  }
  return out;
}

int resolve_threads(int requested) {
#ifdef _OPENMP
  return requested > 0 ? requested : omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

template <class Body>
void parallel_for(int n, int threads, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1)
#endif
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  (void)threads;
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

TrajectoryBatch allocate_batch(int n) {
  TrajectoryBatch batch;
  batch.fidelities.resize(n);
  batch.quadratic_costs.resize(n);
  batch.stochastic_costs.resize(n);
  batch.end_costs.resize(n);
  batch.costs.resize(n);
  batch.binned_noise.resize(static_cast<std::size_t>(n));
  batch.final_states.resize(static_cast<std::size_t>(n));
  return batch;
}

void finish_batch(TrajectoryBatch& batch, const CostSpec& cost, std::vector<char>& clamped) {
  batch.clamped = 0;
  for (Eigen::Index i = 0; i < batch.size(); ++i) {
    batch.costs(i) = batch.end_costs(i) + batch.quadratic_costs(i) + batch.stochastic_costs(i);
    batch.clamped += clamped[static_cast<std::size_t>(i)] != 0 ? 1 : 0;
  }
  (void)cost;
}

double final_fidelity(const CVector& psi, const CostSpec& cost) {
  return std::norm(cost.target.amplitudes().dot(psi));
}

}  // namespace

std::uint64_t stream_seed(const StreamKey& key) {
  std::uint64_t h = splitmix64(key.base_seed);
  h = splitmix64(h ^ key.iteration);
  h = splitmix64(h ^ key.trajectory);
  return h;
}

NoisePath sample_noise(const NoiseMatrix& noise, const TimeGrid& grid, std::uint64_t seed) {
  NoisePath out;
  NoiseSampler(noise, grid).sample(seed, out);
  return out;
}

NoisePath sample_noise(const NoiseMatrix& noise, const TimeGrid& grid, const StreamKey& key) {
  return sample_noise(noise, grid, stream_seed(key));
}

CVector nonlinear_increment(const CVector& psi, const CMatrix& hamiltonian, std::span<const OperatorMatrix> lindblad,
                            const NoiseMatrix& noise, const Eigen::VectorXd& dw, double dt) {
  const auto n_c = static_cast<Eigen::Index>(lindblad.size());
  if (noise.size() != n_c || dw.size() != n_c) {
    throw DimensionError("nonlinear step: operator, noise and increment counts differ");
  }
  std::vector<CVector> c_psi;
  Eigen::VectorXd c(n_c);
  for (Eigen::Index a = 0; a < n_c; ++a) {
    c_psi.push_back(lindblad[static_cast<std::size_t>(a)].entries() * psi);
    c(a) = psi.dot(c_psi.back()).real();
  }
  CVector drift = -kI * (hamiltonian * psi);
  for (Eigen::Index a = 0; a < n_c; ++a) {
    for (Eigen::Index b = 0; b < n_c; ++b) {
      const double dab = noise(a, b);
      if (dab == 0.0) {
        continue;
      }
      const CMatrix& cb = lindblad[static_cast<std::size_t>(b)].entries();
      drift -= 0.5 * dab *
               (cb.adjoint() * c_psi[static_cast<std::size_t>(a)] - 2.0 * c(a) * c_psi[static_cast<std::size_t>(b)] +
                c(a) * c(b) * psi);
    }
  }
  CVector out = psi + dt * drift;
  for (Eigen::Index a = 0; a < n_c; ++a) {
    out += dw(a) * (c_psi[static_cast<std::size_t>(a)] - c(a) * psi);
  }
  return out;
}

CVector linear_increment(const CVector& psi, const CMatrix& drift, std::span<const OperatorMatrix> generators,
                         const Eigen::VectorXd& u, const NoiseMatrix& noise, const Eigen::VectorXd& dw, double dt) {
  const auto n_c = static_cast<Eigen::Index>(generators.size());
  if (noise.size() != n_c || dw.size() != n_c || u.size() != n_c) {
    throw DimensionError("linear step: generator, control, noise and increment counts differ");
  }
  std::vector<CVector> h_psi;
  for (const auto& h : generators) {
    h_psi.push_back(h.entries() * psi);
  }
  CVector out = psi - kI * dt * (drift * psi);
  for (Eigen::Index a = 0; a < n_c; ++a) {
    for (Eigen::Index b = 0; b < n_c; ++b) {
      const double dab = noise(a, b);
      if (dab != 0.0) {
        out -= 0.5 * dab * dt * (generators[static_cast<std::size_t>(a)].entries() * h_psi[static_cast<std::size_t>(b)]);
      }
    }
    out -= kI * (u(a) * dt + dw(a)) * h_psi[static_cast<std::size_t>(a)];
  }
  return out;
}

QuantumState step_nonlinear(const QuantumState& psi, const CMatrix& hamiltonian,
                            std::span<const OperatorMatrix> lindblad, const NoiseMatrix& noise,
                            const Eigen::VectorXd& dw, double dt) {
  return as_state(nonlinear_increment(psi.amplitudes(), hamiltonian, lindblad, noise, dw, dt));
}

QuantumState step_linear(const QuantumState& psi, const CMatrix& drift, std::span<const OperatorMatrix> generators,
                         const Eigen::VectorXd& u, const NoiseMatrix& noise, const Eigen::VectorXd& dw, double dt) {
  return as_state(linear_increment(psi.amplitudes(), drift, generators, u, noise, dw, dt));
}

void ControlProblem::check() const {
  if (unraveling.n_channels() > 0 && unraveling.dimension() != drift.dimension()) {
    throw DimensionError("control problem: generator and drift dimensions differ");
  }
  if (initial.dimension() != drift.dimension()) {
    throw DimensionError("control problem: initial state dimension differs from the drift");
  }
}

std::vector<QuantumState> nonlinear_path(const OperatorSet& problem, const ControlSchedule& schedule,
                                         const QuantumState& psi0, const NoisePath& noise) {
  problem.check();
  const TimeGrid& grid = schedule.grid();
  check_noise(noise, grid, problem.noise.size());
  if (schedule.n_controls() != static_cast<Eigen::Index>(problem.controls.size())) {
    throw DimensionError("nonlinear path: schedule has the wrong number of controls");
  }
  std::vector<QuantumState> out{psi0};
  out.reserve(static_cast<std::size_t>(grid.n_steps()) + 1);
  std::vector<CMatrix> hamiltonians;
  for (int k = 0; k < grid.n_bins(); ++k) {
    hamiltonians.push_back(problem.hamiltonian(schedule.pulses().col(k)));
  }
  for (int j = 0; j < grid.n_steps(); ++j) {
    const Eigen::VectorXd dw = noise.increments.row(j).transpose();
    out.push_back(step_nonlinear(out.back(), hamiltonians[static_cast<std::size_t>(grid.bin_of_step(j))],
                                 problem.lindblad, problem.noise, dw, grid.dt()));
  }
  return out;
}

std::vector<QuantumState> linear_path(const ControlProblem& problem, const ControlSchedule& schedule,
                                      const QuantumState& psi0, const NoisePath& noise) {
  check_schedule(problem, schedule);
  const TimeGrid& grid = schedule.grid();
  check_noise(noise, grid, problem.n_controls());
  LinearKernel kernel(problem);
  kernel.bind(schedule.pulses(), grid.dt());
  std::vector<QuantumState> out{psi0};
  CVector psi = psi0.amplitudes();
  CVector tmp(psi.size());
  for (int j = 0; j < grid.n_steps(); ++j) {
    kernel.step_bin(grid.bin_of_step(j), noise.increments.row(j), psi, tmp);
    out.push_back(as_state(psi));
  }
  return out;
}

Trajectory simulate_trajectory(const ControlProblem& problem, const ControlSchedule& schedule, const CostSpec& cost,
                               const NoisePath& noise) {
  check_schedule(problem, schedule);
  const TimeGrid& grid = schedule.grid();
  check_noise(noise, grid, problem.n_controls());
  LinearKernel kernel(problem);
  kernel.bind(schedule.pulses(), grid.dt());
  CVector psi = problem.initial.amplitudes();
  CVector tmp(psi.size());
  for (int j = 0; j < grid.n_steps(); ++j) {
    kernel.step_bin(grid.bin_of_step(j), noise.increments.row(j), psi, tmp);
  }
  const CostPieces pieces = piecewise_costs(schedule, noise.binned, cost.r);
  return {as_state(psi), final_fidelity(psi, cost), pieces.quadratic, pieces.stochastic, noise.binned};
}

TrajectoryBatch simulate_batch(const ControlProblem& problem, const ControlSchedule& schedule, const CostSpec& cost,
                               const BatchOptions& options) {
  if (options.n_traj < 1) {
    throw ValueError("simulate_batch: N_traj must be >= 1");
  }
  check_schedule(problem, schedule);
  if (cost.target.dimension() != problem.dimension()) {
    throw DimensionError("simulate_batch: target dimension differs from the problem");
  }
  const TimeGrid& grid = schedule.grid();
  LinearKernel kernel(problem);
  kernel.bind(schedule.pulses(), grid.dt());
  const NoiseSampler sampler(problem.unraveling.d_tilde(), grid);
  const int n = options.n_traj;
  TrajectoryBatch batch = allocate_batch(n);
  std::vector<char> clamped(static_cast<std::size_t>(n), 0);
  parallel_for(n, resolve_threads(options.threads), [&](int i) {
    NoisePath noise;
    sampler.sample(stream_seed({options.base_seed, options.iteration, static_cast<std::uint64_t>(i)}), noise);
    CVector psi = problem.initial.amplitudes();
    CVector tmp(psi.size());
    for (int j = 0; j < grid.n_steps(); ++j) {
      kernel.step_bin(grid.bin_of_step(j), noise.increments.row(j), psi, tmp);
    }
    const CostPieces pieces = piecewise_costs(schedule, noise.binned, cost.r);
    const double f = final_fidelity(psi, cost);
    const EndCost end = cost.end_cost(f);
    batch.fidelities(i) = f;
    batch.quadratic_costs(i) = pieces.quadratic;
    batch.stochastic_costs(i) = pieces.stochastic;
    batch.end_costs(i) = end.value;
    clamped[static_cast<std::size_t>(i)] = end.clamped ? 1 : 0;
    batch.binned_noise[static_cast<std::size_t>(i)] = std::move(noise.binned);
    batch.final_states[static_cast<std::size_t>(i)] = std::move(psi);
  });
  finish_batch(batch, cost, clamped);
  return batch;
}

TrajectoryBatch simulate_batch_basis(const ControlProblem& problem, const BasisSet& basis,
                                     const Eigen::MatrixXd& coefficients, const CostSpec& cost, const TimeGrid& grid,
                                     const BatchOptions& options) {
  if (options.n_traj < 1) {
    throw ValueError("simulate_batch_basis: N_traj must be >= 1");
  }
  const auto n_b = static_cast<Eigen::Index>(basis.size());
  if (coefficients.rows() != problem.n_controls() || coefficients.cols() != n_b) {
    throw DimensionError("simulate_batch_basis: coefficient matrix must be n_c x n_basis");
  }
  LinearKernel kernel(problem);
  const NoiseSampler sampler(problem.unraveling.d_tilde(), grid);
  const int n = options.n_traj;
  const double dt = grid.dt();
  TrajectoryBatch batch = allocate_batch(n);
  BasisStats stats;
  stats.gram.resize(static_cast<std::size_t>(n));
  stats.drive.resize(static_cast<std::size_t>(n));
  std::vector<char> clamped(static_cast<std::size_t>(n), 0);
  parallel_for(n, resolve_threads(options.threads), [&](int i) {
    NoisePath noise;
    sampler.sample(stream_seed({options.base_seed, options.iteration, static_cast<std::uint64_t>(i)}), noise);
    CVector psi = problem.initial.amplitudes();
    CVector tmp(psi.size());
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n_b, n_b);
    Eigen::MatrixXd drive = Eigen::MatrixXd::Zero(problem.n_controls(), n_b);
    double quadratic = 0.0;
    double stochastic = 0.0;
    for (int j = 0; j < grid.n_steps(); ++j) {
      const Eigen::VectorXd h = basis.evaluate(grid.step_time(j), psi);
      const Eigen::VectorXd u = coefficients * h;
      const Eigen::VectorXd dw = noise.increments.row(j).transpose();
      const Eigen::VectorXd ru = cost.r * u;
      gram.noalias() += dt * h * h.transpose();
      drive.noalias() += dw * h.transpose();
      quadratic += 0.5 * u.dot(ru) * dt;
      stochastic += ru.dot(dw);
      kernel.step_control(u, noise.increments.row(j), dt, psi, tmp);
    }
    const double f = final_fidelity(psi, cost);
    const EndCost end = cost.end_cost(f);
    batch.fidelities(i) = f;
    batch.quadratic_costs(i) = quadratic;
    batch.stochastic_costs(i) = stochastic;
    batch.end_costs(i) = end.value;
    clamped[static_cast<std::size_t>(i)] = end.clamped ? 1 : 0;
    batch.binned_noise[static_cast<std::size_t>(i)] = std::move(noise.binned);
    batch.final_states[static_cast<std::size_t>(i)] = std::move(psi);
    stats.gram[static_cast<std::size_t>(i)] = std::move(gram);
    stats.drive[static_cast<std::size_t>(i)] = std::move(drive);
  });
  finish_batch(batch, cost, clamped);
  batch.basis = std::move(stats);
  return batch;
}

}  // namespace qdc
