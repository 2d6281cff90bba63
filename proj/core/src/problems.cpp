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

#include <qdc/problems.hpp>

#include <qdc/error.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <string>

namespace qdc {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr Eigen::Index kFullCheckLimit = 64;
constexpr Eigen::Index kLindbladLimit = 64;

void check_invariance(std::span<const OperatorMatrix> lindblad, const NoiseMatrix& noise, const UnravelingSpec& spec,
                      const std::string& name) {
  std::mt19937_64 rng(0x9a7e5eedULL);
  const double gap = dissipator_invariance_gap(lindblad, noise, spec, 2, rng);
  const double scale = std::max(1.0, noise.entries().cwiseAbs().maxCoeff());
  if (!(gap <= 1e-10 * scale)) {
    throw NumericalError(name + ": dissipator invariance gap " + std::to_string(gap) + " exceeds 1e-10 (relative to " +
                         std::to_string(scale) + ")");
  }
}

std::vector<OperatorMatrix> nmr_dissipators(int n) { return emission_absorption_operators(n); }

ProblemBundle assemble(std::string name, OperatorMatrix drift, UnravelingSpec spec, std::optional<OperatorSet> lindblad,
                       CostSpec cost, QuantumState initial, Frame frame) {
  cost.validate();
  const double lambda = spec.d_tilde().is_zero() ? 0.0 : pi_lambda(cost.r, spec.d_tilde());
  ControlProblem control{std::move(drift), std::move(spec), std::move(initial)};
  control.check();
  if (cost.target.dimension() != control.dimension()) {
    throw DimensionError(name + ": target dimension differs from the problem");
  }
  return {std::move(name), std::move(control), std::move(lindblad), std::move(cost), frame, lambda};
}

}  // namespace

QuantumState axis_state(PauliAxis axis) {
  CVector v(2);
  switch (axis) {
    case PauliAxis::x:
      v << 1.0, 1.0;
      break;
    case PauliAxis::y:
      v << 1.0, kI;
      break;
    case PauliAxis::z:
      v << 1.0, 0.0;
      break;
    default:
      throw ValueError("axis_state: axis must be x, y or z");
  }
  return QuantumState::from_amplitudes(v);
}

ProblemBundle build_noisy_qubit(double d, double r, double q, const QuantumState& initial, const QuantumState& target,
                                EndCostForm form) {
  if (!(d >= 0.0)) {
    throw ValueError("noisy qubit: D must be >= 0");
  }
  const auto ops = emission_absorption_operators(1);
  const NoiseMatrix noise = NoiseMatrix::scaled_identity(2, d);
  UnravelingSpec spec = transform_dissipators(ops, noise, GaugeTransform::qubit_pair());
  check_invariance(ops, noise, spec, "noisy qubit");
  OperatorMatrix drift(CMatrix::Zero(2, 2));
  OperatorSet lindblad{drift, spec.hamiltonians(), ops, noise};
  CostSpec cost{q, scalar_weight(2, r), target, form};
  return assemble("noisy_qubit", std::move(drift), std::move(spec), std::move(lindblad), std::move(cost), initial,
                  Frame::lab);
}

void NmrParams::validate() const {
  if (n_qubits < 1) {
    throw ValueError("nmr params: n_qubits must be >= 1");
  }
  if (shifts.size() != n_qubits) {
    throw ValueError("nmr params: shifts must have n_qubits entries");
  }
  if (couplings.rows() != n_qubits || couplings.cols() != n_qubits) {
    throw ValueError("nmr params: couplings must be n_qubits x n_qubits");
  }
  if (!shifts.allFinite() || !couplings.allFinite()) {
    throw ValueError("nmr params: non-finite shift or coupling");
  }
  if ((couplings - couplings.transpose()).cwiseAbs().maxCoeff() > 0.0 || couplings.diagonal().cwiseAbs().maxCoeff() > 0.0) {
    throw ValueError("nmr params: couplings must be symmetric with zero diagonal");
  }
  if (!(t1 > 0.0)) {
    throw ValueError("nmr params: T1 must be positive");
  }
}

NmrParams NmrParams::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValueError("nmr params: cannot open " + path);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValueError("nmr params: " + path + ": " + e.what());
  }
  const std::set<std::string> allowed{"n_qubits", "shifts", "couplings", "T1", "placeholder", "note"};
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw ValueError("nmr params: unknown key '" + key + "'");
    }
  }
  NmrParams p;
  try {
    p.n_qubits = j.at("n_qubits").get<int>();
    const auto shifts = j.at("shifts").get<std::vector<double>>();
    const auto couplings = j.at("couplings").get<std::vector<std::vector<double>>>();
    p.t1 = j.at("T1").get<double>();
    p.shifts = Eigen::Map<const Eigen::VectorXd>(shifts.data(), static_cast<Eigen::Index>(shifts.size()));
    p.couplings.resize(static_cast<Eigen::Index>(couplings.size()),
                       couplings.empty() ? 0 : static_cast<Eigen::Index>(couplings.front().size()));
    for (std::size_t i = 0; i < couplings.size(); ++i) {
      if (couplings[i].size() != couplings.front().size()) {
        throw ValueError("nmr params: couplings rows have different lengths");
      }
      for (std::size_t k = 0; k < couplings[i].size(); ++k) {
        p.couplings(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = couplings[i][k];
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValueError("nmr params: " + std::string(e.what()));
  }
  p.validate();
  return p;
}

OperatorMatrix nmr_coupling_hamiltonian(const NmrParams& params) {
  params.validate();
  const int n = params.n_qubits;
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix h = CMatrix::Zero(dim, dim);
  const CMatrix z = pauli_matrix(PauliAxis::z);
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      const double j = params.couplings(i, k);
      if (j == 0.0) {
        continue;
      }
      const std::array<std::pair<CMatrix, int>, 2> factors{std::pair{z, i}, std::pair{z, k}};
      h += (0.5 * std::numbers::pi * j) * tensor_chain(factors, n).entries();
    }
  }
  return OperatorMatrix(std::move(h));
}

OperatorMatrix nmr_zeeman_hamiltonian(const NmrParams& params) {
  params.validate();
  const int n = params.n_qubits;
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix h = CMatrix::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    h += (std::numbers::pi * params.shifts(i)) * pauli_operator(PauliAxis::z, i, n).entries();
  }
  return OperatorMatrix(std::move(h));
}

ProblemBundle build_nmr(const NmrParams& params, const NmrOptions& options) {
  params.validate();
  if (!(options.d >= 0.0) || !(options.horizon > 0.0)) {
    throw ValueError("nmr: need D >= 0 and T > 0");
  }
  const int n = params.n_qubits;
  const auto ops = nmr_dissipators(n);
  const NoiseMatrix noise = NoiseMatrix::scaled_identity(2 * n, options.d);
  UnravelingSpec spec = nmr_transform(n, options.d);
  if (spec.dimension() <= kFullCheckLimit) {
    check_invariance(ops, noise, spec, "nmr");
  }
  OperatorMatrix drift = nmr_coupling_hamiltonian(params);
  QuantumState target = ghz_state(n);
  if (options.frame == Frame::lab) {
    drift = drift + nmr_zeeman_hamiltonian(params);
  } else {
    target = ghz_target_rotating(n, params.shifts, options.horizon);
  }
  std::optional<OperatorSet> lindblad;
  if (spec.dimension() <= kLindbladLimit) {
    lindblad = OperatorSet{drift, spec.hamiltonians(), ops, noise};
  }
  const auto n_c = static_cast<Eigen::Index>(2 * n);
  CostSpec cost{options.q, scalar_weight(n_c, options.r / static_cast<double>(n_c)), std::move(target), options.form};
  return assemble("nmr", std::move(drift), std::move(spec), std::move(lindblad), std::move(cost),
                  QuantumState::basis(n, 0), options.frame);
}

ProblemBundle build_spin_chain(int n_qubits, double d1, double r, double q) {
  if (n_qubits < 2) {
    throw ValueError("spin chain: n_qubits must be >= 2");
  }
  if (!(d1 >= 0.0)) {
    throw ValueError("spin chain: D1 must be >= 0");
  }
  const double d2 = 2.0 * d1;
  UnravelingSpec spec = spin_chain_transform(n_qubits, d1, d2);
  std::optional<OperatorSet> lindblad;
  if (spec.dimension() <= kFullCheckLimit) {
    const auto ops = spin_chain_operators(n_qubits);
    const NoiseMatrix noise = spin_chain_noise(n_qubits, d1, d2);
    check_invariance(ops, noise, spec, "spin chain");
    if (spec.dimension() <= kLindbladLimit) {
      lindblad = OperatorSet{OperatorMatrix(CMatrix::Zero(spec.dimension(), spec.dimension())), spec.hamiltonians(),
                             ops, noise};
    }
  } else {
    // Site and bond blocks act on disjoint channels, so the two-site chain covers every block type.
    const UnravelingSpec local = spin_chain_transform(2, d1, d2);
    check_invariance(spin_chain_operators(2), spin_chain_noise(2, d1, d2), local, "spin chain");
  }
  const auto n_c = static_cast<Eigen::Index>(spec.n_channels());
  const Eigen::Index dim = spec.dimension();
  CostSpec cost{q, scalar_weight(n_c, r / static_cast<double>(n_c)), ghz_state(n_qubits)};
  return assemble("spin_chain", OperatorMatrix(CMatrix::Zero(dim, dim)), std::move(spec), std::move(lindblad),
                  std::move(cost), QuantumState::basis(n_qubits, 0), Frame::lab);
}

QuantumState ghz_state(int n_qubits) {
  return ghz_target_rotating(n_qubits, Eigen::VectorXd::Zero(n_qubits), 1.0);
}

QuantumState ghz_target_rotating(int n_qubits, const Eigen::VectorXd& shifts, double horizon) {
  if (n_qubits < 1) {
    throw ValueError("ghz: n_qubits must be >= 1");
  }
  if (shifts.size() != n_qubits) {
    throw DimensionError("ghz: need one shift per qubit");
  }
  const double omega = 0.5 * shifts.sum();
  const double phase = 2.0 * std::numbers::pi * omega * horizon;
  CVector v = CVector::Zero(Eigen::Index{1} << n_qubits);
  v(0) = std::polar(1.0, phase);
  v(v.size() - 1) = std::polar(1.0, -phase);
  return QuantumState::from_amplitudes(v);
}

ControlSchedule rotating_frame_controls(const ControlSchedule& schedule, const Eigen::VectorXd& shifts,
                                        FrameDirection direction) {
  if (schedule.n_controls() != 2 * shifts.size()) {
    throw DimensionError("rotating frame: need an (x, y) channel pair per qubit, got " +
                         std::to_string(schedule.n_controls()) + " channels for " + std::to_string(shifts.size()) +
                         " qubits");
  }
  const double sign = direction == FrameDirection::to_rotating ? 1.0 : -1.0;
  Eigen::MatrixXd out = schedule.pulses();
  for (int k = 0; k < schedule.n_bins(); ++k) {
    const double t = schedule.grid().bin_midpoint(k);
    for (Eigen::Index i = 0; i < shifts.size(); ++i) {
      const double theta = 2.0 * std::numbers::pi * shifts(i) * t;
      const double c = std::cos(theta);
      const double s = sign * std::sin(theta);
      const double ux = schedule(2 * i, k);
      const double uy = schedule(2 * i + 1, k);
      out(2 * i, k) = c * ux + s * uy;
      out(2 * i + 1, k) = -s * ux + c * uy;
    }
  }
  return schedule.with_pulses(std::move(out));
}

ControlFunction lab_frame_control(const ControlSchedule& rotating, const Eigen::VectorXd& shifts) {
  if (rotating.n_controls() != 2 * shifts.size()) {
    throw DimensionError("lab frame control: need an (x, y) channel pair per qubit");
  }
  return [rotating, shifts](double t, int bin) {
    Eigen::VectorXd u(rotating.n_controls());
    for (Eigen::Index i = 0; i < shifts.size(); ++i) {
      const double theta = 2.0 * std::numbers::pi * shifts(i) * t;
      const double c = std::cos(theta);
      const double s = std::sin(theta);
      const double ux = rotating(2 * i, bin);
      const double uy = rotating(2 * i + 1, bin);
      u(2 * i) = c * ux - s * uy;
      u(2 * i + 1) = s * ux + c * uy;
    }
    return u;
  };
}

QuantumState haar_random_state(int n_qubits, std::uint64_t seed) {
  if (n_qubits < 1 || n_qubits > 20) {
    throw ValueError("haar state: n_qubits out of range");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  CVector v(Eigen::Index{1} << n_qubits);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex{re, im};
  }
  return QuantumState::from_amplitudes(v);
}

double unitary_transfer_eval(const ControlSchedule& schedule, const OperatorMatrix& drift,
                             std::span<const OperatorMatrix> controls, const QuantumState& initial,
                             const QuantumState& target) {
  if (schedule.n_controls() != static_cast<Eigen::Index>(controls.size())) {
    throw DimensionError("unitary transfer: schedule has the wrong number of controls");
  }
  CVector psi = initial.amplitudes();
  const double width = schedule.grid().bin_width();
  for (int k = 0; k < schedule.n_bins(); ++k) {
    CMatrix h = drift.entries();
    for (std::size_t a = 0; a < controls.size(); ++a) {
      h += schedule(static_cast<Eigen::Index>(a), k) * controls[a].entries();
    }
    psi = unitary_propagator(h, width) * psi;
  }
  return std::norm(target.amplitudes().dot(psi));
}

double unitary_transfer_eval(const ProblemBundle& bundle, const ControlSchedule& schedule) {
  return unitary_transfer_eval(schedule, bundle.control.drift, bundle.control.unraveling.hamiltonians(),
                               bundle.control.initial, bundle.cost.target);
}

}  // namespace qdc
