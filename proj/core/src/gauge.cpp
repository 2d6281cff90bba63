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

#include <qdc/gauge.hpp>

#include <qdc/error.hpp>

#include <unsupported/Eigen/KroneckerProduct>

#include <array>
#include <cmath>
#include <string>

namespace qdc {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kTransformTolerance = 1e-10;

CMatrix complex_dissipator(const CMatrix& noise, std::span<const OperatorMatrix> ops, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (std::size_t a = 0; a < ops.size(); ++a) {
    for (std::size_t b = 0; b < ops.size(); ++b) {
      const Complex d = noise(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (d == Complex{0.0, 0.0}) {
        continue;
      }
      const CMatrix& ca = ops[a].entries();
      const CMatrix& cb = ops[b].entries();
      const CMatrix cbd_ca = cb.adjoint() * ca;
      out.noalias() += d * (ca * rho * cb.adjoint() - 0.5 * (cbd_ca * rho + rho * cbd_ca));
    }
  }
  return out;
}

CMatrix embed_adjacent(const CMatrix& local, int first_qubit, int n_qubits) {
  const int span = static_cast<int>(std::lround(std::log2(static_cast<double>(local.rows()))));
  const Eigen::Index left = Eigen::Index{1} << first_qubit;
  const Eigen::Index right = Eigen::Index{1} << (n_qubits - first_qubit - span);
  const CMatrix with_left = Eigen::kroneckerProduct(CMatrix::Identity(left, left), local).eval();
  return Eigen::kroneckerProduct(with_left, CMatrix::Identity(right, right)).eval();
}

// Local transform of one site: (sigma^+, sigma^-) with rate d.
UnravelingSpec site_block(double rate) {
  const std::vector<OperatorMatrix> ops{OperatorMatrix(pauli_matrix(PauliAxis::plus)),
                                        OperatorMatrix(pauli_matrix(PauliAxis::minus))};
  return transform_dissipators(ops, NoiseMatrix::scaled_identity(2, rate), GaugeTransform::qubit_pair());
}

// Local transform of one bond: sigma^a (x) sigma^b, a, b in {+, -}, with rate d.
UnravelingSpec bond_block(double rate) {
  const std::array<CMatrix, 2> pm{pauli_matrix(PauliAxis::plus), pauli_matrix(PauliAxis::minus)};
  std::vector<OperatorMatrix> ops;
  for (const auto& a : pm) {
    for (const auto& b : pm) {
      ops.emplace_back(Eigen::kroneckerProduct(a, b).eval());
    }
  }
  const CMatrix a1 = GaugeTransform::qubit_pair().matrix();
  const GaugeTransform pair(kI * Eigen::kroneckerProduct(a1, a1).eval());
  return transform_dissipators(ops, NoiseMatrix::scaled_identity(4, rate), pair);
}

}  // namespace

GaugeTransform::GaugeTransform(CMatrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols() || a_.rows() == 0) {
    throw ValueError("gauge transform: A must be square and non-empty");
  }
  Eigen::FullPivLU<CMatrix> lu(a_);
  if (std::abs(lu.determinant()) <= 1e-12 || !lu.isInvertible()) {
    throw ValueError("gauge transform: A is singular");
  }
  a_inv_ = lu.inverse();
  if (!a_inv_.allFinite()) {
    throw ValueError("gauge transform: A has no finite inverse");
  }
}

GaugeTransform GaugeTransform::qubit_pair() {
  CMatrix a(2, 2);
  a << -kI, -1.0, -kI, 1.0;
  return GaugeTransform(std::move(a));
}

GaugeImage apply_gauge(std::span<const OperatorMatrix> lindblad, const CMatrix& noise, const GaugeTransform& a) {
  const auto n = static_cast<Eigen::Index>(lindblad.size());
  if (n != a.size() || noise.rows() != n || noise.cols() != n) {
    throw DimensionError("gauge: " + std::to_string(n) + " operators, A is " + std::to_string(a.size()) +
                         "x" + std::to_string(a.size()) + ", noise is " + std::to_string(noise.rows()) + "x" +
                         std::to_string(noise.cols()));
  }
  GaugeImage out;
  out.operators.reserve(lindblad.size());
  const Eigen::Index dim = lindblad.front().dimension();
  for (Eigen::Index b = 0; b < n; ++b) {
    CMatrix c = CMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex coeff = a.matrix()(i, b);
      if (coeff != Complex{0.0, 0.0}) {
        c += coeff * lindblad[static_cast<std::size_t>(i)].entries();
      }
    }
    out.operators.emplace_back(std::move(c));
  }
  out.noise = a.inverse() * noise * a.inverse().adjoint();
  return out;
}

UnravelingSpec::UnravelingSpec(std::vector<OperatorMatrix> hamiltonians, NoiseMatrix d_tilde)
    : hamiltonians_(std::move(hamiltonians)), d_tilde_(std::move(d_tilde)) {
  if (static_cast<Eigen::Index>(hamiltonians_.size()) != d_tilde_.size()) {
    throw DimensionError("unraveling: " + std::to_string(hamiltonians_.size()) + " generators for a " +
                         std::to_string(d_tilde_.size()) + "x" + std::to_string(d_tilde_.size()) + " noise matrix");
  }
  for (std::size_t a = 0; a < hamiltonians_.size(); ++a) {
    if (!hamiltonians_[a].is_hermitian()) {
      throw ValueError("unraveling: generator " + std::to_string(a) + " is not Hermitian");
    }
    if (hamiltonians_[a].dimension() != hamiltonians_.front().dimension()) {
      throw DimensionError("unraveling: generator " + std::to_string(a) + " has the wrong dimension");
    }
  }
}

Eigen::Index UnravelingSpec::dimension() const {
  return hamiltonians_.empty() ? 0 : hamiltonians_.front().dimension();
}

std::vector<OperatorMatrix> UnravelingSpec::c_tilde() const {
  std::vector<OperatorMatrix> out;
  out.reserve(hamiltonians_.size());
  for (const auto& h : hamiltonians_) {
    out.emplace_back(-kI * h.entries());
  }
  return out;
}

UnravelingSpec transform_dissipators(std::span<const OperatorMatrix> lindblad, const NoiseMatrix& noise,
                                     const GaugeTransform& a) {
  GaugeImage image = apply_gauge(lindblad, noise.entries().cast<Complex>(), a);
  std::vector<OperatorMatrix> hamiltonians;
  hamiltonians.reserve(image.operators.size());
  for (std::size_t b = 0; b < image.operators.size(); ++b) {
    const CMatrix& c = image.operators[b].entries();
    if ((c + c.adjoint()).cwiseAbs().maxCoeff() > kTransformTolerance) {
      throw ValueError("gauge: transformed operator " + std::to_string(b) + " is not anti-Hermitian");
    }
    const CMatrix h = kI * c;
    hamiltonians.emplace_back(0.5 * (h + h.adjoint()));
  }
  if (image.noise.imag().cwiseAbs().maxCoeff() > kTransformTolerance) {
    throw ValueError("gauge: transformed noise matrix is not real");
  }
  Eigen::MatrixXd d = image.noise.real();
  if ((d - d.transpose()).cwiseAbs().maxCoeff() > kTransformTolerance) {
    throw ValueError("gauge: transformed noise matrix is not symmetric");
  }
  d = 0.5 * (d + d.transpose());
  // Exact zeros keep the stored noise structurally clean after the inversion round-off.
  d = d.unaryExpr([](double x) { return std::abs(x) <= 1e-15 ? 0.0 : x; });
  return {std::move(hamiltonians), NoiseMatrix(std::move(d), -kTransformTolerance)};
}

double dissipator_invariance_gap(std::span<const OperatorMatrix> lindblad, const CMatrix& noise,
                                 std::span<const OperatorMatrix> lindblad_tilde, const CMatrix& noise_tilde,
                                 int probe_count, std::mt19937_64& rng) {
  if (lindblad.empty() && lindblad_tilde.empty()) {
    return 0.0;
  }
  const Eigen::Index dim = lindblad.empty() ? lindblad_tilde.front().dimension() : lindblad.front().dimension();
  std::normal_distribution<double> normal;
  double gap = 0.0;
  for (int p = 0; p < probe_count; ++p) {
    CMatrix g(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      for (Eigen::Index i = 0; i < dim; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        g(i, j) = Complex{re, im};
      }
    }
    CMatrix rho = 0.5 * (g + g.adjoint());
    rho += ((1.0 - rho.trace().real()) / static_cast<double>(dim)) * CMatrix::Identity(dim, dim);
    const CMatrix diff =
        complex_dissipator(noise, lindblad, rho) - complex_dissipator(noise_tilde, lindblad_tilde, rho);
    gap = std::max(gap, diff.cwiseAbs().maxCoeff());
  }
  return gap;
}

double dissipator_invariance_gap(std::span<const OperatorMatrix> lindblad, const NoiseMatrix& noise,
                                 const UnravelingSpec& spec, int probe_count, std::mt19937_64& rng) {
  const auto c_tilde = spec.c_tilde();
  return dissipator_invariance_gap(lindblad, noise.entries().cast<Complex>(), c_tilde,
                                   spec.d_tilde().entries().cast<Complex>(), probe_count, rng);
}

std::vector<OperatorMatrix> emission_absorption_operators(int n_qubits) {
  std::vector<OperatorMatrix> out;
  for (int i = 0; i < n_qubits; ++i) {
    out.push_back(pauli_operator(PauliAxis::plus, i, n_qubits));
    out.push_back(pauli_operator(PauliAxis::minus, i, n_qubits));
  }
  return out;
}

UnravelingSpec nmr_transform(int n_qubits, double rate) {
  if (n_qubits < 1) {
    throw ValueError("nmr transform: n_qubits must be >= 1");
  }
  if (!(rate >= 0.0)) {
    throw ValueError("nmr transform: rate must be >= 0");
  }
  const UnravelingSpec site = site_block(rate);
  std::vector<OperatorMatrix> hamiltonians;
  Eigen::VectorXd d(2 * n_qubits);
  for (int i = 0; i < n_qubits; ++i) {
    for (int b = 0; b < 2; ++b) {
      hamiltonians.emplace_back(embed_adjacent(site.hamiltonians()[static_cast<std::size_t>(b)].entries(), i, n_qubits));
      d(2 * i + b) = site.d_tilde()(b, b);
    }
  }
  return {std::move(hamiltonians), NoiseMatrix(d.asDiagonal().toDenseMatrix())};
}

UnravelingSpec spin_chain_transform(int n_qubits, double d1, double d2) {
  if (n_qubits < 2) {
    throw ValueError("spin chain transform: n_qubits must be >= 2");
  }
  if (!(d1 >= 0.0) || !(d2 >= 0.0)) {
    throw ValueError("spin chain transform: rates must be >= 0");
  }
  const UnravelingSpec site = site_block(d1);
  const UnravelingSpec bond = bond_block(d2);
  const int n_c = 2 * n_qubits + 4 * (n_qubits - 1);
  std::vector<OperatorMatrix> hamiltonians;
  hamiltonians.reserve(static_cast<std::size_t>(n_c));
  Eigen::VectorXd d(n_c);
  int idx = 0;
  for (int i = 0; i < n_qubits; ++i) {
    for (int b = 0; b < 2; ++b, ++idx) {
      hamiltonians.emplace_back(embed_adjacent(site.hamiltonians()[static_cast<std::size_t>(b)].entries(), i, n_qubits));
      d(idx) = site.d_tilde()(b, b);
    }
  }
  for (int i = 0; i + 1 < n_qubits; ++i) {
    for (int b = 0; b < 4; ++b, ++idx) {
      hamiltonians.emplace_back(embed_adjacent(bond.hamiltonians()[static_cast<std::size_t>(b)].entries(), i, n_qubits));
      d(idx) = bond.d_tilde()(b, b);
    }
  }
  return {std::move(hamiltonians), NoiseMatrix(d.asDiagonal().toDenseMatrix())};
}

std::vector<OperatorMatrix> spin_chain_operators(int n_qubits) {
  if (n_qubits < 2) {
    throw ValueError("spin chain: n_qubits must be >= 2");
  }
  std::vector<OperatorMatrix> out = emission_absorption_operators(n_qubits);
  const std::array<CMatrix, 2> pm{pauli_matrix(PauliAxis::plus), pauli_matrix(PauliAxis::minus)};
  for (int i = 0; i + 1 < n_qubits; ++i) {
    for (const auto& a : pm) {
      for (const auto& b : pm) {
        const std::array<std::pair<CMatrix, int>, 2> factors{std::pair{a, i}, std::pair{b, i + 1}};
        out.push_back(tensor_chain(factors, n_qubits));
      }
    }
  }
  return out;
}

NoiseMatrix spin_chain_noise(int n_qubits, double d1, double d2) {
  const int n_c = 2 * n_qubits + 4 * (n_qubits - 1);
  Eigen::VectorXd d(n_c);
  d.head(2 * n_qubits).setConstant(d1);
  d.tail(4 * (n_qubits - 1)).setConstant(d2);
  return NoiseMatrix(d.asDiagonal().toDenseMatrix());
}

}  // namespace qdc
