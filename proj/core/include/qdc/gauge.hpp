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

#ifndef QDC_GAUGE_HPP
#define QDC_GAUGE_HPP

#include <qdc/quantum_core.hpp>

#include <random>
#include <span>
#include <vector>

namespace qdc {

/// Invertible mixing matrix A acting on a list of Lindblad operators.
class GaugeTransform {
 public:
  /// Throws ValueError if A is not square, |det A| <= 1e-12 or A is numerically singular.
  explicit GaugeTransform(CMatrix a);

  /// [[-i, -1], [-i, 1]]: maps (sigma^+, sigma^-) to (-i sigma_x, -i sigma_y) with D~ = D/2.
  static GaugeTransform qubit_pair();

  [[nodiscard]] const CMatrix& matrix() const noexcept { return a_; }
  [[nodiscard]] const CMatrix& inverse() const noexcept { return a_inv_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return a_.rows(); }

 private:
  CMatrix a_;
  CMatrix a_inv_;
};

/// Result of applying a gauge transform with no validation: C~_b = sum_a C_a A_ab,
/// D~ = A^-1 D A^-dagger (complex Hermitian in general).
struct GaugeImage {
  std::vector<OperatorMatrix> operators;
  CMatrix noise;
};

GaugeImage apply_gauge(std::span<const OperatorMatrix> lindblad, const CMatrix& noise, const GaugeTransform& a);

/// Linear, norm-preserving unraveling: C~_a = -i H_a with H_a Hermitian and a real PSD D~.
///
/// Only the Hermitian generators are stored; `c_tilde` rebuilds the anti-Hermitian operators.
class UnravelingSpec {
 public:
  /// Throws DimensionError on size mismatch and ValueError if a generator is not Hermitian.
  UnravelingSpec(std::vector<OperatorMatrix> hamiltonians, NoiseMatrix d_tilde);

  [[nodiscard]] const std::vector<OperatorMatrix>& hamiltonians() const noexcept { return hamiltonians_; }
  [[nodiscard]] const NoiseMatrix& d_tilde() const noexcept { return d_tilde_; }
  [[nodiscard]] std::size_t n_channels() const noexcept { return hamiltonians_.size(); }
  [[nodiscard]] Eigen::Index dimension() const;
  [[nodiscard]] std::vector<OperatorMatrix> c_tilde() const;

  /// Same operators with D~ replaced (used by annealing).
  [[nodiscard]] UnravelingSpec with_noise(NoiseMatrix d_tilde) const { return {hamiltonians_, std::move(d_tilde)}; }

 private:
  std::vector<OperatorMatrix> hamiltonians_;
  NoiseMatrix d_tilde_;
};

/// Applies `a` and validates the image. Errors name the first offending operator index.
/// Tolerance 1e-10 for anti-Hermiticity of C~ and for the imaginary part / PSD check of D~.
UnravelingSpec transform_dissipators(std::span<const OperatorMatrix> lindblad, const NoiseMatrix& noise,
                                     const GaugeTransform& a);

/// Largest entrywise |D[D,C] rho - D[D~,C~] rho| over `probe_count` random Hermitian
/// unit-trace probes. Noise matrices may be complex Hermitian.
double dissipator_invariance_gap(std::span<const OperatorMatrix> lindblad, const CMatrix& noise,
                                 std::span<const OperatorMatrix> lindblad_tilde, const CMatrix& noise_tilde,
                                 int probe_count, std::mt19937_64& rng);

double dissipator_invariance_gap(std::span<const OperatorMatrix> lindblad, const NoiseMatrix& noise,
                                 const UnravelingSpec& spec, int probe_count, std::mt19937_64& rng);

/// Per-qubit amplitude damping/pumping pair: operators sigma^+_i, sigma^-_i (qubit-major order),
/// noise D * I.
std::vector<OperatorMatrix> emission_absorption_operators(int n_qubits);

/// Unraveling of the per-qubit emission/absorption dissipator: generators
/// sigma_x^i, sigma_y^i (qubit-major) with D~ = D/2.
UnravelingSpec nmr_transform(int n_qubits, double rate);

/// Nearest-neighbour chain: generators sigma_x^i, sigma_y^i for every site, then
/// sigma_c^i sigma_d^(i+1) for c, d in {x, y} (order xx, xy, yx, yy) for every bond.
/// D~1 = D1/2 on sites and D~2 = D2/4 on bonds.
UnravelingSpec spin_chain_transform(int n_qubits, double d1, double d2);

/// Lindblad operators of the chain before transformation: sigma^{+,-}_i per site, then
/// sigma^a_i sigma^b_(i+1) for a, b in {+, -} (order ++, +-, -+, --) per bond, with noise
/// D1 on sites and D2 on bonds.
std::vector<OperatorMatrix> spin_chain_operators(int n_qubits);
NoiseMatrix spin_chain_noise(int n_qubits, double d1, double d2);

}  // namespace qdc

#endif
