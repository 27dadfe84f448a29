// Copyright 2026 The rlcu Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rlcu/backend.hpp"
#include "rlcu/hamiltonian.hpp"
#include "rlcu/pauli.hpp"
#include "rlcu/random.hpp"

namespace rlcu {

/// How a formula's ensemble average is interpreted.
///
/// kUnitary: target = mu * sum_i Pr(i) U_i, an operator; the two sides of a
/// state are sampled independently and a segment contributes mu^2.
///
/// kChannel: target(rho) = mu * sum_i Pr(i) A_i(rho) with A_i(rho) = U_i rho U_i^dagger
/// for plain terms and U_i rho + rho U_i^dagger for paired terms; one draw per
/// segment and a segment contributes mu.
enum class LcuKind { kUnitary, kChannel };

struct LcuTerm {
  double prob = 0.0;
  PhasedUnitary unitary;
  bool paired = false;
};

class LcuFormula {
 public:
  LcuFormula() = default;
  /// Throws Error unless mu > 0 and probabilities lie in [0,1] and sum to 1
  /// within 1e-12.
  LcuFormula(double mu, std::vector<LcuTerm> terms, LcuKind kind = LcuKind::kUnitary,
             double truncation_error = 0.0);

  double mu() const { return mu_; }
  const std::vector<LcuTerm>& terms() const { return terms_; }
  LcuKind kind() const { return kind_; }
  /// Declared operator-norm defect from truncation.
  double truncation_error() const { return truncation_error_; }
  int num_qubits() const { return terms_.front().unitary.num_qubits(); }
  /// Sum of absolute coefficients, mu * sum Pr(i) = mu.
  double l1_norm() const { return mu_; }

  /// mu * sum_i Pr(i) M(U_i). Only meaningful for kUnitary.
  Matrix reconstruct() const;
  /// Exact ensemble action mu * sum_i Pr(i) A_i(rho), for either kind (for
  /// kUnitary this is mu^2 E_{i,j}[U_i rho U_j^dagger]).
  Matrix ensemble_action(const Matrix& rho) const;

  std::size_t sample_index(Rng& rng) const;

 private:
  double mu_ = 1.0;
  std::vector<LcuTerm> terms_;
  std::vector<double> cumulative_;
  LcuKind kind_ = LcuKind::kUnitary;
  double truncation_error_ = 0.0;
};

/// Draws one term of the formula; the returned unitary carries the phase.
PhasedUnitary sample_instance(const LcuFormula& f, Rng& rng);

/// Builds a formula from complex coefficients: |alpha|/mu probabilities, the
/// phase folded into the unitary (as a power of i when it is one within
/// 1e-12, otherwise as a residual unit scalar). Throws Error on empty input or
/// zero coefficients, DimensionError on length mismatch.
LcuFormula lcu_from_coefficients(const std::vector<cplx>& coeffs, const std::vector<PauliString>& unitaries);
LcuFormula lcu_from_pauli_terms(const std::vector<PauliTerm>& terms);

/// Product of per-segment formulas; mu_T is the product of segment mu's.
class CompositeLcu {
 public:
  explicit CompositeLcu(std::vector<LcuFormula> segments);

  int nu() const { return static_cast<int>(segments_.size()); }
  const std::vector<LcuFormula>& segments() const { return segments_; }
  const LcuFormula& segment(int k) const { return segments_[static_cast<std::size_t>(k)]; }
  double mu_T() const { return mu_T_; }

  /// Independent per-segment draws, index k for segment k.
  std::vector<std::size_t> sample_indices(Rng& rng) const;

 private:
  std::vector<LcuFormula> segments_;
  double mu_T_ = 1.0;
};

/// nu copies of f. Throws Error if nu < 1.
CompositeLcu composite_from_segments(const LcuFormula& f, int nu);

struct BoundedComposite {
  CompositeLcu composite;
  int nu;
  double dt;
};

/// Smallest nu >= 1 with mu(total/nu)^nu <= max_mu_T, where `builder` maps a
/// segment length to its formula. Throws Error if no nu <= max_segments works.
BoundedComposite bounded_composite(const std::function<LcuFormula(double)>& builder, double total,
                                   double max_mu_T = 2.0, int max_segments = 4096);

/// Greedily drops the lowest-weight terms while the operator-norm defect
/// ||mu sum_{dropped} Pr(i) U_i|| stays <= eps. Kept terms retain their
/// coefficients. Throws Error if eps <= 0 or f is not kUnitary.
LcuFormula truncate_formula(const LcuFormula& f, double eps);

/// Product of the group exponentials, group 0 applied first:
/// e^{-i H_{G-1} dt} ... e^{-i H_0 dt}.
Matrix trotter_step_unitary(const std::vector<Hamiltonian>& grouping, double dt);

/// One group per term of h, in term order.
std::vector<Hamiltonian> first_order_grouping(const Hamiltonian& h);

/// Pauli LCU of W = e^{-iH dt} U_S^dagger, the correction that turns one
/// Trotter step U_S into the exact step (e^{-iH dt} = W U_S). Throws
/// SizeCapError, or Error if the groups do not sum to h.
LcuFormula trotter_compensation_formula(const Hamiltonian& h, const std::vector<Hamiltonian>& grouping,
                                        double dt, double cutoff = 1e-12);

/// First-order channel decomposition of rho -> e^{-iH dt} rho e^{iH dt}:
/// mu (alpha_0 rho + sum_i alpha_i (P~_i rho + rho P~_i^dagger)) with
/// P~_i = sign(p_i)(-i)P_i, mu = 1 + dt sum|p_i|, mu alpha_0 = 1 and
/// mu alpha_i = |p_i| dt. Returns a kChannel formula whose first term is the
/// identity. Throws Error if dt <= 0 or alpha_0 <= 0.
LcuFormula pqs_channel_decomposition(const Hamiltonian& h_int, double dt);

/// Gaussian spectral filter realised as an ensemble of phased evolutions.
struct GaussianFilterEnsemble {
  double tau = 1.0;    ///< filter width
  double omega = 0.0;  ///< target energy

  /// The filter e^{-tau^2 (H - omega)^2 / 2} that the ensemble averages to.
  Matrix filter_operator(const HermitianSpectrum& h) const;
};

struct FilterDraw {
  PhasedUnitary unitary;  ///< e^{i x tau omega} e^{-i x tau H}
  double x;
};

/// The phased evolution for a given standard-normal draw x.
PhasedUnitary filter_unitary(const GaussianFilterEnsemble& g, std::shared_ptr<const HermitianSpectrum> h, double x);
FilterDraw sample_filter_unitary(const GaussianFilterEnsemble& g, std::shared_ptr<const HermitianSpectrum> h,
                                 Rng& rng);
FilterDraw sample_filter_unitary(const GaussianFilterEnsemble& g, const Hamiltonian& h, Rng& rng);

}  // namespace rlcu
