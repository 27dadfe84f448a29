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

#include "rlcu/lcu.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

namespace rlcu {

namespace {

double operator_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// LcuFormula

LcuFormula::LcuFormula(double mu, std::vector<LcuTerm> terms, LcuKind kind, double truncation_error)
    : mu_(mu), terms_(std::move(terms)), kind_(kind), truncation_error_(truncation_error) {
  if (!(mu_ > 0.0) || !std::isfinite(mu_)) throw Error("LcuFormula: mu must be positive");
  if (terms_.empty()) throw Error("LcuFormula: no terms");
  const int n = terms_.front().unitary.num_qubits();
  double total = 0.0;
  cumulative_.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (t.prob < 0.0 || t.prob > 1.0 + 1e-12) throw Error("LcuFormula: probability outside [0,1]");
    if (t.unitary.num_qubits() != n) throw DimensionError("LcuFormula: terms act on different qubit counts");
    if (t.paired && kind_ != LcuKind::kChannel) throw Error("LcuFormula: paired terms require a channel formula");
    total += t.prob;
    cumulative_.push_back(total);
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error("LcuFormula: probabilities sum to " + std::to_string(total));
}

Matrix LcuFormula::reconstruct() const {
  Matrix m = Matrix::Zero(Eigen::Index{1} << num_qubits(), Eigen::Index{1} << num_qubits());
  for (const auto& t : terms_) m += t.prob * t.unitary.matrix();
  return mu_ * m;
}

Matrix LcuFormula::ensemble_action(const Matrix& rho) const {
  if (kind_ == LcuKind::kUnitary) {
    const Matrix r = reconstruct();
    return r * rho * r.adjoint();
  }
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const auto& t : terms_) {
    const Matrix u = t.unitary.matrix();
    out += t.prob * (t.paired ? Matrix(u * rho + rho * u.adjoint()) : Matrix(u * rho * u.adjoint()));
  }
  return mu_ * out;
}

std::size_t LcuFormula::sample_index(Rng& rng) const {
  const double r = rng.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), terms_.size() - 1);
}

PhasedUnitary sample_instance(const LcuFormula& f, Rng& rng) { return f.terms()[f.sample_index(rng)].unitary; }

LcuFormula lcu_from_coefficients(const std::vector<cplx>& coeffs, const std::vector<PauliString>& unitaries) {
  if (coeffs.size() != unitaries.size()) throw DimensionError("lcu_from_coefficients: length mismatch");
  if (coeffs.empty()) throw Error("lcu_from_coefficients: empty input");
  double mu = 0.0;
  for (const cplx& c : coeffs) {
    if (std::abs(c) == 0.0) throw Error("lcu_from_coefficients: zero coefficient");
    mu += std::abs(c);
  }
  std::vector<LcuTerm> terms;
  terms.reserve(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const cplx phase = coeffs[k] / std::abs(coeffs[k]);
    int quarter = -1;
    for (int q = 0; q < 4; ++q)
      if (std::abs(phase - i_pow(q)) < 1e-12) quarter = q;
    PhasedUnitary u = quarter >= 0 ? PhasedUnitary::pauli(unitaries[k].times_i_pow(quarter))
                                   : PhasedUnitary::pauli(unitaries[k], phase);
    terms.push_back({std::abs(coeffs[k]) / mu, std::move(u), false});
  }
  double total = 0.0;
  for (const auto& t : terms) total += t.prob;
  for (auto& t : terms) t.prob /= total;
  return LcuFormula(mu, std::move(terms));
}

LcuFormula lcu_from_pauli_terms(const std::vector<PauliTerm>& terms) {
  std::vector<cplx> coeffs;
  std::vector<PauliString> words;
  for (const auto& t : terms) {
    coeffs.push_back(t.coefficient);
    words.push_back(t.word);
  }
  return lcu_from_coefficients(coeffs, words);
}

// ---------------------------------------------------------------------------
// Composition

CompositeLcu::CompositeLcu(std::vector<LcuFormula> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw Error("CompositeLcu: at least one segment required");
  for (const auto& s : segments_) mu_T_ *= s.mu();
}

std::vector<std::size_t> CompositeLcu::sample_indices(Rng& rng) const {
  std::vector<std::size_t> idx;
  idx.reserve(segments_.size());
  for (const auto& s : segments_) idx.push_back(s.sample_index(rng));
  return idx;
}

CompositeLcu composite_from_segments(const LcuFormula& f, int nu) {
  if (nu < 1) throw Error("composite_from_segments: nu must be >= 1");
  return CompositeLcu(std::vector<LcuFormula>(static_cast<std::size_t>(nu), f));
}

BoundedComposite bounded_composite(const std::function<LcuFormula(double)>& builder, double total,
                                   double max_mu_T, int max_segments) {
  if (!(total > 0.0)) throw Error("bounded_composite: total must be positive");
  for (int nu = 1; nu <= max_segments; ++nu) {
    const double dt = total / nu;
    LcuFormula f = builder(dt);
    if (std::pow(f.mu(), nu) <= max_mu_T) return {composite_from_segments(f, nu), nu, dt};
  }
  throw Error("bounded_composite: no segment count up to " + std::to_string(max_segments) +
              " keeps mu_T <= " + std::to_string(max_mu_T));
}

LcuFormula truncate_formula(const LcuFormula& f, double eps) {
  if (!(eps > 0.0)) throw Error("truncate_formula: eps must be positive");
  if (f.kind() != LcuKind::kUnitary) throw Error("truncate_formula: only unitary formulas can be truncated");
  const auto& terms = f.terms();
  std::vector<std::size_t> order(terms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return terms[a].prob < terms[b].prob; });

  const Eigen::Index dim = Eigen::Index{1} << f.num_qubits();
  Matrix dropped = Matrix::Zero(dim, dim);
  std::vector<bool> keep(terms.size(), true);
  double defect = 0.0;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const auto& t = terms[order[k]];
    const Matrix candidate = dropped + f.mu() * t.prob * t.unitary.matrix();
    const double d = operator_norm(candidate);
    if (d > eps) break;
    dropped = candidate;
    defect = d;
    keep[order[k]] = false;
  }
  if (defect == 0.0 && std::all_of(keep.begin(), keep.end(), [](bool b) { return b; })) return f;

  double kept_weight = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k)
    if (keep[k]) kept_weight += terms[k].prob;
  std::vector<LcuTerm> out;
  for (std::size_t k = 0; k < terms.size(); ++k)
    if (keep[k]) out.push_back({terms[k].prob / kept_weight, terms[k].unitary, false});
  return LcuFormula(f.mu() * kept_weight, std::move(out), LcuKind::kUnitary, f.truncation_error() + defect);
}

// ---------------------------------------------------------------------------
// Trotter compensation

Matrix trotter_step_unitary(const std::vector<Hamiltonian>& grouping, double dt) {
  if (grouping.empty()) throw Error("trotter_step_unitary: empty grouping");
  const int n = grouping.front().num_qubits();
  check_size_cap(n, "trotter_step_unitary");
  Matrix us = Matrix::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
  for (const auto& g : grouping) {
    if (g.num_qubits() != n) throw DimensionError("trotter_step_unitary: groups act on different qubit counts");
    us = HermitianSpectrum(g).evolution(dt) * us;
  }
  return us;
}

std::vector<Hamiltonian> first_order_grouping(const Hamiltonian& h) {
  std::vector<Hamiltonian> groups;
  for (const auto& t : h.terms()) {
    Hamiltonian g(h.num_qubits());
    g.add_term(t.coefficient, t.word);
    groups.push_back(std::move(g));
  }
  if (groups.empty()) groups.emplace_back(h.num_qubits());
  return groups;
}

LcuFormula trotter_compensation_formula(const Hamiltonian& h, const std::vector<Hamiltonian>& grouping, double dt,
                                        double cutoff) {
  const int n = h.num_qubits();
  check_size_cap(n, "trotter_compensation_formula");
  const Matrix hm = h.to_matrix();
  Matrix sum = Matrix::Zero(hm.rows(), hm.cols());
  for (const auto& g : grouping) {
    if (g.num_qubits() != n) throw DimensionError("trotter_compensation_formula: group qubit count mismatch");
    sum += g.to_matrix();
  }
  if ((sum - hm).cwiseAbs().maxCoeff() > 1e-12) throw Error("trotter_compensation_formula: grouping does not cover h");

  const Matrix us = trotter_step_unitary(grouping, dt);
  const Matrix w = HermitianSpectrum(hm).evolution(dt) * us.adjoint();
  auto terms = pauli_decompose(w, cutoff);
  if (terms.empty()) throw Error("trotter_compensation_formula: decomposition is empty");
  return lcu_from_pauli_terms(terms);
}

// ---------------------------------------------------------------------------
// PQS channel decomposition

LcuFormula pqs_channel_decomposition(const Hamiltonian& h_int, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("pqs_channel_decomposition: dt must be positive");
  const int n = h_int.num_qubits();
  double weight = 0.0;
  for (const auto& t : h_int.terms()) weight += std::abs(t.coefficient);
  const double mu = 1.0 + dt * weight;
  const double alpha0 = 1.0 / mu;
  if (!(alpha0 > 0.0)) throw Error("pqs_channel_decomposition: dt too large (alpha_0 <= 0)");

  std::vector<LcuTerm> terms;
  terms.push_back({alpha0, PhasedUnitary::identity(n), false});
  for (const auto& t : h_int.terms()) {
    if (t.coefficient == 0.0) continue;
    // P~ = (-i) P, with the sign of p folded in as a further i^2.
    const int phase = 3 + (t.coefficient < 0.0 ? 2 : 0);
    terms.push_back({std::abs(t.coefficient) * dt / mu, PhasedUnitary::pauli(t.word.times_i_pow(phase)), true});
  }
  double total = 0.0;
  for (const auto& t : terms) total += t.prob;
  for (auto& t : terms) t.prob /= total;
  return LcuFormula(mu, std::move(terms), LcuKind::kChannel);
}

// ---------------------------------------------------------------------------
// Gaussian filter

Matrix GaussianFilterEnsemble::filter_operator(const HermitianSpectrum& h) const {
  const double t = tau;
  const double w = omega;
  return h.apply_function([t, w](double e) { return cplx(std::exp(-0.5 * t * t * (e - w) * (e - w)), 0.0); });
}

PhasedUnitary filter_unitary(const GaussianFilterEnsemble& g, std::shared_ptr<const HermitianSpectrum> h, double x) {
  const double s = x * g.tau;
  return PhasedUnitary::evolution(std::move(h), s, std::exp(cplx(0.0, s * g.omega)));
}

FilterDraw sample_filter_unitary(const GaussianFilterEnsemble& g, std::shared_ptr<const HermitianSpectrum> h,
                                 Rng& rng) {
  const double x = rng.normal();
  return {filter_unitary(g, std::move(h), x), x};
}

FilterDraw sample_filter_unitary(const GaussianFilterEnsemble& g, const Hamiltonian& h, Rng& rng) {
  return sample_filter_unitary(g, std::make_shared<const HermitianSpectrum>(h), rng);
}

}  // namespace rlcu
