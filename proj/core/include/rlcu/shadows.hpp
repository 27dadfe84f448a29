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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "rlcu/backend.hpp"
#include "rlcu/pauli.hpp"
#include "rlcu/random.hpp"

namespace rlcu {

/// One local-Pauli randomized measurement. `basis[q]` is 'X', 'Y' or 'Z' and
/// `z[q]` is '0' or '1'; the snapshot operator is the tensor product over
/// qubits of 3|s_q><s_q| - I. `weight` and `norm` are the circuit estimator
/// weight and normalisation carried alongside.
struct ShadowSnapshot {
  std::string basis;
  std::string z;
  cplx weight{1.0, 0.0};
  double norm = 1.0;

  int num_qubits() const { return static_cast<int>(basis.size()); }
};

/// Real linear combination of phase-free Pauli words.
class ObservableSpec {
 public:
  struct Term {
    double coefficient;
    PauliString word;
  };

  ObservableSpec() = default;
  explicit ObservableSpec(std::vector<Term> terms, std::string label = {});
  static ObservableSpec single(const PauliString& word);
  static ObservableSpec identity(int n);

  /// "ZI", "0.5 XX + 0.2 ZI", "XX - ZZ". Throws ParseError.
  static ObservableSpec parse(std::string_view text);

  const std::vector<Term>& terms() const { return terms_; }
  int num_qubits() const { return terms_.empty() ? 0 : terms_.front().word.num_qubits(); }
  /// Largest Pauli weight among the terms.
  int locality() const;
  const std::string& label() const { return label_; }

  Matrix to_matrix() const;

 private:
  std::vector<Term> terms_;
  std::string label_;
};

/// Uniform basis per qubit, Born-rule outcome in the rotated basis. Throws
/// Error if s is not normalized.
ShadowSnapshot sample_shadow(const StateVector& s, Rng& rng);

/// Rotation R with R^dagger |z> the eigenbasis of the letters in `basis`.
Matrix basis_rotation(const std::string& basis);

/// Dense snapshot operator (weight and norm not applied).
Matrix snapshot_matrix(const ShadowSnapshot& snap);

/// tr(O · snapshot) via per-qubit factors (weight and norm not applied).
/// Throws DimensionError on a qubit mismatch.
double snapshot_trace(const ShadowSnapshot& snap, const ObservableSpec& o);
double snapshot_trace(const ShadowSnapshot& snap, const PauliString& word);

/// norm · weight · tr(O · snapshot) per snapshot.
std::vector<cplx> snapshot_values(const std::vector<ShadowSnapshot>& snaps, const ObservableSpec& o);

/// Mean of snapshot_values. Throws Error on empty input.
cplx estimate_observable(const std::vector<ShadowSnapshot>& snaps, const ObservableSpec& o);

/// Median of k contiguous batch means (the last batch absorbs the remainder;
/// an even k averages the two middle means). Throws Error on empty input or
/// k outside [1, size].
double median_of_means(const std::vector<double>& values, std::size_t k_batches);

/// (sum_j |c_j| 3^{w_j/2})^2, the local-Pauli shadow norm bound.
double shadow_norm_bound(const ObservableSpec& o);

/// max over states of E_{R,z}[tr(O snapshot)^2], computed as the largest
/// eigenvalue of the linear operator it maximises. Throws SizeCapError.
double shadow_norm_exact(const ObservableSpec& o);

/// The measurement channel A -> (A + I tr_q A)/3 on every qubit, and its inverse
/// A -> 3A - I tr_q A on every qubit.
Matrix shadow_channel(const Matrix& a);
Matrix inverse_shadow_channel(const Matrix& a);

struct VarianceAudit {
  double variance = 0.0;
  double bound = 0.0;      ///< 2 · shadow_norm_bound
  double allowance = 0.0;  ///< 3 standard errors of the second moment
  std::size_t samples = 0;
  bool pass = false;
};

/// Variance of (weight/|weight|) · tr(O · snapshot) against twice the shadow
/// norm bound. Throws Error for fewer than 1000 snapshots.
VarianceAudit variance_audit(const std::vector<ShadowSnapshot>& snaps, const ObservableSpec& o);

}  // namespace rlcu
