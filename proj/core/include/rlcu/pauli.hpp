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

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rlcu/common.hpp"

namespace rlcu {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);

/// An n-qubit Pauli word times a fourth root of unity i^phase_exp.
///
/// Letter k acts on qubit k, and qubit 0 is the leftmost tensor factor (the
/// most significant bit of a basis-state index). Phases are kept as integer
/// powers of i so that products over many segments stay exact.
class PauliString {
 public:
  PauliString() = default;

  /// Identity on n qubits.
  explicit PauliString(int n);
  PauliString(std::vector<Pauli> letters, int phase_exp);

  /// Parses words like "XZI", "-XY", "iZ", "-iX", "+Y".
  static PauliString parse(std::string_view text);

  int num_qubits() const { return static_cast<int>(letters_.size()); }
  const std::vector<Pauli>& letters() const { return letters_; }
  Pauli letter(int q) const { return letters_[static_cast<std::size_t>(q)]; }
  int phase_exp() const { return phase_exp_; }
  cplx phase() const { return i_pow(phase_exp_); }

  /// Number of non-identity letters.
  int weight() const;
  bool is_identity_word() const { return weight() == 0; }

  /// Copy with phase multiplied by i^k.
  PauliString times_i_pow(int k) const;
  /// Same letters, phase_exp = 0.
  PauliString unphased() const { return PauliString(letters_, 0); }
  PauliString adjoint() const;

  /// Bit masks over basis-state indices: X-or-Y positions and Z-or-Y positions.
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;

  /// Letters only, e.g. "XZI".
  std::string word() const;
  /// Word with phase prefix, e.g. "-iXZ".
  std::string to_string() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::vector<Pauli> letters_;
  int phase_exp_ = 0;
};

/// p·q with the accumulated phase. Throws DimensionError on qubit mismatch.
PauliString pauli_multiply(const PauliString& p, const PauliString& q);
PauliString operator*(const PauliString& p, const PauliString& q);

/// Dense 2^n x 2^n matrix including the phase. Throws SizeCapError.
Matrix pauli_to_matrix(const PauliString& p);

/// p|psi> without forming the matrix.
Vector pauli_apply(const PauliString& p, const Vector& psi);

struct PauliTerm {
  cplx coefficient;
  PauliString word;  // phase_exp == 0
};

/// Coefficients c_P = tr(P^dagger W) / 2^n of every Pauli word, keeping those
/// with |c_P| >= cutoff. Throws DimensionError for non-power-of-two shapes.
std::vector<PauliTerm> pauli_decompose(const Matrix& w, double cutoff = 1e-12);

/// Sum of c_P * P as a dense matrix.
Matrix pauli_reconstruct(const std::vector<PauliTerm>& terms, int n);

}  // namespace rlcu
