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

#include <string>
#include <string_view>
#include <vector>

#include "rlcu/pauli.hpp"

namespace rlcu {

/// Real-weighted sum of phase-free Pauli words, H = sum_k c_k P_k.
class Hamiltonian {
 public:
  struct Term {
    double coefficient;
    PauliString word;
  };

  Hamiltonian() = default;
  /// Zero Hamiltonian on n qubits.
  explicit Hamiltonian(int n) : n_(n) {}

  /// Adds c·word, merging with an existing equal word. Throws DimensionError
  /// on qubit mismatch and Error for a phased word or non-finite coefficient.
  void add_term(double coefficient, const PauliString& word);

  int num_qubits() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Sum of |c_k|.
  double l1_norm() const;

  /// Dense Hermitian matrix. Throws SizeCapError.
  Matrix to_matrix() const;

  /// One "coefficient word" line per term, in insertion order, with the
  /// shortest round-trip decimal form of each coefficient.
  std::string serialize() const;

  friend bool operator==(const Hamiltonian&, const Hamiltonian&);

 private:
  int n_ = 0;
  std::vector<Term> terms_;
};

/// Parses the line format "coefficient pauli_word"; '#' starts a comment and
/// blank lines are skipped. Duplicate words are summed. Throws ParseError for
/// malformed coefficients, invalid letters or inconsistent word lengths.
Hamiltonian hamiltonian_parse(std::string_view text);

/// Reads and parses a Hamiltonian file. Throws ParseError or Error on IO.
Hamiltonian hamiltonian_load(const std::string& path);

}  // namespace rlcu
