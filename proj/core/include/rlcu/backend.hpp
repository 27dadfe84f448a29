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
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "rlcu/common.hpp"
#include "rlcu/hamiltonian.hpp"
#include "rlcu/pauli.hpp"
#include "rlcu/random.hpp"

namespace rlcu {

/// Pure state on n qubits. Basis index bit (n-1-q) is qubit q.
class StateVector {
 public:
  StateVector() = default;
  /// Throws DimensionError if the size is not a power of two.
  explicit StateVector(Vector amplitudes);

  static StateVector basis(int n, std::uint64_t index);
  /// "0110" -> |0110>, character q is qubit q.
  static StateVector from_bitstring(const std::string& bits);
  /// |+>^n.
  static StateVector plus_all(int n);

  int num_qubits() const { return n_; }
  const Vector& amplitudes() const { return amps_; }
  double squared_norm() const { return amps_.squaredNorm(); }
  bool is_normalized(double tol = 1e-10) const { return std::abs(squared_norm() - 1.0) <= tol; }
  StateVector normalized() const;
  Matrix density() const { return amps_ * amps_.adjoint(); }

 private:
  int n_ = 0;
  Vector amps_;
};

/// A 2^n x 2^n operator used as a state. Physical states are Hermitian with
/// unit trace; effective states such as U rho V^dagger carry no such invariant.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(Matrix entries);
  static DensityMatrix from_state(const StateVector& s) { return DensityMatrix(s.density()); }

  int num_qubits() const { return n_; }
  const Matrix& entries() const { return m_; }
  cplx trace() const { return m_.trace(); }
  bool is_hermitian(double tol = 1e-10) const;
  /// Hermitian, unit trace and positive semidefinite, all within tol.
  bool is_physical(double tol = 1e-10) const;

 private:
  int n_ = 0;
  Matrix m_;
};

/// Eigendecomposition H = V diag(E) V^dagger of a dense Hermitian matrix.
class HermitianSpectrum {
 public:
  /// Throws Error if `h` is not Hermitian within 1e-10 (relative).
  explicit HermitianSpectrum(const Matrix& h);
  explicit HermitianSpectrum(const Hamiltonian& h);

  int num_qubits() const { return n_; }
  const RealVector& energies() const { return energies_; }
  const Matrix& vectors() const { return vectors_; }

  /// e^{-iHt}|psi>.
  Vector evolve(const Vector& psi, double t) const;
  /// e^{-iHt} as a dense matrix.
  Matrix evolution(double t) const;
  /// f(H) for a scalar function applied to the eigenvalues.
  Matrix apply_function(const std::function<cplx(double)>& f) const;

 private:
  int n_ = 0;
  RealVector energies_;
  Matrix vectors_;
};

/// A unitary together with a unit-modulus scalar phase. The operator part is
/// a Pauli word, a time evolution e^{-iHt} backed by a shared spectrum, or a
/// dense matrix.
class PhasedUnitary {
 public:
  struct Evolution {
    std::shared_ptr<const HermitianSpectrum> spectrum;
    double time = 0.0;
  };

  PhasedUnitary() = default;
  static PhasedUnitary identity(int n) { return pauli(PauliString(n)); }
  static PhasedUnitary pauli(PauliString p, cplx phase = 1.0);
  static PhasedUnitary evolution(std::shared_ptr<const HermitianSpectrum> spectrum, double time,
                                 cplx phase = 1.0);
  static PhasedUnitary dense(Matrix u, cplx phase = 1.0);

  int num_qubits() const { return n_; }
  cplx phase() const { return phase_; }
  bool is_pauli() const { return std::holds_alternative<PauliString>(op_); }
  bool is_evolution() const { return std::holds_alternative<Evolution>(op_); }
  const PauliString& pauli_string() const { return std::get<PauliString>(op_); }
  const Evolution& evolution_spec() const { return std::get<Evolution>(op_); }

  Vector apply(const Vector& psi) const;
  Matrix matrix() const;

  /// this·rhs; stays a Pauli word when both factors are Pauli words.
  PhasedUnitary compose(const PhasedUnitary& rhs) const;

  std::string label() const;

 private:
  int n_ = 0;
  cplx phase_ = 1.0;
  std::variant<PauliString, Evolution, Matrix> op_;
};

/// e^{-iHt}|s> by eigendecomposition. Throws SizeCapError, Error (non-Hermitian).
StateVector exact_evolve(const Hamiltonian& h, double t, const StateVector& s);

/// U rho V^dagger. Throws DimensionError.
DensityMatrix exact_unphysical(const Matrix& u, const Matrix& v, const DensityMatrix& rho);

/// Ancilla-system state (|0>⊗v + |1>⊗u)/sqrt(2) kept as its two system
/// branches. `ledger` is the scalar that normalizes the reconstruction; every
/// operation keeps reconstruct()/ledger() at unit norm.
class BranchPair {
 public:
  BranchPair() = default;
  /// Ancilla |+>, both branches equal to s.
  explicit BranchPair(const StateVector& s);
  /// Arbitrary branches; the ledger is computed from their norms.
  BranchPair(Vector branch_v, Vector branch_u);

  int num_qubits() const { return n_; }
  const Vector& branch_v() const { return v_; }
  const Vector& branch_u() const { return u_; }
  double ledger() const { return ledger_; }

  /// Normalized 2^(n+1) joint vector, ancilla as the most significant qubit.
  Vector reconstruct() const;

  /// Multiplies the |1> branch by `phase` (S^dagger on the ancilla is -i).
  void apply_ancilla_phase(cplx phase);

  /// Unnormalized system state <±|joint for ancilla outcome a (0 is |+>),
  /// i.e. (v + (-1)^a u) / 2 on a normalized pair.
  Vector project_x(int a) const;

 private:
  friend BranchPair apply_pauli_branch(const BranchPair&, const PauliString&, const PauliString&);
  friend BranchPair apply_controlled_pair(const BranchPair&, const PhasedUnitary&, const PhasedUnitary&);
  friend BranchPair apply_common_unitary(const BranchPair&, const PhasedUnitary&);
  void refresh_ledger();

  int n_ = 0;
  Vector v_;
  Vector u_;
  double ledger_ = 1.0;
};

/// Controlled-u on the |1> branch and controlled-v on the |0> branch.
BranchPair apply_pauli_branch(const BranchPair& bp, const PauliString& u, const PauliString& v);
BranchPair apply_controlled_pair(const BranchPair& bp, const PhasedUnitary& u, const PhasedUnitary& v);
/// Uncontrolled w on both branches.
BranchPair apply_common_unitary(const BranchPair& bp, const PhasedUnitary& w);
BranchPair apply_common_unitary(const BranchPair& bp, const Matrix& w);

/// Born-rule sample of a basis index. Throws Error if s is not normalized.
std::uint64_t sample_computational(const StateVector& s, Rng& rng);

/// Index -> "0101" with character q for qubit q.
std::string index_to_bitstring(std::uint64_t index, int n);

/// Dense random test objects (Haar-like unitaries via QR, random states).
Matrix random_unitary(int n, Rng& rng);
StateVector random_state(int n, Rng& rng);
DensityMatrix random_density(int n, Rng& rng, int rank = 0);
PauliString random_pauli(int n, Rng& rng, bool random_phase = true);

}  // namespace rlcu
