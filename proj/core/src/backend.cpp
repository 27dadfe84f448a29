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

#include "rlcu/backend.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace rlcu {

namespace {

void require_same(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector / DensityMatrix

StateVector::StateVector(Vector amplitudes) : n_(qubits_for_dimension(amplitudes.size())), amps_(std::move(amplitudes)) {}

StateVector StateVector::basis(int n, std::uint64_t index) {
  check_size_cap(n, "StateVector::basis");
  Vector v = Vector::Zero(Eigen::Index{1} << n);
  if (index >= static_cast<std::uint64_t>(v.size())) throw DimensionError("basis index out of range");
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::from_bitstring(const std::string& bits) {
  std::uint64_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ParseError("invalid bitstring '" + bits + "'");
    index = (index << 1) | static_cast<std::uint64_t>(c == '1');
  }
  if (bits.empty()) throw ParseError("empty bitstring");
  return basis(static_cast<int>(bits.size()), index);
}

StateVector StateVector::plus_all(int n) {
  check_size_cap(n, "StateVector::plus_all");
  const Eigen::Index dim = Eigen::Index{1} << n;
  return StateVector(Vector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
}

StateVector StateVector::normalized() const {
  const double nrm = amps_.norm();
  if (nrm == 0.0) throw ZeroProbabilityError("cannot normalize a zero vector");
  return StateVector(amps_ / nrm);
}

DensityMatrix::DensityMatrix(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols()) throw DimensionError("density matrix must be square");
  n_ = qubits_for_dimension(m_.rows());
}

bool DensityMatrix::is_hermitian(double tol) const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol; }

bool DensityMatrix::is_physical(double tol) const {
  if (!is_hermitian(tol) || std::abs(trace() - 1.0) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m_ + m_.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

// ---------------------------------------------------------------------------
// HermitianSpectrum

HermitianSpectrum::HermitianSpectrum(const Matrix& h) {
  if (h.rows() != h.cols()) throw DimensionError("Hamiltonian matrix must be square");
  n_ = qubits_for_dimension(h.rows());
  check_size_cap(n_, "HermitianSpectrum");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error("Hamiltonian reconstruction is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

HermitianSpectrum::HermitianSpectrum(const Hamiltonian& h) : HermitianSpectrum(h.to_matrix()) {}

Vector HermitianSpectrum::evolve(const Vector& psi, double t) const {
  require_same(psi.size(), vectors_.rows(), "HermitianSpectrum::evolve");
  Vector coeffs = vectors_.adjoint() * psi;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs[k] *= std::exp(cplx(0.0, -energies_[k] * t));
  return vectors_ * coeffs;
}

Matrix HermitianSpectrum::evolution(double t) const {
  return apply_function([t](double e) { return std::exp(cplx(0.0, -e * t)); });
}

Matrix HermitianSpectrum::apply_function(const std::function<cplx(double)>& f) const {
  Vector d(energies_.size());
  for (Eigen::Index k = 0; k < d.size(); ++k) d[k] = f(energies_[k]);
  return vectors_ * d.asDiagonal() * vectors_.adjoint();
}

// ---------------------------------------------------------------------------
// PhasedUnitary

PhasedUnitary PhasedUnitary::pauli(PauliString p, cplx phase) {
  PhasedUnitary u;
  u.n_ = p.num_qubits();
  u.phase_ = phase;
  u.op_ = std::move(p);
  return u;
}

PhasedUnitary PhasedUnitary::evolution(std::shared_ptr<const HermitianSpectrum> spectrum, double time, cplx phase) {
  if (!spectrum) throw Error("PhasedUnitary::evolution: null spectrum");
  PhasedUnitary u;
  u.n_ = spectrum->num_qubits();
  u.phase_ = phase;
  u.op_ = Evolution{std::move(spectrum), time};
  return u;
}

PhasedUnitary PhasedUnitary::dense(Matrix m, cplx phase) {
  if (m.rows() != m.cols()) throw DimensionError("PhasedUnitary::dense: matrix must be square");
  PhasedUnitary u;
  u.n_ = qubits_for_dimension(m.rows());
  u.phase_ = phase;
  u.op_ = std::move(m);
  return u;
}

Vector PhasedUnitary::apply(const Vector& psi) const {
  return std::visit(
      [&](const auto& op) -> Vector {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, PauliString>) {
          return phase_ * pauli_apply(op, psi);
        } else if constexpr (std::is_same_v<T, Evolution>) {
          return phase_ * op.spectrum->evolve(psi, op.time);
        } else {
          require_same(psi.size(), op.cols(), "PhasedUnitary::apply");
          return phase_ * (op * psi);
        }
      },
      op_);
}

Matrix PhasedUnitary::matrix() const {
  return std::visit(
      [&](const auto& op) -> Matrix {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, PauliString>) {
          return phase_ * pauli_to_matrix(op);
        } else if constexpr (std::is_same_v<T, Evolution>) {
          return phase_ * op.spectrum->evolution(op.time);
        } else {
          return phase_ * op;
        }
      },
      op_);
}

PhasedUnitary PhasedUnitary::compose(const PhasedUnitary& rhs) const {
  if (n_ != rhs.n_) throw DimensionError("PhasedUnitary::compose: qubit count mismatch");
  if (is_pauli() && rhs.is_pauli()) {
    return pauli(pauli_multiply(pauli_string(), rhs.pauli_string()), phase_ * rhs.phase_);
  }
  return dense(matrix() * rhs.matrix());
}

std::string PhasedUnitary::label() const {
  std::ostringstream os;
  if (phase_ != cplx(1.0, 0.0)) os << "(" << phase_.real() << "," << phase_.imag() << ")*";
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, PauliString>) {
          os << op.to_string();
        } else if constexpr (std::is_same_v<T, Evolution>) {
          os << "exp(-iH*" << op.time << ")";
        } else {
          os << "dense[" << op.rows() << "]";
        }
      },
      op_);
  return os.str();
}

// ---------------------------------------------------------------------------
// Oracles

StateVector exact_evolve(const Hamiltonian& h, double t, const StateVector& s) {
  if (h.num_qubits() != s.num_qubits()) throw DimensionError("exact_evolve: qubit count mismatch");
  check_size_cap(h.num_qubits(), "exact_evolve");
  const HermitianSpectrum spectrum(h);
  return StateVector(spectrum.evolve(s.amplitudes(), t));
}

DensityMatrix exact_unphysical(const Matrix& u, const Matrix& v, const DensityMatrix& rho) {
  require_same(u.rows(), rho.entries().rows(), "exact_unphysical");
  require_same(v.rows(), rho.entries().rows(), "exact_unphysical");
  require_same(u.cols(), u.rows(), "exact_unphysical");
  require_same(v.cols(), v.rows(), "exact_unphysical");
  return DensityMatrix(u * rho.entries() * v.adjoint());
}

// ---------------------------------------------------------------------------
// BranchPair

BranchPair::BranchPair(const StateVector& s) : n_(s.num_qubits()), v_(s.amplitudes()), u_(s.amplitudes()) {
  refresh_ledger();
}

BranchPair::BranchPair(Vector branch_v, Vector branch_u) : v_(std::move(branch_v)), u_(std::move(branch_u)) {
  require_same(v_.size(), u_.size(), "BranchPair");
  n_ = qubits_for_dimension(v_.size());
  refresh_ledger();
}

void BranchPair::refresh_ledger() {
  ledger_ = std::sqrt(0.5 * (v_.squaredNorm() + u_.squaredNorm()));
  if (ledger_ == 0.0) throw ZeroProbabilityError("BranchPair with two zero branches");
}

Vector BranchPair::reconstruct() const {
  const Eigen::Index dim = v_.size();
  Vector joint(2 * dim);
  const double s = 1.0 / (std::sqrt(2.0) * ledger_);
  joint.head(dim) = s * v_;
  joint.tail(dim) = s * u_;
  return joint;
}

void BranchPair::apply_ancilla_phase(cplx phase) {
  u_ *= phase;
  refresh_ledger();
}

Vector BranchPair::project_x(int a) const {
  const double sign = a == 0 ? 1.0 : -1.0;
  return (v_ + sign * u_) / (2.0 * ledger_);
}

BranchPair apply_pauli_branch(const BranchPair& bp, const PauliString& u, const PauliString& v) {
  if (u.num_qubits() != bp.n_ || v.num_qubits() != bp.n_) throw DimensionError("apply_pauli_branch: qubit count mismatch");
  BranchPair out = bp;
  out.u_ = pauli_apply(u, bp.u_);
  out.v_ = pauli_apply(v, bp.v_);
  out.refresh_ledger();
  return out;
}

BranchPair apply_controlled_pair(const BranchPair& bp, const PhasedUnitary& u, const PhasedUnitary& v) {
  if (u.num_qubits() != bp.n_ || v.num_qubits() != bp.n_) {
    throw DimensionError("apply_controlled_pair: qubit count mismatch");
  }
  BranchPair out = bp;
  out.u_ = u.apply(bp.u_);
  out.v_ = v.apply(bp.v_);
  out.refresh_ledger();
  return out;
}

BranchPair apply_common_unitary(const BranchPair& bp, const PhasedUnitary& w) {
  if (w.num_qubits() != bp.n_) throw DimensionError("apply_common_unitary: qubit count mismatch");
  BranchPair out = bp;
  out.u_ = w.apply(bp.u_);
  out.v_ = w.apply(bp.v_);
  out.refresh_ledger();
  return out;
}

BranchPair apply_common_unitary(const BranchPair& bp, const Matrix& w) {
  return apply_common_unitary(bp, PhasedUnitary::dense(w));
}

// ---------------------------------------------------------------------------
// Sampling and random test objects

std::uint64_t sample_computational(const StateVector& s, Rng& rng) {
  if (!s.is_normalized(1e-10)) throw Error("sample_computational: state is not normalized");
  const Vector& a = s.amplitudes();
  const double r = rng.uniform();
  double acc = 0.0;
  std::uint64_t last_nonzero = 0;
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    const double p = std::norm(a[j]);
    if (p > 0.0) last_nonzero = static_cast<std::uint64_t>(j);
    acc += p;
    if (r < acc) return static_cast<std::uint64_t>(j);
  }
  return last_nonzero;
}

std::string index_to_bitstring(std::uint64_t index, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int q = 0; q < n; ++q)
    if ((index >> (n - 1 - q)) & 1) s[static_cast<std::size_t>(q)] = '1';
  return s;
}

Matrix random_unitary(int n, Rng& rng) {
  check_size_cap(n, "random_unitary");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix g(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) g(r, c) = cplx(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const cplx d = rr(k, k);
    q.col(k) *= d / std::abs(d);
  }
  return q;
}

StateVector random_state(int n, Rng& rng) {
  check_size_cap(n, "random_state");
  Vector v(Eigen::Index{1} << n);
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = cplx(rng.normal(), rng.normal());
  return StateVector(v / v.norm());
}

DensityMatrix random_density(int n, Rng& rng, int rank) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  const Eigen::Index r = rank <= 0 ? dim : std::min<Eigen::Index>(rank, dim);
  Matrix g(dim, r);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < r; ++j) g(i, j) = cplx(rng.normal(), rng.normal());
  Matrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityMatrix(rho);
}

PauliString random_pauli(int n, Rng& rng, bool random_phase) {
  std::vector<Pauli> letters(static_cast<std::size_t>(n));
  for (auto& l : letters) l = static_cast<Pauli>(rng.below(4));
  return PauliString(std::move(letters), random_phase ? static_cast<int>(rng.below(4)) : 0);
}

}  // namespace rlcu
