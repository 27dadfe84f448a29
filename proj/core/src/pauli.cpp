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

#include "rlcu/pauli.hpp"

#include <bit>
#include <cmath>

namespace rlcu {

namespace {

// Phase exponent (power of i) of the single-qubit product a·b.
int letter_product_phase(Pauli a, Pauli b) {
  if (a == Pauli::I || b == Pauli::I || a == b) return 0;
  const int x = static_cast<int>(a);
  const int y = static_cast<int>(b);
  // X·Y = iZ, Y·Z = iX, Z·X = iY; reversed order gives -i.
  return (y - x + 3) % 3 == 1 ? 1 : 3;
}

Pauli letter_product(Pauli a, Pauli b) {
  return static_cast<Pauli>(static_cast<std::uint8_t>(a) ^ static_cast<std::uint8_t>(b));
}

std::uint64_t bit_of(int n, int q) { return std::uint64_t{1} << (n - 1 - q); }

}  // namespace

char pauli_char(Pauli p) {
  static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
  return kChars[static_cast<int>(p)];
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I':
      return Pauli::I;
    case 'X':
      return Pauli::X;
    case 'Y':
      return Pauli::Y;
    case 'Z':
      return Pauli::Z;
    default:
      throw ParseError(std::string("invalid Pauli letter '") + c + "'");
  }
}

PauliString::PauliString(int n) : letters_(static_cast<std::size_t>(n), Pauli::I) {
  if (n < 0) throw DimensionError("negative qubit count");
}

PauliString::PauliString(std::vector<Pauli> letters, int phase_exp)
    : letters_(std::move(letters)), phase_exp_(((phase_exp % 4) + 4) % 4) {}

PauliString PauliString::parse(std::string_view text) {
  int phase = 0;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase += 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  if (pos == text.size()) throw ParseError("empty Pauli word");
  std::vector<Pauli> letters;
  letters.reserve(text.size() - pos);
  for (; pos < text.size(); ++pos) letters.push_back(pauli_from_char(text[pos]));
  return PauliString(std::move(letters), phase);
}

int PauliString::weight() const {
  int w = 0;
  for (Pauli p : letters_) w += p != Pauli::I;
  return w;
}

PauliString PauliString::times_i_pow(int k) const { return PauliString(letters_, phase_exp_ + k); }

PauliString PauliString::adjoint() const {
  // Pauli letters are Hermitian; only the phase conjugates.
  return PauliString(letters_, -phase_exp_);
}

std::uint64_t PauliString::x_mask() const {
  const int n = num_qubits();
  std::uint64_t m = 0;
  for (int q = 0; q < n; ++q)
    if (letter(q) == Pauli::X || letter(q) == Pauli::Y) m |= bit_of(n, q);
  return m;
}

std::uint64_t PauliString::z_mask() const {
  const int n = num_qubits();
  std::uint64_t m = 0;
  for (int q = 0; q < n; ++q)
    if (letter(q) == Pauli::Z || letter(q) == Pauli::Y) m |= bit_of(n, q);
  return m;
}

std::string PauliString::word() const {
  std::string s;
  s.reserve(letters_.size());
  for (Pauli p : letters_) s.push_back(pauli_char(p));
  return s;
}

std::string PauliString::to_string() const {
  static constexpr const char* kPrefix[] = {"", "i", "-", "-i"};
  return kPrefix[phase_exp_] + word();
}

PauliString pauli_multiply(const PauliString& p, const PauliString& q) {
  if (p.num_qubits() != q.num_qubits()) {
    throw DimensionError("pauli_multiply: " + std::to_string(p.num_qubits()) + " vs " +
                         std::to_string(q.num_qubits()) + " qubits");
  }
  std::vector<Pauli> letters(p.letters().size());
  int phase = p.phase_exp() + q.phase_exp();
  for (std::size_t k = 0; k < letters.size(); ++k) {
    phase += letter_product_phase(p.letters()[k], q.letters()[k]);
    letters[k] = letter_product(p.letters()[k], q.letters()[k]);
  }
  return PauliString(std::move(letters), phase);
}

PauliString operator*(const PauliString& p, const PauliString& q) { return pauli_multiply(p, q); }

Vector pauli_apply(const PauliString& p, const Vector& psi) {
  const int n = p.num_qubits();
  if (psi.size() != (Eigen::Index{1} << n)) {
    throw DimensionError("pauli_apply: state size does not match " + std::to_string(n) + " qubits");
  }
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  int num_y = 0;
  for (Pauli l : p.letters()) num_y += l == Pauli::Y;
  // P = i^(phase + #Y) X^x Z^z, so P|j> = i^(...) (-1)^popcount(j & z) |j ^ x>.
  const cplx global = i_pow(p.phase_exp() + num_y);
  Vector out(psi.size());
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(psi.size()); ++j) {
    const double sign = (std::popcount(j & z) & 1) ? -1.0 : 1.0;
    out[static_cast<Eigen::Index>(j ^ x)] = global * sign * psi[static_cast<Eigen::Index>(j)];
  }
  return out;
}

Matrix pauli_to_matrix(const PauliString& p) {
  const int n = p.num_qubits();
  check_size_cap(n, "pauli_to_matrix");
  const Eigen::Index dim = Eigen::Index{1} << n;
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  int num_y = 0;
  for (Pauli l : p.letters()) num_y += l == Pauli::Y;
  const cplx global = i_pow(p.phase_exp() + num_y);
  Matrix m = Matrix::Zero(dim, dim);
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(dim); ++j) {
    const double sign = (std::popcount(j & z) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(j ^ x), static_cast<Eigen::Index>(j)) = global * sign;
  }
  return m;
}

std::vector<PauliTerm> pauli_decompose(const Matrix& w, double cutoff) {
  if (w.rows() != w.cols()) throw DimensionError("pauli_decompose: matrix is not square");
  const int n = qubits_for_dimension(w.rows());
  check_size_cap(n, "pauli_decompose");
  const std::uint64_t dim = std::uint64_t{1} << n;
  const std::uint64_t num_words = std::uint64_t{1} << (2 * n);
  std::vector<PauliTerm> terms;
  std::vector<Pauli> letters(static_cast<std::size_t>(n));
  for (std::uint64_t code = 0; code < num_words; ++code) {
    std::uint64_t c = code;
    for (int q = n - 1; q >= 0; --q) {
      letters[static_cast<std::size_t>(q)] = static_cast<Pauli>(c & 3);
      c >>= 2;
    }
    PauliString p(letters, 0);
    const std::uint64_t x = p.x_mask();
    const std::uint64_t z = p.z_mask();
    int num_y = 0;
    for (Pauli l : letters) num_y += l == Pauli::Y;
    // tr(P^dagger W) = conj(i^#Y) sum_j (-1)^popcount(j & z) W(j ^ x, j)
    cplx acc = 0.0;
    for (std::uint64_t j = 0; j < dim; ++j) {
      const cplx entry = w(static_cast<Eigen::Index>(j ^ x), static_cast<Eigen::Index>(j));
      acc += (std::popcount(j & z) & 1) ? -entry : entry;
    }
    const cplx coeff = std::conj(i_pow(num_y)) * acc / static_cast<double>(dim);
    if (std::abs(coeff) >= cutoff && std::abs(coeff) > 0.0) terms.push_back({coeff, std::move(p)});
  }
  return terms;
}

Matrix pauli_reconstruct(const std::vector<PauliTerm>& terms, int n) {
  check_size_cap(n, "pauli_reconstruct");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& t : terms) {
    if (t.word.num_qubits() != n) throw DimensionError("pauli_reconstruct: qubit count mismatch");
    m += t.coefficient * pauli_to_matrix(t.word);
  }
  return m;
}

}  // namespace rlcu
