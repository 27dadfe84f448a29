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

#include "rlcu/shadows.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace rlcu {

namespace {

constexpr char kBases[3] = {'X', 'Y', 'Z'};

Eigen::Matrix2cd rotation_for(char basis) {
  const double s = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix2cd h;
  h << s, s, s, -s;
  switch (basis) {
    case 'Z':
      return Eigen::Matrix2cd::Identity();
    case 'X':
      return h;
    case 'Y': {
      Eigen::Matrix2cd sdg;
      sdg << 1.0, 0.0, 0.0, cplx(0.0, -1.0);
      return h * sdg;
    }
    default:
      throw ParseError(std::string("invalid shadow basis letter '") + basis + "'");
  }
}

void apply_single_qubit(Vector& psi, int n, int q, const Eigen::Matrix2cd& g) {
  const Eigen::Index stride = Eigen::Index{1} << (n - 1 - q);
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    if (i & stride) continue;
    const cplx a0 = psi[i];
    const cplx a1 = psi[i | stride];
    psi[i] = g(0, 0) * a0 + g(0, 1) * a1;
    psi[i | stride] = g(1, 0) * a0 + g(1, 1) * a1;
  }
}

// tr(P (3|s><s| - I)) for one qubit.
double qubit_factor(Pauli p, char basis, char z) {
  if (p == Pauli::I) return 1.0;
  if (pauli_char(p) != basis) return 0.0;
  return z == '0' ? 3.0 : -3.0;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void check_snapshot(const ShadowSnapshot& snap) {
  if (snap.basis.size() != snap.z.size()) throw DimensionError("snapshot basis and outcome lengths differ");
}

Matrix per_qubit_channel(const Matrix& a, double self, double trace_coeff) {
  if (a.rows() != a.cols()) throw DimensionError("shadow channel: matrix must be square");
  const int n = qubits_for_dimension(a.rows());
  Matrix m = a;
  for (int q = 0; q < n; ++q) {
    const Eigen::Index bit = Eigen::Index{1} << (n - 1 - q);
    Matrix next(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        cplx v = self * m(i, j);
        if ((i & bit) == (j & bit)) v += trace_coeff * (m(i & ~bit, j & ~bit) + m(i | bit, j | bit));
        next(i, j) = v;
      }
    }
    m = std::move(next);
  }
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// ObservableSpec

ObservableSpec::ObservableSpec(std::vector<Term> terms, std::string label)
    : terms_(std::move(terms)), label_(std::move(label)) {
  if (terms_.empty()) throw Error("ObservableSpec: no terms");
  const int n = terms_.front().word.num_qubits();
  for (const auto& t : terms_) {
    if (t.word.num_qubits() != n) throw DimensionError("ObservableSpec: terms differ in qubit count");
    if (t.word.phase_exp() != 0) throw Error("ObservableSpec: words must be phase-free");
    if (!std::isfinite(t.coefficient)) throw Error("ObservableSpec: non-finite coefficient");
  }
  if (label_.empty()) {
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      if (k > 0) label_ += " + ";
      if (terms_[k].coefficient != 1.0 || terms_.size() > 1) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), terms_[k].coefficient);
        label_ += std::string(buf, res.ptr) + " ";
      }
      label_ += terms_[k].word.word();
    }
  }
}

ObservableSpec ObservableSpec::single(const PauliString& word) { return ObservableSpec({{1.0, word.unphased()}}); }

ObservableSpec ObservableSpec::identity(int n) { return ObservableSpec({{1.0, PauliString(n)}}); }

ObservableSpec ObservableSpec::parse(std::string_view text) {
  std::vector<Term> terms;
  double sign = 1.0;
  double coeff = 1.0;
  bool have_coeff = false;
  std::size_t pos = 0;
  auto add = [&](double c, const PauliString& w) {
    for (auto& t : terms) {
      if (t.word == w) {
        t.coefficient += c;
        return;
      }
    }
    terms.push_back({c, w});
  };
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    std::string_view tok = text.substr(pos, end - pos);
    pos = end;
    if (tok == "+") continue;
    if (tok == "-") {
      sign = -sign;
      continue;
    }
    double value = 0.0;
    const char* first = tok.data();
    const char* last = first + tok.size();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, last, value);
    if (res.ec == std::errc{} && res.ptr == last) {
      if (have_coeff) throw ParseError("observable: two coefficients in a row in '" + std::string(text) + "'");
      coeff = value;
      have_coeff = true;
      continue;
    }
    while (!tok.empty() && (tok.front() == '-' || tok.front() == '+')) {
      if (tok.front() == '-') sign = -sign;
      tok.remove_prefix(1);
    }
    std::vector<Pauli> letters;
    for (char c : tok) letters.push_back(pauli_from_char(c));
    if (letters.empty()) throw ParseError("observable: empty Pauli word");
    PauliString w(std::move(letters), 0);
    if (!terms.empty() && terms.front().word.num_qubits() != w.num_qubits()) {
      throw ParseError("observable: inconsistent word lengths in '" + std::string(text) + "'");
    }
    add(sign * coeff, w);
    sign = 1.0;
    coeff = 1.0;
    have_coeff = false;
  }
  if (have_coeff || terms.empty()) throw ParseError("observable: malformed expression '" + std::string(text) + "'");
  std::string_view label = text;
  while (!label.empty() && std::isspace(static_cast<unsigned char>(label.front()))) label.remove_prefix(1);
  while (!label.empty() && std::isspace(static_cast<unsigned char>(label.back()))) label.remove_suffix(1);
  return ObservableSpec(std::move(terms), std::string(label));
}

int ObservableSpec::locality() const {
  int w = 0;
  for (const auto& t : terms_) w = std::max(w, t.word.weight());
  return w;
}

Matrix ObservableSpec::to_matrix() const {
  check_size_cap(num_qubits(), "ObservableSpec::to_matrix");
  const Eigen::Index dim = Eigen::Index{1} << num_qubits();
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& t : terms_) m += t.coefficient * pauli_to_matrix(t.word);
  return m;
}

// ---------------------------------------------------------------------------
// Snapshots

ShadowSnapshot sample_shadow(const StateVector& s, Rng& rng) {
  if (!s.is_normalized(1e-10)) throw Error("sample_shadow: state is not normalized");
  const int n = s.num_qubits();
  ShadowSnapshot snap;
  snap.basis.resize(static_cast<std::size_t>(n));
  Vector psi = s.amplitudes();
  for (int q = 0; q < n; ++q) {
    const char b = kBases[rng.below(3)];
    snap.basis[static_cast<std::size_t>(q)] = b;
    if (b != 'Z') apply_single_qubit(psi, n, q, rotation_for(b));
  }
  snap.z = index_to_bitstring(sample_computational(StateVector(std::move(psi)), rng), n);
  return snap;
}

Matrix basis_rotation(const std::string& basis) {
  Matrix r = Matrix::Identity(1, 1);
  for (char b : basis) r = kron(r, rotation_for(b));
  return r;
}

Matrix snapshot_matrix(const ShadowSnapshot& snap) {
  check_snapshot(snap);
  check_size_cap(snap.num_qubits(), "snapshot_matrix");
  Matrix m = Matrix::Identity(1, 1);
  for (std::size_t q = 0; q < snap.basis.size(); ++q) {
    const Eigen::Matrix2cd r = rotation_for(snap.basis[q]);
    Eigen::Vector2cd e = Eigen::Vector2cd::Zero();
    e[snap.z[q] == '1' ? 1 : 0] = 1.0;
    const Eigen::Vector2cd s = r.adjoint() * e;
    const Matrix local = 3.0 * (s * s.adjoint()) - Eigen::Matrix2cd::Identity();
    m = kron(m, local);
  }
  return m;
}

double snapshot_trace(const ShadowSnapshot& snap, const PauliString& word) {
  check_snapshot(snap);
  if (word.num_qubits() != snap.num_qubits()) throw DimensionError("snapshot_trace: qubit count mismatch");
  double v = 1.0;
  for (int q = 0; q < word.num_qubits() && v != 0.0; ++q) {
    v *= qubit_factor(word.letter(q), snap.basis[static_cast<std::size_t>(q)], snap.z[static_cast<std::size_t>(q)]);
  }
  return v;
}

double snapshot_trace(const ShadowSnapshot& snap, const ObservableSpec& o) {
  double v = 0.0;
  for (const auto& t : o.terms()) v += t.coefficient * snapshot_trace(snap, t.word);
  return v;
}

std::vector<cplx> snapshot_values(const std::vector<ShadowSnapshot>& snaps, const ObservableSpec& o) {
  std::vector<cplx> out;
  out.reserve(snaps.size());
  for (const auto& s : snaps) out.push_back(s.norm * s.weight * snapshot_trace(s, o));
  return out;
}

cplx estimate_observable(const std::vector<ShadowSnapshot>& snaps, const ObservableSpec& o) {
  if (snaps.empty()) throw Error("estimate_observable: no snapshots");
  cplx acc = 0.0;
  for (const cplx& v : snapshot_values(snaps, o)) acc += v;
  return acc / static_cast<double>(snaps.size());
}

double median_of_means(const std::vector<double>& values, std::size_t k_batches) {
  if (values.empty()) throw Error("median_of_means: empty input");
  if (k_batches < 1 || k_batches > values.size()) throw Error("median_of_means: batch count out of range");
  const std::size_t size = values.size() / k_batches;
  std::vector<double> means;
  means.reserve(k_batches);
  for (std::size_t b = 0; b < k_batches; ++b) {
    const std::size_t begin = b * size;
    const std::size_t end = b + 1 == k_batches ? values.size() : begin + size;
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += values[i];
    means.push_back(s / static_cast<double>(end - begin));
  }
  std::sort(means.begin(), means.end());
  const std::size_t mid = k_batches / 2;
  return k_batches % 2 == 1 ? means[mid] : 0.5 * (means[mid - 1] + means[mid]);
}

// ---------------------------------------------------------------------------
// Shadow norm and measurement channel

double shadow_norm_bound(const ObservableSpec& o) {
  double s = 0.0;
  for (const auto& t : o.terms()) s += std::abs(t.coefficient) * std::pow(3.0, 0.5 * t.word.weight());
  return s * s;
}

double shadow_norm_exact(const ObservableSpec& o) {
  const int n = o.num_qubits();
  check_size_cap(n, "shadow_norm_exact");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix acc = Matrix::Zero(dim, dim);
  std::size_t bases = 1;
  for (int q = 0; q < n; ++q) bases *= 3;
  ShadowSnapshot snap;
  snap.basis.assign(static_cast<std::size_t>(n), 'Z');
  snap.z.assign(static_cast<std::size_t>(n), '0');
  for (std::size_t r = 0; r < bases; ++r) {
    std::size_t code = r;
    for (int q = n - 1; q >= 0; --q) {
      snap.basis[static_cast<std::size_t>(q)] = kBases[code % 3];
      code /= 3;
    }
    const Matrix rot = basis_rotation(snap.basis);
    for (Eigen::Index z = 0; z < dim; ++z) {
      snap.z = index_to_bitstring(static_cast<std::uint64_t>(z), n);
      const double t = snapshot_trace(snap, o);
      if (t == 0.0) continue;
      const Vector s = rot.adjoint().col(z);
      acc += (t * t / static_cast<double>(bases)) * (s * s.adjoint());
    }
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (acc + acc.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

Matrix shadow_channel(const Matrix& a) { return per_qubit_channel(a, 1.0 / 3.0, 1.0 / 3.0); }

Matrix inverse_shadow_channel(const Matrix& a) { return per_qubit_channel(a, 3.0, -1.0); }

VarianceAudit variance_audit(const std::vector<ShadowSnapshot>& snaps, const ObservableSpec& o) {
  if (snaps.size() < 1000) throw Error("variance_audit: at least 1000 snapshots required");
  VarianceAudit out;
  out.samples = snaps.size();
  std::vector<cplx> vals;
  vals.reserve(snaps.size());
  for (const auto& s : snaps) {
    const double m = std::abs(s.weight);
    const cplx phase = m > 0.0 ? s.weight / m : cplx(0.0);
    vals.push_back(phase * snapshot_trace(s, o));
  }
  const double count = static_cast<double>(vals.size());
  cplx mean = 0.0;
  for (const cplx& v : vals) mean += v;
  mean /= count;
  double var = 0.0;
  double m2 = 0.0;
  for (const cplx& v : vals) {
    var += std::norm(v - mean);
    m2 += std::norm(v);
  }
  var /= count - 1.0;
  m2 /= count;
  double m2_var = 0.0;
  for (const cplx& v : vals) m2_var += (std::norm(v) - m2) * (std::norm(v) - m2);
  m2_var /= count - 1.0;
  out.variance = var;
  out.bound = 2.0 * shadow_norm_bound(o);
  out.allowance = 3.0 * std::sqrt(m2_var / count);
  out.pass = out.variance <= out.bound + out.allowance;
  return out;
}

}  // namespace rlcu
