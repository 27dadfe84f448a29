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

#include "rlcu/hamiltonian.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rlcu {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void Hamiltonian::add_term(double coefficient, const PauliString& word) {
  if (!std::isfinite(coefficient)) throw Error("Hamiltonian coefficient is not finite");
  if (word.phase_exp() != 0) throw Error("Hamiltonian words must be phase-free: " + word.to_string());
  if (terms_.empty() && n_ == 0) n_ = word.num_qubits();
  if (word.num_qubits() != n_) {
    throw DimensionError("Hamiltonian term " + word.word() + " has " + std::to_string(word.num_qubits()) +
                         " qubits, expected " + std::to_string(n_));
  }
  for (auto& t : terms_) {
    if (t.word == word) {
      t.coefficient += coefficient;
      return;
    }
  }
  terms_.push_back({coefficient, word});
}

double Hamiltonian::l1_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coefficient);
  return s;
}

Matrix Hamiltonian::to_matrix() const {
  check_size_cap(n_, "Hamiltonian::to_matrix");
  const Eigen::Index dim = Eigen::Index{1} << n_;
  Matrix m = Matrix::Zero(dim, dim);
  for (const auto& t : terms_) m += t.coefficient * pauli_to_matrix(t.word);
  return m;
}

std::string Hamiltonian::serialize() const {
  std::string out;
  for (const auto& t : terms_) {
    out += format_double(t.coefficient);
    out += ' ';
    out += t.word.word();
    out += '\n';
  }
  return out;
}

bool operator==(const Hamiltonian& a, const Hamiltonian& b) {
  if (a.n_ != b.n_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k) {
    if (a.terms_[k].coefficient != b.terms_[k].coefficient || !(a.terms_[k].word == b.terms_[k].word))
      return false;
  }
  return true;
}

Hamiltonian hamiltonian_parse(std::string_view text) {
  Hamiltonian h;
  int line_no = 0;
  bool have_width = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto sep = line.find_first_of(" \t");
    if (sep == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'coefficient word'");
    }
    const std::string_view coeff_text = line.substr(0, sep);
    const std::string_view word_text = trim(line.substr(sep));

    double coeff = 0.0;
    const char* first = coeff_text.data();
    const char* last = first + coeff_text.size();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, last, coeff);
    if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(coeff)) {
      throw ParseError("line " + std::to_string(line_no) + ": malformed coefficient '" + std::string(coeff_text) +
                       "'");
    }
    if (word_text.empty() || word_text.find_first_of(" \t") != std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": malformed Pauli word");
    }
    std::vector<Pauli> letters;
    for (char c : word_text) {
      try {
        letters.push_back(pauli_from_char(c));
      } catch (const ParseError& e) {
        throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    if (have_width && static_cast<int>(letters.size()) != h.num_qubits()) {
      throw ParseError("line " + std::to_string(line_no) + ": word length " + std::to_string(letters.size()) +
                       " differs from " + std::to_string(h.num_qubits()));
    }
    have_width = true;
    h.add_term(coeff, PauliString(std::move(letters), 0));
  }
  return h;
}

Hamiltonian hamiltonian_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open Hamiltonian file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return hamiltonian_parse(ss.str());
}

}  // namespace rlcu
