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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rlcu {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands with incompatible qubit counts or matrix shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Requested dense object exceeds the configured qubit cap.
class SizeCapError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (Hamiltonian files, Pauli words, snapshot logs).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A measurement branch that should be sampled has (numerically) zero weight.
class ZeroProbabilityError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or invalid experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Qubit cap for dense simulation. Defaults to 10; the environment variable
/// RLCU_SIZE_CAP overrides it (clamped to 14).
int size_cap();

/// Throws SizeCapError when `n` exceeds size_cap().
void check_size_cap(int n, const char* what);

/// i^k for any integer k.
inline cplx i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

/// Number of qubits for a dimension that must be a power of two.
int qubits_for_dimension(Eigen::Index dim);

}  // namespace rlcu
