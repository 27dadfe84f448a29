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
#include <cstdint>
#include <string>
#include <vector>

#include "rlcu/circuits.hpp"

namespace rlcu {

struct ValidationCheck {
  std::string name;
  /// "exact" (deviation is a max absolute error) or "statistical"
  /// (deviation is a max |z|).
  std::string kind;
  double deviation = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// A measured quantity reported without a pass/fail threshold.
struct ValidationDiagnostic {
  std::string name;
  double value = 0.0;
};

struct ValidationReport {
  std::uint64_t seed = 0;
  std::size_t shots = 0;
  std::vector<ValidationCheck> checks;
  std::vector<ValidationDiagnostic> diagnostics;
  double wall_seconds = 0.0;

  bool pass() const;
};

struct ValidateOptions {
  std::uint64_t seed = 2026;
  std::size_t shots = 20000;
  int workers = 1;
  /// Phase gate used by the simulated circuits; the oracles always use S^dagger.
  PhaseGate gate = PhaseGate::kSDagger;
};

/// Runs the oracle-equivalence suite: exact checks at 1e-10 or 1e-12 and
/// statistical checks flagged when |z| > 5. The diagnostics include
/// "variance_ratio_random_b", the summed two-qubit Pauli variance of the
/// randomized-b estimator over that of the fixed b = 0 estimator on the same
/// instance.
ValidationReport validate(const ValidateOptions& opts);

std::string validation_report_json(const ValidationReport& r, bool include_timing = true);

}  // namespace rlcu
