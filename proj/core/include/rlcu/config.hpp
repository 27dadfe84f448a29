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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rlcu/backend.hpp"
#include "rlcu/hamiltonian.hpp"
#include "rlcu/shadows.hpp"

namespace rlcu {

enum class Task { kDynamicsTrotterLcu, kDynamicsPqs, kEigenfilter, kValidate };
enum class Variant { kInstrument, kAlwaysOn, kCommonUnitary };

std::string task_name(Task t);
Task task_from_name(std::string_view name);
std::string variant_name(Variant v);
Variant variant_from_name(std::string_view name);

struct ExperimentConfig {
  Task task = Task::kDynamicsTrotterLcu;
  /// Full Hamiltonian; for PQS the local (non-interacting) part.
  Hamiltonian hamiltonian;
  /// PQS interaction term.
  Hamiltonian interaction;
  /// "plus-all", "zeros" or a bitstring such as "0110".
  std::string initial_state = "zeros";
  std::vector<ObservableSpec> observables;

  double time = 1.0;
  std::optional<double> dt;
  std::optional<int> segments;
  /// Largest allowed mu_T when neither dt nor segments is given.
  double bounded_mu = 2.0;
  bool compensate = true;
  /// Truncation threshold for the compensation formula; 0 disables it.
  double truncation = 0.0;
  /// Draw the V-chain equal to the U-chain instead of independently.
  bool correlated = false;

  std::optional<double> tau;
  std::optional<double> tau_over_gap;
  std::optional<double> omega;
  int target_level = 0;

  std::size_t shots = 10000;
  std::size_t mom_batches = 10;
  std::uint64_t seed = 1;
  int workers = 1;
  std::optional<Variant> variant;
  bool shot_log = false;

  std::string sweep_parameter;
  std::vector<double> sweep_values;

  int num_qubits() const { return hamiltonian.num_qubits(); }
  Variant effective_variant() const;
};

/// Parses a JSON config. Relative Hamiltonian paths resolve against
/// `base_dir`. Throws ConfigError (including for JSON syntax errors) or
/// ParseError for malformed Hamiltonian text.
ExperimentConfig parse_config(std::string_view json_text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

/// Throws ConfigError for inconsistent settings.
void check_config(const ExperimentConfig& cfg);

StateVector initial_state(const ExperimentConfig& cfg);

}  // namespace rlcu
