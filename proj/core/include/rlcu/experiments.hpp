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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rlcu/circuits.hpp"
#include "rlcu/config.hpp"
#include "rlcu/lcu.hpp"
#include "rlcu/shadows.hpp"

namespace rlcu {

struct ResultRecord {
  std::string label;
  double estimate = 0.0;
  double std_error = 0.0;
  double imag = 0.0;
  double imag_error = 0.0;
  /// Imaginary part more than 3 standard errors from zero.
  bool imag_flag = false;
  double mom_estimate = 0.0;
  /// Target value: the exact evolved state, or the targeted eigenstate.
  std::optional<double> exact;
  /// Exact mean of the estimator pipeline (Trotter or first-order bias and
  /// finite filter width included).
  std::optional<double> pipeline_exact;
  std::size_t shots = 0;
  double mu_T = 1.0;
  double wall_seconds = 0.0;
};

struct RunOutput {
  Task task = Task::kDynamicsTrotterLcu;
  Variant variant = Variant::kInstrument;
  std::uint64_t seed = 0;
  std::size_t shots = 0;
  int nu = 1;
  double dt = 0.0;
  double mu_T = 1.0;
  double tau = 0.0;
  double omega = 0.0;
  double gap = 0.0;
  std::optional<double> denominator;
  std::optional<double> denominator_error;
  std::vector<ResultRecord> records;
  std::vector<ShadowSnapshot> snapshots;
  /// Filled only when the config asks for a shot log.
  std::vector<ShotRecord> shot_log;
  std::string formula_json;
  double wall_seconds = 0.0;
};

/// Segment count, step and per-segment formula of a dynamics run.
struct DynamicsPlan {
  int nu = 1;
  double dt = 0.0;
  LcuFormula formula;
  std::optional<PhasedUnitary> common;
  double mu_T = 1.0;
};

/// Resolves nu and dt (segments, dt, or the bounded mode), then builds the
/// compensation formula (Trotter tasks) or the channel decomposition (PQS).
/// Throws ConfigError, or Error when no bounded nu exists.
DynamicsPlan plan_dynamics(const ExperimentConfig& cfg);

/// Filter parameters for an eigenfilter run.
struct FilterPlan {
  GaussianFilterEnsemble ensemble;
  double gap = 0.0;
  std::shared_ptr<const HermitianSpectrum> spectrum;
};
FilterPlan plan_eigenfilter(const ExperimentConfig& cfg);

/// Dense reference states: `target` is the exact evolved state or the target
/// eigenprojector; `pipeline` is the state the estimator averages to.
struct DenseReference {
  Matrix target;
  Matrix pipeline;
  /// 1 - fidelity of the filtered state with the target eigenstate.
  double leakage = 0.0;
};
DenseReference dense_reference(const ExperimentConfig& cfg);

/// Dynamics tasks (Trotter-LCU or PQS, per cfg.task).
RunOutput run_dynamics(const ExperimentConfig& cfg);
RunOutput run_eigenfilter(const ExperimentConfig& cfg);

/// Throws Error if the denominator estimate is within 3 standard errors of 0.
RunOutput run_task(const ExperimentConfig& cfg);

std::string run_output_json(const RunOutput& out, bool include_timing = true);

struct ScalingRow {
  double parameter = 0.0;
  std::string observable;
  double estimate = 0.0;
  double std_error = 0.0;
  double exact = 0.0;
  double bias = 0.0;
  /// Dense systematic bias: uncompensated Trotter (Trotter tasks), first
  /// order (PQS) or finite filter width (eigenfilter).
  double dense_residual = 0.0;
  /// Eigenfilter leakage; 0 for dynamics.
  double state_residual = 0.0;
};

struct ScalingTable {
  std::string parameter;
  std::vector<ScalingRow> rows;
  /// log(state residual) against tau^2 gap^2 for the filter, log-log
  /// dense residual against dt for dynamics.
  std::string fit;
  double slope = 0.0;
};

/// Sweeps cfg.sweep_parameter over cfg.sweep_values ("tau", "tau_over_gap"
/// or "dt"). Throws ConfigError with fewer than 3 points.
ScalingTable scaling_audit(const ExperimentConfig& cfg);
std::string scaling_csv(const ScalingTable& t);
std::string scaling_json(const ScalingTable& t);

}  // namespace rlcu
