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

#include "rlcu/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rlcu {

namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "task",    "hamiltonian", "hamiltonian_text", "interaction", "interaction_text", "initial_state",
      "observables", "time",    "dt",               "segments",    "bounded_mu",       "compensate",
      "truncation",  "correlated", "tau",           "tau_over_gap", "omega",           "target_level",
      "shots",   "mom_batches", "seed",             "workers",     "variant",          "shot_log",
      "sweep"};
  return keys;
}

Hamiltonian hamiltonian_entry(const json& j, const char* path_key, const char* text_key, const std::string& base) {
  if (j.contains(path_key) && j.contains(text_key)) {
    throw ConfigError(std::string("config: give only one of '") + path_key + "' and '" + text_key + "'");
  }
  if (j.contains(path_key)) {
    std::filesystem::path p = j.at(path_key).get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base) / p;
    std::ifstream in(p);
    if (!in) throw ConfigError("config: cannot open Hamiltonian file " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return hamiltonian_parse(ss.str());
  }
  if (j.contains(text_key)) return hamiltonian_parse(j.at(text_key).get<std::string>());
  return Hamiltonian();
}

}  // namespace

std::string task_name(Task t) {
  switch (t) {
    case Task::kDynamicsTrotterLcu:
      return "dynamics-trotter-lcu";
    case Task::kDynamicsPqs:
      return "dynamics-pqs";
    case Task::kEigenfilter:
      return "eigenfilter";
    case Task::kValidate:
      return "validate";
  }
  return "unknown";
}

Task task_from_name(std::string_view name) {
  if (name == "dynamics-trotter-lcu" || name == "dynamics") return Task::kDynamicsTrotterLcu;
  if (name == "dynamics-pqs" || name == "pqs") return Task::kDynamicsPqs;
  if (name == "eigenfilter") return Task::kEigenfilter;
  if (name == "validate") return Task::kValidate;
  throw ConfigError("config: unknown task '" + std::string(name) + "'");
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kInstrument:
      return "instrument";
    case Variant::kAlwaysOn:
      return "always-on";
    case Variant::kCommonUnitary:
      return "common-unitary";
  }
  return "unknown";
}

Variant variant_from_name(std::string_view name) {
  if (name == "instrument") return Variant::kInstrument;
  if (name == "always-on") return Variant::kAlwaysOn;
  if (name == "common-unitary") return Variant::kCommonUnitary;
  throw ConfigError("config: unknown variant '" + std::string(name) + "'");
}

Variant ExperimentConfig::effective_variant() const {
  if (variant) return *variant;
  return task == Task::kEigenfilter ? Variant::kAlwaysOn : Variant::kInstrument;
}

ExperimentConfig parse_config(std::string_view json_text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!known_keys().count(key)) throw ConfigError("config: unknown key '" + key + "'");
  }

  ExperimentConfig cfg;
  try {
    if (j.contains("task")) cfg.task = task_from_name(j.at("task").get<std::string>());
    cfg.hamiltonian = hamiltonian_entry(j, "hamiltonian", "hamiltonian_text", base_dir);
    cfg.interaction = hamiltonian_entry(j, "interaction", "interaction_text", base_dir);
    if (j.contains("initial_state")) cfg.initial_state = j.at("initial_state").get<std::string>();
    if (j.contains("observables")) {
      for (const auto& o : j.at("observables")) cfg.observables.push_back(ObservableSpec::parse(o.get<std::string>()));
    }
    if (j.contains("time")) cfg.time = j.at("time").get<double>();
    if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
    if (j.contains("segments")) cfg.segments = j.at("segments").get<int>();
    if (j.contains("bounded_mu")) cfg.bounded_mu = j.at("bounded_mu").get<double>();
    if (j.contains("compensate")) cfg.compensate = j.at("compensate").get<bool>();
    if (j.contains("truncation")) cfg.truncation = j.at("truncation").get<double>();
    if (j.contains("correlated")) cfg.correlated = j.at("correlated").get<bool>();
    if (j.contains("tau")) cfg.tau = j.at("tau").get<double>();
    if (j.contains("tau_over_gap")) cfg.tau_over_gap = j.at("tau_over_gap").get<double>();
    if (j.contains("omega")) cfg.omega = j.at("omega").get<double>();
    if (j.contains("target_level")) cfg.target_level = j.at("target_level").get<int>();
    if (j.contains("shots")) cfg.shots = j.at("shots").get<std::size_t>();
    if (j.contains("mom_batches")) cfg.mom_batches = j.at("mom_batches").get<std::size_t>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<int>();
    if (j.contains("variant")) cfg.variant = variant_from_name(j.at("variant").get<std::string>());
    if (j.contains("shot_log")) cfg.shot_log = j.at("shot_log").get<bool>();
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      cfg.sweep_parameter = s.at("parameter").get<std::string>();
      cfg.sweep_values = s.at("values").get<std::vector<double>>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  check_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_config(ss.str(), parent.empty() ? std::string(".") : parent.string());
}

void check_config(const ExperimentConfig& cfg) {
  if (cfg.shots < 1) throw ConfigError("config: shots must be >= 1");
  if (cfg.mom_batches < 1) throw ConfigError("config: mom_batches must be >= 1");
  if (cfg.workers < 1) throw ConfigError("config: workers must be >= 1");
  if (cfg.task == Task::kValidate) return;
  if (cfg.hamiltonian.empty() && cfg.task != Task::kDynamicsPqs) throw ConfigError("config: missing hamiltonian");
  if (cfg.dt && !(*cfg.dt > 0.0)) throw ConfigError("config: dt must be positive");
  if (cfg.segments && *cfg.segments < 1) throw ConfigError("config: segments must be >= 1");
  if (cfg.dt && cfg.segments) throw ConfigError("config: give only one of dt and segments");
  if (!(cfg.time > 0.0) && cfg.task != Task::kEigenfilter) throw ConfigError("config: time must be positive");
  if (!(cfg.bounded_mu >= 1.0)) throw ConfigError("config: bounded_mu must be >= 1");
  if (cfg.truncation < 0.0) throw ConfigError("config: truncation must be >= 0");

  int n = cfg.hamiltonian.num_qubits();
  if (cfg.task == Task::kDynamicsPqs) {
    if (cfg.interaction.empty()) throw ConfigError("config: PQS needs an interaction term");
    if (cfg.hamiltonian.empty()) {
      n = cfg.interaction.num_qubits();
    } else if (cfg.interaction.num_qubits() != n) {
      throw ConfigError("config: interaction and hamiltonian act on different qubit counts");
    }
    if (cfg.effective_variant() != Variant::kInstrument) {
      throw ConfigError("config: PQS dynamics runs only on the instrument variant");
    }
  }
  for (const auto& o : cfg.observables) {
    if (o.num_qubits() != n) throw ConfigError("config: observable '" + o.label() + "' has the wrong qubit count");
  }
  if (cfg.task == Task::kEigenfilter) {
    if (cfg.tau && cfg.tau_over_gap) throw ConfigError("config: give only one of tau and tau_over_gap");
    if ((cfg.tau && *cfg.tau < 0.0) || (cfg.tau_over_gap && *cfg.tau_over_gap < 0.0)) {
      throw ConfigError("config: tau must be >= 0");
    }
    if (cfg.target_level < 0 || cfg.target_level >= (1 << n)) throw ConfigError("config: target_level out of range");
  }
  if (cfg.initial_state != "plus-all" && cfg.initial_state != "zeros") {
    if (static_cast<int>(cfg.initial_state.size()) != n) {
      throw ConfigError("config: initial_state '" + cfg.initial_state + "' does not match the qubit count");
    }
    for (char c : cfg.initial_state) {
      if (c != '0' && c != '1') throw ConfigError("config: invalid initial_state '" + cfg.initial_state + "'");
    }
  }
  if (!cfg.sweep_parameter.empty() && cfg.sweep_values.size() < 3) {
    throw ConfigError("config: a sweep needs at least 3 values");
  }
}

StateVector initial_state(const ExperimentConfig& cfg) {
  const int n = cfg.task == Task::kDynamicsPqs && cfg.hamiltonian.empty() ? cfg.interaction.num_qubits()
                                                                          : cfg.hamiltonian.num_qubits();
  if (cfg.initial_state == "plus-all") return StateVector::plus_all(n);
  if (cfg.initial_state == "zeros") return StateVector::basis(n, 0);
  return StateVector::from_bitstring(cfg.initial_state);
}

}  // namespace rlcu
