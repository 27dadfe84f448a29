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

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlcu/config.hpp"
#include "rlcu/experiments.hpp"
#include "rlcu/io.hpp"
#include "rlcu/shadows.hpp"
#include "rlcu/stats.hpp"
#include "rlcu/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitValidation = 2;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> shots;
  std::optional<int> workers;
  std::string out;
  bool dump_formula = false;
  bool log_shots = false;
};

void add_common(CLI::App* app, CommonFlags& f, bool needs_config) {
  auto* c = app->add_option("--config", f.config, "JSON experiment config");
  if (needs_config) c->required()->check(CLI::ExistingFile);
  app->add_option("--seed", f.seed, "Master seed (overrides the config)");
  app->add_option("--shots", f.shots, "Shot count (overrides the config)")->check(CLI::PositiveNumber);
  app->add_option("--workers", f.workers, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
  app->add_option("--out", f.out, "Output directory (stdout when omitted)");
}

rlcu::ExperimentConfig load_with_overrides(const CommonFlags& f) {
  rlcu::ExperimentConfig cfg = rlcu::load_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (f.shots) cfg.shots = *f.shots;
  if (f.workers) cfg.workers = *f.workers;
  if (f.log_shots) cfg.shot_log = true;
  return cfg;
}

void write_output(const std::string& dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(dir);
  rlcu::write_text_file((std::filesystem::path(dir) / name).string(), content);
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

int emit_run(const rlcu::RunOutput& run, const CommonFlags& f) {
  const std::string results = rlcu::run_output_json(run);
  if (f.out.empty()) {
    std::cout << results << '\n';
    if (f.dump_formula) std::cout << run.formula_json << '\n';
    return kExitOk;
  }
  write_output(f.out, "results.json", results + "\n");
  if (f.dump_formula) write_output(f.out, "formula.json", run.formula_json + "\n");
  if (!run.shot_log.empty()) {
    std::vector<std::string> lines;
    lines.reserve(run.shot_log.size());
    for (const auto& s : run.shot_log) lines.push_back(rlcu::shot_to_jsonl(s));
    write_output(f.out, "shots.jsonl", join_lines(lines));
    lines.clear();
    for (const auto& s : run.snapshots) lines.push_back(rlcu::snapshot_to_jsonl(s));
    write_output(f.out, "snapshots.jsonl", join_lines(lines));
  }
  std::cerr << "wrote " << f.out << "/results.json\n";
  return kExitOk;
}

int run_experiment(const CommonFlags& f, std::optional<rlcu::Task> forced) {
  rlcu::ExperimentConfig cfg = load_with_overrides(f);
  if (forced) {
    cfg.task = *forced;
  } else if (cfg.task != rlcu::Task::kDynamicsTrotterLcu && cfg.task != rlcu::Task::kDynamicsPqs) {
    throw rlcu::ConfigError("dynamics expects a dynamics task, got '" + rlcu::task_name(cfg.task) + "'");
  }
  return emit_run(rlcu::run_task(cfg), f);
}

int run_validate(const CommonFlags& f, const std::string& gate) {
  rlcu::ValidateOptions opts;
  if (!f.config.empty()) {
    const rlcu::ExperimentConfig cfg = rlcu::load_config(f.config);
    opts.seed = cfg.seed;
    opts.shots = cfg.shots;
    opts.workers = cfg.workers;
  }
  if (f.seed) opts.seed = *f.seed;
  if (f.shots) opts.shots = *f.shots;
  if (f.workers) opts.workers = *f.workers;
  opts.gate = gate == "s" ? rlcu::PhaseGate::kS : rlcu::PhaseGate::kSDagger;

  const rlcu::ValidationReport report = rlcu::validate(opts);
  const std::string json = rlcu::validation_report_json(report);
  if (f.out.empty()) {
    std::cout << json << '\n';
  } else {
    write_output(f.out, "validation.json", json + "\n");
  }
  for (const auto& c : report.checks) {
    std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << " deviation=" << c.deviation
              << " threshold=" << c.threshold << '\n';
  }
  return report.pass() ? kExitOk : kExitValidation;
}

int run_estimate(const std::string& path, const std::vector<std::string>& observables, std::size_t batches,
                 const std::string& out) {
  const auto snaps = rlcu::load_snapshots(path);
  if (snaps.empty()) throw rlcu::Error("no snapshots in " + path);
  nlohmann::json j;
  j["snapshots"] = snaps.size();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& text : observables) {
    const rlcu::ObservableSpec o = rlcu::ObservableSpec::parse(text);
    const auto values = rlcu::snapshot_values(snaps, o);
    const rlcu::ComplexSummary s = rlcu::summarize(values);
    std::vector<double> re(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) re[k] = values[k].real();
    const std::size_t k = std::min(batches, values.size());
    rows.push_back({{"observable", text},
                    {"estimate", s.mean.real()},
                    {"std_error", s.std_error_re},
                    {"imag", s.mean.imag()},
                    {"imag_error", s.std_error_im},
                    {"mom_estimate", rlcu::median_of_means(re, k)}});
  }
  j["observables"] = std::move(rows);
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_output(out, "estimates.json", j.dump(2) + "\n");
  }
  return kExitOk;
}

int run_audit(const CommonFlags& f) {
  const rlcu::ExperimentConfig cfg = load_with_overrides(f);
  const rlcu::ScalingTable table = rlcu::scaling_audit(cfg);
  if (f.out.empty()) {
    std::cout << rlcu::scaling_csv(table);
  } else {
    write_output(f.out, "scaling.csv", rlcu::scaling_csv(table));
    write_output(f.out, "scaling.json", rlcu::scaling_json(table) + "\n");
  }
  std::cerr << table.fit << " slope=" << table.slope << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized LCU estimators with classical shadows"};
  app.require_subcommand(1);

  CommonFlags dyn, pqs, filt, val, audit;
  auto* dynamics = app.add_subcommand("dynamics", "Trotter-LCU or PQS dynamics from a config");
  add_common(dynamics, dyn, true);
  dynamics->add_flag("--dump-formula", dyn.dump_formula, "Also emit the compensation formula");
  dynamics->add_flag("--log-shots", dyn.log_shots, "Write per-shot and snapshot logs");

  auto* pqs_cmd = app.add_subcommand("pqs", "Perturbative quantum simulation dynamics");
  add_common(pqs_cmd, pqs, true);
  pqs_cmd->add_flag("--dump-formula", pqs.dump_formula, "Also emit the channel decomposition");
  pqs_cmd->add_flag("--log-shots", pqs.log_shots, "Write per-shot and snapshot logs");

  auto* eig = app.add_subcommand("eigenfilter", "Eigenstate property estimation");
  add_common(eig, filt, true);
  eig->add_flag("--dump-formula", filt.dump_formula, "Also emit the filter description");
  eig->add_flag("--log-shots", filt.log_shots, "Write per-shot and snapshot logs");

  std::string gate = "sdg";
  auto* validate = app.add_subcommand("validate", "Exact and statistical self-checks");
  add_common(validate, val, false);
  validate->add_option("--phase-gate", gate, "Ancilla phase gate for b = 1")
      ->check(CLI::IsMember({"sdg", "s"}));

  std::string snapshot_path;
  std::vector<std::string> observables;
  std::size_t mom_batches = 10;
  std::string estimate_out;
  auto* estimate = app.add_subcommand("estimate", "Re-analyse a snapshot log");
  estimate->add_option("snapshots", snapshot_path, "Snapshot JSONL file")->required()->check(CLI::ExistingFile);
  estimate->add_option("--observable,-o", observables, "Observable, e.g. \"0.5 XX + ZI\"")->required();
  estimate->add_option("--mom-batches", mom_batches, "Median-of-means batches")->check(CLI::PositiveNumber);
  estimate->add_option("--out", estimate_out, "Output directory (stdout when omitted)");

  auto* audit_cmd = app.add_subcommand("audit-scaling", "Parameter sweep with bias and residual fits");
  add_common(audit_cmd, audit, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*dynamics) return run_experiment(dyn, std::nullopt);
    if (*pqs_cmd) return run_experiment(pqs, rlcu::Task::kDynamicsPqs);
    if (*eig) return run_experiment(filt, rlcu::Task::kEigenfilter);
    if (*validate) return run_validate(val, gate);
    if (*estimate) return run_estimate(snapshot_path, observables, mom_batches, estimate_out);
    if (*audit_cmd) return run_audit(audit);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
