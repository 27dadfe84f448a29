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

#include <gtest/gtest.h>

#include <json.hpp>

#include "rlcu/experiments.hpp"
#include "rlcu/stats.hpp"
#include "test_util.hpp"

namespace rlcu {
namespace {

using nlohmann::json;

const ResultRecord& record(const RunOutput& out, const std::string& label) {
  for (const auto& r : out.records)
    if (r.label == label) return r;
  throw Error("no record " + label);
}

ExperimentConfig xz_dynamics(std::size_t shots) {
  ExperimentConfig cfg = parse_config(R"({"task": "dynamics", "hamiltonian_text": "1.0 X\n1.0 Z",
                                          "observables": ["Z", "X"], "time": 1.0, "bounded_mu": 2.0})");
  cfg.shots = shots;
  return cfg;
}

ExperimentConfig z_filter(double omega, int level, double tau) {
  ExperimentConfig cfg = parse_config(R"({"task": "eigenfilter", "hamiltonian_text": "1.0 Z",
                                          "initial_state": "plus-all", "observables": ["Z", "X"]})");
  cfg.omega = omega;
  cfg.target_level = level;
  cfg.tau = tau;
  cfg.shots = 40000;
  cfg.seed = 21;
  return cfg;
}

TEST(PlanDynamics, BoundedModeRespectsCap) {
  const ExperimentConfig cfg = xz_dynamics(10);
  const DynamicsPlan plan = plan_dynamics(cfg);
  EXPECT_LE(plan.mu_T, 2.0);
  EXPECT_NEAR(plan.dt * plan.nu, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(plan.mu_T, composite_from_segments(plan.formula, plan.nu).mu_T());
  const RunOutput out = run_task(cfg);
  EXPECT_EQ(out.mu_T, plan.mu_T);
  EXPECT_EQ(out.nu, plan.nu);
}

TEST(PlanDynamics, SegmentsAndDt) {
  ExperimentConfig cfg = xz_dynamics(10);
  cfg.segments = 5;
  EXPECT_EQ(plan_dynamics(cfg).nu, 5);
  cfg.segments.reset();
  cfg.dt = 0.25;
  EXPECT_EQ(plan_dynamics(cfg).nu, 4);
  cfg.dt = 0.3;
  EXPECT_THROW(plan_dynamics(cfg), ConfigError);
}

TEST(Dynamics, CommutingHamiltonianNeedsNoCompensation) {
  ExperimentConfig cfg = parse_config(R"({"task": "dynamics", "hamiltonian_text": "0.3 ZI\n0.5 IZ",
      "initial_state": "plus-all", "observables": ["ZI", "XI"], "time": 1.0, "segments": 2, "shots": 20000})");
  const DynamicsPlan plan = plan_dynamics(cfg);
  EXPECT_NEAR(plan.mu_T, 1.0, 1e-12);
  EXPECT_EQ(plan.formula.terms().size(), 1U);
  const RunOutput out = run_task(cfg);
  const ResultRecord& x = record(out, "XI");
  ASSERT_TRUE(x.exact.has_value());
  EXPECT_NEAR(*x.exact, std::cos(0.6), 1e-12);
  EXPECT_NEAR(*x.pipeline_exact, *x.exact, 1e-12);
  EXPECT_LE(z_score(x.estimate, *x.exact, x.std_error), 3.0);
  const ResultRecord& z = record(out, "ZI");
  EXPECT_LE(z_score(z.estimate, *z.exact, z.std_error), 3.0);
}

TEST(Dynamics, CompensatedTrotterIsUnbiasedForEveryVariant) {
  for (const Variant v : {Variant::kInstrument, Variant::kAlwaysOn, Variant::kCommonUnitary}) {
    ExperimentConfig cfg = xz_dynamics(30000);
    cfg.variant = v;
    cfg.seed = 100 + static_cast<int>(v);
    const RunOutput out = run_task(cfg);
    for (const auto& r : out.records) {
      ASSERT_TRUE(r.exact.has_value());
      EXPECT_NEAR(*r.pipeline_exact, *r.exact, 1e-10) << variant_name(v);
      EXPECT_LE(z_score(r.estimate, *r.exact, r.std_error), 5.0) << variant_name(v) << " " << r.label;
      EXPECT_FALSE(r.imag_flag);
    }
  }
}

TEST(Dynamics, UncompensatedPipelineTracksTrotterValue) {
  ExperimentConfig cfg = xz_dynamics(20000);
  cfg.compensate = false;
  cfg.segments = 4;
  const RunOutput out = run_task(cfg);
  for (const auto& r : out.records) {
    EXPECT_GT(std::abs(*r.pipeline_exact - *r.exact), 1e-3);
    EXPECT_LE(z_score(r.estimate, *r.pipeline_exact, r.std_error), 5.0);
  }
}

TEST(Dynamics, ShotLogAndSnapshots) {
  ExperimentConfig cfg = xz_dynamics(300);
  cfg.shot_log = true;
  const RunOutput out = run_task(cfg);
  EXPECT_EQ(out.shot_log.size(), 300U);
  EXPECT_EQ(out.snapshots.size(), 300U);
  EXPECT_EQ(out.shot_log[0].a.size(), static_cast<std::size_t>(out.nu));
  const ObservableSpec z = ObservableSpec::parse("Z");
  EXPECT_NEAR(estimate_observable(out.snapshots, z).real(), record(out, "Z").estimate, 1e-12);
}

TEST(Dynamics, OutputIsReproducibleAcrossWorkers) {
  ExperimentConfig cfg = xz_dynamics(5000);
  cfg.workers = 1;
  const std::string a = run_output_json(run_task(cfg), false);
  cfg.workers = 3;
  const std::string b = run_output_json(run_task(cfg), false);
  EXPECT_EQ(a, b);
  cfg.seed += 1;
  EXPECT_NE(a, run_output_json(run_task(cfg), false));
  const json j = json::parse(a);
  EXPECT_FALSE(j.contains("wall_seconds"));
  EXPECT_TRUE(json::parse(run_output_json(run_task(cfg), true)).contains("wall_seconds"));
}

TEST(Pqs, ExactReferencesAndEstimates) {
  ExperimentConfig cfg = parse_config(R"({"task": "pqs", "hamiltonian_text": "1.0 ZI\n0.5 IZ\n0.6 XI",
      "interaction_text": "0.2 XX", "observables": ["ZI", "XX"], "time": 0.5, "dt": 0.05, "shots": 30000,
      "seed": 4})");
  const DynamicsPlan plan = plan_dynamics(cfg);
  EXPECT_EQ(plan.nu, 10);
  EXPECT_NEAR(plan.formula.mu(), 1.0 + 0.05 * 0.2, 1e-15);
  EXPECT_NEAR(plan.mu_T, std::pow(1.01, 10), 1e-12);
  const RunOutput out = run_task(cfg);
  for (const auto& r : out.records) {
    EXPECT_LE(z_score(r.estimate, *r.pipeline_exact, r.std_error), 5.0) << r.label;
    EXPECT_LT(std::abs(*r.pipeline_exact - *r.exact), 0.05);
  }
}

TEST(Eigenfilter, SelectsEigenstateByOmega) {
  const RunOutput up = run_task(z_filter(1.0, 1, 3.0));
  EXPECT_NEAR(record(up, "Z").estimate, 1.0, 0.05);
  EXPECT_NEAR(*record(up, "Z").exact, 1.0, 1e-12);
  const RunOutput down = run_task(z_filter(-1.0, 0, 3.0));
  EXPECT_NEAR(record(down, "Z").estimate, -1.0, 0.05);
  ASSERT_TRUE(down.denominator.has_value());
  EXPECT_NEAR(*down.denominator, 0.5, 5.0 * *down.denominator_error);
}

TEST(Eigenfilter, ZeroWidthIsNoFilter) {
  const RunOutput out = run_task(z_filter(1.0, 1, 0.0));
  EXPECT_NEAR(*record(out, "X").pipeline_exact, 1.0, 1e-12);
  EXPECT_LE(z_score(record(out, "X").estimate, 1.0, record(out, "X").std_error), 5.0);
  EXPECT_LE(z_score(record(out, "Z").estimate, 0.0, record(out, "Z").std_error), 5.0);
}

TEST(Eigenfilter, VanishingDenominatorThrows) {
  ExperimentConfig cfg = z_filter(6.0, 1, 3.0);
  cfg.shots = 2000;
  EXPECT_THROW(run_task(cfg), Error);
}

TEST(ScalingAudit, FilterLeakageDecreases) {
  ExperimentConfig cfg = parse_config(R"({"task": "eigenfilter", "hamiltonian_text": "1.0 Z",
      "initial_state": "plus-all", "observables": ["Z"], "shots": 4000,
      "sweep": {"parameter": "tau", "values": [0.5, 1.0, 1.5, 2.0]}})");
  const ScalingTable t = scaling_audit(cfg);
  ASSERT_EQ(t.rows.size(), 4U);
  for (std::size_t k = 1; k < t.rows.size(); ++k) EXPECT_LT(t.rows[k].state_residual, t.rows[k - 1].state_residual);
  EXPECT_LT(t.slope, 0.0);
  const std::string csv = scaling_csv(t);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_EQ(json::parse(scaling_json(t)).at("rows").size(), 4U);
}

TEST(ScalingAudit, TrotterBiasIsFirstOrderAndCompensationRemovesIt) {
  ExperimentConfig cfg = xz_dynamics(20000);
  cfg.sweep_parameter = "dt";
  cfg.sweep_values = {0.0125, 0.025, 0.05, 0.1};
  const ScalingTable t = scaling_audit(cfg);
  EXPECT_NEAR(t.slope, 1.0, 0.3);
  for (const auto& r : t.rows) EXPECT_LE(z_score(r.estimate, r.exact, r.std_error), 3.0) << r.parameter;
  cfg.sweep_values = {0.1, 0.2};
  EXPECT_THROW(scaling_audit(cfg), ConfigError);
}

}  // namespace
}  // namespace rlcu
