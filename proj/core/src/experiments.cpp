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

#include "rlcu/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "rlcu/io.hpp"
#include "rlcu/parallel.hpp"
#include "rlcu/stats.hpp"

namespace rlcu {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string join_indices(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) s += ',';
    s += parts[k];
  }
  return s;
}

int dynamics_qubits(const ExperimentConfig& cfg) {
  return cfg.task == Task::kDynamicsPqs && cfg.hamiltonian.empty() ? cfg.interaction.num_qubits()
                                                                   : cfg.hamiltonian.num_qubits();
}

Hamiltonian full_hamiltonian(const ExperimentConfig& cfg) {
  if (cfg.task != Task::kDynamicsPqs) return cfg.hamiltonian;
  Hamiltonian h(dynamics_qubits(cfg));
  for (const auto& t : cfg.hamiltonian.terms()) h.add_term(t.coefficient, t.word);
  for (const auto& t : cfg.interaction.terms()) h.add_term(t.coefficient, t.word);
  return h;
}

LcuFormula identity_formula(int n) { return LcuFormula(1.0, {{1.0, PhasedUnitary::identity(n), false}}); }

LcuFormula trotter_formula(const ExperimentConfig& cfg, double dt) {
  LcuFormula f = trotter_compensation_formula(cfg.hamiltonian, first_order_grouping(cfg.hamiltonian), dt);
  if (cfg.truncation > 0.0) f = truncate_formula(f, cfg.truncation);
  return f;
}

LcuFormula segment_formula(const ExperimentConfig& cfg, double dt) {
  if (cfg.task == Task::kDynamicsPqs) return pqs_channel_decomposition(cfg.interaction, dt);
  return trotter_formula(cfg, dt);
}

double expectation(const Matrix& rho, const ObservableSpec& o) { return (o.to_matrix() * rho).trace().real(); }

struct ShotOut {
  ShadowSnapshot snap;
  ShotRecord rec;
};

std::vector<ShotOut> collect_dynamics(const ExperimentConfig& cfg, const DynamicsPlan& plan, const StateVector& psi0) {
  const Variant variant = cfg.effective_variant();
  const auto& terms = plan.formula.terms();
  const int n = psi0.num_qubits();
  const PhasedUnitary ident = PhasedUnitary::identity(n);
  const double mu_seg = plan.formula.mu();
  const bool pqs = cfg.task == Task::kDynamicsPqs;
  const std::vector<int> zeros(static_cast<std::size_t>(plan.nu), 0);

  return run_shots(cfg.shots, cfg.seed, cfg.workers, [&](std::size_t, Rng& rng) {
    CircuitInstance inst{psi0, {}};
    inst.segments.reserve(static_cast<std::size_t>(plan.nu));
    std::vector<std::string> id_u;
    std::vector<std::string> id_v;
    double mult = 1.0;
    for (int k = 0; k < plan.nu; ++k) {
      Segment s;
      if (pqs) {
        const std::size_t idx = plan.formula.sample_index(rng);
        const LcuTerm& t = terms[idx];
        if (t.paired) {
          const bool on_u = rng.bit() == 1;
          s.u = on_u ? t.unitary : ident;
          s.v = on_u ? ident : t.unitary;
          mult *= 2.0;
          id_u.push_back(std::to_string(idx) + (on_u ? "u" : "v"));
        } else {
          s.u = t.unitary;
          s.v = t.unitary;
          id_u.push_back(std::to_string(idx));
        }
        s.common = plan.common;
      } else {
        const std::size_t i = plan.formula.sample_index(rng);
        const std::size_t j = cfg.correlated ? i : plan.formula.sample_index(rng);
        id_u.push_back(std::to_string(i));
        id_v.push_back(std::to_string(j));
        if (variant == Variant::kAlwaysOn && plan.common) {
          s.u = terms[i].unitary.compose(*plan.common);
          s.v = terms[j].unitary.compose(*plan.common);
        } else {
          s.u = terms[i].unitary;
          s.v = terms[j].unitary;
          s.common = plan.common;
        }
      }
      inst.segments.push_back(std::move(s));
    }
    const CircuitShot cs = variant == Variant::kInstrument ? run_instrument(inst, zeros, rng) : run_always_on(inst, 0, rng);
    const double weight = estimator_weight_composite(cs.record);
    ShotOut out;
    out.snap = sample_shadow(cs.state, rng);
    out.snap.weight = weight;
    out.snap.norm = pqs ? std::pow(mu_seg, plan.nu) * mult : plan.mu_T * plan.mu_T;
    out.rec.instance_id = pqs ? join_indices(id_u) : "i=" + join_indices(id_u) + ";j=" + join_indices(id_v);
    out.rec.b = cs.record.b;
    out.rec.a = cs.record.a;
    out.rec.weight = weight;
    out.rec.seed = rng.seed();
    return out;
  });
}

void fill_shots(RunOutput& out, std::vector<ShotOut>&& shots, bool keep_log) {
  out.snapshots.reserve(shots.size());
  if (keep_log) out.shot_log.reserve(shots.size());
  for (auto& s : shots) {
    out.snapshots.push_back(std::move(s.snap));
    if (keep_log) out.shot_log.push_back(std::move(s.rec));
  }
}

ResultRecord summarize_observable(const std::vector<ShadowSnapshot>& snaps, const ObservableSpec& o,
                                  std::size_t mom_batches) {
  const std::vector<cplx> vals = snapshot_values(snaps, o);
  const ComplexSummary s = summarize(vals);
  std::vector<double> re;
  re.reserve(vals.size());
  for (const cplx& v : vals) re.push_back(v.real());
  ResultRecord r;
  r.label = o.label();
  r.estimate = s.mean.real();
  r.std_error = s.std_error_re;
  r.imag = s.mean.imag();
  r.imag_error = s.std_error_im;
  r.imag_flag = std::abs(r.imag) > 3.0 * r.imag_error && std::abs(r.imag) > 1e-12;
  r.mom_estimate = median_of_means(re, std::min(mom_batches, re.size()));
  r.shots = snaps.size();
  return r;
}

double spectral_gap(const RealVector& e, int level) {
  double gap = 0.0;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const double d = std::abs(e[k] - e[level]);
    if (d > 1e-9 && (gap == 0.0 || d < gap)) gap = d;
  }
  return gap;
}

}  // namespace

// ---------------------------------------------------------------------------
// Planning and dense references

DynamicsPlan plan_dynamics(const ExperimentConfig& cfg) {
  if (cfg.task != Task::kDynamicsTrotterLcu && cfg.task != Task::kDynamicsPqs) {
    throw ConfigError("plan_dynamics: not a dynamics task");
  }
  check_config(cfg);
  const int n = dynamics_qubits(cfg);
  check_size_cap(n, "plan_dynamics");
  DynamicsPlan plan;
  if (cfg.segments) {
    plan.nu = *cfg.segments;
    plan.dt = cfg.time / plan.nu;
  } else if (cfg.dt) {
    const double ratio = cfg.time / *cfg.dt;
    const long long nu = std::llround(ratio);
    if (nu < 1 || std::abs(ratio - static_cast<double>(nu)) > 1e-9 * std::max(1.0, ratio)) {
      throw ConfigError("config: time " + fmt(cfg.time) + " is not a multiple of dt " + fmt(*cfg.dt));
    }
    plan.nu = static_cast<int>(nu);
    plan.dt = cfg.time / plan.nu;
  } else {
    const auto bounded =
        bounded_composite([&](double dt) { return segment_formula(cfg, dt); }, cfg.time, cfg.bounded_mu);
    plan.nu = bounded.nu;
    plan.dt = bounded.dt;
  }

  if (cfg.task == Task::kDynamicsPqs) {
    plan.formula = pqs_channel_decomposition(cfg.interaction, plan.dt);
    if (!cfg.hamiltonian.empty()) {
      plan.common = PhasedUnitary::dense(HermitianSpectrum(cfg.hamiltonian).evolution(plan.dt));
    }
  } else {
    plan.formula = cfg.compensate ? trotter_formula(cfg, plan.dt) : identity_formula(n);
    plan.common = PhasedUnitary::dense(trotter_step_unitary(first_order_grouping(cfg.hamiltonian), plan.dt));
  }
  plan.mu_T = composite_from_segments(plan.formula, plan.nu).mu_T();
  return plan;
}

FilterPlan plan_eigenfilter(const ExperimentConfig& cfg) {
  if (cfg.task != Task::kEigenfilter) throw ConfigError("plan_eigenfilter: not an eigenfilter task");
  check_config(cfg);
  check_size_cap(cfg.num_qubits(), "plan_eigenfilter");
  FilterPlan plan;
  plan.spectrum = std::make_shared<const HermitianSpectrum>(cfg.hamiltonian);
  const RealVector& e = plan.spectrum->energies();
  plan.gap = spectral_gap(e, cfg.target_level);
  plan.ensemble.omega = cfg.omega ? *cfg.omega : e[cfg.target_level];
  if (cfg.tau) {
    plan.ensemble.tau = *cfg.tau;
  } else if (cfg.tau_over_gap) {
    if (plan.gap == 0.0) throw ConfigError("config: tau_over_gap needs a nondegenerate spectrum");
    plan.ensemble.tau = *cfg.tau_over_gap / plan.gap;
  } else {
    throw ConfigError("config: eigenfilter needs tau or tau_over_gap");
  }
  const Vector target = plan.spectrum->vectors().col(cfg.target_level);
  const double overlap = std::norm(target.dot(initial_state(cfg).amplitudes()));
  if (overlap < 1e-12) throw ConfigError("config: initial state has no overlap with the target eigenstate");
  return plan;
}

DenseReference dense_reference(const ExperimentConfig& cfg) {
  const StateVector psi0 = initial_state(cfg);
  const Matrix rho0 = psi0.density();
  DenseReference ref;
  if (cfg.task == Task::kEigenfilter) {
    const FilterPlan plan = plan_eigenfilter(cfg);
    const Vector target = plan.spectrum->vectors().col(cfg.target_level);
    ref.target = target * target.adjoint();
    const Vector phi = plan.ensemble.filter_operator(*plan.spectrum) * psi0.amplitudes();
    const double norm2 = phi.squaredNorm();
    if (norm2 == 0.0) throw Error("dense_reference: filtered state vanishes");
    ref.pipeline = phi * phi.adjoint() / norm2;
    ref.leakage = std::max(0.0, 1.0 - std::norm(target.dot(phi)) / norm2);
    return ref;
  }
  const DynamicsPlan plan = plan_dynamics(cfg);
  ref.target = exact_evolve(full_hamiltonian(cfg), cfg.time, psi0).density();
  Matrix rho = rho0;
  const Matrix common = plan.common ? plan.common->matrix() : Matrix::Identity(rho.rows(), rho.cols());
  for (int k = 0; k < plan.nu; ++k) {
    rho = common * rho * common.adjoint();
    if (cfg.correlated && plan.formula.kind() == LcuKind::kUnitary) {
      Matrix next = Matrix::Zero(rho.rows(), rho.cols());
      for (const auto& t : plan.formula.terms()) {
        const Matrix u = t.unitary.matrix();
        next += t.prob * u * rho * u.adjoint();
      }
      rho = plan.formula.mu() * plan.formula.mu() * next;
    } else {
      rho = plan.formula.ensemble_action(rho);
    }
  }
  ref.pipeline = rho;
  return ref;
}

// ---------------------------------------------------------------------------
// Drivers

RunOutput run_dynamics(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  const DynamicsPlan plan = plan_dynamics(cfg);
  const StateVector psi0 = initial_state(cfg);
  RunOutput out;
  out.task = cfg.task;
  out.variant = cfg.effective_variant();
  out.seed = cfg.seed;
  out.shots = cfg.shots;
  out.nu = plan.nu;
  out.dt = plan.dt;
  out.mu_T = plan.mu_T;
  out.formula_json = formula_to_json(plan.formula);
  fill_shots(out, collect_dynamics(cfg, plan, psi0), cfg.shot_log);

  const DenseReference ref = dense_reference(cfg);
  for (const auto& o : cfg.observables) {
    ResultRecord r = summarize_observable(out.snapshots, o, cfg.mom_batches);
    r.exact = expectation(ref.target, o);
    r.pipeline_exact = expectation(ref.pipeline, o);
    r.mu_T = plan.mu_T;
    out.records.push_back(std::move(r));
  }
  out.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  for (auto& r : out.records) r.wall_seconds = out.wall_seconds;
  return out;
}

RunOutput run_eigenfilter(const ExperimentConfig& cfg) {
  const auto start = Clock::now();
  const FilterPlan plan = plan_eigenfilter(cfg);
  const StateVector psi0 = initial_state(cfg);
  if (cfg.shots < 2) throw ConfigError("config: eigenfilter needs at least 2 shots");
  RunOutput out;
  out.task = cfg.task;
  out.variant = cfg.effective_variant();
  out.seed = cfg.seed;
  out.shots = cfg.shots;
  out.tau = plan.ensemble.tau;
  out.omega = plan.ensemble.omega;
  out.gap = plan.gap;
  out.formula_json = filter_to_json(plan.ensemble, plan.gap);

  const Variant variant = out.variant;
  auto shots = run_shots(cfg.shots, cfg.seed, cfg.workers, [&](std::size_t, Rng& rng) {
    const double x1 = rng.normal();
    const double x2 = rng.normal();
    CircuitInstance inst{psi0, {}};
    inst.segments.push_back(
        {filter_unitary(plan.ensemble, plan.spectrum, x1), filter_unitary(plan.ensemble, plan.spectrum, x2), {}});
    const CircuitShot cs =
        variant == Variant::kInstrument ? run_instrument(inst, {0}, rng) : run_always_on(inst, 0, rng);
    const double weight = estimator_weight_composite(cs.record);
    ShotOut so;
    so.snap = sample_shadow(cs.state, rng);
    so.snap.weight = weight;
    so.snap.norm = 1.0;
    so.rec.instance_id = "x=" + fmt(x1) + "," + fmt(x2);
    so.rec.b = cs.record.b;
    so.rec.a = cs.record.a;
    so.rec.weight = weight;
    so.rec.seed = rng.seed();
    return so;
  });
  fill_shots(out, std::move(shots), cfg.shot_log);

  std::vector<double> den;
  den.reserve(out.snapshots.size());
  for (const auto& s : out.snapshots) den.push_back((s.norm * s.weight).real());
  const Summary ds = summarize(den);
  out.denominator = ds.mean;
  out.denominator_error = ds.std_error;
  if (std::abs(ds.mean) <= 3.0 * ds.std_error) {
    throw Error("eigenfilter: denominator " + fmt(ds.mean) + " is within 3 standard errors of zero");
  }

  const std::size_t batches = std::clamp<std::size_t>(cfg.mom_batches, 2, out.snapshots.size());
  const double den_mom = median_of_means(den, batches);
  const DenseReference ref = dense_reference(cfg);
  for (const auto& o : cfg.observables) {
    std::vector<double> num;
    num.reserve(out.snapshots.size());
    for (const auto& v : snapshot_values(out.snapshots, o)) num.push_back(v.real());
    const RatioEstimate ratio = jackknife_ratio(num, den, batches);
    ResultRecord r;
    r.label = o.label();
    r.estimate = ratio.ratio;
    r.std_error = ratio.std_error;
    r.mom_estimate = median_of_means(num, batches) / den_mom;
    r.exact = expectation(ref.target, o);
    r.pipeline_exact = expectation(ref.pipeline, o);
    r.shots = out.snapshots.size();
    r.mu_T = 1.0;
    out.records.push_back(std::move(r));
  }
  out.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  for (auto& r : out.records) r.wall_seconds = out.wall_seconds;
  return out;
}

RunOutput run_task(const ExperimentConfig& cfg) {
  switch (cfg.task) {
    case Task::kDynamicsTrotterLcu:
    case Task::kDynamicsPqs:
      return run_dynamics(cfg);
    case Task::kEigenfilter:
      return run_eigenfilter(cfg);
    case Task::kValidate:
      break;
  }
  throw ConfigError("run_task: validate is not a sampling task");
}

std::string run_output_json(const RunOutput& out, bool include_timing) {
  json j;
  j["task"] = task_name(out.task);
  j["variant"] = variant_name(out.variant);
  j["seed"] = out.seed;
  j["shots"] = out.shots;
  if (out.task == Task::kEigenfilter) {
    j["tau"] = out.tau;
    j["omega"] = out.omega;
    j["gap"] = out.gap;
    j["denominator"] = out.denominator.value_or(0.0);
    j["denominator_error"] = out.denominator_error.value_or(0.0);
  } else {
    j["nu"] = out.nu;
    j["dt"] = out.dt;
  }
  j["mu_T"] = out.mu_T;
  json records = json::array();
  for (const auto& r : out.records) {
    json jr;
    jr["label"] = r.label;
    jr["estimate"] = r.estimate;
    jr["std_error"] = r.std_error;
    jr["imag"] = r.imag;
    jr["imag_error"] = r.imag_error;
    jr["imag_flag"] = r.imag_flag;
    jr["mom_estimate"] = r.mom_estimate;
    jr["exact"] = r.exact ? json(*r.exact) : json(nullptr);
    jr["pipeline_exact"] = r.pipeline_exact ? json(*r.pipeline_exact) : json(nullptr);
    jr["shots"] = r.shots;
    jr["mu_T"] = r.mu_T;
    if (include_timing) jr["wall_seconds"] = r.wall_seconds;
    records.push_back(std::move(jr));
  }
  j["records"] = std::move(records);
  if (include_timing) j["wall_seconds"] = out.wall_seconds;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Scaling audit

ScalingTable scaling_audit(const ExperimentConfig& cfg) {
  if (cfg.sweep_values.size() < 3) throw ConfigError("scaling_audit: at least 3 sweep points are required");
  if (cfg.task == Task::kValidate) throw ConfigError("scaling_audit: validate cannot be swept");
  const bool filter = cfg.task == Task::kEigenfilter;
  const std::string& param = cfg.sweep_parameter;
  if (filter ? (param != "tau" && param != "tau_over_gap") : param != "dt") {
    throw ConfigError("scaling_audit: cannot sweep '" + param + "' for task " + task_name(cfg.task));
  }

  ScalingTable table;
  table.parameter = param;
  std::vector<double> fx;
  std::vector<double> fy;
  for (double value : cfg.sweep_values) {
    ExperimentConfig c = cfg;
    c.sweep_parameter.clear();
    c.sweep_values.clear();
    if (param == "tau") {
      c.tau = value;
      c.tau_over_gap.reset();
    } else if (param == "tau_over_gap") {
      c.tau_over_gap = value;
      c.tau.reset();
    } else {
      c.dt = value;
      c.segments.reset();
    }
    const RunOutput run = run_task(c);
    const DenseReference ref = dense_reference(c);

    double dense_res = 0.0;
    std::vector<double> trotter_res(c.observables.size(), 0.0);
    if (c.task == Task::kDynamicsTrotterLcu) {
      ExperimentConfig plain = c;
      plain.compensate = false;
      const DenseReference pref = dense_reference(plain);
      for (std::size_t k = 0; k < c.observables.size(); ++k) {
        trotter_res[k] = std::abs(expectation(pref.pipeline, c.observables[k]) - expectation(pref.target, c.observables[k]));
      }
    }
    for (std::size_t k = 0; k < run.records.size(); ++k) {
      const ResultRecord& r = run.records[k];
      ScalingRow row;
      row.parameter = value;
      row.observable = r.label;
      row.estimate = r.estimate;
      row.std_error = r.std_error;
      row.exact = r.exact.value_or(0.0);
      row.bias = r.estimate - row.exact;
      row.dense_residual = c.task == Task::kDynamicsTrotterLcu ? trotter_res[k]
                                                               : std::abs(r.pipeline_exact.value_or(0.0) - row.exact);
      row.state_residual = ref.leakage;
      dense_res = std::max(dense_res, row.dense_residual);
      table.rows.push_back(std::move(row));
    }
    if (filter) {
      if (ref.leakage > 0.0) {
        const double t = value * (param == "tau_over_gap" ? 1.0 : run.gap);
        fx.push_back(t * t);
        fy.push_back(std::log(ref.leakage));
      }
    } else if (dense_res > 0.0) {
      fx.push_back(std::log(run.dt));
      fy.push_back(std::log(dense_res));
    }
  }
  table.fit = filter ? "log(state_residual) vs tau^2 gap^2" : "log(dense_residual) vs log(dt)";
  table.slope = fx.size() >= 2 ? fit_slope(fx, fy) : 0.0;
  return table;
}

std::string scaling_csv(const ScalingTable& t) {
  std::ostringstream ss;
  ss << "parameter,observable,estimate,std_error,exact,bias,dense_residual,state_residual\n";
  for (const auto& r : t.rows) {
    ss << fmt(r.parameter) << ',' << '"' << r.observable << '"' << ',' << fmt(r.estimate) << ',' << fmt(r.std_error)
       << ',' << fmt(r.exact) << ',' << fmt(r.bias) << ',' << fmt(r.dense_residual) << ',' << fmt(r.state_residual)
       << '\n';
  }
  return ss.str();
}

std::string scaling_json(const ScalingTable& t) {
  json j;
  j["parameter"] = t.parameter;
  j["fit"] = t.fit;
  j["slope"] = t.slope;
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"parameter", r.parameter},
                    {"observable", r.observable},
                    {"estimate", r.estimate},
                    {"std_error", r.std_error},
                    {"exact", r.exact},
                    {"bias", r.bias},
                    {"dense_residual", r.dense_residual},
                    {"state_residual", r.state_residual}});
  }
  j["rows"] = std::move(rows);
  return j.dump(2);
}

}  // namespace rlcu
