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

#include "rlcu/validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "rlcu/lcu.hpp"
#include "rlcu/parallel.hpp"
#include "rlcu/shadows.hpp"
#include "rlcu/stats.hpp"

namespace rlcu {

namespace {

using nlohmann::json;

ValidationCheck exact_check(std::string name, double deviation, double threshold) {
  return {std::move(name), "exact", deviation, threshold, deviation <= threshold};
}

ValidationCheck statistical_check(std::string name, double max_z, double threshold = 5.0) {
  return {std::move(name), "statistical", max_z, threshold, max_z <= threshold};
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::vector<Segment> random_pauli_segments(int n, int nu, Rng& rng) {
  std::vector<Segment> segs;
  for (int k = 0; k < nu; ++k) {
    segs.push_back({PhasedUnitary::pauli(random_pauli(n, rng)), PhasedUnitary::pauli(random_pauli(n, rng)), {}});
  }
  return segs;
}

Matrix random_hermitian(int n, Rng& rng) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = cplx(rng.normal(), rng.normal());
  return (m + m.adjoint()) / (2.0 * static_cast<double>(dim));
}

// exp(-i theta (XX + ZI) / sqrt 2) as an exact Pauli LCU.
LcuFormula composite_target_formula(double theta) {
  Hamiltonian h(2);
  h.add_term(1.0 / std::numbers::sqrt2, PauliString::parse("XX"));
  h.add_term(1.0 / std::numbers::sqrt2, PauliString::parse("ZI"));
  return lcu_from_pauli_terms(pauli_decompose(HermitianSpectrum(h).evolution(theta)));
}

// Max |z| of the entrywise mean of weighted dense matrices against a target.
double entry_max_z(const std::vector<Matrix>& samples, const Matrix& target) {
  double worst = 0.0;
  std::vector<double> re(samples.size());
  std::vector<double> im(samples.size());
  for (Eigen::Index i = 0; i < target.rows(); ++i) {
    for (Eigen::Index j = 0; j < target.cols(); ++j) {
      for (std::size_t s = 0; s < samples.size(); ++s) {
        re[s] = samples[s](i, j).real();
        im[s] = samples[s](i, j).imag();
      }
      const Summary r = summarize(re);
      const Summary m = summarize(im);
      worst = std::max(worst, z_score(r.mean, target(i, j).real(), r.std_error));
      worst = std::max(worst, z_score(m.mean, target(i, j).imag(), m.std_error));
    }
  }
  return worst;
}

std::vector<PauliString> nontrivial_paulis(int n) {
  std::vector<PauliString> out;
  const std::uint64_t count = std::uint64_t{1} << (2 * n);
  for (std::uint64_t code = 1; code < count; ++code) {
    std::vector<Pauli> letters;
    for (int q = n - 1; q >= 0; --q) letters.push_back(static_cast<Pauli>((code >> (2 * q)) & 3U));
    out.emplace_back(std::move(letters), 0);
  }
  return out;
}

}  // namespace

bool ValidationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.pass; });
}

ValidationReport validate(const ValidateOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const PhaseGate gate = opts.gate;
  ValidationReport report;
  report.seed = opts.seed;
  report.shots = opts.shots;
  std::uint64_t stream = 0;
  auto fixture = [&]() { return Rng::stream(opts.seed, stream++); };

  {
    Rng rng = fixture();
    double dev = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + trial % 3;
      const Matrix u = random_unitary(n, rng);
      const Matrix v = random_unitary(n, rng);
      const DensityMatrix rho = random_density(n, rng);
      for (int b = 0; b < 2; ++b) {
        const double total = outcome_probability(u, v, rho, b, 0, gate) + outcome_probability(u, v, rho, b, 1, gate);
        dev = std::max(dev, std::abs(total - 1.0));
      }
    }
    report.checks.push_back(exact_check("kraus_completeness", dev, 1e-12));
  }

  {
    Rng rng = fixture();
    double dev = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 1 + trial % 3;
      const Matrix u = random_unitary(n, rng);
      const Matrix v = random_unitary(n, rng);
      const DensityMatrix rho = random_density(n, rng);
      for (int b = 0; b < 2; ++b)
        for (int a = 0; a < 2; ++a)
          dev = std::max(dev, std::abs(outcome_probability(u, v, rho, b, a, gate) -
                                       outcome_probability_closed_form(u, v, rho, b, a)));
    }
    report.checks.push_back(exact_check("outcome_probability_closed_form", dev, 1e-12));
  }

  {
    Rng rng = fixture();
    double dev = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 1 + trial % 3;
      const PauliString u = random_pauli(n, rng);
      const PauliString v = random_pauli(n, rng);
      const StateVector psi = random_state(n, rng);
      for (int b = 0; b < 2; ++b) {
        BranchPair bp = apply_pauli_branch(BranchPair(psi), u, v);
        bp.apply_ancilla_phase(ancilla_phase(gate, b));
        const Vector joint = bp.reconstruct();
        const Eigen::Index dim = psi.amplitudes().size();
        Vector after(2 * dim);
        after.head(dim) = (joint.head(dim) + joint.tail(dim)) / std::numbers::sqrt2;
        after.tail(dim) = (joint.head(dim) - joint.tail(dim)) / std::numbers::sqrt2;

        const Vector up = pauli_to_matrix(u) * psi.amplitudes();
        const Vector vp = pauli_to_matrix(v) * psi.amplitudes();
        const cplx red = i_pow(-b);
        Vector expected(2 * dim);
        expected.head(dim) = 0.5 * (vp + red * up);
        expected.tail(dim) = 0.5 * (vp - red * up);
        dev = std::max(dev, (after - expected).cwiseAbs().maxCoeff());
      }
    }
    report.checks.push_back(exact_check("output_state_four_blocks", dev, 1e-10));
  }

  {
    Rng rng = fixture();
    double dev = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 1 + trial % 3;
      const int nu = 1 + (trial / 3) % 3;
      CircuitInstance inst{random_state(n, rng), random_pauli_segments(n, nu, rng)};
      const DensityMatrix rho(inst.psi0.density());
      const Matrix oracle = exact_unphysical(inst.u_chain(), inst.v_chain(), rho).entries();
      dev = std::max(dev, max_abs(enumerate_single_estimator(inst, gate) - oracle));
      dev = std::max(dev, max_abs(enumerate_summed_estimator(inst, gate) - oracle));
    }
    report.checks.push_back(exact_check("single_estimator_exact", dev, 1e-10));
  }

  {
    Rng rng = fixture();
    double dev = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 1 + trial % 2;
      const int nu = 1 + trial % 3;
      CircuitInstance inst{random_state(n, rng), random_pauli_segments(n, nu, rng)};
      std::vector<std::pair<Matrix, Matrix>> pairs;
      for (const auto& s : inst.segments) pairs.emplace_back(s.u.matrix(), s.v.matrix());
      const Matrix oracle = symmetrised_oracle(DensityMatrix(inst.psi0.density()), pairs);
      const std::vector<int> zeros(static_cast<std::size_t>(nu), 0);
      dev = std::max(dev, max_abs(enumerate_instrument_estimator(inst, zeros, gate) - oracle));
    }
    report.checks.push_back(exact_check("symmetrised_instrument", dev, 1e-10));
  }

  {
    Rng rng = fixture();
    double dev = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 1 + trial % 3;
      const Matrix u = pauli_to_matrix(random_pauli(n, rng));
      const Matrix v = pauli_to_matrix(random_pauli(n, rng));
      const DensityMatrix rho = random_density(n, rng);
      const Matrix oracle = 0.5 * (u * rho.entries() * v.adjoint() - v * rho.entries() * u.adjoint());
      dev = std::max(dev, max_abs(antisymmetrised_check(rho, u, v, gate) - oracle));

      const StateVector psi = random_state(n, rng);
      CircuitInstance inst{psi, {{PhasedUnitary::dense(u), PhasedUnitary::dense(v), {}}}};
      const Matrix r = psi.density();
      const Matrix pure_oracle = 0.5 * (u * r * v.adjoint() - v * r * u.adjoint());
      dev = std::max(dev, max_abs(enumerate_instrument_estimator(inst, {1}, gate) - pure_oracle));
    }
    report.checks.push_back(exact_check("antisymmetrised_b1", dev, 1e-10));
  }

  {
    Rng rng = fixture();
    const double theta = 0.3;
    const LcuFormula f = composite_target_formula(theta);
    const CompositeLcu comp = composite_from_segments(f, 2);
    const StateVector psi = random_state(2, rng);
    const Matrix target_u = f.reconstruct() * f.reconstruct();
    const Matrix oracle = target_u * psi.density() * target_u.adjoint();
    Matrix acc = Matrix::Zero(4, 4);
    const auto& terms = f.terms();
    for (std::size_t i1 = 0; i1 < terms.size(); ++i1)
      for (std::size_t i2 = 0; i2 < terms.size(); ++i2)
        for (std::size_t j1 = 0; j1 < terms.size(); ++j1)
          for (std::size_t j2 = 0; j2 < terms.size(); ++j2) {
            CircuitInstance inst{psi,
                                 {{terms[i1].unitary, terms[j1].unitary, {}}, {terms[i2].unitary, terms[j2].unitary, {}}}};
            const double p = terms[i1].prob * terms[i2].prob * terms[j1].prob * terms[j2].prob;
            acc += p * enumerate_instrument_estimator(inst, {0, 0}, gate);
          }
    acc *= comp.mu_T() * comp.mu_T();
    report.checks.push_back(exact_check("composite_instrument_exact", max_abs(acc - oracle), 1e-10));
  }

  {
    Rng rng = fixture();
    double dev = 0.0;
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 1 + trial % 3;
      const Matrix common = random_unitary(n, rng);
      CircuitInstance controlled{random_state(n, rng), random_pauli_segments(n, 2, rng)};
      CircuitInstance folded = controlled;
      for (std::size_t k = 0; k < controlled.segments.size(); ++k) {
        controlled.segments[k].common = PhasedUnitary::dense(common);
        folded.segments[k].u = PhasedUnitary::dense(controlled.segments[k].u.matrix() * common);
        folded.segments[k].v = PhasedUnitary::dense(controlled.segments[k].v.matrix() * common);
      }
      for (int b = 0; b < 2; ++b) {
        const auto x = enumerate_always_on(controlled, b, gate);
        const auto y = enumerate_always_on(folded, b, gate);
        if (x.size() != y.size()) {
          dev = std::max(dev, 1.0);
          continue;
        }
        for (std::size_t k = 0; k < x.size(); ++k) {
          dev = std::max(dev, std::abs(x[k].probability - y[k].probability));
          dev = std::max(dev, (x[k].state.amplitudes() - y[k].state.amplitudes()).cwiseAbs().maxCoeff());
        }
      }
    }
    report.checks.push_back(exact_check("common_unitary_folding", dev, 1e-12));
  }

  {
    Rng rng = fixture();
    double dev = 0.0;
    double inv = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 1 + trial % 3;
      const Matrix o = random_hermitian(n, rng);
      const Matrix rho = random_density(n, rng).entries();
      const cplx lhs = (inverse_shadow_channel(o) * rho).trace();
      const cplx rhs = (inverse_shadow_channel(rho) * o).trace();
      dev = std::max(dev, std::abs(lhs - rhs));
      inv = std::max(inv, max_abs(inverse_shadow_channel(shadow_channel(o)) - o));
    }
    report.checks.push_back(exact_check("shadow_self_duality", dev, 1e-12));
    report.checks.push_back(exact_check("shadow_channel_inverse", inv, 1e-12));
  }

  {
    Rng rng = fixture();
    double dev = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
      const int n = 1 + trial % 3;
      const StateVector psi = random_state(n, rng);
      const Eigen::Index dim = Eigen::Index{1} << n;
      Matrix acc = Matrix::Zero(dim, dim);
      std::size_t bases = 1;
      for (int q = 0; q < n; ++q) bases *= 3;
      for (std::size_t r = 0; r < bases; ++r) {
        ShadowSnapshot snap;
        std::size_t code = r;
        snap.basis.assign(static_cast<std::size_t>(n), 'Z');
        for (int q = n - 1; q >= 0; --q) {
          snap.basis[static_cast<std::size_t>(q)] = "XYZ"[code % 3];
          code /= 3;
        }
        const Vector rotated = basis_rotation(snap.basis) * psi.amplitudes();
        for (Eigen::Index z = 0; z < dim; ++z) {
          snap.z = index_to_bitstring(static_cast<std::uint64_t>(z), n);
          acc += (std::norm(rotated[z]) / static_cast<double>(bases)) * snapshot_matrix(snap);
        }
      }
      dev = std::max(dev, max_abs(acc - psi.density()));
    }
    report.checks.push_back(exact_check("snapshot_unbiasedness", dev, 1e-12));
  }

  {
    Rng rng = fixture();
    double dev = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + trial % 3;
      ShadowSnapshot snap;
      for (int q = 0; q < n; ++q) {
        snap.basis.push_back("XYZ"[rng.below(3)]);
        snap.z.push_back(rng.bit() ? '1' : '0');
      }
      std::vector<ObservableSpec::Term> terms;
      for (int k = 0; k < 3; ++k) terms.push_back({rng.normal(), random_pauli(n, rng, false)});
      const ObservableSpec o(terms);
      const double dense = (o.to_matrix() * snapshot_matrix(snap)).trace().real();
      dev = std::max(dev, std::abs(dense - snapshot_trace(snap, o)));
    }
    report.checks.push_back(exact_check("snapshot_trace_factorization", dev, 1e-12));
  }

  {
    Rng rng = fixture();
    const int n = 2;
    CircuitInstance inst{random_state(n, rng), random_pauli_segments(n, 1, rng)};
    const Matrix oracle =
        exact_unphysical(inst.u_chain(), inst.v_chain(), DensityMatrix(inst.psi0.density())).entries();
    const auto snaps = run_shots(opts.shots, derive_seed(opts.seed, stream++), opts.workers,
                                 [&](std::size_t, Rng& r) {
                                   const int b = r.bit();
                                   const CircuitShot cs = run_always_on(inst, b, r, gate);
                                   ShadowSnapshot s = sample_shadow(cs.state, r);
                                   s.weight = estimator_weight_single(cs.record);
                                   return s;
                                 });
    std::vector<Matrix> samples;
    samples.reserve(snaps.size());
    for (const auto& s : snaps) samples.push_back(s.norm * s.weight * snapshot_matrix(s));
    double worst = entry_max_z(samples, oracle);
    double audit_ratio = 0.0;
    for (const auto& p : nontrivial_paulis(n)) {
      const ObservableSpec o = ObservableSpec::single(p);
      const ComplexSummary cs = summarize(snapshot_values(snaps, o));
      const cplx exact = (o.to_matrix() * oracle).trace();
      worst = std::max(worst, z_score(cs.mean.real(), exact.real(), cs.std_error_re));
      worst = std::max(worst, z_score(cs.mean.imag(), exact.imag(), cs.std_error_im));
      if (snaps.size() >= 1000) {
        const VarianceAudit a = variance_audit(snaps, o);
        audit_ratio = std::max(audit_ratio, a.variance / (a.bound + a.allowance));
      }
    }
    report.checks.push_back(statistical_check("single_estimator_sampled", worst));
    if (snaps.size() >= 1000) {
      report.checks.push_back({"variance_bound", "bound", audit_ratio, 1.0, audit_ratio <= 1.0});
    }

    const auto fixed = run_shots(opts.shots, derive_seed(opts.seed, stream++), opts.workers,
                                 [&](std::size_t, Rng& r) {
                                   const CircuitShot cs = run_always_on(inst, 0, r, gate);
                                   ShadowSnapshot s = sample_shadow(cs.state, r);
                                   s.weight = estimator_weight_fixed(cs.record);
                                   return s;
                                 });
    auto variance = [](const std::vector<cplx>& v) {
      const ComplexSummary c = summarize(v);
      const double n_samples = static_cast<double>(c.count);
      return n_samples * (c.std_error_re * c.std_error_re + c.std_error_im * c.std_error_im);
    };
    double var_random = 0.0;
    double var_fixed = 0.0;
    for (const auto& p : nontrivial_paulis(n)) {
      const ObservableSpec o = ObservableSpec::single(p);
      var_random += variance(snapshot_values(snaps, o));
      var_fixed += variance(snapshot_values(fixed, o));
    }
    report.diagnostics.push_back({"variance_ratio_random_b", var_fixed > 0.0 ? var_random / var_fixed : 0.0});
  }

  {
    Rng rng = fixture();
    const double theta = 0.3;
    const LcuFormula f = composite_target_formula(theta);
    const CompositeLcu comp = composite_from_segments(f, 2);
    const StateVector psi = random_state(2, rng);
    const Matrix target_u = f.reconstruct() * f.reconstruct();
    const Matrix oracle = target_u * psi.density() * target_u.adjoint();
    const double norm = comp.mu_T() * comp.mu_T();
    const auto snaps = run_shots(opts.shots, derive_seed(opts.seed, stream++), opts.workers,
                                 [&](std::size_t, Rng& r) {
                                   const auto iu = comp.sample_indices(r);
                                   const auto jv = comp.sample_indices(r);
                                   CircuitInstance inst{psi, {}};
                                   for (int k = 0; k < comp.nu(); ++k) {
                                     const auto& terms = comp.segment(k).terms();
                                     inst.segments.push_back({terms[iu[static_cast<std::size_t>(k)]].unitary,
                                                              terms[jv[static_cast<std::size_t>(k)]].unitary,
                                                              {}});
                                   }
                                   const CircuitShot cs = run_instrument(inst, {0, 0}, r, gate);
                                   ShadowSnapshot s = sample_shadow(cs.state, r);
                                   s.weight = estimator_weight_composite(cs.record);
                                   s.norm = norm;
                                   return s;
                                 });
    std::vector<Matrix> samples;
    samples.reserve(snaps.size());
    for (const auto& s : snaps) samples.push_back(s.norm * s.weight * snapshot_matrix(s));
    report.checks.push_back(statistical_check("composite_shadow_sampled", entry_max_z(samples, oracle)));
  }

  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string validation_report_json(const ValidationReport& r, bool include_timing) {
  json j;
  j["seed"] = r.seed;
  j["shots"] = r.shots;
  j["pass"] = r.pass();
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"kind", c.kind},
                      {"deviation", c.deviation},
                      {"threshold", c.threshold},
                      {"pass", c.pass}});
  }
  j["checks"] = std::move(checks);
  json diagnostics = json::array();
  for (const auto& d : r.diagnostics) diagnostics.push_back({{"name", d.name}, {"value", d.value}});
  j["diagnostics"] = std::move(diagnostics);
  if (include_timing) j["wall_seconds"] = r.wall_seconds;
  return j.dump(2);
}

}  // namespace rlcu
