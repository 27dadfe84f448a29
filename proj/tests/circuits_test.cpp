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

#include <map>
#include <numbers>

#include "rlcu/circuits.hpp"
#include "rlcu/lcu.hpp"
#include "rlcu/stats.hpp"
#include "test_util.hpp"

namespace rlcu {
namespace {

using testing::max_abs;

const Matrix kX = testing::pauli_x();
const Matrix kZ = testing::pauli_z();
const Matrix kI2 = testing::eye(2);

PhasedUnitary pu(const char* word) { return PhasedUnitary::pauli(PauliString::parse(word)); }

DensityMatrix ket0() { return DensityMatrix::from_state(StateVector::basis(1, 0)); }

CircuitInstance random_instance(int n, int nu, Rng& rng) {
  CircuitInstance inst{random_state(n, rng), {}};
  for (int k = 0; k < nu; ++k) {
    inst.segments.push_back({PhasedUnitary::pauli(random_pauli(n, rng)), PhasedUnitary::pauli(random_pauli(n, rng)), {}});
  }
  return inst;
}

TEST(KrausOperator, Examples) {
  EXPECT_LT(max_abs(kraus_operator(pu("I"), pu("I"), 0, 0) - kI2), 1e-15);
  EXPECT_LT(max_abs(kraus_operator(pu("X"), pu("I"), 0, 0) - 0.5 * (kX + kI2)), 1e-15);
  EXPECT_LT(max_abs(kraus_operator(pu("X"), pu("I"), 1, 1) - 0.5 * (cplx(0, 1) * kX + kI2)), 1e-15);
}

TEST(KrausOperator, MatchesBranchPairProjection) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector s = random_state(2, rng);
    const Matrix u = random_unitary(2, rng);
    const Matrix v = random_unitary(2, rng);
    for (int b = 0; b < 2; ++b) {
      BranchPair bp = apply_controlled_pair(BranchPair(s), PhasedUnitary::dense(u), PhasedUnitary::dense(v));
      bp.apply_ancilla_phase(ancilla_phase(PhaseGate::kSDagger, b));
      for (int a = 0; a < 2; ++a) {
        EXPECT_LT(max_abs(bp.project_x(a) - kraus_operator(u, v, a, b) * s.amplitudes()), 1e-12);
      }
    }
  }
}

TEST(KrausOperator, Completeness) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix u = random_unitary(2, rng);
    const Matrix v = random_unitary(2, rng);
    for (int b = 0; b < 2; ++b) {
      const Matrix k0 = kraus_operator(u, v, 0, b);
      const Matrix k1 = kraus_operator(u, v, 1, b);
      EXPECT_LT(max_abs(k0.adjoint() * k0 + k1.adjoint() * k1 - testing::eye(4)), 1e-12);
    }
  }
}

TEST(AncillaPhase, Conventions) {
  EXPECT_EQ(ancilla_phase(PhaseGate::kSDagger, 0), cplx(1, 0));
  EXPECT_EQ(ancilla_phase(PhaseGate::kSDagger, 1), cplx(0, -1));
  EXPECT_EQ(ancilla_phase(PhaseGate::kS, 1), cplx(0, 1));
}

TEST(OutcomeProbability, Examples) {
  Rng rng(3);
  const Matrix u = random_unitary(1, rng);
  const DensityMatrix rho = random_density(1, rng);
  EXPECT_NEAR(outcome_probability(u, u, rho, 0, 0), 1.0, 1e-12);
  EXPECT_NEAR(outcome_probability(u, u, rho, 0, 1), 0.0, 1e-12);
  EXPECT_NEAR(outcome_probability(kX, kI2, ket0(), 0, 0), 0.5, 1e-15);
  EXPECT_NEAR(outcome_probability(cplx(0, 1) * kI2, kI2, ket0(), 1, 0), 1.0, 1e-15);
  EXPECT_NEAR(outcome_probability_closed_form(cplx(0, 1) * kI2, kI2, ket0(), 1, 0), 1.0, 1e-15);
}

TEST(OutcomeProbability, ClosedFormOnRandomTriples) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const Matrix u = random_unitary(n, rng);
    const Matrix v = random_unitary(n, rng);
    const DensityMatrix rho = random_density(n, rng);
    for (int b = 0; b < 2; ++b)
      for (int a = 0; a < 2; ++a)
        EXPECT_NEAR(outcome_probability(u, v, rho, b, a), outcome_probability_closed_form(u, v, rho, b, a), 1e-12);
  }
}

TEST(OutcomeProbability, FlippedPhaseGateBreaksImaginaryPattern) {
  Rng rng(5);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix u = random_unitary(1, rng);
    const Matrix v = random_unitary(1, rng);
    const DensityMatrix rho = random_density(1, rng);
    worst = std::max(worst, std::abs(outcome_probability(u, v, rho, 1, 0, PhaseGate::kS) -
                                     outcome_probability_closed_form(u, v, rho, 1, 0)));
    EXPECT_NEAR(outcome_probability(u, v, rho, 0, 0, PhaseGate::kS), outcome_probability_closed_form(u, v, rho, 0, 0),
                1e-12);
  }
  EXPECT_GT(worst, 1e-3);
}

TEST(RunAlwaysOn, IdentitySegments) {
  Rng rng(6);
  const StateVector psi = random_state(2, rng);
  const CircuitInstance inst{psi, {{pu("II"), pu("II"), {}}, {pu("II"), pu("II"), {}}}};
  for (int k = 0; k < 20; ++k) {
    const CircuitShot shot = run_always_on(inst, 0, rng);
    EXPECT_EQ(shot.record.a, std::vector<int>{0});
    EXPECT_NEAR(shot.record.probabilities[0], 1.0, 1e-12);
    EXPECT_LT(max_abs(shot.state.amplitudes() - psi.amplitudes()), 1e-12);
  }
}

TEST(RunAlwaysOn, PostMeasurementStateIsPlus) {
  const CircuitInstance inst{StateVector::basis(1, 0), {{pu("X"), pu("I"), {}}}};
  Rng rng(7);
  bool seen = false;
  for (int k = 0; k < 50 && !seen; ++k) {
    const CircuitShot shot = run_always_on(inst, 0, rng);
    if (shot.record.a[0] != 0) continue;
    seen = true;
    const double r = 1.0 / std::numbers::sqrt2;
    EXPECT_NEAR(std::abs(shot.state.amplitudes()[0] - r), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(shot.state.amplitudes()[1] - r), 0.0, 1e-12);
  }
  EXPECT_TRUE(seen);
}

TEST(RunAlwaysOn, HadamardTestStatistics) {
  Rng rng(8);
  const Matrix u = random_unitary(1, rng);
  const StateVector psi = random_state(1, rng);
  const CircuitInstance inst{psi, {{PhasedUnitary::dense(u), pu("I"), {}}}};
  const double exact = (u * psi.density()).trace().real();
  std::vector<double> signs;
  for (int k = 0; k < 100000; ++k) signs.push_back(run_always_on(inst, 0, rng).record.a[0] == 0 ? 1.0 : -1.0);
  const Summary s = summarize(signs);
  EXPECT_LE(z_score(s.mean, exact, s.std_error), 3.0);
}

TEST(RunInstrument, IdentitySegments) {
  Rng rng(9);
  const StateVector psi = random_state(1, rng);
  const CircuitInstance inst{psi, {{pu("I"), pu("I"), {}}, {pu("I"), pu("I"), {}}, {pu("I"), pu("I"), {}}}};
  const CircuitShot shot = run_instrument(inst, {0, 0, 0}, rng);
  EXPECT_EQ(shot.record.a, (std::vector<int>{0, 0, 0}));
  EXPECT_LT(max_abs(shot.state.amplitudes() - psi.amplitudes()), 1e-12);
  EXPECT_THROW(run_instrument(inst, {0, 0}, rng), DimensionError);
}

TEST(RunInstrument, SingleSegmentReducesToAlwaysOn) {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const CircuitInstance inst = random_instance(2, 1, rng);
    for (int b = 0; b < 2; ++b) {
      const auto x = enumerate_always_on(inst, b);
      const auto y = enumerate_instrument(inst, {b});
      ASSERT_EQ(x.size(), y.size());
      for (std::size_t k = 0; k < x.size(); ++k) {
        EXPECT_EQ(x[k].record.a, y[k].record.a);
        EXPECT_NEAR(x[k].probability, y[k].probability, 1e-12);
        EXPECT_LT(max_abs(x[k].state.amplitudes() - y[k].state.amplitudes()), 1e-12);
      }
    }
  }
}

TEST(RunInstrument, TwoStepEnumerationMatchesKrausOracle) {
  const CircuitInstance inst{StateVector::basis(1, 0), {{pu("X"), pu("I"), {}}, {pu("X"), pu("I"), {}}}};
  const auto branches = enumerate_instrument(inst, {0, 0});
  std::map<std::vector<int>, const ExactBranch*> by_record;
  for (const auto& br : branches) by_record[br.record.a] = &br;
  const Vector psi = StateVector::basis(1, 0).amplitudes();
  for (int a0 = 0; a0 < 2; ++a0) {
    for (int a1 = 0; a1 < 2; ++a1) {
      const Vector out = kraus_operator(kX, kI2, a1, 0) * (kraus_operator(kX, kI2, a0, 0) * psi);
      const double p = out.squaredNorm();
      auto it = by_record.find({a0, a1});
      if (p < 1e-14) {
        EXPECT_TRUE(it == by_record.end() || it->second->probability < 1e-12);
        continue;
      }
      ASSERT_NE(it, by_record.end());
      EXPECT_NEAR(it->second->probability, p, 1e-12);
      const Matrix sigma_oracle = out * out.adjoint() / p;
      EXPECT_LT(max_abs(it->second->state.density() - sigma_oracle), 1e-12);
    }
  }

  Rng rng(11);
  std::map<std::vector<int>, int> counts;
  const int shots = 20000;
  for (int k = 0; k < shots; ++k) counts[run_instrument(inst, {0, 0}, rng).record.a]++;
  for (const auto& br : branches) {
    const double p = br.probability;
    const double freq = static_cast<double>(counts[br.record.a]) / shots;
    EXPECT_LE(std::abs(freq - p), 3.0 * std::sqrt(p * (1 - p) / shots) + 1e-12);
  }
}

TEST(EstimatorWeights, SingleMeasurement) {
  MeasurementRecord r{{0}, {0}, {1.0}};
  EXPECT_EQ(estimator_weight_single(r), cplx(2, 0));
  r = {{1}, {1}, {1.0}};
  EXPECT_EQ(estimator_weight_single(r), cplx(0, -2));
}

TEST(EstimatorWeights, CompositeParity) {
  EXPECT_EQ(estimator_weight_composite({{0, 0, 0}, {0, 0, 0}, {}}), 1.0);
  EXPECT_EQ(estimator_weight_composite({{0, 0, 0}, {1, 0, 1}, {}}), 1.0);
  EXPECT_EQ(estimator_weight_composite({{0, 0, 0}, {1, 0, 0}, {}}), -1.0);
  EXPECT_THROW(estimator_weight_composite({{0, 1}, {0, 0}, {}}), Error);
  EXPECT_EQ(estimator_weight_fixed({{1, 1}, {1, 0}, {}}), cplx(1, 0));
}

TEST(SingleEstimator, MonteCarloRecoversUnphysicalState) {
  const CircuitInstance inst{StateVector::basis(1, 0), {{pu("X"), pu("Z"), {}}}};
  Matrix oracle = Matrix::Zero(2, 2);
  oracle(1, 0) = 1.0;
  Rng rng(12);
  std::vector<std::vector<cplx>> entries(4);
  for (int k = 0; k < 100000; ++k) {
    const int b = rng.bit();
    const CircuitShot shot = run_always_on(inst, b, rng);
    const Matrix m = estimator_weight_single(shot.record) * shot.state.density();
    for (int e = 0; e < 4; ++e) entries[static_cast<std::size_t>(e)].push_back(m(e / 2, e % 2));
  }
  for (int e = 0; e < 4; ++e) {
    const ComplexSummary s = summarize(entries[static_cast<std::size_t>(e)]);
    EXPECT_LE(z_score(s.mean.real(), oracle(e / 2, e % 2).real(), s.std_error_re), 5.0);
    EXPECT_LE(z_score(s.mean.imag(), oracle(e / 2, e % 2).imag(), s.std_error_im), 5.0);
  }
}

TEST(SingleEstimator, ExactEnumerationOnRandomPaulis) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const CircuitInstance inst = random_instance(1 + trial % 3, 1 + trial % 3, rng);
    const Matrix oracle = inst.u_chain() * inst.psi0.density() * inst.v_chain().adjoint();
    EXPECT_LT(max_abs(enumerate_single_estimator(inst) - oracle), 1e-10);
    EXPECT_LT(max_abs(enumerate_summed_estimator(inst) - oracle), 1e-10);
  }
}

TEST(CompositeEstimator, RotationPipeline) {
  const double theta = 0.3;
  const LcuFormula f = lcu_from_coefficients({std::cos(theta), cplx(0, -std::sin(theta))},
                                             {PauliString::parse("I"), PauliString::parse("X")});
  const CompositeLcu comp = composite_from_segments(f, 2);
  const Matrix target = testing::expm_minus_i(kX, 2 * theta);
  const Matrix oracle = target * ket0().entries() * target.adjoint();
  const double norm = comp.mu_T() * comp.mu_T();
  Rng rng(14);
  std::vector<std::vector<cplx>> entries(4);
  for (int k = 0; k < 100000; ++k) {
    const auto iu = comp.sample_indices(rng);
    const auto jv = comp.sample_indices(rng);
    CircuitInstance inst{StateVector::basis(1, 0), {}};
    for (int s = 0; s < 2; ++s) {
      inst.segments.push_back({f.terms()[iu[static_cast<std::size_t>(s)]].unitary,
                               f.terms()[jv[static_cast<std::size_t>(s)]].unitary, {}});
    }
    const CircuitShot shot = run_instrument(inst, {0, 0}, rng);
    const Matrix m = norm * estimator_weight_composite(shot.record) * shot.state.density();
    for (int e = 0; e < 4; ++e) entries[static_cast<std::size_t>(e)].push_back(m(e / 2, e % 2));
  }
  for (int e = 0; e < 4; ++e) {
    const ComplexSummary s = summarize(entries[static_cast<std::size_t>(e)]);
    EXPECT_LE(z_score(s.mean.real(), oracle(e / 2, e % 2).real(), s.std_error_re), 5.0);
    EXPECT_LE(z_score(s.mean.imag(), oracle(e / 2, e % 2).imag(), s.std_error_im), 5.0);
  }
}

TEST(Symmetrised, DegenerateAndSingleSegment) {
  Rng rng(15);
  const DensityMatrix rho = random_density(2, rng);
  const Matrix u1 = random_unitary(2, rng), u2 = random_unitary(2, rng);
  EXPECT_LT(max_abs(symmetrised_oracle(rho, {{u1, u1}, {u2, u2}}) - u2 * u1 * rho.entries() * (u2 * u1).adjoint()),
            1e-12);
  const Matrix r0 = ket0().entries();
  EXPECT_LT(max_abs(symmetrised_oracle(ket0(), {{kX, kI2}}) - 0.5 * (kX * r0 + r0 * kX)), 1e-15);
}

TEST(Symmetrised, InstrumentEnumerationMatches) {
  Rng rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    const int nu = 1 + trial % 3;
    const CircuitInstance inst = random_instance(n, nu, rng);
    std::vector<std::pair<Matrix, Matrix>> pairs;
    for (const auto& s : inst.segments) pairs.emplace_back(s.u.matrix(), s.v.matrix());
    const Matrix oracle = symmetrised_oracle(DensityMatrix(inst.psi0.density()), pairs);
    EXPECT_LT(max_abs(enumerate_instrument_estimator(inst, std::vector<int>(static_cast<std::size_t>(nu), 0)) - oracle),
              1e-10);
  }
}

TEST(Antisymmetrised, Examples) {
  Rng rng(17);
  const Matrix u = random_unitary(1, rng);
  const DensityMatrix rho = random_density(1, rng);
  EXPECT_LT(max_abs(antisymmetrised_check(rho, u, u)), 1e-12);
  const Matrix r0 = ket0().entries();
  EXPECT_LT(max_abs(antisymmetrised_check(ket0(), kX, kI2) - 0.5 * (kX * r0 - r0 * kX)), 1e-15);
}

TEST(Antisymmetrised, RecombinationGivesUnphysicalState) {
  Rng rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix u = random_unitary(2, rng);
    const Matrix v = random_unitary(2, rng);
    const DensityMatrix rho = random_density(2, rng);
    const Matrix sym = symmetrised_oracle(rho, {{u, v}});
    const Matrix anti = antisymmetrised_check(rho, u, v);
    EXPECT_LT(max_abs(sym + anti - u * rho.entries() * v.adjoint()), 1e-12);
  }
}

TEST(CommonUnitary, FoldsIntoChains) {
  Rng rng(19);
  const Matrix w = random_unitary(1, rng);
  CircuitInstance inst = random_instance(1, 2, rng);
  for (auto& s : inst.segments) s.common = PhasedUnitary::dense(w);
  const Matrix u0 = inst.segments[0].u.matrix(), u1 = inst.segments[1].u.matrix();
  EXPECT_LT(max_abs(inst.u_chain() - u1 * w * u0 * w), 1e-12);
  EXPECT_LT(max_abs(enumerate_single_estimator(inst) -
                    inst.u_chain() * inst.psi0.density() * inst.v_chain().adjoint()),
            1e-10);
}

}  // namespace
}  // namespace rlcu
