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

#include <cmath>
#include <numbers>

#include "rlcu/lcu.hpp"
#include "rlcu/stats.hpp"
#include "test_util.hpp"

namespace rlcu {
namespace {

using testing::max_abs;

LcuFormula rotation_formula(double theta) {
  return lcu_from_coefficients({std::cos(theta), cplx(0, -std::sin(theta))},
                               {PauliString::parse("I"), PauliString::parse("X")});
}

TEST(LcuFromCoefficients, SingleIdentity) {
  const LcuFormula f = lcu_from_coefficients({1.0}, {PauliString::parse("I")});
  EXPECT_DOUBLE_EQ(f.mu(), 1.0);
  ASSERT_EQ(f.terms().size(), 1U);
  EXPECT_DOUBLE_EQ(f.terms()[0].prob, 1.0);
}

TEST(LcuFromCoefficients, RotationCarriesMinusIPhase) {
  const double theta = std::numbers::pi / 4;
  const LcuFormula f = rotation_formula(theta);
  EXPECT_NEAR(f.mu(), std::cos(theta) + std::sin(theta), 1e-15);
  EXPECT_NEAR(f.mu(), 1.41421356, 1e-8);
  EXPECT_NEAR(f.terms()[0].prob, 0.5, 1e-15);
  EXPECT_NEAR(f.terms()[1].prob, 0.5, 1e-15);
  EXPECT_LT(max_abs(f.terms()[1].unitary.matrix() - cplx(0, -1) * testing::pauli_x()), 1e-15);
  EXPECT_TRUE(f.terms()[1].unitary.is_pauli());
  EXPECT_LT(max_abs(f.reconstruct() - testing::expm_minus_i(testing::pauli_x(), theta)), 1e-12);
}

TEST(LcuFromCoefficients, Normalization) {
  const LcuFormula f = lcu_from_coefficients({0.6, 0.8}, {PauliString::parse("Z"), PauliString::parse("X")});
  EXPECT_NEAR(f.mu(), 1.4, 1e-15);
  EXPECT_NEAR(f.terms()[0].prob, 3.0 / 7.0, 1e-15);
  EXPECT_NEAR(f.terms()[1].prob, 4.0 / 7.0, 1e-15);
}

TEST(LcuFromCoefficients, ResidualPhaseIsKept) {
  const cplx c = std::polar(0.5, 0.3);
  const LcuFormula f = lcu_from_coefficients({c}, {PauliString::parse("Z")});
  EXPECT_LT(max_abs(f.reconstruct() - c * testing::pauli_z()), 1e-15);
}

TEST(LcuFromCoefficients, Errors) {
  EXPECT_THROW(lcu_from_coefficients({}, {}), Error);
  EXPECT_THROW(lcu_from_coefficients({0.0}, {PauliString::parse("X")}), Error);
  EXPECT_THROW(lcu_from_coefficients({1.0, 1.0}, {PauliString::parse("X")}), DimensionError);
}

TEST(LcuFormula, ConstructorValidation) {
  const PhasedUnitary id = PhasedUnitary::identity(1);
  EXPECT_THROW(LcuFormula(0.0, {{1.0, id, false}}), Error);
  EXPECT_THROW(LcuFormula(1.0, {{0.7, id, false}}), Error);
  EXPECT_THROW(LcuFormula(1.0, {{1.0, id, true}}), Error);
  EXPECT_THROW(LcuFormula(1.0, {{0.5, id, false}, {0.5, PhasedUnitary::identity(2), false}}), DimensionError);
}

TEST(LcuSampling, SingleTermAlwaysDrawn) {
  const LcuFormula f = lcu_from_coefficients({2.0}, {PauliString::parse("Y")});
  Rng rng(1);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(f.sample_index(rng), 0U);
}

TEST(LcuSampling, FairFrequencies) {
  const LcuFormula f = rotation_formula(std::numbers::pi / 4);
  Rng rng(2);
  const int draws = 100000;
  int first = 0;
  for (int k = 0; k < draws; ++k) first += f.sample_index(rng) == 0 ? 1 : 0;
  EXPECT_LT(std::abs(static_cast<double>(first) / draws - 0.5), 3.0 * std::sqrt(0.25 / draws));
}

TEST(LcuSampling, ScaledMeanMatchesTarget) {
  Rng rng(3);
  const Matrix w = random_unitary(2, rng);
  const LcuFormula f = lcu_from_pauli_terms(pauli_decompose(w));
  const int draws = 100000;
  std::vector<std::vector<double>> re(16), im(16);
  for (int k = 0; k < draws; ++k) {
    const Matrix m = f.mu() * sample_instance(f, rng).matrix();
    for (Eigen::Index e = 0; e < 16; ++e) {
      re[static_cast<std::size_t>(e)].push_back(m(e / 4, e % 4).real());
      im[static_cast<std::size_t>(e)].push_back(m(e / 4, e % 4).imag());
    }
  }
  for (Eigen::Index e = 0; e < 16; ++e) {
    const Summary r = summarize(re[static_cast<std::size_t>(e)]);
    const Summary i = summarize(im[static_cast<std::size_t>(e)]);
    EXPECT_LE(z_score(r.mean, w(e / 4, e % 4).real(), r.std_error), 5.0);
    EXPECT_LE(z_score(i.mean, w(e / 4, e % 4).imag(), i.std_error), 5.0);
  }
}

TEST(LcuFormula, UnitaryEnsembleActionIsTwoSided) {
  Rng rng(4);
  const Matrix w = random_unitary(2, rng);
  const LcuFormula f = lcu_from_pauli_terms(pauli_decompose(w));
  const Matrix rho = random_density(2, rng).entries();
  EXPECT_LT(max_abs(f.ensemble_action(rho) - w * rho * w.adjoint()), 1e-12);
}

TEST(CompositeLcu, MuProducts) {
  const LcuFormula f = rotation_formula(0.3);
  EXPECT_DOUBLE_EQ(composite_from_segments(f, 1).mu_T(), f.mu());
  const LcuFormula g = lcu_from_coefficients({1.1}, {PauliString::parse("Z")});
  EXPECT_NEAR(composite_from_segments(g, 3).mu_T(), 1.331, 1e-12);
  EXPECT_THROW(composite_from_segments(f, 0), Error);
  Rng rng(5);
  EXPECT_EQ(composite_from_segments(f, 4).sample_indices(rng).size(), 4U);
}

TEST(BoundedComposite, ChoosesSmallestAdmissibleNu) {
  const Hamiltonian h = hamiltonian_parse("1.0 X\n1.0 Z");
  const auto grouping = first_order_grouping(h);
  auto builder = [&](double dt) { return trotter_compensation_formula(h, grouping, dt); };
  const BoundedComposite bc = bounded_composite(builder, 1.0, 2.0);
  EXPECT_LE(bc.composite.mu_T(), 2.0);
  EXPECT_NEAR(bc.dt * bc.nu, 1.0, 1e-12);
  for (int nu = 1; nu < bc.nu; ++nu) EXPECT_GT(std::pow(builder(1.0 / nu).mu(), nu), 2.0);

  const BoundedComposite tight = bounded_composite(builder, 1.0, 1.2);
  EXPECT_GE(tight.nu, bc.nu);
  EXPECT_LE(tight.composite.mu_T(), 1.2);
  EXPECT_THROW(bounded_composite(builder, 1.0, 1.0 + 1e-9, 4), Error);
}

TEST(TruncateFormula, Extremes) {
  Rng rng(6);
  const LcuFormula f = lcu_from_pauli_terms(pauli_decompose(random_unitary(2, rng)));
  const LcuFormula all = truncate_formula(f, 1e-15);
  EXPECT_EQ(all.terms().size(), f.terms().size());
  const LcuFormula one = truncate_formula(f, 100.0);
  EXPECT_EQ(one.terms().size(), 1U);
  EXPECT_THROW(truncate_formula(f, 0.0), Error);
}

TEST(TruncateFormula, SmallRotationKeepsBothTerms) {
  const LcuFormula f = rotation_formula(0.1);
  const LcuFormula t = truncate_formula(f, 0.02);
  EXPECT_EQ(t.terms().size(), 2U);
  const LcuFormula loose = truncate_formula(f, 0.2);
  ASSERT_EQ(loose.terms().size(), 1U);
  EXPECT_NEAR(loose.truncation_error(), std::sin(0.1), 1e-12);
  EXPECT_LE(max_abs(loose.reconstruct() - f.reconstruct()), loose.truncation_error() + 1e-12);
}

TEST(TrotterCompensation, CommutingGroupingIsIdentity) {
  const Hamiltonian h = hamiltonian_parse("0.3 ZI\n0.5 IZ");
  const LcuFormula f = trotter_compensation_formula(h, first_order_grouping(h), 0.2);
  ASSERT_EQ(f.terms().size(), 1U);
  EXPECT_NEAR(f.mu(), 1.0, 1e-12);
  EXPECT_EQ(f.terms()[0].unitary.pauli_string().word(), "II");
}

TEST(TrotterCompensation, ZeroStepIsIdentity) {
  const Hamiltonian h = hamiltonian_parse("1.0 X\n1.0 Z");
  const LcuFormula f = trotter_compensation_formula(h, first_order_grouping(h), 0.0);
  EXPECT_NEAR(f.mu(), 1.0, 1e-12);
  EXPECT_EQ(f.terms().size(), 1U);
}

TEST(TrotterCompensation, CorrectsTheTrotterStep) {
  const Hamiltonian h = hamiltonian_parse("1.0 X\n1.0 Z");
  const auto grouping = first_order_grouping(h);
  const double dt = 0.1;
  const Matrix us = trotter_step_unitary(grouping, dt);
  const Matrix oracle_us =
      testing::expm_minus_i(testing::pauli_z(), dt) * testing::expm_minus_i(testing::pauli_x(), dt);
  EXPECT_LT(max_abs(us - oracle_us), 1e-12);
  const LcuFormula f = trotter_compensation_formula(h, grouping, dt);
  EXPECT_LT(max_abs(f.reconstruct() * us - testing::expm_minus_i(h.to_matrix(), dt)), 1e-12);
}

TEST(TrotterCompensation, MuExcessIsSecondOrder) {
  const Hamiltonian h = hamiltonian_parse("1.0 X\n1.0 Z");
  const auto grouping = first_order_grouping(h);
  std::vector<double> lx, ly;
  for (double dt : {0.05, 0.1, 0.2}) {
    const double excess = trotter_compensation_formula(h, grouping, dt).mu() - 1.0;
    EXPECT_GT(excess, 0.0);
    lx.push_back(std::log(dt));
    ly.push_back(std::log(excess));
  }
  EXPECT_NEAR(fit_slope(lx, ly), 2.0, 0.2);
}

TEST(TrotterCompensation, GroupingMustCoverHamiltonian) {
  const Hamiltonian h = hamiltonian_parse("1.0 X\n1.0 Z");
  EXPECT_THROW(trotter_compensation_formula(h, {hamiltonian_parse("1.0 X")}, 0.1), Error);
}

TEST(PqsChannel, ZeroInteraction) {
  const LcuFormula f = pqs_channel_decomposition(Hamiltonian(2), 0.1);
  ASSERT_EQ(f.terms().size(), 1U);
  EXPECT_DOUBLE_EQ(f.mu(), 1.0);
  EXPECT_EQ(f.kind(), LcuKind::kChannel);
}

TEST(PqsChannel, Coefficients) {
  const LcuFormula f = pqs_channel_decomposition(hamiltonian_parse("0.5 XX"), 0.1);
  ASSERT_EQ(f.terms().size(), 2U);
  EXPECT_NEAR(f.mu(), 1.05, 1e-15);
  EXPECT_NEAR(f.terms()[0].prob, 1.0 / 1.05, 1e-15);
  EXPECT_NEAR(f.terms()[1].prob, 0.05 / 1.05, 1e-15);
  EXPECT_TRUE(f.terms()[1].paired);
  EXPECT_THROW(pqs_channel_decomposition(hamiltonian_parse("0.5 XX"), 0.0), Error);
}

TEST(PqsChannel, FirstOrderAction) {
  const Hamiltonian hint = hamiltonian_parse("0.5 XX\n-0.3 ZY");
  const double dt = 0.1;
  const LcuFormula f = pqs_channel_decomposition(hint, dt);
  for (const Matrix& rho : {DensityMatrix::from_state(StateVector::basis(2, 0)).entries(),
                            DensityMatrix::from_state(StateVector::plus_all(2)).entries()}) {
    const Matrix hm = hint.to_matrix();
    const Matrix oracle = rho - cplx(0, dt) * (hm * rho - rho * hm);
    EXPECT_LT(max_abs(f.ensemble_action(rho) - oracle), 1e-12);
  }
}

TEST(GaussianFilter, ZeroDrawIsIdentity) {
  auto spec = std::make_shared<HermitianSpectrum>(hamiltonian_parse("1.0 Z"));
  const GaussianFilterEnsemble g{1.0, 1.0};
  EXPECT_LT(max_abs(filter_unitary(g, spec, 0.0).matrix() - testing::eye(2)), 1e-15);
}

TEST(GaussianFilter, SubstitutionCheck) {
  auto spec = std::make_shared<HermitianSpectrum>(hamiltonian_parse("1.0 Z"));
  const GaussianFilterEnsemble g{1.0, 1.0};
  const Matrix expected = std::polar(1.0, 0.5) * testing::expm_minus_i(testing::pauli_z(), 0.5);
  EXPECT_LT(max_abs(filter_unitary(g, spec, 0.5).matrix() - expected), 1e-12);
}

TEST(GaussianFilter, OperatorMatchesGaussianQuadrature) {
  const Hamiltonian h = hamiltonian_parse("1.0 ZI\n0.5 IZ\n0.25 XX");
  const HermitianSpectrum spec(h);
  const GaussianFilterEnsemble g{0.8, -1.2};
  const Matrix hm = h.to_matrix();
  Matrix integral = Matrix::Zero(4, 4);
  const int points = 1601;
  const double lo = -9.0, step = 18.0 / (points - 1);
  for (int k = 0; k < points; ++k) {
    const double x = lo + k * step;
    const double w = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi) * step * (k == 0 || k == points - 1 ? 0.5 : 1.0);
    integral += w * std::polar(1.0, x * g.tau * g.omega) * testing::expm_minus_i(hm, x * g.tau);
  }
  EXPECT_LT(max_abs(g.filter_operator(spec) - integral), 1e-9);
}

TEST(GaussianFilter, SampledMeanApproachesFilteredState) {
  const Hamiltonian h = hamiltonian_parse("1.0 Z");
  auto spec = std::make_shared<HermitianSpectrum>(h);
  const GaussianFilterEnsemble g{1.5, 0.4};
  const Vector psi = StateVector::plus_all(1).amplitudes();
  const Vector target = g.filter_operator(*spec) * psi;
  Rng rng(7);
  const int draws = 100000;
  std::vector<std::vector<double>> parts(4);
  for (int k = 0; k < draws; ++k) {
    const Vector out = sample_filter_unitary(g, spec, rng).unitary.apply(psi);
    for (int e = 0; e < 2; ++e) {
      parts[static_cast<std::size_t>(2 * e)].push_back(out[e].real());
      parts[static_cast<std::size_t>(2 * e + 1)].push_back(out[e].imag());
    }
  }
  for (int e = 0; e < 2; ++e) {
    const Summary r = summarize(parts[static_cast<std::size_t>(2 * e)]);
    const Summary i = summarize(parts[static_cast<std::size_t>(2 * e + 1)]);
    EXPECT_LE(z_score(r.mean, target[e].real(), r.std_error), 5.0);
    EXPECT_LE(z_score(i.mean, target[e].imag(), i.std_error), 5.0);
  }
}

}  // namespace
}  // namespace rlcu
