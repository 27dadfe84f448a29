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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rlcu/backend.hpp"
#include "rlcu/random.hpp"

namespace rlcu {

/// Probabilities below this are treated as impossible outcomes.
inline constexpr double kZeroProbability = 1e-14;

/// Phase gate applied to the ancilla before the X-basis measurement when b = 1.
/// kSDagger maps |1> to -i|1>; kS is the flipped convention, kept for
/// negative-control fixtures.
enum class PhaseGate { kSDagger, kS };

/// Multiplier applied to the U branch for setting b.
cplx ancilla_phase(PhaseGate gate, int b);

/// One segment: controlled pair (U on ancilla |1>, V on ancilla |0>), preceded
/// by an optional uncontrolled common unitary.
struct Segment {
  PhasedUnitary u;
  PhasedUnitary v;
  std::optional<PhasedUnitary> common;
};

struct CircuitInstance {
  StateVector psi0;
  std::vector<Segment> segments;

  int num_qubits() const { return psi0.num_qubits(); }
  int nu() const { return static_cast<int>(segments.size()); }

  /// Dense products: common unitaries folded into both chains.
  Matrix u_chain() const;
  Matrix v_chain() const;
};

struct MeasurementRecord {
  std::vector<int> b;
  std::vector<int> a;
  /// Probability of the sampled outcome at each measurement.
  std::vector<double> probabilities;
};

struct CircuitShot {
  MeasurementRecord record;
  StateVector state;
};

/// Shot log entry.
struct ShotRecord {
  std::string instance_id;
  std::vector<int> b;
  std::vector<int> a;
  cplx weight{1.0, 0.0};
  std::uint64_t seed = 0;
};

/// 1/2 ((-i)^b (-1)^a U + V) as a dense matrix (the phase factor follows
/// `gate`).
Matrix kraus_operator(const PhasedUnitary& u, const PhasedUnitary& v, int a, int b,
                      PhaseGate gate = PhaseGate::kSDagger);
Matrix kraus_operator(const Matrix& u, const Matrix& v, int a, int b, PhaseGate gate = PhaseGate::kSDagger);

/// tr(K rho K^dagger).
double outcome_probability(const Matrix& u, const Matrix& v, const DensityMatrix& rho, int b, int a,
                           PhaseGate gate = PhaseGate::kSDagger);
/// 1/2 (1 + (-1)^a Re tr(U rho V^dagger)) for b = 0, Im for b = 1.
double outcome_probability_closed_form(const Matrix& u, const Matrix& v, const DensityMatrix& rho, int b, int a);

/// Always-on ancilla: all segments act on the branch pair, then the b phase and
/// a single X-basis measurement. Throws ZeroProbabilityError when neither
/// outcome is possible.
CircuitShot run_always_on(const CircuitInstance& inst, int b, Rng& rng, PhaseGate gate = PhaseGate::kSDagger);

/// Measure-and-reset instrument: one measurement per segment with setting
/// b_vec[k]. Throws DimensionError if |b_vec| != nu, ZeroProbabilityError if a
/// segment has no possible outcome.
CircuitShot run_instrument(const CircuitInstance& inst, const std::vector<int>& b_vec, Rng& rng,
                           PhaseGate gate = PhaseGate::kSDagger);

/// 2 i^b (-1)^a for a single-measurement record.
cplx estimator_weight_single(const MeasurementRecord& rec);
/// (-1)^{sum a}. Throws Error if any b_k != 0.
double estimator_weight_composite(const MeasurementRecord& rec);
/// i^{sum b} (-1)^{sum a}, the fixed-setting weight.
cplx estimator_weight_fixed(const MeasurementRecord& rec);

/// Exact branch of a circuit: record, its total probability and the
/// normalized conditional state.
struct ExactBranch {
  MeasurementRecord record;
  double probability;
  StateVector state;
};

std::vector<ExactBranch> enumerate_always_on(const CircuitInstance& inst, int b,
                                             PhaseGate gate = PhaseGate::kSDagger);
std::vector<ExactBranch> enumerate_instrument(const CircuitInstance& inst, const std::vector<int>& b_vec,
                                              PhaseGate gate = PhaseGate::kSDagger);

/// E_{a,b}[2 i^b (-1)^a sigma_{a,b}] with b uniform, by exact enumeration.
Matrix enumerate_single_estimator(const CircuitInstance& inst, PhaseGate gate = PhaseGate::kSDagger);
/// sum_b i^b E_a[(-1)^a sigma_{a,b}], the summed-over-b form.
Matrix enumerate_summed_estimator(const CircuitInstance& inst, PhaseGate gate = PhaseGate::kSDagger);
/// E_a[i^{sum b} (-1)^{sum a} sigma] over the instrument for fixed b_vec.
Matrix enumerate_instrument_estimator(const CircuitInstance& inst, const std::vector<int>& b_vec,
                                      PhaseGate gate = PhaseGate::kSDagger);

/// 2^-nu sum over side assignments s in {U,V}^nu of L_s rho R_s^dagger, where
/// segment k contributes (U_k, V_k) or (V_k, U_k) to (L, R). Throws
/// SizeCapError.
Matrix symmetrised_oracle(const DensityMatrix& rho, const std::vector<std::pair<Matrix, Matrix>>& pairs);

/// sum_a i (-1)^a K_{a|1} rho K_{a|1}^dagger, which equals
/// 1/2 (U rho V^dagger - V rho U^dagger).
Matrix antisymmetrised_check(const DensityMatrix& rho, const Matrix& u, const Matrix& v,
                             PhaseGate gate = PhaseGate::kSDagger);

}  // namespace rlcu
