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

#include "rlcu/circuits.hpp"

#include <cmath>

namespace rlcu {

namespace {

void check_instance(const CircuitInstance& inst) {
  const int n = inst.num_qubits();
  for (const auto& s : inst.segments) {
    if (s.u.num_qubits() != n || s.v.num_qubits() != n || (s.common && s.common->num_qubits() != n)) {
      throw DimensionError("CircuitInstance: segment acts on a different qubit count than psi0");
    }
  }
}

int sample_outcome(double p0, double p1, Rng& rng) {
  const bool zero_possible = p0 >= kZeroProbability;
  const bool one_possible = p1 >= kZeroProbability;
  if (!zero_possible && !one_possible) throw ZeroProbabilityError("both ancilla outcomes have zero probability");
  if (!one_possible) return 0;
  if (!zero_possible) return 1;
  return rng.uniform() * (p0 + p1) < p0 ? 0 : 1;
}

int sum_bits(const std::vector<int>& bits) {
  int s = 0;
  for (int x : bits) s += x;
  return s;
}

double parity_sign(const std::vector<int>& bits) { return sum_bits(bits) % 2 == 0 ? 1.0 : -1.0; }

// Unnormalized K_{a|b} psi after the segment's common unitary.
struct SegmentBranches {
  Vector u_psi;
  Vector v_psi;
};

SegmentBranches segment_branches(const Segment& s, const Vector& psi) {
  const Vector in = s.common ? s.common->apply(psi) : psi;
  return {s.u.apply(in), s.v.apply(in)};
}

Vector kraus_apply(const SegmentBranches& br, int a, cplx phase) {
  const double sign = a == 0 ? 1.0 : -1.0;
  return 0.5 * (sign * phase * br.u_psi + br.v_psi);
}

void enumerate_recursive(const CircuitInstance& inst, const std::vector<int>& b_vec, PhaseGate gate, int k,
                         const Vector& psi, MeasurementRecord& rec, double prob, std::vector<ExactBranch>& out) {
  if (k == inst.nu()) {
    out.push_back({rec, prob, StateVector(psi)});
    return;
  }
  const auto br = segment_branches(inst.segments[static_cast<std::size_t>(k)], psi);
  const cplx phase = ancilla_phase(gate, b_vec[static_cast<std::size_t>(k)]);
  for (int a = 0; a < 2; ++a) {
    const Vector next = kraus_apply(br, a, phase);
    const double p = next.squaredNorm();
    if (p < kZeroProbability) continue;
    rec.a.push_back(a);
    rec.probabilities.push_back(p);
    enumerate_recursive(inst, b_vec, gate, k + 1, next / std::sqrt(p), rec, prob * p, out);
    rec.a.pop_back();
    rec.probabilities.pop_back();
  }
}

}  // namespace

cplx ancilla_phase(PhaseGate gate, int b) {
  if (b == 0) return 1.0;
  return gate == PhaseGate::kSDagger ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
}

Matrix CircuitInstance::u_chain() const {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits();
  Matrix m = Matrix::Identity(dim, dim);
  for (const auto& s : segments) {
    if (s.common) m = s.common->matrix() * m;
    m = s.u.matrix() * m;
  }
  return m;
}

Matrix CircuitInstance::v_chain() const {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits();
  Matrix m = Matrix::Identity(dim, dim);
  for (const auto& s : segments) {
    if (s.common) m = s.common->matrix() * m;
    m = s.v.matrix() * m;
  }
  return m;
}

Matrix kraus_operator(const Matrix& u, const Matrix& v, int a, int b, PhaseGate gate) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw DimensionError("kraus_operator: u and v differ in shape");
  const double sign = a == 0 ? 1.0 : -1.0;
  return 0.5 * (sign * ancilla_phase(gate, b) * u + v);
}

Matrix kraus_operator(const PhasedUnitary& u, const PhasedUnitary& v, int a, int b, PhaseGate gate) {
  if (u.num_qubits() != v.num_qubits()) throw DimensionError("kraus_operator: qubit count mismatch");
  return kraus_operator(u.matrix(), v.matrix(), a, b, gate);
}

double outcome_probability(const Matrix& u, const Matrix& v, const DensityMatrix& rho, int b, int a,
                           PhaseGate gate) {
  const Matrix k = kraus_operator(u, v, a, b, gate);
  if (k.cols() != rho.entries().rows()) throw DimensionError("outcome_probability: dimension mismatch");
  return (k * rho.entries() * k.adjoint()).trace().real();
}

double outcome_probability_closed_form(const Matrix& u, const Matrix& v, const DensityMatrix& rho, int b, int a) {
  const cplx t = (u * rho.entries() * v.adjoint()).trace();
  const double sign = a == 0 ? 1.0 : -1.0;
  return 0.5 * (1.0 + sign * (b == 0 ? t.real() : t.imag()));
}

CircuitShot run_always_on(const CircuitInstance& inst, int b, Rng& rng, PhaseGate gate) {
  check_instance(inst);
  BranchPair bp(inst.psi0);
  for (const auto& s : inst.segments) {
    if (s.common) bp = apply_common_unitary(bp, *s.common);
    bp = apply_controlled_pair(bp, s.u, s.v);
  }
  bp.apply_ancilla_phase(ancilla_phase(gate, b));
  const Vector s0 = bp.project_x(0);
  const Vector s1 = bp.project_x(1);
  const double p0 = s0.squaredNorm();
  const double p1 = s1.squaredNorm();
  const int a = sample_outcome(p0, p1, rng);
  const double p = a == 0 ? p0 : p1;
  CircuitShot shot;
  shot.record.b = {b};
  shot.record.a = {a};
  shot.record.probabilities = {p};
  shot.state = StateVector((a == 0 ? s0 : s1) / std::sqrt(p));
  return shot;
}

CircuitShot run_instrument(const CircuitInstance& inst, const std::vector<int>& b_vec, Rng& rng, PhaseGate gate) {
  check_instance(inst);
  if (static_cast<int>(b_vec.size()) != inst.nu()) throw DimensionError("run_instrument: |b| differs from nu");
  CircuitShot shot;
  shot.record.b = b_vec;
  Vector psi = inst.psi0.amplitudes();
  for (int k = 0; k < inst.nu(); ++k) {
    const auto br = segment_branches(inst.segments[static_cast<std::size_t>(k)], psi);
    const cplx phase = ancilla_phase(gate, b_vec[static_cast<std::size_t>(k)]);
    Vector k0 = kraus_apply(br, 0, phase);
    Vector k1 = kraus_apply(br, 1, phase);
    const double p0 = k0.squaredNorm();
    const double p1 = k1.squaredNorm();
    const int a = sample_outcome(p0, p1, rng);
    const double p = a == 0 ? p0 : p1;
    psi = (a == 0 ? k0 : k1) / std::sqrt(p);
    shot.record.a.push_back(a);
    shot.record.probabilities.push_back(p);
  }
  shot.state = StateVector(std::move(psi));
  return shot;
}

cplx estimator_weight_single(const MeasurementRecord& rec) {
  if (rec.a.size() != 1 || rec.b.size() != 1) throw Error("estimator_weight_single: expects one measurement");
  return 2.0 * i_pow(rec.b[0]) * (rec.a[0] == 0 ? 1.0 : -1.0);
}

double estimator_weight_composite(const MeasurementRecord& rec) {
  for (int b : rec.b)
    if (b != 0) throw Error("estimator_weight_composite: defined only for b = 0 settings");
  return parity_sign(rec.a);
}

cplx estimator_weight_fixed(const MeasurementRecord& rec) { return i_pow(sum_bits(rec.b)) * parity_sign(rec.a); }

std::vector<ExactBranch> enumerate_always_on(const CircuitInstance& inst, int b, PhaseGate gate) {
  check_instance(inst);
  BranchPair bp(inst.psi0);
  for (const auto& s : inst.segments) {
    if (s.common) bp = apply_common_unitary(bp, *s.common);
    bp = apply_controlled_pair(bp, s.u, s.v);
  }
  bp.apply_ancilla_phase(ancilla_phase(gate, b));
  std::vector<ExactBranch> out;
  for (int a = 0; a < 2; ++a) {
    const Vector s = bp.project_x(a);
    const double p = s.squaredNorm();
    if (p < kZeroProbability) continue;
    out.push_back({MeasurementRecord{{b}, {a}, {p}}, p, StateVector(s / std::sqrt(p))});
  }
  return out;
}

std::vector<ExactBranch> enumerate_instrument(const CircuitInstance& inst, const std::vector<int>& b_vec,
                                              PhaseGate gate) {
  check_instance(inst);
  if (static_cast<int>(b_vec.size()) != inst.nu()) throw DimensionError("enumerate_instrument: |b| differs from nu");
  std::vector<ExactBranch> out;
  MeasurementRecord rec;
  rec.b = b_vec;
  enumerate_recursive(inst, b_vec, gate, 0, inst.psi0.amplitudes(), rec, 1.0, out);
  return out;
}

Matrix enumerate_single_estimator(const CircuitInstance& inst, PhaseGate gate) {
  const Eigen::Index dim = Eigen::Index{1} << inst.num_qubits();
  Matrix acc = Matrix::Zero(dim, dim);
  for (int b = 0; b < 2; ++b) {
    for (const auto& br : enumerate_always_on(inst, b, gate)) {
      acc += 0.5 * br.probability * estimator_weight_single(br.record) * br.state.density();
    }
  }
  return acc;
}

Matrix enumerate_summed_estimator(const CircuitInstance& inst, PhaseGate gate) {
  const Eigen::Index dim = Eigen::Index{1} << inst.num_qubits();
  Matrix acc = Matrix::Zero(dim, dim);
  for (int b = 0; b < 2; ++b) {
    for (const auto& br : enumerate_always_on(inst, b, gate)) {
      acc += br.probability * estimator_weight_fixed(br.record) * br.state.density();
    }
  }
  return acc;
}

Matrix enumerate_instrument_estimator(const CircuitInstance& inst, const std::vector<int>& b_vec, PhaseGate gate) {
  const Eigen::Index dim = Eigen::Index{1} << inst.num_qubits();
  Matrix acc = Matrix::Zero(dim, dim);
  for (const auto& br : enumerate_instrument(inst, b_vec, gate)) {
    acc += br.probability * estimator_weight_fixed(br.record) * br.state.density();
  }
  return acc;
}

Matrix symmetrised_oracle(const DensityMatrix& rho, const std::vector<std::pair<Matrix, Matrix>>& pairs) {
  check_size_cap(rho.num_qubits(), "symmetrised_oracle");
  const Matrix& r = rho.entries();
  const std::size_t nu = pairs.size();
  if (nu >= 63) throw Error("symmetrised_oracle: too many segments");
  for (const auto& [u, v] : pairs) {
    if (u.rows() != r.rows() || v.rows() != r.rows()) throw DimensionError("symmetrised_oracle: dimension mismatch");
  }
  Matrix acc = Matrix::Zero(r.rows(), r.cols());
  const std::uint64_t count = std::uint64_t{1} << nu;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    Matrix left = Matrix::Identity(r.rows(), r.cols());
    Matrix right = Matrix::Identity(r.rows(), r.cols());
    for (std::size_t k = 0; k < nu; ++k) {
      const bool u_left = (mask >> k) & 1U;
      left = (u_left ? pairs[k].first : pairs[k].second) * left;
      right = (u_left ? pairs[k].second : pairs[k].first) * right;
    }
    acc += left * r * right.adjoint();
  }
  return acc / static_cast<double>(count);
}

Matrix antisymmetrised_check(const DensityMatrix& rho, const Matrix& u, const Matrix& v, PhaseGate gate) {
  Matrix acc = Matrix::Zero(rho.entries().rows(), rho.entries().cols());
  for (int a = 0; a < 2; ++a) {
    const Matrix k = kraus_operator(u, v, a, 1, gate);
    acc += kI * (a == 0 ? 1.0 : -1.0) * (k * rho.entries() * k.adjoint());
  }
  return acc;
}

}  // namespace rlcu
