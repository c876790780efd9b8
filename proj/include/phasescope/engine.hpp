// Copyright 2026 The phase-scope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "phasescope/pauli.hpp"
#include "phasescope/records.hpp"

namespace phasescope {

using Amplitude = std::complex<double>;

/// Dense statevector over 2^N basis states. Amplitude index is little-endian:
/// bit k of the index is the computational value of qubit k.
struct Statevector {
  int num_qubits = 0;
  std::vector<Amplitude> amps;

  static Statevector zero_state(int num_qubits);
  static Statevector basis_state(int num_qubits, std::uint64_t b);

  std::uint64_t dim() const { return amps.size(); }
  double norm() const;
};

struct Gate {
  enum class Kind { RY, RZ, PauliX, Cnot };
  Kind kind;
  int q0 = 0;
  int q1 = -1;        // CNOT target
  double angle = 0.0; // rotation angle, radians
  int slot = -1;      // >= 0: angle is taken from a ParamVector at run time

  static Gate ry(int q, double angle) { return {Kind::RY, q, -1, angle, -1}; }
  static Gate ry_slot(int q, int slot) { return {Kind::RY, q, -1, 0.0, slot}; }
  static Gate rz(int q, double angle) { return {Kind::RZ, q, -1, angle, -1}; }
  static Gate x(int q) { return {Kind::PauliX, q, -1, 0.0, -1}; }
  static Gate cnot(int control, int target) {
    return {Kind::Cnot, control, target, 0.0, -1};
  }
};

/// Ordered gate program. Rotation gates may bind their angle to a parameter
/// slot; replaying with the same ParamVector is deterministic.
struct Circuit {
  int num_qubits = 0;
  std::vector<Gate> gates;
  int num_slots = 0;

  void append(Gate g);

  /// Resolve every slot against `params`; the result has no free slots.
  Circuit bound(std::span<const double> params) const;

  /// Exact inverse of a fully bound circuit (gates reversed, angles negated).
  Circuit inverse() const;

  /// Relabel qubits: gate indices q are replaced by perm[q].
  Circuit relabeled(const std::vector<int>& perm) const;

  int cnot_count() const;
};

void apply_gate(Statevector& state, const Gate& g);

/// Apply a single-qubit Pauli directly (used for fault injection and frames).
void apply_pauli_char(Statevector& state, int qubit, char p);

Statevector run(const Circuit& circuit, std::span<const double> params = {});

std::complex<double> inner_product(const Statevector& a, const Statevector& b);

/// Multinomial Born-rule sample. X-basis sampling pre-rotates every qubit by
/// RY(-pi/2) so X eigenstates map onto the computational basis.
MeasurementRecord sample_counts(const Statevector& state, Basis basis,
                                std::uint64_t shots, std::uint64_t seed);

/// Relabel qubits: site i of the input becomes site perm[i] of the output.
Statevector permute_qubits(const Statevector& state, const std::vector<int>& perm);

/// Exact (shot-free) expectation value.
double expectation(const Statevector& state, const PauliSum& obs);

/// obs |state>, used by the perturbative sums.
Statevector apply_pauli_sum(const Statevector& state, const PauliSum& obs);

/// Cyclic shift permutation i -> (i + k) mod n.
std::vector<int> shift_permutation(int n, int k);

}  // namespace phasescope
