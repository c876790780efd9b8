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

#include <cstdint>
#include <vector>

#include "phasescope/engine.hpp"
#include "phasescope/records.hpp"

namespace phasescope {

/// Independent per-qubit readout confusion. p01 is the probability of reading
/// 1 given a true 0; p10 of reading 0 given a true 1. Both must stay below
/// 0.5 so the twirl-diagonalized map remains invertible.
struct ConfusionModel {
  std::vector<double> p01;
  std::vector<double> p10;

  static ConfusionModel ideal(int num_qubits);
  static ConfusionModel uniform(int num_qubits, double p01, double p10);
  void validate(int num_qubits) const;
};

/// Stochastic device model: after every CNOT a deterministic ZZ over-rotation
/// of angle `cnot_coherent_angle`, then with probability `cnot_pauli_error` a
/// uniformly random non-identity two-qubit Pauli; classical readout bits are
/// flipped per the ConfusionModel. Single-qubit gates are ideal.
struct NoiseModel {
  double cnot_pauli_error = 0.01;
  double cnot_coherent_angle = 0.02;
  ConfusionModel readout;

  static NoiseModel defaults(int num_qubits);
  static NoiseModel ideal(int num_qubits);
  void validate(int num_qubits) const;
};

/// Trajectory execution of a bound-or-parameterized circuit under `noise`.
/// Shots sharing a Pauli-fault pattern are batched; the outcome distribution
/// is identical to per-shot simulation. Deterministic for a fixed seed.
/// `meas_xframe` applies an X layer immediately before readout (i.e. flips
/// those outcome bits before confusion noise); callers doing measurement
/// twirling un-flip in post-processing.
MeasurementRecord noisy_execute(const Circuit& circuit,
                                std::span<const double> params,
                                const NoiseModel& noise, Basis basis,
                                std::uint64_t shots, std::uint64_t seed,
                                std::uint64_t meas_xframe = 0);

/// Twirl frame for one CNOT occurrence: the input Pauli pair (on control and
/// target) and the conjugated pair compiled in after the gate.
struct CnotFrame {
  char in_control = 'I', in_target = 'I';
  char out_control = 'I', out_target = 'I';
};

/// Build the frame for a given input pair; the output pair is the CNOT
/// conjugate, so the framed gate is logically the bare CNOT.
CnotFrame make_cnot_frame(char in_control, char in_target);

/// All 16 frames, one per input Pauli pair.
std::vector<CnotFrame> all_cnot_frames();

/// Compile `frames[k]` around the k-th CNOT of the circuit as single-qubit
/// gates. The framed circuit's unitary equals the input's up to global phase.
Circuit apply_pauli_frame(const Circuit& circuit,
                          const std::vector<CnotFrame>& frames);

/// One random frame per CNOT, drawn uniformly from all 16 input pairs.
std::vector<CnotFrame> random_cnot_frames(int cnot_count, std::uint64_t seed);

}  // namespace phasescope
