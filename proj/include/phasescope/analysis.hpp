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

#include <optional>
#include <string>
#include <vector>

#include "phasescope/executor.hpp"
#include "phasescope/model.hpp"
#include "phasescope/pauli.hpp"

namespace phasescope {

/// One Hamiltonian symmetry, realized either as a Pauli layer or as a qubit
/// relabeling (cyclic shift, periodic chains only).
struct SymmetryAction {
  enum class Kind { Identity, PauliLayer, Shift };
  Kind kind = Kind::Identity;
  std::string label = "I";
  std::string pauli_letters;  // PauliLayer: one letter per qubit
  int shift = 0;              // Shift: sites move i -> (i + shift) mod N
};

struct SymmetryGroup {
  int num_qubits = 0;
  std::vector<SymmetryAction> actions;  // identity always included
};

/// Identity + global flip X^N, plus all cyclic shifts for periodic chains.
/// For N <= 10 every action is checked to commute with `hamiltonian`
/// (dense commutator norm < 1e-10).
SymmetryGroup make_symmetry_group(int num_qubits, Boundary boundary,
                                  const PauliSum& hamiltonian);

Statevector apply_symmetry(const SymmetryAction& action, const Statevector& s);

/// N x N symmetric matrix of <sigma_i sigma_j> with unit diagonal.
struct CorrelationMatrix {
  Basis basis = Basis::Z;
  int num_sites = 0;
  std::vector<double> values;   // row-major
  std::vector<double> stderr_;  // row-major, zeros for exact computation

  double& at(int i, int j) { return values[i * num_sites + j]; }
  double at(int i, int j) const { return values[i * num_sites + j]; }
};

CorrelationMatrix correlation_matrix(const MeasurementRecord& record);
CorrelationMatrix correlation_matrix_exact(const Statevector& state, Basis basis);

/// Divide every off-diagonal entry by c_i * c_j (readout attenuation).
CorrelationMatrix correct_correlations(const CorrelationMatrix& m,
                                       const std::vector<double>& c);

/// Cyclic relabeling k minimizing the summed squared difference to `ref`
/// (ties to smallest k). Open-boundary inputs return k = 0 unchanged.
std::pair<CorrelationMatrix, int> align_correlations(const CorrelationMatrix& ref,
                                                     const CorrelationMatrix& cur,
                                                     Boundary boundary);

/// Hellmann-Feynman derivative dE/dJ2 = <H_A> from Z-basis records.
std::pair<double, double> energy_derivative(const PauliSum& ha,
                                            const std::vector<MeasurementRecord>& records);
double energy_derivative_exact(const Statevector& state, const PauliSum& ha);

struct OverlapEstimate {
  double survival = 0;  // all-zeros outcome fraction
  double stderr_ = 0;
};

/// Bound circuit realizing C(paramsB)^dag * U * C(paramsA) for the survival
/// test; shift actions are compiled as a relabeling of the inverse half.
Circuit overlap_circuit(const Circuit& circA, std::span<const double> paramsA,
                        const Circuit& circB, std::span<const double> paramsB,
                        const SymmetryAction& action);

/// Survival probability of |0...0> from a Z-basis record of the compound
/// overlap circuit; estimates |<Psi_B|U|Psi_A>|^2.
OverlapEstimate survival_estimate(const MeasurementRecord& record);

/// Survival probability of |0...0> after C(paramsA), the symmetry action,
/// then the inverse of C(paramsB); estimates |<Psi_B|U|Psi_A>|^2.
OverlapEstimate fidelity_overlap(const Circuit& circA, std::span<const double> paramsA,
                                 const Circuit& circB, std::span<const double> paramsB,
                                 const SymmetryAction& action, Executor& executor,
                                 std::uint64_t shots, std::uint64_t seed);

struct FsEstimate {
  double chi = 0;
  double stderr_ = 0;
  std::string generator = "I";  // argmax action label
};

/// Generator-aligned fidelity susceptibility between two prepared solutions:
/// 1 - max over the group of the overlap magnitude sqrt(survival).
FsEstimate practical_fs(const Circuit& circA, std::span<const double> paramsA,
                        const Circuit& circB, std::span<const double> paramsB,
                        const SymmetryGroup& group, Executor& executor,
                        std::uint64_t shots, std::uint64_t seed);

/// Per-scan-point observable bundle.
struct ScanRecord {
  ModelParams mp;
  double energy = 0, energy_err = 0;
  double deriv = 0, deriv_err = 0;
  std::optional<CorrelationMatrix> zz;
  std::optional<CorrelationMatrix> xx;
  // Fidelity susceptibility to the next scan point, reported at the midpoint.
  std::optional<double> chi, chi_err;
  std::string chi_generator;
  int align_shift = 0;
  std::vector<std::string> flags;
};

struct TransitionInterval {
  double lo = 0, hi = 0;
  std::vector<std::string> evidence;  // subset of {"fs", "derivative", "correlation"}
};

/// Robust peak flagging: an interval is reported when its chi exceeds
/// median + t_fs * MAD, or the derivative step |d_{k+1} - d_k| exceeds its
/// own robust threshold; aligned-correlation block changes are attached as
/// supporting evidence.
std::vector<TransitionInterval> detect_transitions(const std::vector<ScanRecord>& scan,
                                                   double t_fs = 5.0,
                                                   double t_deriv = 5.0);

}  // namespace phasescope
