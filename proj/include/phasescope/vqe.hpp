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

#include <functional>
#include <string>
#include <vector>

#include "phasescope/engine.hpp"
#include "phasescope/model.hpp"

namespace phasescope {

struct AnsatzSpec {
  int num_qubits = 0;
  int layers = 1;
  Boundary boundary = Boundary::Open;

  /// One RY row per qubit before and after each CNOT round, plus the closing
  /// row: N * (2 * layers + 1) rotation slots.
  int num_params() const { return num_qubits * (2 * layers + 1); }
};

/// Layered real-amplitude ansatz. Each layer is: RY row on all qubits, CNOT
/// round on even bonds (0,1)(2,3)..., RY row, CNOT round on odd bonds
/// (1,2)(3,4)...; a final RY row closes the circuit. Periodic boundaries add
/// the wrap bond (N-1, 0) to the round whose parity matches N-1.
Circuit build_ansatz(const AnsatzSpec& spec);

double energy_cost(const Circuit& circuit, std::span<const double> params,
                   const PauliSum& hamiltonian);

/// 1 - |<target|C(params)|0>|^2 (minimization form).
double overlap_cost(const Circuit& circuit, std::span<const double> params,
                    const Statevector& target);

/// Symmetry-broken representative of the ground space: project the dominant
/// Z-basis component's basis state onto the span of the (near-)degenerate
/// ground states and renormalize. Falls back to the lowest-index basis state
/// when amplitudes give no preference.
Statevector desymmetrize_target(const SpectrumResult& spec,
                                double near_degeneracy_tol = 1e-6);

using CostFn = std::function<double(const std::vector<double>&)>;

/// Analytic gradient via the parameter-shift rule:
/// g_k = [C(phi_k + pi/2) - C(phi_k - pi/2)] / 2.
std::vector<double> parameter_shift_gradient(const CostFn& cost,
                                             const std::vector<double>& params);

struct OptimizeOptions {
  double grad_tol = 1e-6;
  int max_iters = 5000;
  double init_step = 0.5;
};

struct OptimizeReport {
  std::vector<double> final_params;
  double final_cost = 0;
  std::vector<double> cost_history;
  bool converged = false;
  std::string cost_kind = "energy";
};

/// Gradient descent with parameter-shift gradients and backtracking line
/// search; stops when the gradient norm drops below grad_tol.
OptimizeReport optimize(const CostFn& cost, std::vector<double> initial,
                        const OptimizeOptions& opts = {});

struct ScanStrategy {
  AnsatzSpec ansatz;
  std::uint64_t seed = 1;
  OptimizeOptions opts;
  int restarts = 2;            // extra fresh starts per point, best kept
  int bootstrap_min_sites = 12;  // overlap-bootstrap at and above this size
};

struct ScanPointResult {
  ModelParams mp;
  OptimizeReport report;
  bool ok = false;
  std::string error;
};

/// Warm-start chained optimization across a parameter grid. Every point also
/// tries a product start seeded by the classical (diagonal) minimum plus
/// `restarts` random starts, keeping the best result; a backward refinement
/// sweep then re-optimizes each point from its right neighbor so the whole
/// scan settles into one parameter representation. Points at or above
/// bootstrap_min_sites first maximize overlap with the desymmetrized exact
/// ground state, then switch the cost back to the energy.
std::vector<ScanPointResult> scan_optimize(const std::vector<ModelParams>& grid,
                                           const ScanStrategy& strategy);

}  // namespace phasescope
