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

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "phasescope/engine.hpp"
#include "phasescope/pauli.hpp"

namespace phasescope {

enum class Boundary { Open, Periodic };

inline const char* boundary_name(Boundary b) {
  return b == Boundary::Open ? "open" : "periodic";
}

/// Spin-chain couplings: nearest-neighbor ferromagnetic ZZ of strength j1,
/// next-nearest antiferromagnetic ZZ of strength j2, transverse field bx.
struct ModelParams {
  int num_sites = 0;
  double j1 = 1.0;
  double j2 = 0.0;
  double bx = 0.0;
  Boundary boundary = Boundary::Open;

  void validate() const;
};

struct SpectrumResult {
  std::vector<double> energies;      // ascending
  std::vector<Statevector> states;   // matching orthonormal eigenvectors
  int ground_degeneracy = 1;
  double degeneracy_tol = 0.0;
};

/// -j1 sum Z_i Z_{i+1} + j2 sum Z_i Z_{i+2} + bx sum X_i.
/// Open boundaries truncate the sums at the chain end; periodic wraps mod N.
PauliSum build_hamiltonian(const ModelParams& mp);

/// The next-nearest-neighbor sum with unit coefficients (dH/dJ2).
PauliSum build_ha(const ModelParams& mp);

/// Dense real-symmetric matrix of a {I,X,Z}-letter PauliSum.
Eigen::MatrixXd to_dense(const PauliSum& sum);

/// Dense eigensolve, lowest `num_states` pairs (all states if negative).
/// degeneracy_tol < 0 selects the default 1e-8 * max(1, |E0|).
SpectrumResult exact_diagonalize(const ModelParams& mp, int num_states = -1,
                                 double degeneracy_tol = -1.0);

/// sum_{n != 0} |<n|ha|0>|^2 / (E_n - E_0)^2. Requires a non-degenerate
/// ground state and a spectrum that retains all states.
double perturbative_chi(const SpectrumResult& spec, const PauliSum& ha);

/// 2 sum_{n != 0} |<n|ha|0>|^2 / (E_n - E_0): the magnitude of the energy
/// curvature along J2. The exact second derivative of E_0 is the negative of
/// this nonnegative sum; callers comparing against finite differences should
/// compare magnitudes.
double second_derivative(const SpectrumResult& spec, const PauliSum& ha);

}  // namespace phasescope
