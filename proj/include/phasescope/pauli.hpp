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
#include <string>
#include <utility>
#include <vector>

#include "phasescope/records.hpp"

namespace phasescope {

/// A weighted Pauli string. `letters[k]` is the operator acting on qubit k,
/// one of 'I', 'X', 'Y', 'Z'. Coefficients are real throughout.
struct PauliTerm {
  std::string letters;
  double coefficient = 1.0;

  int num_qubits() const { return static_cast<int>(letters.size()); }
};

/// Canonical weighted sum of Pauli strings: terms merged by letter sequence
/// and sorted lexicographically, near-zero coefficients dropped.
struct PauliSum {
  int num_qubits = 0;
  std::vector<PauliTerm> terms;

  static PauliSum from_terms(int num_qubits, std::vector<PauliTerm> raw);

  /// Text form: one `<coeff> <letters>` line per term.
  std::string to_text() const;
  static PauliSum parse(const std::string& text);
};

struct PauliProduct {
  std::complex<double> phase;  // one of +1, -1, +i, -i
  PauliTerm term;
};

/// Qubit-wise product a*b with the accumulated phase pulled out.
/// The returned term carries coefficient a.coefficient * b.coefficient.
PauliProduct multiply(const PauliTerm& a, const PauliTerm& b);

/// CNOT * t * CNOT. The result is again a Pauli string; the conjugation
/// sign is absorbed into the coefficient.
PauliTerm conjugate_by_cnot(const PauliTerm& t, int control, int target);

/// Parity estimate of a single term over matching-basis records.
/// Returns (mean, stderr) of (-1)^popcount(outcome & support-mask).
std::pair<double, double> term_parity(const PauliTerm& term,
                                      const std::vector<MeasurementRecord>& records);

/// Estimate <obs> from bitstring counts. Terms containing only {I,Z} are read
/// from Z-basis records, only {I,X} from X-basis records; mixed terms are
/// rejected. The stderr is the empirical deviation of the per-shot weighted
/// sum within each basis group, which keeps the covariance between terms
/// estimated from the same shots; independent basis groups combine in
/// quadrature.
std::pair<double, double> expectation_from_counts(
    const PauliSum& obs, const std::vector<MeasurementRecord>& records);

}  // namespace phasescope
