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
#include <map>
#include <string>

namespace phasescope {

enum class Basis { Z, X };

inline const char* basis_name(Basis b) { return b == Basis::Z ? "Z" : "X"; }

/// One batch of shots in a single measurement basis.
///
/// Outcomes are little-endian: bit k of an outcome integer is the measured
/// value of qubit k. `counts` maps outcome -> number of shots that produced it.
struct MeasurementRecord {
  Basis basis = Basis::Z;
  int num_qubits = 0;
  std::uint64_t shots = 0;
  std::map<std::uint64_t, std::uint64_t> counts;

  // Provenance metadata.
  std::string circuit_id;
  int frame_id = -1;              // twirl instantiation index, -1 if untwirled
  std::uint64_t meas_xframe = 0;  // X-layer mask applied before measurement
  int noise_scale = 1;            // ZNE folding factor lambda
  std::uint64_t seed = 0;

  std::uint64_t total_counts() const {
    std::uint64_t t = 0;
    for (const auto& [k, v] : counts) t += v;
    return t;
  }
};

}  // namespace phasescope
