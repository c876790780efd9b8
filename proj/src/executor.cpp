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

#include "phasescope/executor.hpp"

namespace phasescope {

MeasurementRecord IdealExecutor::execute(const Circuit& circuit,
                                         std::span<const double> params,
                                         Basis basis, std::uint64_t shots,
                                         std::uint64_t seed,
                                         std::uint64_t meas_xframe) {
  Statevector state = run(circuit, params);
  MeasurementRecord rec = sample_counts(state, basis, shots, seed);
  rec.meas_xframe = meas_xframe;
  if (meas_xframe != 0) {
    std::map<std::uint64_t, std::uint64_t> flipped;
    for (const auto& [outcome, count] : rec.counts)
      flipped[outcome ^ meas_xframe] += count;
    rec.counts = std::move(flipped);
  }
  return rec;
}

MeasurementRecord NoisyExecutor::execute(const Circuit& circuit,
                                         std::span<const double> params,
                                         Basis basis, std::uint64_t shots,
                                         std::uint64_t seed,
                                         std::uint64_t meas_xframe) {
  return noisy_execute(circuit, params, model_, basis, shots, seed, meas_xframe);
}

MeasurementRecord TwirlingExecutor::execute(const Circuit& circuit,
                                            std::span<const double> params,
                                            Basis basis, std::uint64_t shots,
                                            std::uint64_t seed,
                                            std::uint64_t meas_xframe) {
  auto frames = random_cnot_frames(circuit.cnot_count(), seed ^ 0x7f1e1ULL);
  Circuit framed = apply_pauli_frame(circuit, frames);
  return inner_.execute(framed, params, basis, shots, seed, meas_xframe);
}

}  // namespace phasescope
