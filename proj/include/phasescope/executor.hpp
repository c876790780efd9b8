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
#include <span>

#include "phasescope/engine.hpp"
#include "phasescope/noise.hpp"
#include "phasescope/records.hpp"

namespace phasescope {

/// Shot-producing backend. `meas_xframe` is an X layer applied right before
/// readout: outcome bits under the mask are flipped before any readout noise.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual MeasurementRecord execute(const Circuit& circuit,
                                    std::span<const double> params, Basis basis,
                                    std::uint64_t shots, std::uint64_t seed,
                                    std::uint64_t meas_xframe = 0) = 0;
};

/// Noise-free sampling straight from the statevector.
class IdealExecutor : public Executor {
 public:
  MeasurementRecord execute(const Circuit& circuit,
                            std::span<const double> params, Basis basis,
                            std::uint64_t shots, std::uint64_t seed,
                            std::uint64_t meas_xframe = 0) override;
};

/// Trajectory simulation under a NoiseModel.
class NoisyExecutor : public Executor {
 public:
  explicit NoisyExecutor(NoiseModel model) : model_(std::move(model)) {}
  MeasurementRecord execute(const Circuit& circuit,
                            std::span<const double> params, Basis basis,
                            std::uint64_t shots, std::uint64_t seed,
                            std::uint64_t meas_xframe = 0) override;
  const NoiseModel& model() const { return model_; }

 private:
  NoiseModel model_;
};

/// Wraps another executor and compiles one random Pauli frame per CNOT into
/// the circuit before every execution (frame derived from the call seed).
class TwirlingExecutor : public Executor {
 public:
  explicit TwirlingExecutor(Executor& inner) : inner_(inner) {}
  MeasurementRecord execute(const Circuit& circuit,
                            std::span<const double> params, Basis basis,
                            std::uint64_t shots, std::uint64_t seed,
                            std::uint64_t meas_xframe = 0) override;

 private:
  Executor& inner_;
};

}  // namespace phasescope
