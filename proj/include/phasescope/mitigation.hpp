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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "phasescope/executor.hpp"
#include "phasescope/pauli.hpp"

namespace phasescope {

/// Per-qubit Z-readout attenuation as seen through the twirled (symmetrized)
/// readout channel: c_i = 1 - p01_i - p10_i.
struct TrexCalibration {
  std::vector<double> c;
  std::vector<double> c_err;
  std::uint64_t shots = 0;
  bool low_confidence = false;
  std::string tag;
};

TrexCalibration trex_calibrate(Executor& executor, int num_qubits,
                               std::uint64_t shots, std::uint64_t seed,
                               int num_twirls = 16);

/// Execute with a random {I,X}^N layer before measurement per instantiation;
/// frames come in complement pairs so each qubit is read flipped in half of
/// them. Outcome bits are un-flipped in post-processing and the frame
/// recorded. Shots are split evenly, remainder to the earliest frames.
std::vector<MeasurementRecord> trex_execute(const Circuit& circuit,
                                            std::span<const double> params,
                                            Executor& executor, Basis basis,
                                            std::uint64_t shots, int num_twirls,
                                            std::uint64_t seed);

/// Estimate <obs> with each term's parity divided by the product of the
/// calibration factors over its support; stderr scaled accordingly.
std::pair<double, double> trex_correct(const PauliSum& obs,
                                       const std::vector<MeasurementRecord>& records,
                                       const TrexCalibration& cal);

/// Replace every CNOT with `lambda` consecutive CNOTs (lambda odd).
Circuit fold_cnots(const Circuit& circuit, int lambda);

struct ZnePoint {
  int lambda = 1;
  double estimate = 0;
  double stderr_ = 0;
};

struct ZneFit {
  std::vector<ZnePoint> points;
  double e0 = 0;       // extrapolated value at lambda = 0
  double e0_err = 0;   // delta-method stderr of e0
  double a = 0;        // decay rate of the exponential model
  std::array<std::array<double, 2>, 2> covariance{};  // over (log|e0|, a)
  std::string fit_kind = "exponential";  // or "linear" fallback
};

/// Weighted least squares of log|E| vs lambda for the model E0 * exp(a*l).
/// Sign-inconsistent or zero estimates fall back to a weighted linear fit
/// and are flagged through fit_kind.
ZneFit zne_fit(const std::vector<ZnePoint>& points);

}  // namespace phasescope
