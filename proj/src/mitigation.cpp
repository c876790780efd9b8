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

#include "phasescope/mitigation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

namespace phasescope {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::map<std::uint64_t, std::uint64_t> unflip(
    const std::map<std::uint64_t, std::uint64_t>& counts, std::uint64_t mask) {
  std::map<std::uint64_t, std::uint64_t> out;
  for (const auto& [outcome, count] : counts) out[outcome ^ mask] += count;
  return out;
}

}  // namespace

TrexCalibration trex_calibrate(Executor& executor, int num_qubits,
                               std::uint64_t shots, std::uint64_t seed,
                               int num_twirls) {
  if (num_twirls < 1) throw std::invalid_argument("num_twirls must be >= 1");
  Circuit empty;
  empty.num_qubits = num_qubits;
  const std::uint64_t all = (std::uint64_t{1} << num_qubits) - 1;

  // Complement-paired masks keep the per-qubit frame balance exact, so the
  // pooled estimate targets c_i = 1 - p01_i - p10_i without frame bias.
  std::mt19937_64 rng(splitmix64(seed));
  std::vector<std::uint64_t> masks;
  for (int t = 0; t < num_twirls; ++t) {
    if (t % 2 == 0)
      masks.push_back(rng() & all);
    else
      masks.push_back(masks.back() ^ all);
  }

  std::vector<double> plus(num_qubits, 0.0);
  std::uint64_t total = 0;
  for (int t = 0; t < num_twirls; ++t) {
    std::uint64_t batch = shots / num_twirls +
                          (static_cast<std::uint64_t>(t) < shots % num_twirls ? 1 : 0);
    if (batch == 0) continue;
    MeasurementRecord rec = executor.execute(
        empty, {}, Basis::Z, batch, splitmix64(seed ^ (t + 1)), masks[t]);
    for (const auto& [outcome, count] : unflip(rec.counts, masks[t])) {
      total += count;
      for (int q = 0; q < num_qubits; ++q)
        if (!(outcome & (std::uint64_t{1} << q))) plus[q] += double(count);
    }
  }
  if (total == 0) throw std::invalid_argument("calibration received no shots");

  TrexCalibration cal;
  cal.shots = total;
  for (int q = 0; q < num_qubits; ++q) {
    double mean = (2.0 * plus[q] - double(total)) / double(total);
    double err = std::sqrt(std::max(0.0, 1.0 - mean * mean) / double(total));
    cal.c.push_back(mean);
    cal.c_err.push_back(err);
    if (err > 0.1) cal.low_confidence = true;
  }
  return cal;
}

std::vector<MeasurementRecord> trex_execute(const Circuit& circuit,
                                            std::span<const double> params,
                                            Executor& executor, Basis basis,
                                            std::uint64_t shots, int num_twirls,
                                            std::uint64_t seed) {
  if (num_twirls < 1) throw std::invalid_argument("num_twirls must be >= 1");
  const std::uint64_t all = (std::uint64_t{1} << circuit.num_qubits) - 1;
  std::mt19937_64 rng(splitmix64(seed ^ 0x7e11ULL));
  // Complement-paired frames, as in calibration: each qubit is read flipped
  // in exactly half the frames, so the effective readout channel matches the
  // symmetrized one the calibration factors describe. Unpaired random masks
  // leave a seed-dependent residual of the p01/p10 asymmetry.
  std::vector<std::uint64_t> masks;
  for (int t = 0; t < num_twirls; ++t) {
    if (t % 2 == 0)
      masks.push_back(rng() & all);
    else
      masks.push_back(masks.back() ^ all);
  }
  std::vector<MeasurementRecord> records;
  for (int t = 0; t < num_twirls; ++t) {
    std::uint64_t batch = shots / num_twirls +
                          (static_cast<std::uint64_t>(t) < shots % num_twirls ? 1 : 0);
    std::uint64_t mask = masks[t];
    if (batch == 0) continue;
    MeasurementRecord rec = executor.execute(circuit, params, basis, batch,
                                             splitmix64(seed ^ (0x100 + t)), mask);
    rec.counts = unflip(rec.counts, mask);
    rec.frame_id = t;
    rec.meas_xframe = mask;
    records.push_back(std::move(rec));
  }
  return records;
}

std::pair<double, double> trex_correct(const PauliSum& obs,
                                       const std::vector<MeasurementRecord>& records,
                                       const TrexCalibration& cal) {
  if (static_cast<int>(cal.c.size()) != obs.num_qubits)
    throw std::invalid_argument("calibration size mismatch");
  // Folding the calibration factors into the coefficients lets the shared
  // estimator account for covariance between terms read from the same shots.
  PauliSum scaled = obs;
  for (auto& t : scaled.terms) {
    for (int q = 0; q < obs.num_qubits; ++q) {
      if (t.letters[q] == 'I') continue;
      if (cal.c[q] < 0.1)
        throw std::invalid_argument(
            "calibration factor below 0.1; correction would over-amplify");
      t.coefficient /= cal.c[q];
    }
  }
  return expectation_from_counts(scaled, records);
}

Circuit fold_cnots(const Circuit& circuit, int lambda) {
  if (lambda < 1 || lambda % 2 == 0)
    throw std::invalid_argument("folding factor must be a positive odd integer");
  Circuit out;
  out.num_qubits = circuit.num_qubits;
  out.num_slots = circuit.num_slots;
  for (const auto& g : circuit.gates) {
    int reps = g.kind == Gate::Kind::Cnot ? lambda : 1;
    for (int r = 0; r < reps; ++r) out.gates.push_back(g);
  }
  return out;
}

ZneFit zne_fit(const std::vector<ZnePoint>& points) {
  std::vector<int> lambdas;
  for (const auto& p : points)
    if (std::find(lambdas.begin(), lambdas.end(), p.lambda) == lambdas.end())
      lambdas.push_back(p.lambda);
  if (lambdas.size() < 2)
    throw std::invalid_argument("zne_fit needs >= 2 distinct lambda values");

  ZneFit fit;
  fit.points = points;

  bool sign_ok = true;
  double sign = points[0].estimate > 0 ? 1.0 : -1.0;
  for (const auto& p : points)
    if (p.estimate == 0 || (p.estimate > 0 ? 1.0 : -1.0) != sign) sign_ok = false;

  // Weighted least squares of y = b0 + b1 * lambda.
  auto wls = [](const std::vector<double>& x, const std::vector<double>& y,
                const std::vector<double>& sig, double& b0, double& b1,
                double& var0, double& var1, double& cov01) {
    double s = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      double w = 1.0 / std::max(sig[i] * sig[i], 1e-24);
      s += w;
      sx += w * x[i];
      sy += w * y[i];
      sxx += w * x[i] * x[i];
      sxy += w * x[i] * y[i];
    }
    double det = s * sxx - sx * sx;
    b0 = (sxx * sy - sx * sxy) / det;
    b1 = (s * sxy - sx * sy) / det;
    var0 = sxx / det;
    var1 = s / det;
    cov01 = -sx / det;
  };

  std::vector<double> x, y, sig;
  double b0, b1, var0, var1, cov01;
  if (sign_ok) {
    for (const auto& p : points) {
      x.push_back(p.lambda);
      y.push_back(std::log(std::abs(p.estimate)));
      sig.push_back(p.stderr_ / std::abs(p.estimate));
    }
    wls(x, y, sig, b0, b1, var0, var1, cov01);
    fit.e0 = sign * std::exp(b0);
    fit.a = b1;
    fit.e0_err = std::abs(fit.e0) * std::sqrt(std::max(0.0, var0));
    fit.fit_kind = "exponential";
  } else {
    // Zero-crossing or sign-flipped estimates: flag and fit linearly.
    for (const auto& p : points) {
      x.push_back(p.lambda);
      y.push_back(p.estimate);
      sig.push_back(p.stderr_);
    }
    wls(x, y, sig, b0, b1, var0, var1, cov01);
    fit.e0 = b0;
    fit.a = b1;
    fit.e0_err = std::sqrt(std::max(0.0, var0));
    fit.fit_kind = "linear";
  }
  fit.covariance[0][0] = var0;
  fit.covariance[0][1] = fit.covariance[1][0] = cov01;
  fit.covariance[1][1] = var1;
  if (!std::isfinite(fit.e0) || !std::isfinite(fit.a))
    throw std::runtime_error("zne_fit produced a non-finite result");
  return fit;
}

}  // namespace phasescope
