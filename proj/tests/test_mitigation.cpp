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

#include <doctest.h>

#include <cmath>

#include "phasescope/mitigation.hpp"
#include "phasescope/model.hpp"

using namespace phasescope;

namespace {

constexpr double kPi = 3.14159265358979323846;

NoiseModel readout_only(int n, double p01, double p10) {
  NoiseModel nm = NoiseModel::ideal(n);
  nm.readout = ConfusionModel::uniform(n, p01, p10);
  return nm;
}

Circuit bell_pair() {
  Circuit c;
  c.num_qubits = 2;
  c.append(Gate::ry(0, kPi / 2));
  c.append(Gate::cnot(0, 1));
  return c;
}

}  // namespace

TEST_CASE("calibration is exactly unity for an ideal executor") {
  IdealExecutor ideal;
  TrexCalibration cal = trex_calibrate(ideal, 3, 4096, 1);
  REQUIRE(cal.c.size() == 3);
  for (double c : cal.c) CHECK(c == doctest::Approx(1.0));
  CHECK_FALSE(cal.low_confidence);
}

TEST_CASE("calibration recovers 1 - p01 - p10 under readout noise") {
  NoisyExecutor noisy(readout_only(3, 0.03, 0.07));
  TrexCalibration cal = trex_calibrate(noisy, 3, 200000, 5);
  for (int q = 0; q < 3; ++q) {
    CHECK(std::abs(cal.c[q] - 0.9) < 4 * cal.c_err[q]);
    CHECK(cal.c_err[q] < 0.01);
  }
}

TEST_CASE("calibration balances frames even for odd twirl counts") {
  NoisyExecutor noisy(readout_only(2, 0.0, 0.4));
  // Strongly asymmetric confusion exposes any frame imbalance.
  TrexCalibration cal = trex_calibrate(noisy, 2, 400000, 3, 8);
  for (int q = 0; q < 2; ++q) CHECK(std::abs(cal.c[q] - 0.6) < 4 * cal.c_err[q]);
}

TEST_CASE("trex_execute splits shots and archives frames") {
  IdealExecutor ideal;
  auto records = trex_execute(bell_pair(), {}, ideal, Basis::Z, 1003, 4, 9);
  REQUIRE(records.size() == 4);
  std::uint64_t total = 0;
  for (const auto& r : records) {
    total += r.total_counts();
    CHECK(r.frame_id >= 0);
  }
  CHECK(total == 1003);
  CHECK(records[0].total_counts() == 251);  // remainder goes to early frames
  CHECK(records[3].total_counts() == 250);
}

TEST_CASE("trex correction is unbiased under readout noise") {
  const PauliSum obs = PauliSum::parse("1.0 ZZ\n0.25 ZI");
  Circuit c = bell_pair();
  Statevector s = run(c);
  double truth = expectation(s, obs);

  NoisyExecutor noisy(readout_only(2, 0.02, 0.04));
  TrexCalibration cal = trex_calibrate(noisy, 2, 300000, 11);
  auto records = trex_execute(c, {}, noisy, Basis::Z, 300000, 16, 12);
  auto [corrected, err] = trex_correct(obs, records, cal);
  CHECK(std::abs(corrected - truth) < 4 * err);

  // The uncorrected estimate is attenuated well outside that band.
  auto [raw, raw_err] = expectation_from_counts(obs, records);
  CHECK(std::abs(raw - truth) > 8 * raw_err);
}

TEST_CASE("trex_correct rejects vanishing calibration factors") {
  TrexCalibration cal;
  cal.c = {1.0, 0.05};
  MeasurementRecord rec;
  rec.basis = Basis::Z;
  rec.num_qubits = 2;
  rec.shots = 4;
  rec.counts[0] = 4;
  CHECK_THROWS(trex_correct(PauliSum::parse("1.0 ZZ"), {rec}, cal));
}

TEST_CASE("fold_cnots repeats only CNOTs, odd factors only") {
  Circuit c = bell_pair();
  Circuit f3 = fold_cnots(c, 3);
  CHECK(f3.cnot_count() == 3);
  CHECK(f3.gates.size() == c.gates.size() + 2);
  CHECK_THROWS(fold_cnots(c, 2));
  CHECK_THROWS(fold_cnots(c, 0));
  // Odd folding is logically the identity.
  double ov = std::abs(inner_product(run(c), run(fold_cnots(c, 5))));
  CHECK(ov == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("folding amplifies incoherent noise monotonically") {
  Circuit c = bell_pair();
  NoiseModel nm = NoiseModel::ideal(2);
  nm.cnot_pauli_error = 0.05;
  PauliSum zz = PauliSum::parse("1.0 ZZ");
  double prev = 1.0;
  for (int lambda : {1, 3, 5}) {
    MeasurementRecord rec =
        noisy_execute(fold_cnots(c, lambda), {}, nm, Basis::Z, 200000, 31);
    auto [val, err] = expectation_from_counts(zz, {rec});
    CHECK(val < prev + 3 * err);
    prev = val;
  }
  CHECK(prev < 0.9);
}

TEST_CASE("zne_fit recovers exact exponential-model inputs") {
  std::vector<ZnePoint> pts;
  for (int l : {1, 3, 5}) pts.push_back({l, -1.7 * std::exp(-0.21 * l), 1e-9});
  ZneFit fit = zne_fit(pts);
  CHECK(fit.fit_kind == "exponential");
  CHECK(std::abs(fit.e0 + 1.7) / 1.7 < 1e-8);
  CHECK(std::abs(fit.a + 0.21) / 0.21 < 1e-8);
}

TEST_CASE("zne_fit keeps positive-sign data positive") {
  std::vector<ZnePoint> pts;
  for (int l : {1, 3, 5}) pts.push_back({l, 0.8 * std::exp(-0.3 * l), 1e-9});
  ZneFit fit = zne_fit(pts);
  CHECK(fit.e0 == doctest::Approx(0.8).epsilon(1e-8));
}

TEST_CASE("zne_fit falls back to linear on sign flips and flags it") {
  std::vector<ZnePoint> pts = {{1, 0.5, 0.01}, {3, -0.1, 0.01}, {5, -0.4, 0.01}};
  ZneFit fit = zne_fit(pts);
  CHECK(fit.fit_kind == "linear");
  CHECK(fit.e0 > 0.5);  // extrapolates the descending trend back past lambda=0
}

TEST_CASE("zne_fit needs two distinct folding factors") {
  std::vector<ZnePoint> pts = {{3, 0.5, 0.01}, {3, 0.52, 0.01}};
  CHECK_THROWS(zne_fit(pts));
}

TEST_CASE("zne stderr scales with the input uncertainty") {
  auto make = [](double sigma) {
    std::vector<ZnePoint> pts;
    for (int l : {1, 3, 5}) pts.push_back({l, std::exp(-0.2 * l), sigma});
    return zne_fit(pts);
  };
  ZneFit tight = make(1e-4);
  ZneFit loose = make(1e-2);
  CHECK(loose.e0_err > 50 * tight.e0_err);
}

TEST_CASE("weighted fit leans on the precise points") {
  // A wildly wrong but high-variance point barely moves the fit.
  std::vector<ZnePoint> clean = {{1, std::exp(-0.2), 1e-6},
                                 {3, std::exp(-0.6), 1e-6},
                                 {5, std::exp(-1.0), 10.0}};
  ZneFit fit = zne_fit(clean);
  CHECK(fit.e0 == doctest::Approx(1.0).epsilon(1e-3));
}
