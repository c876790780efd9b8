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
#include <complex>
#include <set>

#include "phasescope/executor.hpp"
#include "phasescope/noise.hpp"

using namespace phasescope;

namespace {

constexpr double kPi = 3.14159265358979323846;
using Cx = std::complex<double>;

double z_expectation(const MeasurementRecord& rec, int qubit) {
  double acc = 0;
  std::uint64_t total = 0;
  for (const auto& [b, n] : rec.counts) {
    acc += ((b >> qubit) & 1 ? -1.0 : 1.0) * double(n);
    total += n;
  }
  return acc / double(total);
}

}  // namespace

TEST_CASE("confusion model validation") {
  CHECK_NOTHROW(ConfusionModel::uniform(3, 0.0, 0.49).validate(3));
  CHECK_THROWS(ConfusionModel::uniform(3, 0.5, 0.1).validate(3));
  CHECK_THROWS(ConfusionModel::uniform(3, 0.1, -0.01).validate(3));
  CHECK_THROWS(ConfusionModel::uniform(2, 0.1, 0.1).validate(3));
  ConfusionModel ideal = ConfusionModel::ideal(4);
  for (double p : ideal.p01) CHECK(p == 0.0);
}

TEST_CASE("noise model defaults carry the documented rates") {
  NoiseModel nm = NoiseModel::defaults(5);
  CHECK(nm.cnot_pauli_error == doctest::Approx(0.01));
  CHECK(nm.cnot_coherent_angle == doctest::Approx(0.02));
  CHECK(nm.readout.p01[0] == doctest::Approx(0.02));
  CHECK(nm.readout.p10[0] == doctest::Approx(0.04));
  CHECK_NOTHROW(nm.validate(5));
  CHECK_THROWS(nm.validate(4));
}

TEST_CASE("noisy_execute with an ideal model reproduces Born statistics") {
  Circuit c;
  c.num_qubits = 2;
  c.append(Gate::ry(0, 2 * std::acos(std::sqrt(0.7))));
  c.append(Gate::cnot(0, 1));
  NoiseModel ideal = NoiseModel::ideal(2);
  MeasurementRecord rec = noisy_execute(c, {}, ideal, Basis::Z, 200000, 5);
  // Only |00> and |11> appear; P(11) = 0.3.
  for (const auto& [b, n] : rec.counts) CHECK((b == 0 || b == 3));
  CHECK(double(rec.counts[3]) / 200000.0 == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("noisy_execute is deterministic per seed") {
  Circuit c;
  c.num_qubits = 3;
  c.append(Gate::ry(0, 0.9));
  c.append(Gate::cnot(0, 1));
  c.append(Gate::cnot(1, 2));
  NoiseModel nm = NoiseModel::defaults(3);
  MeasurementRecord a = noisy_execute(c, {}, nm, Basis::Z, 5000, 77);
  MeasurementRecord b = noisy_execute(c, {}, nm, Basis::Z, 5000, 77);
  MeasurementRecord d = noisy_execute(c, {}, nm, Basis::Z, 5000, 78);
  CHECK(a.counts == b.counts);
  CHECK(a.counts != d.counts);
}

TEST_CASE("readout-only noise flips bits at the confusion rates") {
  Circuit c;
  c.num_qubits = 2;  // stays in |00>
  NoiseModel nm = NoiseModel::ideal(2);
  nm.readout = ConfusionModel::uniform(2, 0.1, 0.3);
  MeasurementRecord rec = noisy_execute(c, {}, nm, Basis::Z, 200000, 9);
  // True bit is 0 everywhere, so each measured bit is 1 w.p. p01 = 0.1.
  for (int q = 0; q < 2; ++q) {
    double ones = 0;
    for (const auto& [b, n] : rec.counts)
      if ((b >> q) & 1) ones += double(n);
    CHECK(ones / 200000.0 == doctest::Approx(0.1).epsilon(0.05));
  }
}

TEST_CASE("meas_xframe flips outcome bits before readout noise") {
  Circuit c;
  c.num_qubits = 3;
  NoiseModel ideal = NoiseModel::ideal(3);
  MeasurementRecord rec = noisy_execute(c, {}, ideal, Basis::Z, 100, 1, 0b101);
  REQUIRE(rec.counts.size() == 1);
  CHECK(rec.counts.at(0b101) == 100);
  CHECK(rec.meas_xframe == 0b101);
}

TEST_CASE("coherent ZZ over-rotation matches a dense oracle") {
  // One CNOT on |+->: apply the oracle ZZ(eps) by hand to the exact state
  // and compare X-basis statistics.
  const double eps = 0.3;
  Circuit c;
  c.num_qubits = 2;
  c.append(Gate::ry(0, kPi / 2));
  c.append(Gate::ry(1, -kPi / 2));
  c.append(Gate::cnot(0, 1));
  NoiseModel nm = NoiseModel::ideal(2);
  nm.cnot_coherent_angle = eps;

  Statevector oracle = run(c);
  const Cx i(0, 1);
  for (std::uint64_t b = 0; b < 4; ++b) {
    int par = ((b & 1) ^ ((b >> 1) & 1)) ? -1 : 1;
    oracle.amps[b] *= std::exp(-i * (eps / 2) * double(par));
  }
  MeasurementRecord noisy = noisy_execute(c, {}, nm, Basis::X, 400000, 21);
  MeasurementRecord exact = sample_counts(oracle, Basis::X, 400000, 22);
  for (std::uint64_t b = 0; b < 4; ++b) {
    double pn = double(noisy.counts[b]) / 400000.0;
    double pe = double(exact.counts[b]) / 400000.0;
    CHECK(pn == doctest::Approx(pe).epsilon(0.05));
  }
}

TEST_CASE("certain Pauli faults scramble a single CNOT as predicted") {
  // p2 = 1: every shot gets one uniform non-identity two-qubit Pauli after
  // the CNOT. On |00> only the X components flip measured bits, so the
  // outcome distribution is computable by enumerating the 15 faults.
  Circuit c;
  c.num_qubits = 2;
  c.append(Gate::cnot(0, 1));
  NoiseModel nm = NoiseModel::ideal(2);
  nm.cnot_pauli_error = 1.0;
  MeasurementRecord rec = noisy_execute(c, {}, nm, Basis::Z, 150000, 13);

  // Faults IX,IY,IZ,...,ZZ: bit q flips when letter q is X or Y.
  std::map<std::uint64_t, double> expected;
  const std::string letters = "IXYZ";
  for (char l0 : letters)
    for (char l1 : letters) {
      if (l0 == 'I' && l1 == 'I') continue;
      std::uint64_t out = 0;
      if (l0 == 'X' || l0 == 'Y') out |= 1;
      if (l1 == 'X' || l1 == 'Y') out |= 2;
      expected[out] += 1.0 / 15.0;
    }
  for (const auto& [b, p] : expected)
    CHECK(double(rec.counts[b]) / 150000.0 == doctest::Approx(p).epsilon(0.05));
}

TEST_CASE("all 16 cnot twirl frames are distinct and self-consistent") {
  std::vector<CnotFrame> frames = all_cnot_frames();
  REQUIRE(frames.size() == 16);
  std::set<std::pair<char, char>> inputs;
  for (const auto& f : frames) inputs.insert({f.in_control, f.in_target});
  CHECK(inputs.size() == 16);
  for (const auto& f : frames) {
    PauliTerm in{std::string{f.in_control, f.in_target}, 1.0};
    PauliTerm conj = conjugate_by_cnot(in, 0, 1);
    CHECK(conj.letters == std::string{f.out_control, f.out_target});
  }
}

TEST_CASE("framed circuits realize the same unitary up to global phase") {
  Circuit c;
  c.num_qubits = 3;
  c.append(Gate::ry(0, 0.4));
  c.append(Gate::cnot(0, 1));
  c.append(Gate::ry(2, 1.3));
  c.append(Gate::cnot(1, 2));
  c.append(Gate::ry(1, -0.8));
  for (const CnotFrame& f0 : all_cnot_frames()) {
    Circuit framed = apply_pauli_frame(c, {f0, make_cnot_frame('Y', 'Z')});
    double ov = std::abs(inner_product(run(c), run(framed)));
    CHECK(ov == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("apply_pauli_frame demands one frame per CNOT") {
  Circuit c;
  c.num_qubits = 2;
  c.append(Gate::cnot(0, 1));
  CHECK_THROWS(apply_pauli_frame(c, {}));
}

TEST_CASE("random frames are deterministic in the seed") {
  auto a = random_cnot_frames(10, 3);
  auto b = random_cnot_frames(10, 3);
  REQUIRE(a.size() == 10);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].in_control == b[i].in_control);
    CHECK(a[i].in_target == b[i].in_target);
  }
}

TEST_CASE("executors: ideal, noisy, twirling") {
  Circuit c;
  c.num_qubits = 2;
  c.append(Gate::ry(0, kPi / 2));
  c.append(Gate::cnot(0, 1));

  IdealExecutor ideal;
  MeasurementRecord ri = ideal.execute(c, {}, Basis::Z, 100000, 3);
  CHECK(double(ri.counts[0]) / 100000.0 == doctest::Approx(0.5).epsilon(0.05));

  NoisyExecutor noisy(NoiseModel::defaults(2));
  MeasurementRecord rn = noisy.execute(c, {}, Basis::Z, 100000, 3);
  CHECK(rn.total_counts() == 100000);

  // Twirling leaves ideal statistics unchanged (frames compile to identity).
  TwirlingExecutor twirled(ideal);
  MeasurementRecord rt = twirled.execute(c, {}, Basis::Z, 100000, 4);
  CHECK(double(rt.counts[0]) / 100000.0 == doctest::Approx(0.5).epsilon(0.05));
  for (const auto& [b, n] : rt.counts) CHECK((b == 0 || b == 3));
}

TEST_CASE("ideal executor applies the measurement X frame") {
  Circuit c;
  c.num_qubits = 2;
  IdealExecutor ideal;
  MeasurementRecord rec = ideal.execute(c, {}, Basis::Z, 50, 1, 0b10);
  REQUIRE(rec.counts.size() == 1);
  CHECK(rec.counts.at(0b10) == 50);
}
