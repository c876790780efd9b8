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
#include <random>

#include "phasescope/analysis.hpp"
#include "phasescope/vqe.hpp"

using namespace phasescope;

namespace {

constexpr double kPi = 3.14159265358979323846;

Circuit ghz_circuit(int n) {
  Circuit c;
  c.num_qubits = n;
  c.append(Gate::ry(0, kPi / 2));
  for (int q = 0; q + 1 < n; ++q) c.append(Gate::cnot(q, q + 1));
  return c;
}

Circuit all_up(int n) {
  Circuit c;
  c.num_qubits = n;
  return c;
}

Circuit all_down(int n) {
  Circuit c;
  c.num_qubits = n;
  for (int q = 0; q < n; ++q) c.append(Gate::x(q));
  return c;
}

const SymmetryAction* find_action(const SymmetryGroup& g, const std::string& label) {
  for (const auto& a : g.actions)
    if (a.label == label) return &a;
  return nullptr;
}

}  // namespace

TEST_CASE("symmetry group contents for open and periodic chains") {
  ModelParams open{6, 1.0, 0.3, 0.1, Boundary::Open};
  SymmetryGroup go = make_symmetry_group(6, Boundary::Open,
                                         build_hamiltonian(open));
  CHECK(go.actions.size() == 2);  // identity + global flip
  ModelParams per{6, 1.0, 0.3, 0.1, Boundary::Periodic};
  SymmetryGroup gp = make_symmetry_group(6, Boundary::Periodic,
                                         build_hamiltonian(per));
  CHECK(gp.actions.size() == 7);  // + 5 shifts
}

TEST_CASE("non-commuting actions are rejected by the dense check") {
  // A single-site Z field breaks both the global flip and the shifts.
  PauliSum bad = PauliSum::parse("1.0 ZIII");
  CHECK_THROWS(make_symmetry_group(4, Boundary::Open, bad));
  // A site-dependent X field keeps the flip but breaks translations.
  PauliSum xfield = PauliSum::parse("1.0 XIII\n2.0 IXII");
  CHECK_NOTHROW(make_symmetry_group(4, Boundary::Open, xfield));
  CHECK_THROWS(make_symmetry_group(4, Boundary::Periodic, xfield));
}

TEST_CASE("apply_symmetry acts as flip and shift") {
  SymmetryAction flip{SymmetryAction::Kind::PauliLayer, "X^N", "XXX", 0};
  Statevector s = apply_symmetry(flip, Statevector::zero_state(3));
  CHECK(std::abs(s.amps[7] - std::complex<double>(1, 0)) < 1e-15);

  SymmetryAction shift{SymmetryAction::Kind::Shift, "shift1", "", 1};
  Statevector b = apply_symmetry(shift, Statevector::basis_state(3, 0b001));
  CHECK(std::abs(b.amps[0b010] - std::complex<double>(1, 0)) < 1e-15);

  SymmetryAction full{SymmetryAction::Kind::Shift, "shift3", "", 3};
  Statevector same = apply_symmetry(full, Statevector::basis_state(3, 0b101));
  CHECK(std::abs(same.amps[0b101] - std::complex<double>(1, 0)) < 1e-15);
}

TEST_CASE("sampled correlations agree with the exact matrix") {
  Circuit c = ghz_circuit(4);
  Statevector s = run(c);
  CorrelationMatrix exact = correlation_matrix_exact(s, Basis::Z);
  MeasurementRecord rec = sample_counts(s, Basis::Z, 200000, 7);
  CorrelationMatrix sampled = correlation_matrix(rec);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double tol = i == j ? 1e-12 : 4 * sampled.stderr_[i * 4 + j] + 1e-9;
      CHECK(std::abs(sampled.at(i, j) - exact.at(i, j)) <= tol);
    }
  CHECK(exact.at(0, 3) == doctest::Approx(1.0));
  CHECK(sampled.at(2, 2) == 1.0);
}

TEST_CASE("X-basis correlations of the GHZ state") {
  Statevector s = run(ghz_circuit(3));
  CorrelationMatrix xx = correlation_matrix_exact(s, Basis::X);
  // <X_i X_j> = 0 on three-qubit GHZ (X X I flips relative phase content).
  CHECK(std::abs(xx.at(0, 1)) < 1e-12);
}

TEST_CASE("correct_correlations divides off-diagonals by c_i c_j") {
  CorrelationMatrix m;
  m.num_sites = 2;
  m.values = {1.0, 0.45, 0.45, 1.0};
  m.stderr_ = {0.0, 0.01, 0.01, 0.0};
  CorrelationMatrix out = correct_correlations(m, {0.9, 0.5});
  CHECK(out.at(0, 1) == doctest::Approx(1.0));
  CHECK(out.at(0, 0) == 1.0);
  CHECK(out.stderr_[1] == doctest::Approx(0.01 / 0.45));
  CHECK_THROWS(correct_correlations(m, {0.9}));
  CHECK_THROWS(correct_correlations(m, {0.05, 0.05}));
}

TEST_CASE("align_correlations recovers an injected relabeling") {
  const int n = 8;
  Statevector pattern = Statevector::basis_state(n, 0b00110011);
  CorrelationMatrix ref = correlation_matrix_exact(pattern, Basis::Z);
  for (int s = 0; s < 4; ++s) {
    Statevector shifted = permute_qubits(pattern, shift_permutation(n, s));
    CorrelationMatrix cur = correlation_matrix_exact(shifted, Basis::Z);
    auto [aligned, k] = align_correlations(ref, cur, Boundary::Periodic);
    // Shifting up-up-down-down by two sites flips every spin, which ZZ
    // correlations cannot see: only the shift parity is identifiable, and
    // ties resolve to the smallest representative.
    CHECK(k == s % 2);
    for (int e = 0; e < n * n; ++e)
      CHECK(aligned.values[e] == doctest::Approx(ref.values[e]));
  }
}

TEST_CASE("open-boundary alignment is the identity") {
  CorrelationMatrix ref;
  ref.num_sites = 3;
  ref.values = {1, 0.5, 0.2, 0.5, 1, 0.5, 0.2, 0.5, 1};
  ref.stderr_.assign(9, 0.0);
  CorrelationMatrix cur = ref;
  cur.values[1] = -0.5;
  auto [aligned, k] = align_correlations(ref, cur, Boundary::Open);
  CHECK(k == 0);
  CHECK(aligned.values == cur.values);
}

TEST_CASE("energy derivative estimators agree with the exact value") {
  ModelParams mp{6, 1.0, 0.4, 0.15, Boundary::Open};
  SpectrumResult sr = exact_diagonalize(mp, 1);
  PauliSum ha = build_ha(mp);
  double exact = energy_derivative_exact(sr.states[0], ha);
  MeasurementRecord rec = sample_counts(sr.states[0], Basis::Z, 300000, 3);
  auto [est, err] = energy_derivative(ha, {rec});
  CHECK(std::abs(est - exact) < 4 * err);
  CHECK(err > 0);
}

TEST_CASE("fidelity overlaps match statevector overlaps for every action") {
  const int n = 4;
  AnsatzSpec spec{n, 1, Boundary::Periodic};
  Circuit circ = build_ansatz(spec);
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> uni(-0.7, 0.7);
  std::vector<double> pa(spec.num_params()), pb(spec.num_params());
  for (auto& v : pa) v = uni(rng);
  for (auto& v : pb) v = uni(rng);

  ModelParams mp{n, 1.0, 0.3, 0.1, Boundary::Periodic};
  SymmetryGroup group =
      make_symmetry_group(n, Boundary::Periodic, build_hamiltonian(mp));
  Statevector sa = run(circ, pa), sb = run(circ, pb);
  IdealExecutor exec;
  for (const auto& action : group.actions) {
    double truth =
        std::norm(inner_product(sb, apply_symmetry(action, sa)));
    OverlapEstimate est =
        fidelity_overlap(circ, pa, circ, pb, action, exec, 200000, 5);
    CHECK(std::abs(est.survival - truth) < 4 * est.stderr_ + 1e-6);
  }
}

TEST_CASE("practical FS separates flipped and identical product states") {
  const int n = 4;
  ModelParams mp{n, 1.0, 0.3, 0.1, Boundary::Open};
  SymmetryGroup group =
      make_symmetry_group(n, Boundary::Open, build_hamiltonian(mp));
  IdealExecutor exec;
  std::vector<double> none;

  FsEstimate flipped = practical_fs(all_up(n), none, all_down(n), none, group,
                                    exec, 100000, 3);
  CHECK(flipped.chi < 4 * flipped.stderr_ + 1e-9);
  CHECK(flipped.generator == "X^N");

  FsEstimate same = practical_fs(all_up(n), none, all_up(n), none, group,
                                 exec, 100000, 4);
  CHECK(same.chi < 4 * same.stderr_ + 1e-9);
  CHECK(same.generator == "I");
}

TEST_CASE("practical FS gives 1 - 1/sqrt(2) between GHZ and a branch") {
  const int n = 4;
  ModelParams mp{n, 1.0, 0.3, 0.1, Boundary::Open};
  SymmetryGroup group =
      make_symmetry_group(n, Boundary::Open, build_hamiltonian(mp));
  IdealExecutor exec;
  std::vector<double> none;
  FsEstimate est = practical_fs(ghz_circuit(n), none, all_up(n), none, group,
                                exec, 400000, 9);
  double expected = 1.0 - 1.0 / std::sqrt(2.0);
  CHECK(std::abs(est.chi - expected) < 4 * est.stderr_);
}

TEST_CASE("detect_transitions flags a chi spike with supporting evidence") {
  std::vector<ScanRecord> scan;
  for (int k = 0; k < 9; ++k) {
    ScanRecord r;
    r.mp = {4, 1.0, 0.2 + 0.1 * k, 0.1, Boundary::Open};
    r.deriv = k < 5 ? 2.0 : -2.0;  // one step between k=4 and k=5
    if (k < 8) r.chi = (k == 4) ? 0.5 : 0.01 + 1e-4 * k;
    scan.push_back(r);
  }
  auto intervals = detect_transitions(scan);
  REQUIRE(intervals.size() == 1);
  CHECK(intervals[0].lo == doctest::Approx(0.6));
  CHECK(intervals[0].hi == doctest::Approx(0.7));
  bool has_fs = false, has_deriv = false;
  for (const auto& e : intervals[0].evidence) {
    if (e == "fs") has_fs = true;
    if (e == "derivative") has_deriv = true;
  }
  CHECK(has_fs);
  CHECK(has_deriv);
}

TEST_CASE("flat scans produce no transitions") {
  std::vector<ScanRecord> scan;
  for (int k = 0; k < 6; ++k) {
    ScanRecord r;
    r.mp = {4, 1.0, 0.1 * k, 0.1, Boundary::Open};
    r.deriv = 1.5;
    if (k < 5) r.chi = 0.02;
    scan.push_back(r);
  }
  CHECK(detect_transitions(scan).empty());

  // Tiny numerical jitter must not trip the epsilon-floored threshold.
  scan[2].deriv += 1e-13;
  scan[3].chi = 0.02 + 1e-13;
  CHECK(detect_transitions(scan).empty());
}

TEST_CASE("detect_transitions requires at least three points") {
  std::vector<ScanRecord> scan(2);
  scan[0].mp = {4, 1.0, 0.1, 0.1, Boundary::Open};
  scan[1].mp = {4, 1.0, 0.2, 0.1, Boundary::Open};
  CHECK_THROWS(detect_transitions(scan));
}

TEST_CASE("correlation steps attach as supporting evidence") {
  auto flat = [](double v) {
    CorrelationMatrix m;
    m.num_sites = 3;
    m.values = {1, v, v, v, 1, v, v, v, 1};
    m.stderr_.assign(9, 0.0);
    return m;
  };
  std::vector<ScanRecord> scan;
  for (int k = 0; k < 7; ++k) {
    ScanRecord r;
    r.mp = {3, 1.0, 0.1 * k, 0.1, Boundary::Open};
    r.deriv = k < 4 ? 1.0 : -1.0;
    r.zz = flat(k < 4 ? 0.9 : -0.9);
    if (k < 6) r.chi = (k == 3) ? 0.6 : 0.01;
    scan.push_back(r);
  }
  auto intervals = detect_transitions(scan);
  REQUIRE(intervals.size() == 1);
  bool has_corr = false;
  for (const auto& e : intervals[0].evidence)
    if (e == "correlation") has_corr = true;
  CHECK(has_corr);
}
