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

#include "phasescope/noise.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "phasescope/pauli.hpp"

namespace phasescope {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr char kPauliLetters[4] = {'I', 'X', 'Y', 'Z'};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void apply_zz_rotation(Statevector& state, int q0, int q1, double angle) {
  const std::uint64_t b0 = std::uint64_t{1} << q0;
  const std::uint64_t b1 = std::uint64_t{1} << q1;
  // exp(-i * angle/2 * Z(x)Z), matching the half-angle rotation convention.
  const Amplitude even = std::polar(1.0, -angle / 2);
  const Amplitude odd = std::polar(1.0, angle / 2);
  for (std::uint64_t i = 0; i < state.dim(); ++i) {
    bool parity = ((i & b0) != 0) != ((i & b1) != 0);
    state.amps[i] *= parity ? odd : even;
  }
}

}  // namespace

ConfusionModel ConfusionModel::ideal(int num_qubits) {
  return uniform(num_qubits, 0.0, 0.0);
}

ConfusionModel ConfusionModel::uniform(int num_qubits, double p01, double p10) {
  ConfusionModel c;
  c.p01.assign(num_qubits, p01);
  c.p10.assign(num_qubits, p10);
  c.validate(num_qubits);
  return c;
}

void ConfusionModel::validate(int num_qubits) const {
  if (static_cast<int>(p01.size()) != num_qubits ||
      static_cast<int>(p10.size()) != num_qubits)
    throw std::invalid_argument("confusion model size mismatch");
  for (int q = 0; q < num_qubits; ++q) {
    if (p01[q] < 0 || p01[q] >= 0.5 || p10[q] < 0 || p10[q] >= 0.5)
      throw std::invalid_argument("confusion probabilities must lie in [0, 0.5)");
  }
}

NoiseModel NoiseModel::defaults(int num_qubits) {
  NoiseModel m;
  m.cnot_pauli_error = 0.01;
  m.cnot_coherent_angle = 0.02;
  m.readout = ConfusionModel::uniform(num_qubits, 0.02, 0.04);
  return m;
}

NoiseModel NoiseModel::ideal(int num_qubits) {
  NoiseModel m;
  m.cnot_pauli_error = 0.0;
  m.cnot_coherent_angle = 0.0;
  m.readout = ConfusionModel::ideal(num_qubits);
  return m;
}

void NoiseModel::validate(int num_qubits) const {
  if (cnot_pauli_error < 0 || cnot_pauli_error > 1)
    throw std::invalid_argument("cnot_pauli_error must lie in [0, 1]");
  if (!std::isfinite(cnot_coherent_angle))
    throw std::invalid_argument("non-finite coherent angle");
  readout.validate(num_qubits);
}

MeasurementRecord noisy_execute(const Circuit& circuit,
                                std::span<const double> params,
                                const NoiseModel& noise, Basis basis,
                                std::uint64_t shots, std::uint64_t seed,
                                std::uint64_t meas_xframe) {
  if (shots == 0) throw std::invalid_argument("shots must be >= 1");
  noise.validate(circuit.num_qubits);
  Circuit bc = circuit.num_slots > 0 ? circuit.bound(params) : circuit;

  // A fault pattern is a sorted list of (cnot index, pauli pair index 1..15).
  using Pattern = std::vector<std::pair<int, int>>;
  const int cnots = bc.cnot_count();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::uniform_int_distribution<int> pauli_pick(1, 15);
  std::map<Pattern, std::uint64_t> pattern_shots;
  for (std::uint64_t s = 0; s < shots; ++s) {
    Pattern pat;
    for (int c = 0; c < cnots; ++c)
      if (uni(rng) < noise.cnot_pauli_error) pat.emplace_back(c, pauli_pick(rng));
    ++pattern_shots[pat];
  }

  MeasurementRecord rec;
  rec.basis = basis;
  rec.num_qubits = bc.num_qubits;
  rec.shots = shots;
  rec.seed = seed;
  rec.meas_xframe = meas_xframe;

  std::uint64_t pattern_index = 0;
  for (const auto& [pattern, count] : pattern_shots) {
    Statevector state = Statevector::zero_state(bc.num_qubits);
    int cnot_index = 0;
    size_t fault_pos = 0;
    for (const auto& g : bc.gates) {
      apply_gate(state, g);
      if (g.kind != Gate::Kind::Cnot) continue;
      if (noise.cnot_coherent_angle != 0.0)
        apply_zz_rotation(state, g.q0, g.q1, noise.cnot_coherent_angle);
      while (fault_pos < pattern.size() && pattern[fault_pos].first == cnot_index) {
        int pair = pattern[fault_pos].second;
        apply_pauli_char(state, g.q0, kPauliLetters[pair / 4]);
        apply_pauli_char(state, g.q1, kPauliLetters[pair % 4]);
        ++fault_pos;
      }
      ++cnot_index;
    }
    if (basis == Basis::X)
      for (int q = 0; q < bc.num_qubits; ++q)
        apply_gate(state, Gate::ry(q, -kPi / 2));

    std::uint64_t batch_seed = splitmix64(seed ^ splitmix64(pattern_index + 1));
    MeasurementRecord clean =
        sample_counts(state, Basis::Z, count, batch_seed);
    std::mt19937_64 ro_rng(splitmix64(batch_seed ^ 0x5eedULL));
    for (const auto& [outcome, c] : clean.counts) {
      std::uint64_t pre = outcome ^ meas_xframe;
      for (std::uint64_t rep = 0; rep < c; ++rep) {
        std::uint64_t read = pre;
        for (int q = 0; q < bc.num_qubits; ++q) {
          const std::uint64_t bit = std::uint64_t{1} << q;
          double flip_p = (pre & bit) ? noise.readout.p10[q] : noise.readout.p01[q];
          if (flip_p > 0 && uni(ro_rng) < flip_p) read ^= bit;
        }
        ++rec.counts[read];
      }
    }
    ++pattern_index;
  }
  return rec;
}

CnotFrame make_cnot_frame(char in_control, char in_target) {
  PauliTerm in{std::string{in_control, in_target}, 1.0};
  PauliTerm out = conjugate_by_cnot(in, 0, 1);
  return CnotFrame{in_control, in_target, out.letters[0], out.letters[1]};
}

std::vector<CnotFrame> all_cnot_frames() {
  std::vector<CnotFrame> frames;
  frames.reserve(16);
  for (char a : kPauliLetters)
    for (char b : kPauliLetters) frames.push_back(make_cnot_frame(a, b));
  return frames;
}

namespace {

// Compile a single-qubit Pauli into the {RZ, X} gate set, up to global phase.
void append_pauli_gates(Circuit& c, int q, char p) {
  switch (p) {
    case 'I':
      break;
    case 'X':
      c.append(Gate::x(q));
      break;
    case 'Z':
      c.append(Gate::rz(q, kPi));
      break;
    case 'Y':
      c.append(Gate::rz(q, kPi));
      c.append(Gate::x(q));
      break;
    default:
      throw std::invalid_argument("invalid Pauli letter in frame");
  }
}

}  // namespace

Circuit apply_pauli_frame(const Circuit& circuit,
                          const std::vector<CnotFrame>& frames) {
  if (static_cast<int>(frames.size()) != circuit.cnot_count())
    throw std::invalid_argument("one frame per CNOT required");
  for (const auto& f : frames) {
    PauliTerm in{std::string{f.in_control, f.in_target}, 1.0};
    PauliTerm expect = conjugate_by_cnot(in, 0, 1);
    if (expect.letters[0] != f.out_control || expect.letters[1] != f.out_target)
      throw std::invalid_argument("frame pair fails the CNOT conjugation check");
  }
  Circuit out;
  out.num_qubits = circuit.num_qubits;
  out.num_slots = circuit.num_slots;
  int cnot_index = 0;
  for (const auto& g : circuit.gates) {
    if (g.kind != Gate::Kind::Cnot) {
      out.gates.push_back(g);
      continue;
    }
    const CnotFrame& f = frames[cnot_index++];
    append_pauli_gates(out, g.q0, f.in_control);
    append_pauli_gates(out, g.q1, f.in_target);
    out.gates.push_back(g);
    append_pauli_gates(out, g.q0, f.out_control);
    append_pauli_gates(out, g.q1, f.out_target);
  }
  return out;
}

std::vector<CnotFrame> random_cnot_frames(int cnot_count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, 15);
  std::vector<CnotFrame> frames;
  frames.reserve(cnot_count);
  for (int i = 0; i < cnot_count; ++i) {
    int p = pick(rng);
    frames.push_back(make_cnot_frame(kPauliLetters[p / 4], kPauliLetters[p % 4]));
  }
  return frames;
}

}  // namespace phasescope
