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

#include "phasescope/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace phasescope {

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_qubit(const Statevector& s, int q) {
  if (q < 0 || q >= s.num_qubits) throw std::out_of_range("qubit index out of range");
}
}  // namespace

Statevector Statevector::zero_state(int num_qubits) {
  return basis_state(num_qubits, 0);
}

Statevector Statevector::basis_state(int num_qubits, std::uint64_t b) {
  if (num_qubits < 1 || num_qubits > 30)
    throw std::invalid_argument("unsupported qubit count");
  Statevector s;
  s.num_qubits = num_qubits;
  s.amps.assign(std::uint64_t{1} << num_qubits, Amplitude{0, 0});
  if (b >= s.amps.size()) throw std::out_of_range("basis state out of range");
  s.amps[b] = {1, 0};
  return s;
}

double Statevector::norm() const {
  double n2 = 0;
  for (const auto& a : amps) n2 += std::norm(a);
  return std::sqrt(n2);
}

void Circuit::append(Gate g) {
  gates.push_back(g);
  if (g.slot >= 0) num_slots = std::max(num_slots, g.slot + 1);
}

Circuit Circuit::bound(std::span<const double> params) const {
  if (static_cast<int>(params.size()) != num_slots)
    throw std::invalid_argument("parameter count mismatch");
  Circuit out;
  out.num_qubits = num_qubits;
  out.gates.reserve(gates.size());
  for (Gate g : gates) {
    if (g.slot >= 0) {
      g.angle = params[g.slot];
      g.slot = -1;
    }
    out.gates.push_back(g);
  }
  return out;
}

Circuit Circuit::inverse() const {
  if (num_slots != 0)
    throw std::invalid_argument("inverse requires a fully bound circuit");
  Circuit out;
  out.num_qubits = num_qubits;
  out.gates.reserve(gates.size());
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    Gate g = *it;
    if (g.kind == Gate::Kind::RY || g.kind == Gate::Kind::RZ) g.angle = -g.angle;
    out.gates.push_back(g);
  }
  return out;
}

Circuit Circuit::relabeled(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != num_qubits)
    throw std::invalid_argument("permutation size mismatch");
  std::vector<bool> seen(num_qubits, false);
  for (int p : perm) {
    if (p < 0 || p >= num_qubits || seen[p])
      throw std::invalid_argument("relabeling map is not a bijection");
    seen[p] = true;
  }
  Circuit out = *this;
  for (Gate& g : out.gates) {
    g.q0 = perm[g.q0];
    if (g.q1 >= 0) g.q1 = perm[g.q1];
  }
  return out;
}

int Circuit::cnot_count() const {
  int c = 0;
  for (const auto& g : gates)
    if (g.kind == Gate::Kind::Cnot) ++c;
  return c;
}

void apply_gate(Statevector& state, const Gate& g) {
  if (g.slot >= 0) throw std::invalid_argument("cannot apply an unbound gate");
  check_qubit(state, g.q0);
  const std::uint64_t bit0 = std::uint64_t{1} << g.q0;
  const std::uint64_t dim = state.dim();
  switch (g.kind) {
    case Gate::Kind::RY: {
      const double c = std::cos(g.angle / 2), s = std::sin(g.angle / 2);
      for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & bit0) continue;
        Amplitude a0 = state.amps[i], a1 = state.amps[i | bit0];
        state.amps[i] = c * a0 - s * a1;
        state.amps[i | bit0] = s * a0 + c * a1;
      }
      break;
    }
    case Gate::Kind::RZ: {
      const Amplitude e0 = std::polar(1.0, -g.angle / 2);
      const Amplitude e1 = std::polar(1.0, g.angle / 2);
      for (std::uint64_t i = 0; i < dim; ++i)
        state.amps[i] *= (i & bit0) ? e1 : e0;
      break;
    }
    case Gate::Kind::PauliX: {
      for (std::uint64_t i = 0; i < dim; ++i)
        if (!(i & bit0)) std::swap(state.amps[i], state.amps[i | bit0]);
      break;
    }
    case Gate::Kind::Cnot: {
      check_qubit(state, g.q1);
      if (g.q0 == g.q1) throw std::invalid_argument("CNOT control equals target");
      const std::uint64_t bit1 = std::uint64_t{1} << g.q1;
      for (std::uint64_t i = 0; i < dim; ++i)
        if ((i & bit0) && !(i & bit1)) std::swap(state.amps[i], state.amps[i | bit1]);
      break;
    }
  }
}

void apply_pauli_char(Statevector& state, int qubit, char p) {
  check_qubit(state, qubit);
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  switch (p) {
    case 'I':
      break;
    case 'X':
      apply_gate(state, Gate::x(qubit));
      break;
    case 'Z':
      for (std::uint64_t i = 0; i < state.dim(); ++i)
        if (i & bit) state.amps[i] = -state.amps[i];
      break;
    case 'Y':
      for (std::uint64_t i = 0; i < state.dim(); ++i) {
        if (i & bit) continue;
        Amplitude a0 = state.amps[i], a1 = state.amps[i | bit];
        state.amps[i] = Amplitude{0, -1} * a1;
        state.amps[i | bit] = Amplitude{0, 1} * a0;
      }
      break;
    default:
      throw std::invalid_argument("invalid Pauli letter");
  }
}

Statevector run(const Circuit& circuit, std::span<const double> params) {
  Circuit bc = circuit.num_slots > 0 ? circuit.bound(params) : circuit;
  if (circuit.num_slots == 0 && !params.empty())
    throw std::invalid_argument("parameter count mismatch");
  Statevector state = Statevector::zero_state(circuit.num_qubits);
  for (const auto& g : bc.gates) apply_gate(state, g);
  return state;
}

std::complex<double> inner_product(const Statevector& a, const Statevector& b) {
  if (a.num_qubits != b.num_qubits)
    throw std::invalid_argument("statevector size mismatch");
  std::complex<double> acc{0, 0};
  for (std::uint64_t i = 0; i < a.dim(); ++i)
    acc += std::conj(a.amps[i]) * b.amps[i];
  return acc;
}

MeasurementRecord sample_counts(const Statevector& state, Basis basis,
                                std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be >= 1");
  const Statevector* src = &state;
  Statevector rotated;
  if (basis == Basis::X) {
    rotated = state;
    for (int q = 0; q < state.num_qubits; ++q)
      apply_gate(rotated, Gate::ry(q, -kPi / 2));
    src = &rotated;
  }
  std::vector<double> cdf(src->dim());
  double acc = 0;
  for (std::uint64_t i = 0; i < src->dim(); ++i) {
    acc += std::norm(src->amps[i]);
    cdf[i] = acc;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, acc);
  MeasurementRecord rec;
  rec.basis = basis;
  rec.num_qubits = state.num_qubits;
  rec.shots = shots;
  rec.seed = seed;
  for (std::uint64_t s = 0; s < shots; ++s) {
    double u = uni(rng);
    auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    std::uint64_t outcome = static_cast<std::uint64_t>(it - cdf.begin());
    ++rec.counts[outcome];
  }
  return rec;
}

Statevector permute_qubits(const Statevector& state, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != state.num_qubits)
    throw std::invalid_argument("permutation size mismatch");
  std::vector<bool> seen(state.num_qubits, false);
  for (int p : perm) {
    if (p < 0 || p >= state.num_qubits || seen[p])
      throw std::invalid_argument("permutation is not a bijection");
    seen[p] = true;
  }
  Statevector out;
  out.num_qubits = state.num_qubits;
  out.amps.assign(state.dim(), Amplitude{0, 0});
  for (std::uint64_t b = 0; b < state.dim(); ++b) {
    std::uint64_t target = 0;
    for (int k = 0; k < state.num_qubits; ++k)
      if (b & (std::uint64_t{1} << k)) target |= std::uint64_t{1} << perm[k];
    out.amps[target] = state.amps[b];
  }
  return out;
}

double expectation(const Statevector& state, const PauliSum& obs) {
  if (obs.num_qubits != state.num_qubits)
    throw std::invalid_argument("observable size mismatch");
  double value = 0;
  for (const auto& t : obs.terms) {
    std::uint64_t xmask = 0, zmask = 0;
    int ycount = 0;
    for (int k = 0; k < t.num_qubits(); ++k) {
      char p = t.letters[k];
      if (p == 'X' || p == 'Y') xmask |= std::uint64_t{1} << k;
      if (p == 'Z' || p == 'Y') zmask |= std::uint64_t{1} << k;
      if (p == 'Y') ++ycount;
    }
    const Amplitude iy = std::pow(Amplitude{0, 1}, ycount);
    std::complex<double> acc{0, 0};
    for (std::uint64_t z = 0; z < state.dim(); ++z) {
      double sign = (std::popcount(z & zmask) & 1) ? -1.0 : 1.0;
      acc += std::conj(state.amps[z ^ xmask]) * (sign * state.amps[z]);
    }
    value += t.coefficient * (iy * acc).real();
  }
  return value;
}

Statevector apply_pauli_sum(const Statevector& state, const PauliSum& obs) {
  if (obs.num_qubits != state.num_qubits)
    throw std::invalid_argument("observable size mismatch");
  Statevector out;
  out.num_qubits = state.num_qubits;
  out.amps.assign(state.dim(), Amplitude{0, 0});
  for (const auto& t : obs.terms) {
    std::uint64_t xmask = 0, zmask = 0;
    int ycount = 0;
    for (int k = 0; k < t.num_qubits(); ++k) {
      char p = t.letters[k];
      if (p == 'X' || p == 'Y') xmask |= std::uint64_t{1} << k;
      if (p == 'Z' || p == 'Y') zmask |= std::uint64_t{1} << k;
      if (p == 'Y') ++ycount;
    }
    const Amplitude iy = std::pow(Amplitude{0, 1}, ycount);
    for (std::uint64_t z = 0; z < state.dim(); ++z) {
      double sign = (std::popcount(z & zmask) & 1) ? -1.0 : 1.0;
      out.amps[z ^ xmask] += t.coefficient * iy * sign * state.amps[z];
    }
  }
  return out;
}

std::vector<int> shift_permutation(int n, int k) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = ((i + k) % n + n) % n;
  return perm;
}

}  // namespace phasescope
