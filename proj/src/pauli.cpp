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

#include "phasescope/pauli.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace phasescope {

namespace {

// Decompose a Pauli letter as mu * X^a Z^b with mu in {1, i}.
// I=(0,0,1), X=(1,0,1), Z=(0,1,1), Y=(1,1,i) since Y = i X Z.
struct XzForm {
  int a, b;
  std::complex<double> mu;
};

XzForm to_xz(char p) {
  switch (p) {
    case 'I': return {0, 0, {1, 0}};
    case 'X': return {1, 0, {1, 0}};
    case 'Z': return {0, 1, {1, 0}};
    case 'Y': return {1, 1, {0, 1}};
    default: throw std::invalid_argument("invalid Pauli letter");
  }
}

// Recompose X^a Z^b = nu * letter; XZ = -i Y gives nu = -i for (1,1).
char from_xz(int a, int b, std::complex<double>& nu) {
  nu = {1, 0};
  if (a == 0 && b == 0) return 'I';
  if (a == 1 && b == 0) return 'X';
  if (a == 0 && b == 1) return 'Z';
  nu = {0, -1};
  return 'Y';
}

void validate_letters(const std::string& s) {
  for (char c : s)
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
      throw std::invalid_argument("invalid Pauli letter in \"" + s + "\"");
}

}  // namespace

PauliSum PauliSum::from_terms(int num_qubits, std::vector<PauliTerm> raw) {
  std::map<std::string, double> merged;
  for (const auto& t : raw) {
    if (t.num_qubits() != num_qubits)
      throw std::invalid_argument("PauliTerm length does not match num_qubits");
    validate_letters(t.letters);
    if (!std::isfinite(t.coefficient))
      throw std::invalid_argument("non-finite Pauli coefficient");
    merged[t.letters] += t.coefficient;
  }
  PauliSum out;
  out.num_qubits = num_qubits;
  for (const auto& [letters, coeff] : merged) {
    if (std::abs(coeff) > 1e-14) out.terms.push_back({letters, coeff});
  }
  return out;
}

std::string PauliSum::to_text() const {
  std::ostringstream os;
  for (const auto& t : terms) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", t.coefficient);
    os << buf << ' ' << t.letters << '\n';
  }
  return os.str();
}

PauliSum PauliSum::parse(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<PauliTerm> terms;
  int n = -1;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double coeff;
    std::string letters;
    if (!(ls >> coeff >> letters))
      throw std::invalid_argument("malformed PauliSum line: " + line);
    if (n < 0) n = static_cast<int>(letters.size());
    terms.push_back({letters, coeff});
  }
  if (n < 0) throw std::invalid_argument("empty PauliSum text");
  return PauliSum::from_terms(n, std::move(terms));
}

PauliProduct multiply(const PauliTerm& a, const PauliTerm& b) {
  if (a.letters.size() != b.letters.size())
    throw std::invalid_argument("PauliTerm length mismatch in multiply");
  std::complex<double> phase{1, 0};
  std::string out(a.letters.size(), 'I');
  for (size_t k = 0; k < a.letters.size(); ++k) {
    XzForm fa = to_xz(a.letters[k]);
    XzForm fb = to_xz(b.letters[k]);
    // X^a1 Z^b1 X^a2 Z^b2 = (-1)^(b1*a2) X^(a1+a2) Z^(b1+b2)
    double sign = (fa.b & fb.a) ? -1.0 : 1.0;
    std::complex<double> nu;
    out[k] = from_xz((fa.a + fb.a) & 1, (fa.b + fb.b) & 1, nu);
    phase *= fa.mu * fb.mu * sign * nu;
  }
  PauliProduct p;
  p.phase = phase;
  p.term = {std::move(out), a.coefficient * b.coefficient};
  return p;
}

PauliTerm conjugate_by_cnot(const PauliTerm& t, int control, int target) {
  const int n = t.num_qubits();
  if (control < 0 || control >= n || target < 0 || target >= n)
    throw std::out_of_range("CNOT qubit index out of range");
  if (control == target)
    throw std::invalid_argument("CNOT control equals target");
  validate_letters(t.letters);

  XzForm fc = to_xz(t.letters[control]);
  XzForm ft = to_xz(t.letters[target]);
  // Conjugation on generators: Xc -> Xc Xt, Zc -> Zc, Xt -> Xt, Zt -> Zc Zt.
  int ac = fc.a, bc = (fc.b + ft.b) & 1;
  int at = (fc.a + ft.a) & 1, bt = ft.b;

  std::complex<double> nu_c, nu_t;
  char lc = from_xz(ac, bc, nu_c);
  char lt = from_xz(at, bt, nu_t);
  std::complex<double> phase = fc.mu * ft.mu * nu_c * nu_t;
  double sign = phase.real();  // conjugation maps Paulis to +-Paulis
  if (std::abs(std::abs(sign) - 1.0) > 1e-12 || std::abs(phase.imag()) > 1e-12)
    throw std::logic_error("CNOT conjugation produced a non-real phase");

  PauliTerm out = t;
  out.letters[control] = lc;
  out.letters[target] = lt;
  out.coefficient = t.coefficient * sign;
  return out;
}

std::pair<double, double> term_parity(const PauliTerm& term,
                                      const std::vector<MeasurementRecord>& records) {
  bool has_x = term.letters.find('X') != std::string::npos;
  bool has_z = term.letters.find('Z') != std::string::npos;
  if (term.letters.find('Y') != std::string::npos || (has_x && has_z))
    throw std::invalid_argument("term not measurable in a single X or Z basis: " +
                                term.letters);
  Basis want = has_x ? Basis::X : Basis::Z;
  if (!has_x && !has_z) {
    // Identity term: exact, no shot noise.
    return {1.0, 0.0};
  }

  std::uint64_t mask = 0;
  for (size_t k = 0; k < term.letters.size(); ++k)
    if (term.letters[k] != 'I') mask |= (std::uint64_t{1} << k);

  std::uint64_t shots = 0;
  double aligned = 0;  // shots with even parity
  for (const auto& rec : records) {
    if (rec.basis != want) continue;
    for (const auto& [outcome, count] : rec.counts) {
      shots += count;
      if ((std::popcount(outcome & mask) & 1) == 0) aligned += double(count);
    }
  }
  if (shots == 0)
    throw std::invalid_argument("no counts available in the " +
                                std::string(basis_name(want)) + " basis");
  double mean = (2.0 * aligned - double(shots)) / double(shots);
  double var = std::max(0.0, 1.0 - mean * mean) / double(shots);
  return {mean, std::sqrt(var)};
}

std::pair<double, double> expectation_from_counts(
    const PauliSum& obs, const std::vector<MeasurementRecord>& records) {
  double value = 0, var = 0;
  struct Masked {
    std::uint64_t mask;
    double coeff;
  };
  std::array<std::vector<Masked>, 2> groups;  // indexed by basis: Z, X
  for (const auto& t : obs.terms) {
    bool has_x = t.letters.find('X') != std::string::npos;
    bool has_z = t.letters.find('Z') != std::string::npos;
    if (t.letters.find('Y') != std::string::npos || (has_x && has_z))
      throw std::invalid_argument("term not measurable in a single X or Z basis: " +
                                  t.letters);
    if (!has_x && !has_z) {
      value += t.coefficient;  // identity term: exact, no shot noise
      continue;
    }
    std::uint64_t mask = 0;
    for (size_t k = 0; k < t.letters.size(); ++k)
      if (t.letters[k] != 'I') mask |= (std::uint64_t{1} << k);
    groups[has_x ? 1 : 0].push_back({mask, t.coefficient});
  }

  // Terms sharing a basis are read from the same shots, so the uncertainty
  // is the empirical variance of the per-shot weighted sum; summing per-term
  // binomial errors in quadrature would drop their covariance.
  for (int g = 0; g < 2; ++g) {
    if (groups[g].empty()) continue;
    Basis want = g == 0 ? Basis::Z : Basis::X;
    double s1 = 0, s2 = 0;
    std::uint64_t n = 0;
    for (const auto& rec : records) {
      if (rec.basis != want) continue;
      for (const auto& [outcome, count] : rec.counts) {
        double v = 0;
        for (const auto& m : groups[g])
          v += (std::popcount(outcome & m.mask) & 1) ? -m.coeff : m.coeff;
        s1 += double(count) * v;
        s2 += double(count) * v * v;
        n += count;
      }
    }
    if (n == 0)
      throw std::invalid_argument("no counts available in the " +
                                  std::string(basis_name(want)) + " basis");
    double mean = s1 / double(n);
    value += mean;
    if (n > 1)
      var += std::max(0.0, s2 - double(n) * mean * mean) /
             (double(n) * double(n - 1));
  }
  return {value, std::sqrt(var)};
}

}  // namespace phasescope
