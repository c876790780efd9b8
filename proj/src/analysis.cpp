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

#include "phasescope/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace phasescope {

namespace {

constexpr double kPi = 3.14159265358979323846;

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
      throw std::invalid_argument("invalid Pauli letter");
  }
}

Eigen::MatrixXd permutation_matrix(int n, const std::vector<int>& perm) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint64_t b = 0; b < dim; ++b) {
    std::uint64_t target = 0;
    for (int k = 0; k < n; ++k)
      if (b & (std::uint64_t{1} << k)) target |= std::uint64_t{1} << perm[k];
    u(target, b) = 1.0;
  }
  return u;
}

Eigen::MatrixXd action_matrix(const SymmetryAction& a, int n) {
  const std::uint64_t dim = std::uint64_t{1} << n;
  switch (a.kind) {
    case SymmetryAction::Kind::Identity:
      return Eigen::MatrixXd::Identity(dim, dim);
    case SymmetryAction::Kind::PauliLayer: {
      std::uint64_t xmask = 0;
      for (int k = 0; k < n; ++k) {
        char p = a.pauli_letters[k];
        if (p == 'X')
          xmask |= std::uint64_t{1} << k;
        else if (p != 'I')
          throw std::invalid_argument("only {I,X} layers are supported here");
      }
      Eigen::MatrixXd u = Eigen::MatrixXd::Zero(dim, dim);
      for (std::uint64_t b = 0; b < dim; ++b) u(b ^ xmask, b) = 1.0;
      return u;
    }
    case SymmetryAction::Kind::Shift:
      return permutation_matrix(n, shift_permutation(n, a.shift));
  }
  throw std::logic_error("unreachable");
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

SymmetryGroup make_symmetry_group(int num_qubits, Boundary boundary,
                                  const PauliSum& hamiltonian) {
  if (hamiltonian.num_qubits != num_qubits)
    throw std::invalid_argument("hamiltonian size mismatch");
  SymmetryGroup group;
  group.num_qubits = num_qubits;
  group.actions.push_back({SymmetryAction::Kind::Identity, "I", "", 0});
  group.actions.push_back({SymmetryAction::Kind::PauliLayer, "X^N",
                           std::string(num_qubits, 'X'), 0});
  if (boundary == Boundary::Periodic) {
    for (int k = 1; k < num_qubits; ++k)
      group.actions.push_back(
          {SymmetryAction::Kind::Shift, "shift" + std::to_string(k), "", k});
  }
  if (num_qubits <= 10) {
    const Eigen::MatrixXd h = to_dense(hamiltonian);
    for (const auto& a : group.actions) {
      const Eigen::MatrixXd u = action_matrix(a, num_qubits);
      double comm = (h * u - u * h).cwiseAbs().maxCoeff();
      if (comm > 1e-10)
        throw std::invalid_argument("symmetry action " + a.label +
                                    " does not commute with the Hamiltonian");
    }
  }
  return group;
}

Statevector apply_symmetry(const SymmetryAction& action, const Statevector& s) {
  switch (action.kind) {
    case SymmetryAction::Kind::Identity:
      return s;
    case SymmetryAction::Kind::PauliLayer: {
      Statevector out = s;
      for (int q = 0; q < s.num_qubits; ++q)
        apply_pauli_char(out, q, action.pauli_letters[q]);
      return out;
    }
    case SymmetryAction::Kind::Shift:
      return permute_qubits(s, shift_permutation(s.num_qubits, action.shift));
  }
  throw std::logic_error("unreachable");
}

CorrelationMatrix correlation_matrix(const MeasurementRecord& record) {
  if (record.counts.empty() || record.shots == 0)
    throw std::invalid_argument("empty measurement record");
  const int n = record.num_qubits;
  CorrelationMatrix m;
  m.basis = record.basis;
  m.num_sites = n;
  m.values.assign(n * n, 0.0);
  m.stderr_.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      const std::uint64_t mask =
          (std::uint64_t{1} << i) | (std::uint64_t{1} << j);
      double aligned = 0;
      std::uint64_t shots = 0;
      for (const auto& [outcome, count] : record.counts) {
        shots += count;
        if ((std::popcount(outcome & mask) & 1) == 0) aligned += double(count);
      }
      double mean = (2.0 * aligned - double(shots)) / double(shots);
      double err = std::sqrt(std::max(0.0, 1.0 - mean * mean) / double(shots));
      m.at(i, j) = m.at(j, i) = mean;
      m.stderr_[i * n + j] = m.stderr_[j * n + i] = err;
    }
  }
  return m;
}

CorrelationMatrix correlation_matrix_exact(const Statevector& state, Basis basis) {
  const int n = state.num_qubits;
  const char letter = basis == Basis::Z ? 'Z' : 'X';
  CorrelationMatrix m;
  m.basis = basis;
  m.num_sites = n;
  m.values.assign(n * n, 0.0);
  m.stderr_.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    m.at(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      PauliTerm t{std::string(n, 'I'), 1.0};
      t.letters[i] = letter;
      t.letters[j] = letter;
      double v = expectation(state, PauliSum::from_terms(n, {t}));
      m.at(i, j) = m.at(j, i) = v;
    }
  }
  return m;
}

CorrelationMatrix correct_correlations(const CorrelationMatrix& m,
                                       const std::vector<double>& c) {
  if (static_cast<int>(c.size()) != m.num_sites)
    throw std::invalid_argument("calibration size mismatch");
  CorrelationMatrix out = m;
  for (int i = 0; i < m.num_sites; ++i) {
    for (int j = 0; j < m.num_sites; ++j) {
      if (i == j) continue;
      double scale = c[i] * c[j];
      if (scale < 0.01)
        throw std::invalid_argument("attenuation too strong to invert");
      out.at(i, j) /= scale;
      out.stderr_[i * m.num_sites + j] /= scale;
    }
  }
  return out;
}

std::pair<CorrelationMatrix, int> align_correlations(const CorrelationMatrix& ref,
                                                     const CorrelationMatrix& cur,
                                                     Boundary boundary) {
  if (ref.num_sites != cur.num_sites)
    throw std::invalid_argument("correlation matrix size mismatch");
  const int n = ref.num_sites;
  if (boundary == Boundary::Open) return {cur, 0};

  auto shifted = [&](int k) {
    CorrelationMatrix out = cur;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out.at(i, j) = cur.at((i + k) % n, (j + k) % n);
        out.stderr_[i * n + j] = cur.stderr_[((i + k) % n) * n + (j + k) % n];
      }
    return out;
  };

  int best_k = 0;
  double best_cost = 0;
  CorrelationMatrix best = cur;
  for (int k = 0; k < n; ++k) {
    CorrelationMatrix cand = shifted(k);
    double cost = 0;
    for (int e = 0; e < n * n; ++e) {
      double d = cand.values[e] - ref.values[e];
      cost += d * d;
    }
    if (k == 0 || cost < best_cost) {
      best_cost = cost;
      best_k = k;
      best = std::move(cand);
    }
  }
  return {best, best_k};
}

std::pair<double, double> energy_derivative(
    const PauliSum& ha, const std::vector<MeasurementRecord>& records) {
  return expectation_from_counts(ha, records);
}

double energy_derivative_exact(const Statevector& state, const PauliSum& ha) {
  return expectation(state, ha);
}

Circuit overlap_circuit(const Circuit& circA, std::span<const double> paramsA,
                        const Circuit& circB, std::span<const double> paramsB,
                        const SymmetryAction& action) {
  if (circA.num_qubits != circB.num_qubits)
    throw std::invalid_argument("circuit size mismatch");

  Circuit compound = circA.num_slots > 0 ? circA.bound(paramsA) : circA;
  if (action.kind == SymmetryAction::Kind::PauliLayer)
    for (int q = 0; q < compound.num_qubits; ++q)
      append_pauli_gates(compound, q, action.pauli_letters[q]);

  Circuit invB =
      (circB.num_slots > 0 ? circB.bound(paramsB) : circB).inverse();
  if (action.kind == SymmetryAction::Kind::Shift)
    invB = invB.relabeled(shift_permutation(compound.num_qubits, -action.shift));
  for (const auto& g : invB.gates) compound.append(g);
  return compound;
}

OverlapEstimate survival_estimate(const MeasurementRecord& record) {
  std::uint64_t shots = record.total_counts();
  if (shots == 0) throw std::invalid_argument("empty measurement record");
  auto it = record.counts.find(0);
  double survival =
      it == record.counts.end() ? 0.0 : double(it->second) / double(shots);
  double err = std::sqrt(std::max(0.0, survival * (1 - survival)) / double(shots));
  // Zero observed survivals still carry binomial uncertainty.
  if (err == 0) err = 1.0 / double(shots);
  return {survival, err};
}

OverlapEstimate fidelity_overlap(const Circuit& circA, std::span<const double> paramsA,
                                 const Circuit& circB, std::span<const double> paramsB,
                                 const SymmetryAction& action, Executor& executor,
                                 std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be >= 1");
  Circuit compound = overlap_circuit(circA, paramsA, circB, paramsB, action);
  return survival_estimate(
      executor.execute(compound, {}, Basis::Z, shots, seed));
}

FsEstimate practical_fs(const Circuit& circA, std::span<const double> paramsA,
                        const Circuit& circB, std::span<const double> paramsB,
                        const SymmetryGroup& group, Executor& executor,
                        std::uint64_t shots, std::uint64_t seed) {
  if (group.actions.empty()) throw std::invalid_argument("empty symmetry group");
  double best_overlap = -1, best_err = 0;
  std::string best_label;
  for (size_t i = 0; i < group.actions.size(); ++i) {
    OverlapEstimate est =
        fidelity_overlap(circA, paramsA, circB, paramsB, group.actions[i],
                         executor, shots, seed + i);
    double overlap = std::sqrt(est.survival);
    double err = overlap > 1e-6 ? est.stderr_ / (2 * overlap) : est.stderr_;
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best_err = err;
      best_label = group.actions[i].label;
    }
  }
  return {1.0 - best_overlap, best_err, best_label};
}

std::vector<TransitionInterval> detect_transitions(
    const std::vector<ScanRecord>& scan, double t_fs, double t_deriv) {
  if (scan.size() < 3)
    throw std::invalid_argument("detect_transitions needs >= 3 scan points");
  const size_t m = scan.size();

  std::vector<double> chi(m - 1, 0.0);
  std::vector<bool> has_chi(m - 1, false);
  std::vector<double> dstep(m - 1, 0.0);
  std::vector<double> cstep(m - 1, 0.0);
  std::vector<bool> has_corr(m - 1, false);
  for (size_t k = 0; k + 1 < m; ++k) {
    if (scan[k].chi) {
      chi[k] = *scan[k].chi;
      has_chi[k] = true;
    }
    dstep[k] = std::abs(scan[k + 1].deriv - scan[k].deriv);
    if (scan[k].zz && scan[k + 1].zz) {
      double acc = 0;
      const auto& a = *scan[k].zz;
      const auto& b = *scan[k + 1].zz;
      for (size_t e = 0; e < a.values.size(); ++e) {
        double d = a.values[e] - b.values[e];
        acc += d * d;
      }
      cstep[k] = std::sqrt(acc);
      has_corr[k] = true;
    }
  }

  auto robust_threshold = [](const std::vector<double>& vals,
                             const std::vector<bool>& present, double t) {
    std::vector<double> v;
    for (size_t i = 0; i < vals.size(); ++i)
      if (present[i]) v.push_back(vals[i]);
    double med = median_of(v);
    std::vector<double> dev;
    for (double x : v) dev.push_back(std::abs(x - med));
    double mad = median_of(dev);
    double floor_ = 1e-9 * std::max(1.0, std::abs(med));
    return med + t * std::max(mad, floor_);
  };

  const std::vector<bool> all(m - 1, true);
  double chi_thr = robust_threshold(chi, has_chi, t_fs);
  double d_thr = robust_threshold(dstep, all, t_deriv);
  double c_thr = robust_threshold(cstep, has_corr, t_deriv);

  std::vector<TransitionInterval> out;
  for (size_t k = 0; k + 1 < m; ++k) {
    TransitionInterval ti;
    ti.lo = scan[k].mp.j2;
    ti.hi = scan[k + 1].mp.j2;
    if (has_chi[k] && chi[k] > chi_thr) ti.evidence.push_back("fs");
    if (dstep[k] > d_thr) ti.evidence.push_back("derivative");
    bool flagged = !ti.evidence.empty();
    if (has_corr[k] && cstep[k] > c_thr) ti.evidence.push_back("correlation");
    if (flagged) out.push_back(std::move(ti));
  }
  return out;
}

}  // namespace phasescope
