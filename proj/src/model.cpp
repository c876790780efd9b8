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

#include "phasescope/model.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace phasescope {

void ModelParams::validate() const {
  if (num_sites < 3)
    throw std::invalid_argument("num_sites must be >= 3 for a nonempty NNN sum");
  if (j2 < 0) throw std::invalid_argument("j2 must be >= 0");
  if (!std::isfinite(j1) || !std::isfinite(j2) || !std::isfinite(bx))
    throw std::invalid_argument("non-finite model parameter");
}

namespace {

PauliTerm zz_term(int n, int i, int j, double coeff) {
  PauliTerm t{std::string(n, 'I'), coeff};
  t.letters[i] = 'Z';
  t.letters[j] = 'Z';
  return t;
}

}  // namespace

PauliSum build_hamiltonian(const ModelParams& mp) {
  mp.validate();
  const int n = mp.num_sites;
  std::vector<PauliTerm> terms;
  const int nn_count = mp.boundary == Boundary::Periodic ? n : n - 1;
  for (int i = 0; i < nn_count; ++i)
    terms.push_back(zz_term(n, i, (i + 1) % n, -mp.j1));
  const int nnn_count = mp.boundary == Boundary::Periodic ? n : n - 2;
  for (int i = 0; i < nnn_count; ++i)
    terms.push_back(zz_term(n, i, (i + 2) % n, mp.j2));
  for (int i = 0; i < n; ++i) {
    PauliTerm t{std::string(n, 'I'), mp.bx};
    t.letters[i] = 'X';
    terms.push_back(t);
  }
  return PauliSum::from_terms(n, std::move(terms));
}

PauliSum build_ha(const ModelParams& mp) {
  mp.validate();
  const int n = mp.num_sites;
  std::vector<PauliTerm> terms;
  const int nnn_count = mp.boundary == Boundary::Periodic ? n : n - 2;
  for (int i = 0; i < nnn_count; ++i)
    terms.push_back(zz_term(n, i, (i + 2) % n, 1.0));
  return PauliSum::from_terms(n, std::move(terms));
}

Eigen::MatrixXd to_dense(const PauliSum& sum) {
  const int n = sum.num_qubits;
  const std::uint64_t dim = std::uint64_t{1} << n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& t : sum.terms) {
    std::uint64_t xmask = 0, zmask = 0;
    for (int k = 0; k < n; ++k) {
      char p = t.letters[k];
      if (p == 'Y')
        throw std::invalid_argument("to_dense supports {I,X,Z} letters only");
      if (p == 'X') xmask |= std::uint64_t{1} << k;
      if (p == 'Z') zmask |= std::uint64_t{1} << k;
    }
    for (std::uint64_t z = 0; z < dim; ++z) {
      double sign = (std::popcount(z & zmask) & 1) ? -1.0 : 1.0;
      h(z ^ xmask, z) += t.coefficient * sign;
    }
  }
  return h;
}

SpectrumResult exact_diagonalize(const ModelParams& mp, int num_states,
                                 double degeneracy_tol) {
  mp.validate();
  if (mp.num_sites > 14)
    throw std::invalid_argument("dense diagonalization is limited to N <= 14");
  const PauliSum h = build_hamiltonian(mp);
  const Eigen::MatrixXd hd = to_dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hd);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed to converge");

  const std::uint64_t dim = hd.rows();
  int keep = num_states < 0 ? static_cast<int>(dim)
                            : std::min<int>(num_states, static_cast<int>(dim));

  SpectrumResult out;
  out.energies.reserve(keep);
  out.states.reserve(keep);
  for (int i = 0; i < keep; ++i) {
    double e = solver.eigenvalues()(i);
    Eigen::VectorXd v = solver.eigenvectors().col(i);
    double residual = (hd * v - e * v).norm();
    if (residual > 1e-8)
      throw std::runtime_error("eigenpair residual above tolerance");
    Statevector s;
    s.num_qubits = mp.num_sites;
    s.amps.resize(dim);
    for (std::uint64_t k = 0; k < dim; ++k) s.amps[k] = {v(k), 0.0};
    out.energies.push_back(e);
    out.states.push_back(std::move(s));
  }

  const double e0 = solver.eigenvalues()(0);
  out.degeneracy_tol =
      degeneracy_tol < 0 ? 1e-8 * std::max(1.0, std::abs(e0)) : degeneracy_tol;
  out.ground_degeneracy = 1;
  for (std::uint64_t i = 1; i < dim; ++i) {
    if (solver.eigenvalues()(i) - e0 < out.degeneracy_tol)
      ++out.ground_degeneracy;
    else
      break;
  }
  return out;
}

namespace {

void check_perturbative_inputs(const SpectrumResult& spec, const PauliSum& ha) {
  if (spec.states.empty()) throw std::invalid_argument("empty spectrum");
  if (spec.ground_degeneracy > 1)
    throw std::invalid_argument(
        "perturbative sums are ill-defined for a degenerate ground state");
  if (spec.states.size() != spec.states[0].dim())
    throw std::invalid_argument("perturbative sums require the full spectrum");
  if (ha.num_qubits != spec.states[0].num_qubits)
    throw std::invalid_argument("observable size mismatch");
}

}  // namespace

double perturbative_chi(const SpectrumResult& spec, const PauliSum& ha) {
  check_perturbative_inputs(spec, ha);
  const Statevector ha_psi0 = apply_pauli_sum(spec.states[0], ha);
  double chi = 0;
  for (size_t n = 1; n < spec.states.size(); ++n) {
    double gap = spec.energies[n] - spec.energies[0];
    double me = std::abs(inner_product(spec.states[n], ha_psi0));
    chi += me * me / (gap * gap);
  }
  return chi;
}

double second_derivative(const SpectrumResult& spec, const PauliSum& ha) {
  check_perturbative_inputs(spec, ha);
  const Statevector ha_psi0 = apply_pauli_sum(spec.states[0], ha);
  double acc = 0;
  for (size_t n = 1; n < spec.states.size(); ++n) {
    double gap = spec.energies[n] - spec.energies[0];
    double me = std::abs(inner_product(spec.states[n], ha_psi0));
    acc += me * me / gap;
  }
  return 2.0 * acc;
}

}  // namespace phasescope
