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

#include "phasescope/vqe.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace phasescope {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void append_cnot_round(Circuit& c, const AnsatzSpec& spec, int parity) {
  const int n = spec.num_qubits;
  for (int i = parity; i + 1 < n; i += 2) c.append(Gate::cnot(i, i + 1));
  if (spec.boundary == Boundary::Periodic && (n - 1) % 2 == parity)
    c.append(Gate::cnot(n - 1, 0));
}

void append_ry_row(Circuit& c, int n, int& slot) {
  for (int q = 0; q < n; ++q) c.append(Gate::ry_slot(q, slot++));
}

// Product start seeded by the classical minimum: enumerate the diagonal
// ({I,Z}-only) part of the Hamiltonian over basis states and open the final
// RY row onto the winning bit pattern. This lands the optimizer in the right
// symmetry-broken basin on either side of a first-order rearrangement, where
// near-zero random starts all descend into the trivial |0...0> basin.
std::vector<double> classical_product_start(const AnsatzSpec& spec,
                                            const PauliSum& h) {
  if (spec.num_qubits > 20) return {};
  std::vector<std::pair<std::uint64_t, double>> diag;
  for (const auto& t : h.terms) {
    if (t.letters.find('X') != std::string::npos ||
        t.letters.find('Y') != std::string::npos)
      continue;
    std::uint64_t mask = 0;
    for (size_t k = 0; k < t.letters.size(); ++k)
      if (t.letters[k] == 'Z') mask |= (std::uint64_t{1} << k);
    diag.emplace_back(mask, t.coefficient);
  }
  std::uint64_t best = 0;
  double best_e = 0;
  const std::uint64_t dim = std::uint64_t{1} << spec.num_qubits;
  for (std::uint64_t b = 0; b < dim; ++b) {
    double e = 0;
    for (const auto& [mask, coeff] : diag)
      e += (std::popcount(b & mask) & 1) ? -coeff : coeff;
    if (b == 0 || e < best_e) {
      best_e = e;
      best = b;
    }
  }
  std::vector<double> params(spec.num_params(), 0.0);
  const int final_row = spec.num_qubits * 2 * spec.layers;
  for (int q = 0; q < spec.num_qubits; ++q)
    if ((best >> q) & 1) params[final_row + q] = kPi;
  return params;
}

}  // namespace

Circuit build_ansatz(const AnsatzSpec& spec) {
  if (spec.num_qubits < 2) throw std::invalid_argument("ansatz needs >= 2 qubits");
  if (spec.layers < 1) throw std::invalid_argument("layers must be >= 1");
  Circuit c;
  c.num_qubits = spec.num_qubits;
  int slot = 0;
  for (int l = 0; l < spec.layers; ++l) {
    append_ry_row(c, spec.num_qubits, slot);
    append_cnot_round(c, spec, 0);
    append_ry_row(c, spec.num_qubits, slot);
    append_cnot_round(c, spec, 1);
  }
  append_ry_row(c, spec.num_qubits, slot);
  return c;
}

double energy_cost(const Circuit& circuit, std::span<const double> params,
                   const PauliSum& hamiltonian) {
  return expectation(run(circuit, params), hamiltonian);
}

double overlap_cost(const Circuit& circuit, std::span<const double> params,
                    const Statevector& target) {
  if (std::abs(target.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("overlap target must be normalized");
  double ov = std::abs(inner_product(target, run(circuit, params)));
  return 1.0 - ov * ov;
}

Statevector desymmetrize_target(const SpectrumResult& spec,
                                double near_degeneracy_tol) {
  if (spec.states.empty()) throw std::invalid_argument("empty spectrum");
  const Statevector& ground = spec.states[0];
  const double window =
      std::max(spec.degeneracy_tol, near_degeneracy_tol);

  std::uint64_t best = 0;
  double best_mag = -1;
  for (std::uint64_t b = 0; b < ground.dim(); ++b) {
    double mag = std::norm(ground.amps[b]);
    if (mag > best_mag + 1e-15) {
      best_mag = mag;
      best = b;
    }
  }

  // Project |best> onto the span of the near-degenerate ground states.
  Statevector target;
  target.num_qubits = ground.num_qubits;
  target.amps.assign(ground.dim(), Amplitude{0, 0});
  for (size_t g = 0; g < spec.states.size(); ++g) {
    if (spec.energies[g] - spec.energies[0] > window) break;
    Amplitude weight = std::conj(spec.states[g].amps[best]);
    for (std::uint64_t k = 0; k < ground.dim(); ++k)
      target.amps[k] += weight * spec.states[g].amps[k];
  }
  double norm = target.norm();
  if (norm < 1e-12) return ground;  // projection degenerate, keep the input
  Amplitude phase = target.amps[best] / std::abs(target.amps[best]);
  for (auto& a : target.amps) a /= norm * phase;
  return target;
}

std::vector<double> parameter_shift_gradient(const CostFn& cost,
                                             const std::vector<double>& params) {
  std::vector<double> grad(params.size());
  std::vector<double> shifted = params;
  for (size_t k = 0; k < params.size(); ++k) {
    shifted[k] = params[k] + kPi / 2;
    double plus = cost(shifted);
    shifted[k] = params[k] - kPi / 2;
    double minus = cost(shifted);
    shifted[k] = params[k];
    grad[k] = (plus - minus) / 2.0;
  }
  return grad;
}

OptimizeReport optimize(const CostFn& cost, std::vector<double> initial,
                        const OptimizeOptions& opts) {
  for (double v : initial)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite initial params");

  OptimizeReport rep;
  rep.final_params = std::move(initial);
  double current = cost(rep.final_params);
  if (!std::isfinite(current)) throw std::runtime_error("non-finite cost");
  rep.cost_history.push_back(current);

  double step = opts.init_step;
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    std::vector<double> grad = parameter_shift_gradient(cost, rep.final_params);
    double gn2 = 0;
    for (double g : grad) gn2 += g * g;
    double gn = std::sqrt(gn2);
    if (gn < opts.grad_tol) {
      rep.converged = true;
      break;
    }

    // Backtracking line search with an Armijo sufficient-decrease test.
    double t = step;
    bool accepted = false;
    std::vector<double> trial(rep.final_params.size());
    for (int bt = 0; bt < 40; ++bt) {
      for (size_t k = 0; k < trial.size(); ++k)
        trial[k] = rep.final_params[k] - t * grad[k];
      double c = cost(trial);
      if (!std::isfinite(c)) throw std::runtime_error("non-finite cost");
      if (c <= current - 1e-4 * t * gn2) {
        rep.final_params = trial;
        current = c;
        accepted = true;
        break;
      }
      t /= 2;
    }
    if (!accepted) break;  // no descent representable at this precision
    rep.cost_history.push_back(current);
    step = std::min(2 * t, 16 * opts.init_step);
  }
  rep.final_cost = current;
  return rep;
}

std::vector<ScanPointResult> scan_optimize(const std::vector<ModelParams>& grid,
                                           const ScanStrategy& strategy) {
  if (grid.empty()) throw std::invalid_argument("empty scan grid");
  std::vector<ScanPointResult> out;
  out.reserve(grid.size());
  std::vector<double> warm;

  for (size_t point = 0; point < grid.size(); ++point) {
    const ModelParams& mp = grid[point];
    ScanPointResult res;
    res.mp = mp;
    try {
      if (mp.num_sites != strategy.ansatz.num_qubits)
        throw std::invalid_argument("grid point size does not match ansatz");
      AnsatzSpec spec = strategy.ansatz;
      spec.boundary = mp.boundary;
      const Circuit circuit = build_ansatz(spec);
      const PauliSum h = build_hamiltonian(mp);
      const bool bootstrap = mp.num_sites >= strategy.bootstrap_min_sites;

      Statevector target;
      if (bootstrap) {
        SpectrumResult ed = exact_diagonalize(mp, 16);
        target = desymmetrize_target(ed);
      }

      CostFn ecost = [&](const std::vector<double>& p) {
        return energy_cost(circuit, p, h);
      };

      std::vector<std::vector<double>> starts;
      if (!warm.empty()) starts.push_back(warm);
      std::vector<double> informed = classical_product_start(spec, h);
      if (!informed.empty()) starts.push_back(std::move(informed));
      int fresh = strategy.restarts + (warm.empty() ? 1 : 0);
      for (int r = 0; r < fresh; ++r) {
        std::mt19937_64 rng(splitmix64(strategy.seed ^ splitmix64(point * 97 + r)));
        // Alternate tight and wide spreads: tight starts refine the trivial
        // basin, wide ones can escape it.
        double spread = (r % 2 == 0) ? 0.1 : kPi;
        std::uniform_real_distribution<double> uni(-spread, spread);
        std::vector<double> init(spec.num_params());
        for (auto& v : init) v = uni(rng);
        starts.push_back(std::move(init));
      }

      bool have_best = false;
      OptimizeReport best;
      for (auto& start : starts) {
        std::vector<double> p0 = start;
        if (bootstrap) {
          CostFn ocost = [&](const std::vector<double>& p) {
            return overlap_cost(circuit, p, target);
          };
          OptimizeReport boot = optimize(ocost, p0, strategy.opts);
          p0 = boot.final_params;
        }
        OptimizeReport rep = optimize(ecost, p0, strategy.opts);
        rep.cost_kind = "energy";
        // Starts are ordered warm, informed, fresh; ties go to the earliest
        // so the scan keeps one parameter representation across points
        // instead of hopping between gauge-equivalent solutions.
        if (!have_best || rep.final_cost < best.final_cost - 1e-6) {
          best = std::move(rep);
          have_best = true;
        }
      }
      res.report = std::move(best);
      res.ok = true;
      warm = res.report.final_params;
    } catch (const std::exception& e) {
      res.ok = false;
      res.error = e.what();
    }
    out.push_back(std::move(res));
  }

  // Backward refinement sweep: re-optimize each point warm-started from its
  // right neighbor and keep clear improvements. A single forward pass can
  // leave early points in a worse parameter representation than the one the
  // chain settles into later on.
  for (int point = static_cast<int>(grid.size()) - 2; point >= 0; --point) {
    if (!out[point].ok || !out[point + 1].ok) continue;
    const ModelParams& mp = grid[point];
    AnsatzSpec spec = strategy.ansatz;
    spec.boundary = mp.boundary;
    const Circuit circuit = build_ansatz(spec);
    const PauliSum h = build_hamiltonian(mp);
    CostFn ecost = [&](const std::vector<double>& p) {
      return energy_cost(circuit, p, h);
    };
    OptimizeReport rep =
        optimize(ecost, out[point + 1].report.final_params, strategy.opts);
    rep.cost_kind = "energy";
    if (rep.final_cost < out[point].report.final_cost - 1e-6)
      out[point].report = std::move(rep);
  }
  return out;
}

}  // namespace phasescope
