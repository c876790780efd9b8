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

#include "phasescope/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace phasescope {

namespace fsys = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fnv1a64_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "open") return Boundary::Open;
  if (s == "periodic") return Boundary::Periodic;
  throw std::invalid_argument("boundary must be \"open\" or \"periodic\"");
}

void write_text(const fsys::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::optional<json> read_json_file(const fsys::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  json j;
  in >> j;
  return j;
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

MeasurementRecord merge_records(const std::vector<MeasurementRecord>& records,
                                Basis basis, int noise_scale) {
  MeasurementRecord merged;
  merged.basis = basis;
  merged.noise_scale = noise_scale;
  for (const auto& r : records) {
    if (r.basis != basis || r.noise_scale != noise_scale) continue;
    merged.num_qubits = r.num_qubits;
    merged.shots += r.shots;
    for (const auto& [outcome, count] : r.counts) merged.counts[outcome] += count;
  }
  return merged;
}

}  // namespace

ScanConfig ScanConfig::from_json(const json& j) {
  ScanConfig c;
  if (j.contains("model")) {
    const json& m = j.at("model");
    if (m.contains("num_sites")) c.num_sites = m.at("num_sites").get<int>();
    if (m.contains("boundary"))
      c.boundary = boundary_from_string(m.at("boundary").get<std::string>());
    if (m.contains("j1")) c.j1 = m.at("j1").get<double>();
    if (m.contains("bx")) c.bx = m.at("bx").get<double>();
    if (m.contains("j2_list")) c.j2_list = m.at("j2_list").get<std::vector<double>>();
  }
  if (j.contains("ansatz") && j.at("ansatz").contains("layers"))
    c.ansatz_layers = j.at("ansatz").at("layers").get<int>();
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    if (n.contains("ideal")) c.noise_ideal = n.at("ideal").get<bool>();
    double p2 = n.value("p2", 0.01);
    double eps = n.value("eps", 0.02);
    double p01 = n.value("p01", 0.02);
    double p10 = n.value("p10", 0.04);
    c.noise.cnot_pauli_error = p2;
    c.noise.cnot_coherent_angle = eps;
    c.noise.readout = ConfusionModel::uniform(c.num_sites, p01, p10);
  } else {
    c.noise.readout = ConfusionModel::uniform(c.num_sites, 0.02, 0.04);
  }
  if (j.contains("mitigation")) {
    const json& m = j.at("mitigation");
    c.mitigation.trex = m.value("trex", false);
    c.mitigation.twirl = m.value("twirl", false);
    c.mitigation.zne = m.value("zne", false);
    c.mitigation.trex_twirls = m.value("trex_twirls", 16);
    if (m.contains("zne_lambdas"))
      c.mitigation.zne_lambdas = m.at("zne_lambdas").get<std::vector<int>>();
    c.mitigation.calib_shots = m.value("calib_shots", std::uint64_t{100000});
  }
  c.shots = j.value("shots", std::uint64_t{100000});
  c.seed = j.value("seed", std::uint64_t{1});
  c.restarts = j.value("restarts", 2);
  c.jobs = j.value("jobs", 1);
  c.output_dir = j.value("output_dir", std::string("runs"));
  return c;
}

json ScanConfig::to_json() const {
  json j;
  j["model"]["num_sites"] = num_sites;
  j["model"]["boundary"] = boundary_name(boundary);
  j["model"]["j1"] = j1;
  j["model"]["bx"] = bx;
  j["model"]["j2_list"] = j2_list;
  j["ansatz"]["layers"] = ansatz_layers;
  j["noise"]["ideal"] = noise_ideal;
  j["noise"]["p2"] = noise.cnot_pauli_error;
  j["noise"]["eps"] = noise.cnot_coherent_angle;
  j["noise"]["p01"] = noise.readout.p01.empty() ? 0.0 : noise.readout.p01[0];
  j["noise"]["p10"] = noise.readout.p10.empty() ? 0.0 : noise.readout.p10[0];
  j["mitigation"]["trex"] = mitigation.trex;
  j["mitigation"]["twirl"] = mitigation.twirl;
  j["mitigation"]["zne"] = mitigation.zne;
  j["mitigation"]["trex_twirls"] = mitigation.trex_twirls;
  j["mitigation"]["zne_lambdas"] = mitigation.zne_lambdas;
  j["mitigation"]["calib_shots"] = mitigation.calib_shots;
  j["shots"] = shots;
  j["seed"] = seed;
  j["restarts"] = restarts;
  j["jobs"] = jobs;
  j["output_dir"] = output_dir;
  return j;
}

void ScanConfig::validate() const {
  if (num_sites < 3) throw std::invalid_argument("num_sites must be >= 3");
  for (size_t i = 0; i + 1 < j2_list.size(); ++i)
    if (!(j2_list[i] < j2_list[i + 1]))
      throw std::invalid_argument("j2_list must be strictly increasing");
  for (double v : j2_list)
    if (v < 0) throw std::invalid_argument("j2 values must be >= 0");
  if (ansatz_layers < 1) throw std::invalid_argument("ansatz layers must be >= 1");
  if (shots == 0) throw std::invalid_argument("shots must be >= 1");
  if (restarts < 0) throw std::invalid_argument("restarts must be >= 0");
  if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
  if (!noise_ideal) noise.validate(num_sites);
  if (mitigation.trex_twirls < 1)
    throw std::invalid_argument("trex_twirls must be >= 1");
  if (mitigation.zne) {
    if (mitigation.zne_lambdas.size() < 2)
      throw std::invalid_argument("zne needs >= 2 folding factors");
    for (size_t i = 0; i < mitigation.zne_lambdas.size(); ++i) {
      int l = mitigation.zne_lambdas[i];
      if (l < 1 || l % 2 == 0)
        throw std::invalid_argument("zne folding factors must be odd and >= 1");
      if (i && mitigation.zne_lambdas[i] <= mitigation.zne_lambdas[i - 1])
        throw std::invalid_argument("zne folding factors must be increasing");
    }
  }
}

std::vector<ModelParams> ScanConfig::grid() const {
  std::vector<ModelParams> out;
  for (double j2 : j2_list) {
    ModelParams mp;
    mp.num_sites = num_sites;
    mp.j1 = j1;
    mp.j2 = j2;
    mp.bx = bx;
    mp.boundary = boundary;
    out.push_back(mp);
  }
  return out;
}

std::string config_hash(const ScanConfig& config) {
  return fnv1a64_hex(config.to_json().dump());
}

std::string run_dir(const ScanConfig& config) {
  return (fsys::path(config.output_dir) / config_hash(config)).string();
}

json record_to_json(const MeasurementRecord& rec) {
  json j;
  j["circuit_id"] = rec.circuit_id;
  j["basis"] = basis_name(rec.basis);
  j["num_qubits"] = rec.num_qubits;
  j["shots"] = rec.shots;
  j["seed"] = rec.seed;
  j["frame_id"] = rec.frame_id;
  j["meas_xframe"] = rec.meas_xframe;
  j["noise_scale"] = rec.noise_scale;
  json counts = json::object();
  for (const auto& [outcome, count] : rec.counts)
    counts[std::to_string(outcome)] = count;
  j["counts"] = counts;
  return j;
}

MeasurementRecord record_from_json(const json& j) {
  MeasurementRecord rec;
  rec.circuit_id = j.at("circuit_id").get<std::string>();
  std::string basis = j.at("basis").get<std::string>();
  if (basis == "Z")
    rec.basis = Basis::Z;
  else if (basis == "X")
    rec.basis = Basis::X;
  else
    throw std::invalid_argument("unknown basis " + basis);
  rec.num_qubits = j.at("num_qubits").get<int>();
  rec.shots = j.at("shots").get<std::uint64_t>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.frame_id = j.at("frame_id").get<int>();
  rec.meas_xframe = j.at("meas_xframe").get<std::uint64_t>();
  rec.noise_scale = j.at("noise_scale").get<int>();
  for (const auto& [key, value] : j.at("counts").items())
    rec.counts[std::stoull(key)] = value.get<std::uint64_t>();
  return rec;
}

namespace {

struct ParamPoint {
  bool ok = false;
  bool converged = false;
  std::vector<double> params;
  std::string error;
};

std::vector<ParamPoint> load_param_archive(const fsys::path& dir, size_t n) {
  std::vector<ParamPoint> out(n);
  for (size_t k = 0; k < n; ++k) {
    auto j = read_json_file(dir / ("point_" + std::to_string(k) + ".json"));
    if (!j) {
      out[k].error = "missing parameter file";
      continue;
    }
    out[k].ok = j->value("ok", false);
    out[k].converged = j->value("converged", false);
    if (j->contains("params"))
      out[k].params = j->at("params").get<std::vector<double>>();
    out[k].error = j->value("error", std::string());
  }
  return out;
}

void write_manifest(const ScanConfig& config) {
  fsys::create_directories(run_dir(config));
  json m;
  m["hash"] = config_hash(config);
  m["schema"] = "phase-scope run v1";
  m["config"] = config.to_json();
  write_text(fsys::path(run_dir(config)) / "manifest.json", m.dump(2) + "\n");
}

struct PointScan {
  std::vector<MeasurementRecord> archive;
  std::vector<std::string> flags;
  bool skipped = false;

  double vqe_energy = 0;
  double energy_raw = 0, energy_raw_err = 0;
  double deriv_raw = 0, deriv_raw_err = 0;
  bool has_trex = false;
  double energy_trex = 0, energy_trex_err = 0;
  double deriv_trex = 0, deriv_trex_err = 0;
  bool has_zne = false;
  double energy_zne = 0, energy_zne_err = 0, zne_a = 0;
  std::string zne_fit_kind;
  double deriv_zne = 0, deriv_zne_err = 0;
  bool has_chi = false;
  double chi = 0, chi_err = 0;
  std::string chi_generator;
  std::optional<CorrelationMatrix> zz, xx;
};

std::uint64_t point_seed(std::uint64_t master, size_t k) {
  return splitmix64(master ^ splitmix64(0x5ca0ULL + k));
}

PointScan scan_point(const ScanConfig& config, const std::vector<ModelParams>& grid,
                     size_t k, const std::vector<ParamPoint>& archive,
                     Executor& exec, const TrexCalibration* cal) {
  PointScan out;
  const ModelParams& mp = grid[k];
  if (!archive[k].ok || archive[k].params.empty()) {
    out.skipped = true;
    out.flags.push_back("missing-params");
    return out;
  }
  if (!archive[k].converged) out.flags.push_back("not-converged");

  AnsatzSpec aspec{mp.num_sites, config.ansatz_layers, mp.boundary};
  const Circuit circuit = build_ansatz(aspec);
  const std::vector<double>& params = archive[k].params;
  const PauliSum h = build_hamiltonian(mp);
  const PauliSum ha = build_ha(mp);
  const std::uint64_t pseed = point_seed(config.seed, k);

  std::vector<int> lambdas =
      config.mitigation.zne ? config.mitigation.zne_lambdas : std::vector<int>{1};
  if (std::find(lambdas.begin(), lambdas.end(), 1) == lambdas.end())
    lambdas.insert(lambdas.begin(), 1);

  std::vector<std::vector<MeasurementRecord>> by_lambda(lambdas.size());
  for (size_t li = 0; li < lambdas.size(); ++li) {
    Circuit folded = fold_cnots(circuit, lambdas[li]);
    for (int bi = 0; bi < 2; ++bi) {
      Basis basis = bi == 0 ? Basis::Z : Basis::X;
      std::uint64_t sub = splitmix64(pseed ^ (li * 2 + bi + 1));
      std::string id = "scan:" + std::to_string(k) + ":l" +
                       std::to_string(lambdas[li]) + ":" + basis_name(basis);
      std::vector<MeasurementRecord> recs;
      if (config.mitigation.trex) {
        recs = trex_execute(folded, params, exec, basis, config.shots,
                            config.mitigation.trex_twirls, sub);
      } else {
        recs.push_back(exec.execute(folded, params, basis, config.shots, sub));
      }
      for (auto& r : recs) {
        r.noise_scale = lambdas[li];
        r.circuit_id = id;
        by_lambda[li].push_back(r);
        out.archive.push_back(std::move(r));
      }
    }
  }

  out.vqe_energy = energy_cost(circuit, params, h);
  std::tie(out.energy_raw, out.energy_raw_err) =
      expectation_from_counts(h, by_lambda[0]);
  std::tie(out.deriv_raw, out.deriv_raw_err) =
      expectation_from_counts(ha, by_lambda[0]);

  if (cal) {
    out.has_trex = true;
    std::tie(out.energy_trex, out.energy_trex_err) =
        trex_correct(h, by_lambda[0], *cal);
    std::tie(out.deriv_trex, out.deriv_trex_err) =
        trex_correct(ha, by_lambda[0], *cal);
    if (cal->low_confidence) out.flags.push_back("low-confidence-calibration");
  }

  if (config.mitigation.zne) {
    out.has_zne = true;
    std::vector<ZnePoint> epts, dpts;
    for (size_t li = 0; li < lambdas.size(); ++li) {
      auto [e, ee] = cal ? trex_correct(h, by_lambda[li], *cal)
                         : expectation_from_counts(h, by_lambda[li]);
      auto [d, de] = cal ? trex_correct(ha, by_lambda[li], *cal)
                         : expectation_from_counts(ha, by_lambda[li]);
      epts.push_back({lambdas[li], e, ee});
      dpts.push_back({lambdas[li], d, de});
    }
    ZneFit efit = zne_fit(epts);
    out.energy_zne = efit.e0;
    out.energy_zne_err = efit.e0_err;
    out.zne_a = efit.a;
    out.zne_fit_kind = efit.fit_kind;
    if (efit.fit_kind != "exponential") out.flags.push_back("zne-linear-fallback");
    ZneFit dfit = zne_fit(dpts);
    out.deriv_zne = dfit.e0;
    out.deriv_zne_err = dfit.e0_err;
  }

  // Overlap survivals against the next scan point, one circuit per generator.
  if (k + 1 < grid.size() && archive[k + 1].ok && !archive[k + 1].params.empty()) {
    SymmetryGroup group = make_symmetry_group(mp.num_sites, mp.boundary, h);
    double best_overlap = -1, best_err = 0;
    std::string best_label;
    for (size_t a = 0; a < group.actions.size(); ++a) {
      Circuit compound = overlap_circuit(circuit, params, circuit,
                                         archive[k + 1].params, group.actions[a]);
      MeasurementRecord rec =
          exec.execute(compound, {}, Basis::Z, config.shots,
                       splitmix64(pseed ^ (0xf500ULL + a)));
      rec.circuit_id = "fs:" + std::to_string(k) + ":" + group.actions[a].label;
      OverlapEstimate est = survival_estimate(rec);
      out.archive.push_back(std::move(rec));
      double overlap = std::sqrt(est.survival);
      double err = overlap > 1e-6 ? est.stderr_ / (2 * overlap) : est.stderr_;
      if (overlap > best_overlap) {
        best_overlap = overlap;
        best_err = err;
        best_label = group.actions[a].label;
      }
    }
    out.has_chi = true;
    out.chi = 1.0 - best_overlap;
    out.chi_err = best_err;
    out.chi_generator = best_label;
  }

  CorrelationMatrix zz = correlation_matrix(merge_records(by_lambda[0], Basis::Z, 1));
  CorrelationMatrix xx = correlation_matrix(merge_records(by_lambda[0], Basis::X, 1));
  if (cal) {
    zz = correct_correlations(zz, cal->c);
    xx = correct_correlations(xx, cal->c);
  }
  out.zz = std::move(zz);
  out.xx = std::move(xx);
  return out;
}

}  // namespace

int cmd_optimize(const ScanConfig& config, std::ostream& log) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  write_manifest(config);
  fsys::path params_dir = fsys::path(run_dir(config)) / "params";
  fsys::create_directories(params_dir);

  std::vector<ModelParams> grid = config.grid();
  if (grid.empty()) {
    log << "optimize: empty grid, nothing to do\n";
    return kExitOk;
  }

  ScanStrategy strategy;
  strategy.ansatz = {config.num_sites, config.ansatz_layers, config.boundary};
  strategy.seed = config.seed;
  strategy.restarts = config.restarts;
  std::vector<ScanPointResult> results = scan_optimize(grid, strategy);

  int ok_count = 0;
  for (size_t k = 0; k < results.size(); ++k) {
    const ScanPointResult& r = results[k];
    json j;
    j["index"] = k;
    j["j2"] = r.mp.j2;
    j["ok"] = r.ok;
    j["error"] = r.error;
    j["converged"] = r.report.converged;
    j["cost_kind"] = r.report.cost_kind;
    j["final_cost"] = r.report.final_cost;
    j["iterations"] = r.report.cost_history.size();
    j["params"] = r.report.final_params;
    write_text(params_dir / ("point_" + std::to_string(k) + ".json"),
               j.dump(2) + "\n");
    if (r.ok) ++ok_count;
    log << "optimize point " << k << " j2=" << g17(r.mp.j2)
        << (r.ok ? " energy=" + g17(r.report.final_cost) : " FAILED: " + r.error)
        << "\n";
  }
  log << "optimize: " << ok_count << "/" << results.size() << " points ok\n";
  return ok_count > 0 ? kExitOk : kExitPartial;
}

int cmd_scan(const ScanConfig& config, std::ostream& log) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  write_manifest(config);
  const fsys::path dir = run_dir(config);
  fsys::create_directories(dir / "records");

  std::vector<ModelParams> grid = config.grid();
  std::vector<ParamPoint> archive = load_param_archive(dir / "params", grid.size());

  IdealExecutor ideal;
  std::optional<NoisyExecutor> noisy;
  Executor* base = &ideal;
  if (!config.noise_ideal) {
    noisy.emplace(config.noise);
    base = &*noisy;
  }
  std::optional<TwirlingExecutor> twirler;
  Executor* exec = base;
  if (config.mitigation.twirl) {
    twirler.emplace(*base);
    exec = &*twirler;
  }

  std::optional<TrexCalibration> cal;
  if (config.mitigation.trex) {
    cal = trex_calibrate(*base, config.num_sites, config.mitigation.calib_shots,
                         splitmix64(config.seed ^ 0xca1ULL),
                         config.mitigation.trex_twirls);
    json cj;
    cj["c"] = cal->c;
    cj["c_err"] = cal->c_err;
    cj["shots"] = cal->shots;
    cj["low_confidence"] = cal->low_confidence;
    write_text(dir / "calibration.json", cj.dump(2) + "\n");
  }

  std::vector<PointScan> points(grid.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t k = next.fetch_add(1);
      if (k >= grid.size()) return;
      try {
        points[k] = scan_point(config, grid, k, archive, *exec,
                               cal ? &*cal : nullptr);
      } catch (const std::exception& e) {
        points[k].skipped = true;
        points[k].flags.push_back(std::string("error:") + e.what());
      }
    }
  };
  int jobs = std::min<int>(config.jobs, std::max<size_t>(grid.size(), 1));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Post-processing is sequential: the alignment chain references the
  // previous aligned matrix, and ordered writes keep output byte-stable.
  std::ostringstream csv;
  csv << "# phase-scope results schema v1\n";
  csv << "point,num_sites,boundary,j1,j2,bx,vqe_energy,"
         "energy_raw,energy_raw_err,deriv_raw,deriv_raw_err,"
         "energy_trex,energy_trex_err,deriv_trex,deriv_trex_err,"
         "energy_zne,energy_zne_err,zne_a,zne_fit,deriv_zne,deriv_zne_err,"
         "chi,chi_err,chi_generator,align_shift,flags\n";

  std::optional<CorrelationMatrix> prev_zz;
  bool any_skipped = false;
  for (size_t k = 0; k < grid.size(); ++k) {
    PointScan& p = points[k];
    std::ostringstream lines;
    for (const auto& rec : p.archive) lines << record_to_json(rec).dump() << "\n";
    write_text(dir / "records" / ("point_" + std::to_string(k) + ".jsonl"),
               lines.str());

    int align_shift = 0;
    if (!p.skipped && p.zz) {
      if (prev_zz) {
        auto [aligned, shift] =
            align_correlations(*prev_zz, *p.zz, grid[k].boundary);
        p.zz = std::move(aligned);
        align_shift = shift;
      }
      prev_zz = p.zz;
    }

    csv << k << "," << grid[k].num_sites << "," << boundary_name(grid[k].boundary)
        << "," << g17(grid[k].j1) << "," << g17(grid[k].j2) << ","
        << g17(grid[k].bx) << ",";
    if (p.skipped) {
      any_skipped = true;
      csv << ",,,,,,,,,,,,,,,,,,," << join(p.flags, '|') << "\n";
      log << "scan point " << k << " skipped: " << join(p.flags, '|') << "\n";
      continue;
    }
    csv << g17(p.vqe_energy) << "," << g17(p.energy_raw) << ","
        << g17(p.energy_raw_err) << "," << g17(p.deriv_raw) << ","
        << g17(p.deriv_raw_err) << ",";
    if (p.has_trex)
      csv << g17(p.energy_trex) << "," << g17(p.energy_trex_err) << ","
          << g17(p.deriv_trex) << "," << g17(p.deriv_trex_err) << ",";
    else
      csv << ",,,,";
    if (p.has_zne)
      csv << g17(p.energy_zne) << "," << g17(p.energy_zne_err) << ","
          << g17(p.zne_a) << "," << p.zne_fit_kind << "," << g17(p.deriv_zne)
          << "," << g17(p.deriv_zne_err) << ",";
    else
      csv << ",,,,,,";
    if (p.has_chi)
      csv << g17(p.chi) << "," << g17(p.chi_err) << "," << p.chi_generator << ",";
    else
      csv << ",,,";
    csv << align_shift << "," << join(p.flags, '|') << "\n";
    log << "scan point " << k << " j2=" << g17(grid[k].j2)
        << " energy_raw=" << g17(p.energy_raw) << "\n";
  }
  write_text(dir / "results.csv", csv.str());
  log << "scan: wrote " << (dir / "results.csv").string() << "\n";
  return any_skipped ? kExitPartial : kExitOk;
}

int cmd_analyze(const ScanConfig& config, std::ostream& log) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  const fsys::path dir = run_dir(config);
  std::vector<ModelParams> grid = config.grid();

  std::optional<TrexCalibration> cal;
  if (auto cj = read_json_file(dir / "calibration.json")) {
    cal.emplace();
    cal->c = cj->at("c").get<std::vector<double>>();
    cal->c_err = cj->at("c_err").get<std::vector<double>>();
    cal->shots = cj->at("shots").get<std::uint64_t>();
    cal->low_confidence = cj->at("low_confidence").get<bool>();
  }

  std::vector<ScanRecord> scan;
  std::vector<json> point_reports;
  std::optional<CorrelationMatrix> prev_zz;
  std::vector<double> xx_steps;
  std::optional<CorrelationMatrix> prev_xx;

  for (size_t k = 0; k < grid.size(); ++k) {
    std::ifstream in(dir / "records" / ("point_" + std::to_string(k) + ".jsonl"));
    std::vector<MeasurementRecord> records;
    std::string line;
    while (in && std::getline(in, line)) {
      if (line.empty()) continue;
      records.push_back(record_from_json(json::parse(line)));
    }
    ScanRecord rec;
    rec.mp = grid[k];
    json pr;
    pr["index"] = k;
    pr["j2"] = grid[k].j2;
    std::vector<std::string> notes;
    if (records.empty()) {
      notes.push_back("missing-records");
      pr["notes"] = notes;
      point_reports.push_back(std::move(pr));
      scan.push_back(std::move(rec));
      continue;
    }

    const PauliSum h = build_hamiltonian(grid[k]);
    const PauliSum ha = build_ha(grid[k]);
    std::vector<MeasurementRecord> base;
    std::map<std::string, const MeasurementRecord*> fs_records;
    for (const auto& r : records) {
      if (r.circuit_id.rfind("scan:", 0) == 0 && r.noise_scale == 1)
        base.push_back(r);
      else if (r.circuit_id.rfind("fs:", 0) == 0)
        fs_records[r.circuit_id] = &r;
    }

    if (cal) {
      std::tie(rec.energy, rec.energy_err) = trex_correct(h, base, *cal);
      std::tie(rec.deriv, rec.deriv_err) = trex_correct(ha, base, *cal);
    } else {
      std::tie(rec.energy, rec.energy_err) = expectation_from_counts(h, base);
      std::tie(rec.deriv, rec.deriv_err) = expectation_from_counts(ha, base);
    }

    CorrelationMatrix zz = correlation_matrix(merge_records(base, Basis::Z, 1));
    CorrelationMatrix xx = correlation_matrix(merge_records(base, Basis::X, 1));
    if (cal) {
      zz = correct_correlations(zz, cal->c);
      xx = correct_correlations(xx, cal->c);
    }
    if (prev_zz) {
      auto [aligned, shift] = align_correlations(*prev_zz, zz, grid[k].boundary);
      zz = std::move(aligned);
      rec.align_shift = shift;
      auto [xal, xsh] = align_correlations(*prev_xx, xx, grid[k].boundary);
      (void)xsh;
      xx = std::move(xal);
    }
    if (prev_xx) {
      double acc = 0;
      for (size_t e = 0; e < xx.values.size(); ++e) {
        double d = xx.values[e] - prev_xx->values[e];
        acc += d * d;
      }
      xx_steps.push_back(std::sqrt(acc));
    }
    prev_zz = zz;
    prev_xx = xx;
    rec.zz = std::move(zz);
    rec.xx = std::move(xx);

    if (!fs_records.empty()) {
      double best = -1;
      std::string best_label;
      for (const auto& [id, r] : fs_records) {
        double overlap = std::sqrt(survival_estimate(*r).survival);
        if (overlap > best) {
          best = overlap;
          best_label = id.substr(id.rfind(':') + 1);
        }
      }
      rec.chi = 1.0 - best;
      rec.chi_err = 0.0;
      rec.chi_generator = best_label;
    }

    pr["energy"] = rec.energy;
    pr["energy_err"] = rec.energy_err;
    pr["deriv"] = rec.deriv;
    pr["deriv_err"] = rec.deriv_err;
    if (rec.chi) pr["chi"] = *rec.chi;
    pr["chi_generator"] = rec.chi_generator;
    pr["align_shift"] = rec.align_shift;
    pr["notes"] = notes;
    point_reports.push_back(std::move(pr));
    scan.push_back(std::move(rec));
  }

  std::vector<TransitionInterval> intervals;
  if (scan.size() >= 3) intervals = detect_transitions(scan);

  // Flag X-basis anomalies that no other observable corroborates.
  if (xx_steps.size() == scan.size() - 1 && xx_steps.size() >= 2) {
    std::vector<double> sorted = xx_steps;
    std::sort(sorted.begin(), sorted.end());
    size_t mid = sorted.size() / 2;
    double med = sorted.size() % 2 ? sorted[mid]
                                   : 0.5 * (sorted[mid - 1] + sorted[mid]);
    std::vector<double> dev;
    for (double v : xx_steps) dev.push_back(std::abs(v - med));
    std::sort(dev.begin(), dev.end());
    double mad = dev.size() % 2 ? dev[dev.size() / 2]
                                : 0.5 * (dev[dev.size() / 2 - 1] + dev[dev.size() / 2]);
    double thr = med + 5.0 * std::max(mad, 1e-9 * std::max(1.0, std::abs(med)));
    for (size_t k = 0; k < xx_steps.size(); ++k) {
      if (xx_steps[k] <= thr) continue;
      bool supported = false;
      for (const auto& iv : intervals)
        if (iv.lo == scan[k].mp.j2 && iv.hi == scan[k + 1].mp.j2) supported = true;
      if (!supported) {
        point_reports[k]["notes"].push_back("xx-anomaly-unsupported");
        log << "analyze: XX anomaly at interval (" << g17(scan[k].mp.j2) << ", "
            << g17(scan[k + 1].mp.j2) << ") without FS/ZZ support\n";
      }
    }
  }

  json report;
  report["hash"] = config_hash(config);
  report["schema"] = "phase-scope report v1";
  json jiv = json::array();
  for (const auto& iv : intervals) {
    json e;
    e["lo"] = iv.lo;
    e["hi"] = iv.hi;
    e["evidence"] = iv.evidence;
    jiv.push_back(std::move(e));
  }
  report["intervals"] = jiv;
  report["points"] = point_reports;
  fsys::create_directories(dir);
  write_text(dir / "report.json", report.dump(2) + "\n");
  log << "analyze: " << intervals.size() << " flagged interval(s)\n";
  return kExitOk;
}

int cmd_ed(const ScanConfig& config, std::ostream& log) {
  try {
    config.validate();
    if (config.num_sites > 14)
      throw std::invalid_argument("exact diagonalization is limited to 14 sites");
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
  write_manifest(config);
  const fsys::path dir = run_dir(config);

  std::ostringstream csv;
  csv << "# phase-scope ed oracle schema v1\n";
  csv << "point,j2,e0,e1,gap,degeneracy,deriv_exact,chi_pert,d2e_magnitude\n";
  std::vector<ModelParams> grid = config.grid();
  for (size_t k = 0; k < grid.size(); ++k) {
    int keep = grid[k].num_sites <= 10 ? -1 : 16;
    SpectrumResult sr = exact_diagonalize(grid[k], keep);
    const PauliSum ha = build_ha(grid[k]);
    double deriv = energy_derivative_exact(sr.states[0], ha);
    std::string chi_s, d2_s;
    try {
      chi_s = g17(perturbative_chi(sr, ha));
      d2_s = g17(second_derivative(sr, ha));
    } catch (const std::exception&) {
      // Degenerate ground state or truncated spectrum: no perturbative sums.
    }
    csv << k << "," << g17(grid[k].j2) << "," << g17(sr.energies[0]) << ","
        << g17(sr.energies.size() > 1 ? sr.energies[1] : sr.energies[0]) << ","
        << g17(sr.energies.size() > 1 ? sr.energies[1] - sr.energies[0] : 0.0)
        << "," << sr.ground_degeneracy << "," << g17(deriv) << "," << chi_s
        << "," << d2_s << "\n";
    log << "ed point " << k << " j2=" << g17(grid[k].j2)
        << " e0=" << g17(sr.energies[0]) << " deg=" << sr.ground_degeneracy
        << "\n";
  }
  write_text(dir / "ed.csv", csv.str());
  log << "ed: wrote " << (dir / "ed.csv").string() << "\n";
  return kExitOk;
}

int cmd_selftest(std::ostream& log) {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    log << "[selftest] " << (ok ? "ok   " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };
  try {
    {
      PauliTerm yy{"YY", 1.0};
      PauliTerm conj = conjugate_by_cnot(yy, 0, 1);
      check("cnot conjugation YY -> -XZ",
            conj.letters == "XZ" && std::abs(conj.coefficient + 1.0) < 1e-15);
    }
    {
      PauliSum s = PauliSum::parse("-1.0 ZZII\n0.5 XIII\n");
      check("pauli text roundtrip", PauliSum::parse(s.to_text()).to_text() == s.to_text());
    }
    {
      Circuit ghz;
      ghz.num_qubits = 2;
      ghz.append(Gate::ry(0, 3.14159265358979323846 / 2));
      ghz.append(Gate::cnot(0, 1));
      Statevector s = run(ghz);
      double zz = expectation(s, PauliSum::parse("1 ZZ"));
      double xx = expectation(s, PauliSum::parse("1 XX"));
      check("bell state correlators",
            std::abs(zz - 1) < 1e-12 && std::abs(xx - 1) < 1e-12);
    }
    {
      ModelParams mp{4, 1.0, 0.3, 0.1, Boundary::Open};
      SpectrumResult sr = exact_diagonalize(mp, 4);
      bool ascending = true;
      for (size_t i = 1; i < sr.energies.size(); ++i)
        if (sr.energies[i] < sr.energies[i - 1] - 1e-12) ascending = false;
      double product_up = expectation(Statevector::zero_state(4),
                                      build_hamiltonian(mp));
      check("ed variational bound",
            ascending && sr.energies[0] <= product_up + 1e-12);
    }
    {
      Circuit c;
      c.num_qubits = 3;
      c.append(Gate::ry(0, 0.7));
      c.append(Gate::cnot(0, 1));
      c.append(Gate::ry(2, -0.4));
      c.append(Gate::cnot(1, 2));
      Circuit framed = apply_pauli_frame(c, random_cnot_frames(2, 11));
      Statevector a = run(c), b = run(framed);
      double ov = std::abs(inner_product(a, b));
      check("pauli frame preserves the unitary", std::abs(ov - 1) < 1e-12);
    }
    {
      std::vector<ZnePoint> pts;
      for (int l : {1, 3, 5}) pts.push_back({l, -2.0 * std::exp(-0.1 * l), 1e-6});
      ZneFit fit = zne_fit(pts);
      check("zne exact recovery", std::abs(fit.e0 + 2.0) < 1e-6 &&
                                      std::abs(fit.a + 0.1) < 1e-6);
    }
    {
      Circuit c;
      c.num_qubits = 2;
      c.append(Gate::ry(0, 1.0));
      c.append(Gate::cnot(0, 1));
      NoiseModel nm = NoiseModel::defaults(2);
      MeasurementRecord r1 = noisy_execute(c, {}, nm, Basis::Z, 2000, 42);
      MeasurementRecord r2 = noisy_execute(c, {}, nm, Basis::Z, 2000, 42);
      check("noisy sampling determinism", r1.counts == r2.counts);
    }
  } catch (const std::exception& e) {
    log << "[selftest] FAIL exception: " << e.what() << "\n";
    ++failures;
  }
  log << "selftest: " << (failures == 0 ? "all checks passed" : "FAILURES") << "\n";
  return failures == 0 ? kExitOk : kExitPartial;
}

}  // namespace phasescope
