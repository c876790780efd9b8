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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "phasescope/analysis.hpp"
#include "phasescope/mitigation.hpp"
#include "phasescope/noise.hpp"
#include "phasescope/vqe.hpp"

namespace phasescope {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPartial = 1;
inline constexpr int kExitConfigError = 2;

struct MitigationSwitches {
  bool trex = false;
  bool twirl = false;
  bool zne = false;
  int trex_twirls = 16;
  std::vector<int> zne_lambdas = {1, 3, 5};
  std::uint64_t calib_shots = 100000;
};

/// One JSON document describing the whole experiment matrix; command-line
/// flags override individual fields by config path (e.g. --noise.p2 0.01).
struct ScanConfig {
  int num_sites = 4;
  Boundary boundary = Boundary::Open;
  double j1 = 1.0;
  double bx = 0.1;
  std::vector<double> j2_list;

  int ansatz_layers = 1;

  bool noise_ideal = true;
  NoiseModel noise;

  MitigationSwitches mitigation;

  std::uint64_t shots = 100000;
  std::uint64_t seed = 1;
  int restarts = 2;
  int jobs = 1;
  std::string output_dir = "runs";

  static ScanConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;
  std::vector<ModelParams> grid() const;
};

/// Content hash of the canonical config serialization; names the run
/// directory so identical configs share their artifacts.
std::string config_hash(const ScanConfig& config);

/// runs/<hash>/ for this config under config.output_dir.
std::string run_dir(const ScanConfig& config);

int cmd_optimize(const ScanConfig& config, std::ostream& log);
int cmd_scan(const ScanConfig& config, std::ostream& log);
int cmd_analyze(const ScanConfig& config, std::ostream& log);
int cmd_ed(const ScanConfig& config, std::ostream& log);
int cmd_selftest(std::ostream& log);

/// Record (de)serialization for the JSON-lines archive.
nlohmann::json record_to_json(const MeasurementRecord& rec);
MeasurementRecord record_from_json(const nlohmann::json& j);

}  // namespace phasescope
