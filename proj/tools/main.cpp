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

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phasescope/cli.hpp"

namespace {

using nlohmann::json;

/// Remaining tokens are `--path.to.field value` pairs applied on top of the
/// config document; the flag path mirrors the JSON path.
void apply_overrides(json& doc, const std::vector<std::string>& extras) {
  for (size_t i = 0; i < extras.size(); i += 2) {
    std::string key = extras[i];
    if (key.rfind("--", 0) != 0 || i + 1 >= extras.size())
      throw std::invalid_argument("override flags take the form --path value");
    key = key.substr(2);
    for (auto& c : key)
      if (c == '.') c = '/';
    json value;
    try {
      value = json::parse(extras[i + 1]);
    } catch (const json::parse_error&) {
      value = extras[i + 1];
    }
    doc[json::json_pointer("/" + key)] = value;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase-scope: spin-chain scans with noise-robust observables"};
  app.require_subcommand(1);

  std::string config_path;
  auto add_sub = [&](const std::string& name, const std::string& desc,
                     bool takes_config) {
    CLI::App* sub = app.add_subcommand(name, desc);
    if (takes_config) {
      sub->add_option("--config", config_path, "JSON configuration file")
          ->required();
      sub->allow_extras();
    }
    return sub;
  };
  add_sub("optimize", "run VQE across the scan grid and archive parameters", true);
  add_sub("scan", "execute circuits, archive records, write the results table", true);
  add_sub("analyze", "re-analyze archived records into a detection report", true);
  add_sub("ed", "dump the exact-diagonalization oracle table", true);
  add_sub("selftest", "run the built-in invariant checks", false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? phasescope::kExitOk : phasescope::kExitConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    if (sub->get_name() == "selftest")
      return phasescope::cmd_selftest(std::cout);

    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot open config file: " << config_path << "\n";
      return phasescope::kExitConfigError;
    }
    json doc;
    in >> doc;
    apply_overrides(doc, sub->remaining());
    phasescope::ScanConfig config = phasescope::ScanConfig::from_json(doc);

    if (sub->get_name() == "optimize") return phasescope::cmd_optimize(config, std::cout);
    if (sub->get_name() == "scan") return phasescope::cmd_scan(config, std::cout);
    if (sub->get_name() == "analyze") return phasescope::cmd_analyze(config, std::cout);
    if (sub->get_name() == "ed") return phasescope::cmd_ed(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return phasescope::kExitConfigError;
  }
  return phasescope::kExitConfigError;
}
