/*
 * Copyright 2026 The mimoic Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

     http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.

*/

// mimoic-sim: runs a Monte-Carlo SNR sweep and writes one CSV row per stream.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mimoic/harness.hpp"

namespace {

std::string dashed(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace mimoic;

  CLI::App app{"MIMO interference-channel beamforming simulator"};
  app.option_defaults()->always_capture_default(false);

  std::string config_path;
  bool print_config = false;
  bool summary = false;
  app.add_option("-c,--config", config_path, "YAML experiment file")->check(CLI::ExistingFile);
  app.add_flag("--print-config", print_config, "Print the resolved spec and exit");
  app.add_flag("--summary", summary, "Print per-SNR aggregates to stdout");

  // Flag values are kept as text and applied after the config file, so the
  // command line overrides it.
  std::map<std::string, std::string> overrides;
  for (const std::string& key : harness::config_keys()) {
    std::string names = "--" + dashed(key);
    if (dashed(key) != key) names += ",--" + key;
    app.add_option_function<std::string>(
        names, [&overrides, key](const std::string& v) { overrides[key] = v; },
        "Override '" + key + "' (comma list for per-user values)");
  }

  CLI11_PARSE(app, argc, argv);

  harness::ExperimentSpec spec;
  try {
    if (!config_path.empty()) spec = harness::load_experiment_spec(config_path);
    for (const auto& [key, value] : overrides) harness::apply_setting(spec, key, value);
    spec.validate();
  } catch (const std::exception& e) {
    std::cerr << "mimoic-sim: " << e.what() << '\n';
    return 2;
  }

  if (print_config) {
    std::cout << harness::format_experiment_spec(spec);
    return 0;
  }

  try {
    const std::vector<harness::TrialRow> rows = harness::run_experiment(spec);
    int failures = 0;
    for (const harness::TrialRow& row : rows) {
      if (!row.error.empty() && row.user == 1 && row.stream == 1) {
        std::cerr << "mimoic-sim: trial mc=" << row.mc << " snr=" << row.snr_db
                  << " dB: " << row.error << '\n';
        ++failures;
      }
    }
    if (spec.out.empty() || spec.out == "-") {
      harness::write_csv(std::cout, rows);
    } else {
      harness::write_csv_file(spec.out, rows);
    }
    if (summary) harness::print_summary(spec.out.empty() ? std::cerr : std::cout,
                                        harness::summarize(rows));
    if (failures > 0) std::cerr << "mimoic-sim: " << failures << " trial(s) failed\n";
  } catch (const std::exception& e) {
    std::cerr << "mimoic-sim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
