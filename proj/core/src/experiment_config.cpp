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

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mimoic/harness.hpp"

namespace mimoic::harness {

namespace {

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config key '" + key + "': bad value '" + YAML::Dump(node) + "'");
  }
}

template <typename T>
std::vector<T> list(const YAML::Node& node, const std::string& key, bool allow_empty = false) {
  std::vector<T> out;
  if (node.IsSequence()) {
    for (const YAML::Node& item : node) out.push_back(scalar<T>(item, key));
  } else {
    out.push_back(scalar<T>(node, key));
  }
  if (out.empty() && !allow_empty) throw ConfigError("config key '" + key + "' is empty");
  return out;
}

void apply_node(ExperimentSpec& spec, const std::string& key, const YAML::Node& value) {
  if (key == "users") {
    spec.users = scalar<int>(value, key);
  } else if (key == "tx_antennas") {
    spec.tx_antennas = list<int>(value, key);
  } else if (key == "rx_antennas") {
    spec.rx_antennas = list<int>(value, key);
  } else if (key == "streams") {
    spec.streams = list<int>(value, key);
  } else if (key == "snr_start_db") {
    spec.snr_start_db = scalar<double>(value, key);
  } else if (key == "snr_stop_db") {
    spec.snr_stop_db = scalar<double>(value, key);
  } else if (key == "snr_step_db") {
    spec.snr_step_db = scalar<double>(value, key);
  } else if (key == "mc") {
    spec.mc = scalar<int>(value, key);
  } else if (key == "algorithm") {
    const auto name = scalar<std::string>(value, key);
    const auto parsed = algorithms::parse_algorithm(name);
    if (!parsed) {
      throw ConfigError("unknown algorithm '" + name +
                        "' (dia|max-sinr|max-sinr-mod|gevd|min-sum-mse)");
    }
    spec.algorithm = *parsed;
  } else if (key == "iters") {
    const auto text = scalar<std::string>(value, key);
    if (text == "auto") {
      spec.iters.reset();
    } else {
      spec.iters = scalar<int>(value, key);
    }
  } else if (key == "epsilon") {
    spec.epsilon = scalar<double>(value, key);
  } else if (key == "power_control") {
    const auto name = scalar<std::string>(value, key);
    const auto parsed = parse_power_control(name);
    if (!parsed) throw ConfigError("unknown power_control '" + name + "' (none|adhoc|spca)");
    spec.power_control = *parsed;
  } else if (key == "rate_targets") {
    spec.rate_targets = list<double>(value, key, true);
  } else if (key == "seed") {
    spec.seed = scalar<std::uint64_t>(value, key);
  } else if (key == "out") {
    spec.out = scalar<std::string>(value, key);
  } else if (key == "threads") {
    spec.threads = scalar<int>(value, key);
  } else if (key == "timing") {
    spec.timing = scalar<bool>(value, key);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "users",        "tx_antennas",  "rx_antennas", "streams", "snr_start_db",
      "snr_stop_db",  "snr_step_db",  "mc",          "algorithm", "iters",
      "epsilon",      "power_control", "rate_targets", "seed",   "out",
      "threads",      "timing"};
  return keys;
}

ExperimentSpec parse_experiment_spec(std::string_view yaml_text, ExperimentSpec base) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  if (root.IsNull()) return base;
  if (!root.IsMap()) throw ConfigError("config must be a mapping of key: value");
  for (const auto& entry : root) {
    apply_node(base, entry.first.as<std::string>(), entry.second);
  }
  return base;
}

ExperimentSpec load_experiment_spec(const std::string& path, ExperimentSpec base) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << is.rdbuf();
  return parse_experiment_spec(buffer.str(), std::move(base));
}

void apply_setting(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  std::string text(value);
  if (key == "out" || key == "algorithm" || key == "power_control") {
    apply_node(spec, std::string(key), YAML::Node(text));
    return;
  }
  if (text.find(',') != std::string::npos && text.front() != '[') {
    text = "[" + text + "]";
  }
  YAML::Node node;
  try {
    node = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("config key '" + std::string(key) + "': " + e.what());
  }
  apply_node(spec, std::string(key), node);
}

std::string format_experiment_spec(const ExperimentSpec& spec) {
  YAML::Emitter out;
  out.SetDoublePrecision(12);
  out << YAML::BeginMap;
  out << YAML::Key << "users" << YAML::Value << spec.users;
  out << YAML::Key << "tx_antennas" << YAML::Value << YAML::Flow << spec.tx_antennas;
  out << YAML::Key << "rx_antennas" << YAML::Value << YAML::Flow << spec.rx_antennas;
  out << YAML::Key << "streams" << YAML::Value << YAML::Flow << spec.streams;
  out << YAML::Key << "snr_start_db" << YAML::Value << spec.snr_start_db;
  out << YAML::Key << "snr_stop_db" << YAML::Value << spec.snr_stop_db;
  out << YAML::Key << "snr_step_db" << YAML::Value << spec.snr_step_db;
  out << YAML::Key << "mc" << YAML::Value << spec.mc;
  out << YAML::Key << "algorithm" << YAML::Value
      << std::string(algorithms::to_string(spec.algorithm));
  out << YAML::Key << "iters" << YAML::Value
      << (spec.iters ? std::to_string(*spec.iters) : std::string("auto"));
  out << YAML::Key << "epsilon" << YAML::Value << spec.epsilon;
  out << YAML::Key << "power_control" << YAML::Value
      << std::string(to_string(spec.power_control));
  out << YAML::Key << "rate_targets" << YAML::Value << YAML::Flow << spec.rate_targets;
  out << YAML::Key << "seed" << YAML::Value << spec.seed;
  out << YAML::Key << "out" << YAML::Value << spec.out;
  out << YAML::Key << "threads" << YAML::Value << spec.threads;
  out << YAML::Key << "timing" << YAML::Value << spec.timing;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace mimoic::harness
