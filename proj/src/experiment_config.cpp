// Copyright 2026 The nhoc Authors
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

#include "nhoc/experiment_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nhoc::harness {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

double parse_double(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + text +
                      "'");
  }
  return value;
}

template <typename Int>
Int parse_int(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  Int value{};
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("config: '" + key + "' expects an integer, got '" +
                      text + "'");
  }
  return value;
}

// Spelling variants accepted in files and on the command line.
std::string canonical_key(const std::string& key) {
  if (key == "integrator") return "integrators";
  if (key == "t-final") return "t_final";
  if (key == "output_dir") return "out";
  if (key == "newton-tol") return "newton_tol";
  if (key == "newton-max-iters") return "newton_max_iters";
  return key;
}

}  // namespace

int ExperimentConfig::n_steps() const {
  return static_cast<int>(std::lround(t_final / h));
}

void ExperimentConfig::validate() const {
  if (!(h > 0.0)) throw ConfigError("config: h must be > 0");
  if (!(t_final > 0.0)) throw ConfigError("config: t_final must be > 0");
  const double ratio = t_final / h;
  if (!std::isfinite(ratio) || std::abs(ratio - std::round(ratio)) >= 0.5 ||
      std::round(ratio) < 1.0) {
    throw ConfigError("config: t_final / h must be close to a positive integer");
  }
  if (methods.empty()) throw ConfigError("config: no integrators selected");
  if (init.size() == 0) throw ConfigError("config: missing initial state");
  for (const auto& m : methods) {
    try {
      m.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
}

Vec parse_vector(const std::string& text) {
  const auto parts = split(text, ',');
  Vec v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = parse_double(parts[i], "init");
  }
  return v;
}

std::vector<integrators::IntegratorSpec> parse_method_list(
    const std::string& text) {
  std::vector<integrators::IntegratorSpec> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    const std::string name = trim(item.substr(0, colon));
    const auto kind = integrators::parse_kind(name);
    if (!kind) throw ConfigError("config: unknown integrator '" + name + "'");
    integrators::IntegratorSpec spec;
    spec.kind = *kind;
    if (colon != std::string::npos) {
      if (*kind != integrators::Kind::kRetraction) {
        throw ConfigError("config: only retraction takes a delta ('" + item +
                          "')");
      }
      spec.delta = parse_double(item.substr(colon + 1), "delta");
    }
    out.push_back(spec);
  }
  return out;
}

void apply_config_entry(ExperimentConfig& config, const std::string& raw_key,
                        const std::string& value) {
  const std::string key = canonical_key(raw_key);
  if (key == "model") {
    config.model = trim(value);
  } else if (key == "init") {
    config.init = parse_vector(value);
  } else if (key == "h") {
    config.h = parse_double(value, key);
  } else if (key == "t_final") {
    config.t_final = parse_double(value, key);
  } else if (key == "integrators") {
    config.methods = parse_method_list(value);
  } else if (key == "delta") {
    const double d = parse_double(value, key);
    for (auto& m : config.methods) {
      if (m.kind == integrators::Kind::kRetraction) m.delta = d;
    }
  } else if (key == "newton_tol") {
    const double tol = parse_double(value, key);
    for (auto& m : config.methods) m.newton_tol = tol;
  } else if (key == "newton_max_iters") {
    const int iters = parse_int<int>(value, key);
    for (auto& m : config.methods) m.newton_max_iters = iters;
  } else if (key == "out") {
    config.output_dir = trim(value);
  } else if (key == "seed") {
    config.seed = parse_int<std::uint64_t>(value, key);
  } else {
    config.model_params[key] = parse_double(value, key);
  }
}

ConfigEntries read_config_entries(std::istream& in) {
  ConfigEntries entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    entries[canonical_key(trim(line.substr(0, eq)))] = trim(line.substr(eq + 1));
  }
  return entries;
}

void apply_config_entries(ExperimentConfig& config,
                          const ConfigEntries& entries) {
  // Method-wide settings need the method list in place first.
  for (const auto& [key, value] : entries) {
    if (canonical_key(key) == "integrators") apply_config_entry(config, key, value);
  }
  for (const auto& [key, value] : entries) {
    if (canonical_key(key) != "integrators") apply_config_entry(config, key, value);
  }
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  apply_config_entries(base, read_config_entries(in));
  return base;
}

ExperimentConfig load_config_file(const std::string& path,
                                  ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in, std::move(base));
}

}  // namespace nhoc::harness
