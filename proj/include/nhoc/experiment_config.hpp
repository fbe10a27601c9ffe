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

#ifndef NHOC_EXPERIMENT_CONFIG_HPP_
#define NHOC_EXPERIMENT_CONFIG_HPP_

#include <cstdint>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "nhoc/integrators.hpp"
#include "nhoc/types.hpp"

namespace nhoc::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string model = "sleigh";
  std::map<std::string, double> model_params;
  Vec init;
  double h = 0.005;
  double t_final = 20.0;
  std::vector<integrators::IntegratorSpec> methods;
  std::string output_dir = "results";
  std::uint64_t seed = 42;

  // round(t_final / h)
  int n_steps() const;
  // h > 0, t_final > 0, t_final / h within 0.5 of an integer, at least one
  // method, every method spec valid.
  void validate() const;
};

// Flat "key = value" records, '#' starts a comment. Recognized keys:
//   model, m, J, a (any other numeric key lands in model_params too),
//   init (comma list), h, t_final, integrators (comma list of
//   retraction[:delta] | verlet | rk2 | rk4 | gl4), delta, newton_tol,
//   newton_max_iters, out, seed
using ConfigEntries = std::map<std::string, std::string>;

void apply_config_entry(ExperimentConfig& config, const std::string& key,
                        const std::string& value);
// Applies the integrator list before every other key, so method-wide keys
// (delta, newton_tol, newton_max_iters) act on it regardless of order.
void apply_config_entries(ExperimentConfig& config,
                          const ConfigEntries& entries);
ConfigEntries read_config_entries(std::istream& in);
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path,
                                  ExperimentConfig base = {});

Vec parse_vector(const std::string& text);
std::vector<integrators::IntegratorSpec> parse_method_list(
    const std::string& text);

}  // namespace nhoc::harness

#endif  // NHOC_EXPERIMENT_CONFIG_HPP_
