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

// nhoc: symplectic integrators for nonholonomic optimal control.
//
//   nhoc paper    --out results/
//   nhoc run      [--config FILE] [--integrator retraction --delta 0.5 ...]
//   nhoc converge [--h-list 0.02,0.01,0.005,0.0025 --t-final 1]
//   nhoc check    [--seed 42]
//
// Exit codes: 0 success, 1 solver or check failure, 2 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nhoc/harness.hpp"
#include "nhoc/sleigh.hpp"

namespace {

using nhoc::harness::ConfigEntries;
using nhoc::harness::ConfigError;
using nhoc::harness::ExperimentConfig;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

void print_summary(const nhoc::harness::ExperimentResult& result) {
  std::printf("%-18s %14s %14s %8s %10s  %s\n", "method", "max|phi_d|",
              "max|H-H0|", "newton", "wall[s]", "status");
  for (const auto& run : result.runs) {
    const auto& s = run.summary;
    std::printf("%-18s %14.6e %14.6e %8.3f %10.4f  %s\n", s.method.c_str(),
                s.max_abs_phi_d, s.max_abs_dH, s.mean_newton_iters,
                s.wall_time_s, s.status.c_str());
  }
  for (const auto& c : result.comparisons) {
    std::printf("%-32s %s (%.3e vs %.3e)\n", c.name.c_str(),
                c.holds ? "holds" : "DOES NOT HOLD", c.lhs, c.rhs);
  }
}

int run_config(const ExperimentConfig& config) {
  const auto result = nhoc::harness::run_experiment(config);
  print_summary(result);
  std::printf("wrote %zu trajectories to %s\n", result.runs.size(),
              config.output_dir.c_str());
  for (const auto& run : result.runs) {
    if (run.trajectory.failure) {
      std::fprintf(stderr, "%s: %s\n", run.summary.method.c_str(),
                   run.trajectory.failure->message.c_str());
    }
  }
  return result.any_failure() ? kExitFailure : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symplectic integrators for nonholonomic optimal control"};
  app.require_subcommand(1);

  // paper: the reference experiment
  auto* paper = app.add_subcommand("paper", "Run the reference sleigh experiment");
  std::string paper_out = "results";
  paper->add_option("--out", paper_out, "Output directory");

  // run: config file plus flag overrides
  auto* run = app.add_subcommand("run", "Run an experiment from a config file and/or flags");
  run->set_help_flag("--help", "Print this help message and exit");
  std::string config_path;
  run->add_option("--config", config_path, "Flat key = value config file")
      ->check(CLI::ExistingFile);
  const std::vector<std::pair<std::string, std::string>> run_flags = {
      {"--model", "model"},       {"--m", "m"},
      {"--J", "J"},               {"--a", "a"},
      {"--integrator", "integrators"}, {"--delta", "delta"},
      {"--h", "h"},               {"--t-final", "t_final"},
      {"--init", "init"},         {"--out", "out"},
      {"--newton-tol", "newton_tol"}, {"--newton-max-iters", "newton_max_iters"},
      {"--seed", "seed"}};
  std::vector<std::string> run_values(run_flags.size());
  std::vector<CLI::Option*> run_options;
  for (std::size_t i = 0; i < run_flags.size(); ++i) {
    run_options.push_back(
        run->add_option(run_flags[i].first, run_values[i],
                        "Overrides config key '" + run_flags[i].second + "'"));
  }

  // converge
  auto* converge = app.add_subcommand("converge", "Fit observed orders of accuracy");
  std::string conv_init;
  std::string conv_methods =
      "retraction:0,retraction:0.5,retraction:1,verlet,rk2,rk4,gl4";
  std::string conv_hs = "0.02,0.01,0.005,0.0025";
  double conv_t_final = 1.0;
  double conv_ref_h = 1e-5;
  std::string conv_out;
  converge->add_option("--init", conv_init, "Initial state (comma list)");
  converge->add_option("--integrator", conv_methods, "Methods (comma list)")->capture_default_str();
  converge->add_option("--h-list", conv_hs, "Decreasing step sizes")->capture_default_str();
  converge->add_option("--t-final", conv_t_final, "Final time")->capture_default_str();
  converge->add_option("--reference-h", conv_ref_h, "rk4 reference step")->capture_default_str();
  converge->add_option("--out", conv_out, "Optional CSV of errors");

  // check
  auto* check = app.add_subcommand("check", "Run the property suites");
  std::uint64_t seed = 42;
  check->add_option("--seed", seed, "Seed for sampled states")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*paper) {
      ExperimentConfig config = nhoc::sleigh::paper_experiment_config();
      config.output_dir = paper_out;
      return run_config(config);
    }
    if (*run) {
      ExperimentConfig config = nhoc::sleigh::paper_experiment_config();
      ConfigEntries entries;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        entries = nhoc::harness::read_config_entries(in);
      }
      for (std::size_t i = 0; i < run_flags.size(); ++i) {
        if (run_options[i]->count() > 0) entries[run_flags[i].second] = run_values[i];
      }
      nhoc::harness::apply_config_entries(config, entries);
      return run_config(config);
    }
    if (*converge) {
      const auto model = nhoc::harness::make_model("sleigh", {});
      const nhoc::Vec init = conv_init.empty()
                                 ? nhoc::harness::convergence_initial_state()
                                 : nhoc::harness::parse_vector(conv_init);
      if (init.size() != model.model.state_size()) {
        throw ConfigError("converge: init needs " +
                          std::to_string(model.model.state_size()) + " entries");
      }
      const nhoc::Vec hs = nhoc::harness::parse_vector(conv_hs);
      const auto results = nhoc::harness::convergence_study(
          model.model, init, nhoc::harness::parse_method_list(conv_methods),
          std::vector<double>(hs.data(), hs.data() + hs.size()), conv_t_final,
          conv_ref_h);
      std::ofstream csv;
      if (!conv_out.empty()) {
        csv.open(conv_out);
        csv << "method,h,error\n";
      }
      for (const auto& r : results) {
        std::printf("%-18s slope %.4f  errors:", r.method.c_str(), r.slope);
        for (std::size_t i = 0; i < r.errors.size(); ++i) {
          std::printf(" %.3e", r.errors[i]);
          if (csv.is_open()) {
            csv << r.method << ',' << nhoc::harness::format_double(r.steps[i])
                << ',' << nhoc::harness::format_double(r.errors[i]) << '\n';
          }
        }
        std::printf("\n");
      }
      return kExitOk;
    }
    if (*check) {
      bool ok = true;
      for (const auto& r : nhoc::harness::run_property_checks(seed)) {
        const bool warning = r.level == nhoc::harness::CheckLevel::kWarning;
        const char* tag = r.passed ? "PASS" : (warning ? "WARN" : "FAIL");
        std::printf("[%s] %-45s %s\n", tag, r.name.c_str(), r.detail.c_str());
        if (!r.passed && !warning) ok = false;
      }
      return ok ? kExitOk : kExitFailure;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const nhoc::NewtonDivergence& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitFailure;
  } catch (const nhoc::SingularJacobian& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    return kExitFailure;
  }
  return kExitOk;
}
