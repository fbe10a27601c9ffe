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

// Experiment driver: metrics, CSV output, order studies and property checks.
//
// Trajectory CSV header (sleigh):
//   step,t,x,y,theta,z1,z2,px,py,ptheta,p1,p2,H,phi_d,newton_iters
// phi_d on row k is phi_d(q_{k-1}, q_k) and is empty on row 0. Floats are
// written with 17 significant digits.

#ifndef NHOC_HARNESS_HPP_
#define NHOC_HARNESS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nhoc/experiment_config.hpp"
#include "nhoc/integrators.hpp"
#include "nhoc/ocp.hpp"

namespace nhoc::harness {

struct RegisteredModel {
  ocp::OCPModel model;
  std::vector<std::string> state_names;
  // Discrete constraint between consecutive base points, if the model has one.
  std::function<double(const Vec& q_prev, const Vec& q_next)> discrete_constraint;
};

// Throws ConfigError for unknown names or bad parameters.
RegisteredModel make_model(const std::string& name,
                           const std::map<std::string, double>& params);
std::vector<std::string> registered_models();

// (x1 - x0) sin(thetabar) - (y1 - y0) cos(thetabar), thetabar the mean angle.
double phi_d(const Vec& q_k, const Vec& q_next);

struct MetricsRow {
  int step = 0;
  double t = 0.0;
  Vec state;
  double H = 0.0;
  std::optional<double> phi_d;
  int newton_iters = 0;
};

std::vector<MetricsRow> compute_metrics(const RegisteredModel& model,
                                        const integrators::Trajectory& traj);

std::string format_double(double value);
std::string csv_header(const RegisteredModel& model);
void write_metrics_csv(std::ostream& out, const RegisteredModel& model,
                       const std::vector<MetricsRow>& rows);

struct MethodSummary {
  std::string method;
  double max_abs_phi_d = 0.0;
  double max_abs_dH = 0.0;
  double mean_newton_iters = 0.0;
  double wall_time_s = 0.0;
  std::string status = "ok";
};

MethodSummary summarize(const std::string& method,
                        const std::vector<MetricsRow>& rows,
                        const integrators::Trajectory& traj);

// An ordering between two summary quantities, computed but never enforced.
struct Comparison {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct MethodRun {
  integrators::IntegratorSpec spec;
  integrators::Trajectory trajectory;
  std::vector<MetricsRow> rows;
  MethodSummary summary;
};

struct ExperimentResult {
  std::vector<MethodRun> runs;
  std::vector<Comparison> comparisons;

  bool any_failure() const;
  const MethodRun* find(const std::string& label) const;
};

std::vector<Comparison> compare_methods(const std::vector<MethodRun>& runs);

// Runs every configured method (concurrently) and, when `write_files` is set,
// writes <out>/<label>.csv, <out>/summary.csv and <out>/comparisons.csv.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                bool write_files = true);

void write_summary_csv(std::ostream& out, const ExperimentResult& result);
void write_comparisons_csv(std::ostream& out, const ExperimentResult& result);

struct ConvergenceResult {
  std::string method;
  std::vector<double> steps;
  std::vector<double> errors;  // infinity norm of the state error at t_final
  double slope = 0.0;
};

// Least-squares slope of log(ys) against log(xs).
double fit_loglog_slope(const std::vector<double>& xs,
                        const std::vector<double>& ys);

// h_list must be strictly decreasing with at least three entries. The
// reference solution is rk4 with step reference_h.
std::vector<ConvergenceResult> convergence_study(
    const ocp::OCPModel& model, const Vec& init,
    const std::vector<integrators::IntegratorSpec>& methods,
    const std::vector<double>& h_list, double t_final,
    double reference_h = 1e-5);

// Default starting point of the sleigh order study.
Vec convergence_initial_state();

// States drawn uniformly from the per-component envelope of the reference
// sleigh run (rk4 on the reference configuration).
std::vector<Vec> envelope_sample_states(std::uint64_t seed, int count);

enum class CheckLevel { kRequired, kWarning };

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  CheckLevel level = CheckLevel::kRequired;
};

// Property suites behind `nhoc check`: map axioms, lift identities,
// projector and anchor consistency, Hamiltonian gradients, symplecticity.
std::vector<CheckResult> run_property_checks(std::uint64_t seed);

}  // namespace nhoc::harness

#endif  // NHOC_HARNESS_HPP_
