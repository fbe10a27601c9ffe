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

#include "nhoc/harness.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>

#include "nhoc/sleigh.hpp"

namespace nhoc::harness {

namespace fs = std::filesystem;

RegisteredModel make_model(const std::string& name,
                           const std::map<std::string, double>& params) {
  if (name != "sleigh") throw ConfigError("unknown model '" + name + "'");

  sleigh::SleighParams p;
  for (const auto& [key, value] : params) {
    if (key == "m") {
      p.m = value;
    } else if (key == "J") {
      p.J = value;
    } else if (key == "a") {
      p.a = value;
    } else {
      throw ConfigError("sleigh: unknown parameter '" + key + "'");
    }
  }
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  RegisteredModel out;
  out.model = sleigh::sleigh_model(p);
  const auto& dist = out.model.distribution();
  out.state_names = dist.base_names;
  out.state_names.insert(out.state_names.end(), dist.fiber_names.begin(),
                         dist.fiber_names.end());
  for (const auto& base : dist.base_names) out.state_names.push_back("p" + base);
  for (int a = 0; a < dist.k; ++a) {
    out.state_names.push_back("p" + std::to_string(a + 1));
  }
  out.discrete_constraint = phi_d;
  return out;
}

std::vector<std::string> registered_models() { return {"sleigh"}; }

double phi_d(const Vec& q_k, const Vec& q_next) {
  if (q_k.size() < 3 || q_next.size() < 3) {
    throw DimensionError("phi_d: expects (x, y, theta)");
  }
  const double mid = 0.5 * (q_next(2) + q_k(2));
  return (q_next(0) - q_k(0)) * std::sin(mid) -
         (q_next(1) - q_k(1)) * std::cos(mid);
}

std::vector<MetricsRow> compute_metrics(const RegisteredModel& model,
                                        const integrators::Trajectory& traj) {
  const int n = model.model.n();
  std::vector<MetricsRow> rows;
  rows.reserve(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    MetricsRow row;
    row.step = static_cast<int>(i);
    row.t = traj.times[i];
    row.state = traj.states[i];
    row.H = ocp::hamiltonian(model.model, row.state);
    if (i > 0) {
      if (model.discrete_constraint) {
        row.phi_d = model.discrete_constraint(traj.states[i - 1].head(n),
                                              row.state.head(n));
      }
      row.newton_iters = traj.diagnostics[i - 1].newton_iters;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string csv_header(const RegisteredModel& model) {
  std::string header = "step,t";
  for (const auto& name : model.state_names) header += "," + name;
  header += ",H,phi_d,newton_iters";
  return header;
}

void write_metrics_csv(std::ostream& out, const RegisteredModel& model,
                       const std::vector<MetricsRow>& rows) {
  out << csv_header(model) << '\n';
  for (const auto& row : rows) {
    out << row.step << ',' << format_double(row.t);
    for (Eigen::Index j = 0; j < row.state.size(); ++j) {
      out << ',' << format_double(row.state(j));
    }
    out << ',' << format_double(row.H) << ',';
    if (row.phi_d) out << format_double(*row.phi_d);
    out << ',' << row.newton_iters << '\n';
  }
}

MethodSummary summarize(const std::string& method,
                        const std::vector<MetricsRow>& rows,
                        const integrators::Trajectory& traj) {
  MethodSummary s;
  s.method = method;
  if (!rows.empty()) {
    const double h0 = rows.front().H;
    for (const auto& row : rows) {
      s.max_abs_dH = std::max(s.max_abs_dH, std::abs(row.H - h0));
      if (row.phi_d) s.max_abs_phi_d = std::max(s.max_abs_phi_d, std::abs(*row.phi_d));
    }
  }
  if (!traj.diagnostics.empty()) {
    double total = 0.0;
    for (const auto& d : traj.diagnostics) total += d.newton_iters;
    s.mean_newton_iters = total / static_cast<double>(traj.diagnostics.size());
  }
  if (traj.failure) {
    s.status = "newton_failure_at_step_" + std::to_string(traj.failure->step);
  }
  return s;
}

bool ExperimentResult::any_failure() const {
  return std::any_of(runs.begin(), runs.end(), [](const MethodRun& r) {
    return !r.trajectory.complete();
  });
}

const MethodRun* ExperimentResult::find(const std::string& label) const {
  for (const auto& r : runs) {
    if (r.summary.method == label) return &r;
  }
  return nullptr;
}

std::vector<Comparison> compare_methods(const std::vector<MethodRun>& runs) {
  auto lookup = [&](const std::string& label) -> const MethodSummary* {
    for (const auto& r : runs) {
      if (r.summary.method == label) return &r.summary;
    }
    return nullptr;
  };
  std::vector<Comparison> out;
  const auto* mid = lookup("retraction_d0.5");
  const auto* verlet = lookup("verlet");
  const auto* rk2 = lookup("rk2");
  const auto* rk4 = lookup("rk4");
  const auto* gl4 = lookup("gl4");
  auto add = [&](std::string name, double lhs, double rhs) {
    out.push_back({std::move(name), lhs, rhs, lhs < rhs});
  };
  if (mid && rk2) add("phi_d retraction_d0.5 < rk2", mid->max_abs_phi_d, rk2->max_abs_phi_d);
  if (mid && rk4) add("phi_d retraction_d0.5 < rk4", mid->max_abs_phi_d, rk4->max_abs_phi_d);
  if (verlet && mid) add("phi_d verlet < retraction_d0.5", verlet->max_abs_phi_d, mid->max_abs_phi_d);
  if (rk4 && mid) add("dH rk4 < retraction_d0.5", rk4->max_abs_dH, mid->max_abs_dH);
  if (gl4 && rk4) {
    out.push_back({"dH gl4 <= 2*rk4", gl4->max_abs_dH, 2.0 * rk4->max_abs_dH,
                   gl4->max_abs_dH <= 2.0 * rk4->max_abs_dH});
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                bool write_files) {
  config.validate();
  const RegisteredModel model = make_model(config.model, config.model_params);
  if (config.init.size() != model.model.state_size()) {
    throw ConfigError("config: init has " + std::to_string(config.init.size()) +
                      " entries, model " + config.model + " needs " +
                      std::to_string(model.model.state_size()));
  }
  const auto system = integrators::hamiltonian_system(model.model);
  const int n_steps = config.n_steps();

  auto run_one = [&](const integrators::IntegratorSpec& spec) {
    MethodRun run;
    run.spec = spec;
    const auto start = std::chrono::steady_clock::now();
    run.trajectory =
        integrators::integrate(system, config.init, config.h, n_steps, spec);
    const auto stop = std::chrono::steady_clock::now();
    run.rows = compute_metrics(model, run.trajectory);
    run.summary = summarize(spec.label(), run.rows, run.trajectory);
    run.summary.wall_time_s = std::chrono::duration<double>(stop - start).count();
    return run;
  };

  std::vector<std::future<MethodRun>> pending;
  for (const auto& spec : config.methods) {
    pending.push_back(std::async(std::launch::async, run_one, spec));
  }
  ExperimentResult result;
  for (auto& f : pending) result.runs.push_back(f.get());
  result.comparisons = compare_methods(result.runs);

  if (write_files) {
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);
    for (const auto& run : result.runs) {
      std::ofstream out(dir / (run.summary.method + ".csv"));
      write_metrics_csv(out, model, run.rows);
    }
    std::ofstream summary(dir / "summary.csv");
    write_summary_csv(summary, result);
    std::ofstream comparisons(dir / "comparisons.csv");
    write_comparisons_csv(comparisons, result);
  }
  return result;
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
  out << "method,max_abs_phi_d,max_abs_dH,mean_newton_iters,wall_time_s,status\n";
  for (const auto& run : result.runs) {
    const auto& s = run.summary;
    out << s.method << ',' << format_double(s.max_abs_phi_d) << ','
        << format_double(s.max_abs_dH) << ','
        << format_double(s.mean_newton_iters) << ','
        << format_double(s.wall_time_s) << ',' << s.status << '\n';
  }
}

void write_comparisons_csv(std::ostream& out, const ExperimentResult& result) {
  out << "comparison,lhs,rhs,holds\n";
  for (const auto& c : result.comparisons) {
    out << c.name << ',' << format_double(c.lhs) << ',' << format_double(c.rhs)
        << ',' << (c.holds ? "true" : "false") << '\n';
  }
}

double fit_loglog_slope(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("fit_loglog_slope: need >= 2 paired samples");
  }
  const double count = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    sxy += dx * (std::log(ys[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::vector<ConvergenceResult> convergence_study(
    const ocp::OCPModel& model, const Vec& init,
    const std::vector<integrators::IntegratorSpec>& methods,
    const std::vector<double>& h_list, double t_final, double reference_h) {
  if (h_list.size() < 3) {
    throw std::invalid_argument("convergence_study: need at least 3 steps");
  }
  for (std::size_t i = 1; i < h_list.size(); ++i) {
    if (!(h_list[i] < h_list[i - 1])) {
      throw std::invalid_argument("convergence_study: h_list must decrease");
    }
  }
  const auto system = integrators::hamiltonian_system(model);
  auto steps_for = [&](double h) {
    return static_cast<int>(std::lround(t_final / h));
  };

  integrators::IntegratorSpec reference_spec;
  reference_spec.kind = integrators::Kind::kRk4;
  const Vec reference = integrators::integrate(system, init, reference_h,
                                               steps_for(reference_h),
                                               reference_spec)
                            .states.back();

  std::vector<ConvergenceResult> out;
  for (const auto& spec : methods) {
    ConvergenceResult res;
    res.method = spec.label();
    for (double h : h_list) {
      const auto traj = integrators::integrate(system, init, h, steps_for(h), spec);
      if (traj.failure) {
        throw NewtonDivergence("convergence_study: " + res.method + " at h=" +
                                   format_double(h) + ": " + traj.failure->message,
                               traj.failure->last_residual, 0);
      }
      res.steps.push_back(h);
      res.errors.push_back(max_abs(Vec(traj.states.back() - reference)));
    }
    res.slope = fit_loglog_slope(res.steps, res.errors);
    out.push_back(std::move(res));
  }
  return out;
}

Vec convergence_initial_state() {
  Vec z(10);
  z << 0.9, -0.6, 2.1, 2.4, -1.8, 1.5, -1.2, 2.7, 0.9, -2.1;
  return z;
}

}  // namespace nhoc::harness
