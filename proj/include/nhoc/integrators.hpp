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

// One-step maps for canonical Hamiltonian systems and a fixed-step driver.
//
// States are flat vectors z = (x, pi) with x the N positions and pi their
// momenta. The retraction family solves, for the unknown z1,
//
//   (x1 - x0) / h  =  dH/dpi(xbar, pibar)
//   (pi1 - pi0) / h = -dH/dx(xbar, pibar)
//
// with xbar = (1 - delta) x0 + delta x1 and pibar = delta pi0 + (1 - delta) pi1,
// i.e. the inverse cotangent lift of the delta map equated to h X_H. delta = 0
// and delta = 1 are the two symplectic Euler methods and delta = 1/2 is the
// implicit midpoint rule.

#ifndef NHOC_INTEGRATORS_HPP_
#define NHOC_INTEGRATORS_HPP_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nhoc/geometry.hpp"
#include "nhoc/newton.hpp"
#include "nhoc/ocp.hpp"
#include "nhoc/types.hpp"

namespace nhoc::integrators {

enum class Kind { kRetraction, kVerlet, kRk2, kRk4, kGl4 };

std::string_view to_string(Kind kind);
std::optional<Kind> parse_kind(std::string_view name);

struct IntegratorSpec {
  Kind kind = Kind::kRetraction;
  double delta = 0.5;  // retraction only
  double newton_tol = 1e-12;
  int newton_max_iters = 50;
  // Only used when the system has no analytic Hessian.
  double fd_jacobian_step = 1e-7;

  // Throws std::invalid_argument on out-of-range fields.
  void validate() const;
  // Stable method name used for file names and reports, e.g. "retraction_d0.5".
  std::string label() const;
  NewtonOptions newton_options() const;
};

struct HamiltonianSystem {
  int dim = 0;  // N, number of positions
  // Full gradient (dH/dx, dH/dpi), 2N entries.
  std::function<Vec(const Vec&)> gradient;
  // Optional 2N x 2N Hessian. Newton falls back to finite differences.
  std::function<Mat(const Vec&)> hessian;
  std::function<double(const Vec&)> energy;

  // X_H = J grad H = (dH/dpi, -dH/dx)
  Vec vector_field(const Vec& z) const;
  Mat vector_field_jacobian(const Vec& z) const;
};

HamiltonianSystem hamiltonian_system(const ocp::OCPModel& model);

struct StepResult {
  Vec state;
  int newton_iters = 0;
  double residual = 0.0;
};

StepResult retraction_step(const HamiltonianSystem& system, const Vec& z0,
                           double h, double delta, const IntegratorSpec& spec);
// Half step with delta = 1 followed by a half step with delta = 0.
StepResult verlet_step(const HamiltonianSystem& system, const Vec& z0,
                       double h, const IntegratorSpec& spec);
StepResult rk2_step(const HamiltonianSystem& system, const Vec& z0, double h);
StepResult rk4_step(const HamiltonianSystem& system, const Vec& z0, double h);
// Two-stage Gauss-Legendre collocation.
StepResult gl4_step(const HamiltonianSystem& system, const Vec& z0, double h,
                    const IntegratorSpec& spec);

StepResult step(const HamiltonianSystem& system, const Vec& z0, double h,
                const IntegratorSpec& spec);

geometry::OneStepMap one_step_map(const HamiltonianSystem& system,
                                  const IntegratorSpec& spec);

struct StepDiagnostics {
  int newton_iters = 0;
  double residual = 0.0;
};

struct SolverFailure {
  int step = 0;  // index of the step that failed (0-based)
  std::string message;
  double last_residual = 0.0;
};

struct Trajectory {
  double h = 0.0;
  std::vector<double> times;
  std::vector<Vec> states;
  std::vector<StepDiagnostics> diagnostics;  // one per completed step
  std::optional<SolverFailure> failure;

  bool complete() const { return !failure.has_value(); }
  std::size_t steps() const { return diagnostics.size(); }
};

// Applies the selected one-step map n_steps times. Solver failures stop the
// run and are reported in Trajectory::failure alongside the completed prefix.
Trajectory integrate(const HamiltonianSystem& system, const Vec& z0, double h,
                     int n_steps, const IntegratorSpec& spec);
Trajectory integrate(const ocp::OCPModel& model, const Vec& z0, double h,
                     int n_steps, const IntegratorSpec& spec);

}  // namespace nhoc::integrators

#endif  // NHOC_INTEGRATORS_HPP_
