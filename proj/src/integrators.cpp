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

#include "nhoc/integrators.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace nhoc::integrators {

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::kRetraction: return "retraction";
    case Kind::kVerlet: return "verlet";
    case Kind::kRk2: return "rk2";
    case Kind::kRk4: return "rk4";
    case Kind::kGl4: return "gl4";
  }
  return "unknown";
}

std::optional<Kind> parse_kind(std::string_view name) {
  for (Kind k : {Kind::kRetraction, Kind::kVerlet, Kind::kRk2, Kind::kRk4,
                 Kind::kGl4}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

void IntegratorSpec::validate() const {
  geometry::validate_delta(delta);
  if (!(newton_tol > 0.0)) throw std::invalid_argument("newton_tol must be > 0");
  if (newton_max_iters <= 0) {
    throw std::invalid_argument("newton_max_iters must be > 0");
  }
  if (!(fd_jacobian_step > 0.0)) {
    throw std::invalid_argument("fd_jacobian_step must be > 0");
  }
}

std::string IntegratorSpec::label() const {
  std::string name(to_string(kind));
  if (kind == Kind::kRetraction) {
    std::array<char, 32> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), delta);
    name += "_d";
    name.append(buf.data(), res.ptr);
  }
  return name;
}

NewtonOptions IntegratorSpec::newton_options() const {
  return {newton_tol, newton_max_iters, fd_jacobian_step};
}

Vec HamiltonianSystem::vector_field(const Vec& z) const {
  const Vec g = gradient(z);
  Vec out(2 * dim);
  out << g.tail(dim), -g.head(dim);
  return out;
}

Mat HamiltonianSystem::vector_field_jacobian(const Vec& z) const {
  const Mat hess = hessian(z);
  Mat out(2 * dim, 2 * dim);
  out << hess.bottomRows(dim), -hess.topRows(dim);
  return out;
}

HamiltonianSystem hamiltonian_system(const ocp::OCPModel& model) {
  HamiltonianSystem sys;
  sys.dim = model.n() + model.k();
  sys.gradient = [model](const Vec& z) {
    return ocp::hamiltonian_gradient(model, z);
  };
  if (model.hamiltonian_hessian) sys.hessian = model.hamiltonian_hessian;
  sys.energy = [model](const Vec& z) { return ocp::hamiltonian(model, z); };
  return sys;
}

namespace {

void check_state(const HamiltonianSystem& system, const Vec& z) {
  if (z.size() != 2 * system.dim) {
    throw DimensionError("integrator: state has " + std::to_string(z.size()) +
                         " entries, system expects " +
                         std::to_string(2 * system.dim));
  }
}

}  // namespace

StepResult retraction_step(const HamiltonianSystem& system, const Vec& z0,
                           double h, double delta,
                           const IntegratorSpec& spec) {
  check_state(system, z0);
  geometry::validate_delta(delta);
  if (h == 0.0) return {z0, 0, 0.0};

  const int n = system.dim;
  // zbar = z0 + weights .* dz
  Vec weights(2 * n);
  weights << Vec::Constant(n, delta), Vec::Constant(n, 1.0 - delta);

  // Unknown is the increment dz = z1 - z0, which keeps the residual free of
  // cancellation in z1 - z0.
  auto residual = [&](const Vec& dz) -> Vec {
    const Vec zbar = z0 + weights.cwiseProduct(dz);
    return dz / h - system.vector_field(zbar);
  };
  JacobianFn jacobian;
  if (system.hessian) {
    jacobian = [&](const Vec& dz) -> Mat {
      const Vec zbar = z0 + weights.cwiseProduct(dz);
      Mat jac = -system.vector_field_jacobian(zbar) * weights.asDiagonal();
      jac.diagonal().array() += 1.0 / h;
      return jac;
    };
  }
  const Vec guess = h * system.vector_field(z0);
  const NewtonResult res =
      newton_solve(residual, jacobian, guess, spec.newton_options());
  return {z0 + res.solution, res.iterations, res.residual_norm};
}

StepResult verlet_step(const HamiltonianSystem& system, const Vec& z0,
                       double h, const IntegratorSpec& spec) {
  if (h == 0.0) {
    check_state(system, z0);
    return {z0, 0, 0.0};
  }
  const StepResult first = retraction_step(system, z0, 0.5 * h, 1.0, spec);
  const StepResult second =
      retraction_step(system, first.state, 0.5 * h, 0.0, spec);
  return {second.state, first.newton_iters + second.newton_iters,
          std::max(first.residual, second.residual)};
}

StepResult rk2_step(const HamiltonianSystem& system, const Vec& z0, double h) {
  check_state(system, z0);
  if (h == 0.0) return {z0, 0, 0.0};
  const Vec k1 = system.vector_field(z0);
  const Vec k2 = system.vector_field(z0 + 0.5 * h * k1);
  return {z0 + h * k2, 0, 0.0};
}

StepResult rk4_step(const HamiltonianSystem& system, const Vec& z0, double h) {
  check_state(system, z0);
  if (h == 0.0) return {z0, 0, 0.0};
  const Vec k1 = system.vector_field(z0);
  const Vec k2 = system.vector_field(z0 + 0.5 * h * k1);
  const Vec k3 = system.vector_field(z0 + 0.5 * h * k2);
  const Vec k4 = system.vector_field(z0 + h * k3);
  return {z0 + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), 0, 0.0};
}

StepResult gl4_step(const HamiltonianSystem& system, const Vec& z0, double h,
                    const IntegratorSpec& spec) {
  check_state(system, z0);
  if (h == 0.0) return {z0, 0, 0.0};

  const Eigen::Index m = z0.size();
  const double r3 = std::sqrt(3.0);
  const double a[2][2] = {{0.25, 0.25 - r3 / 6.0}, {0.25 + r3 / 6.0, 0.25}};

  auto stage_state = [&](const Vec& k, int i) -> Vec {
    return z0 + h * (a[i][0] * k.head(m) + a[i][1] * k.tail(m));
  };
  auto residual = [&](const Vec& k) -> Vec {
    Vec r(2 * m);
    for (int i = 0; i < 2; ++i) {
      r.segment(i * m, m) =
          k.segment(i * m, m) - system.vector_field(stage_state(k, i));
    }
    return r;
  };
  JacobianFn jacobian;
  if (system.hessian) {
    jacobian = [&](const Vec& k) -> Mat {
      Mat jac = Mat::Identity(2 * m, 2 * m);
      for (int i = 0; i < 2; ++i) {
        const Mat dx = system.vector_field_jacobian(stage_state(k, i));
        for (int j = 0; j < 2; ++j) {
          jac.block(i * m, j * m, m, m) -= h * a[i][j] * dx;
        }
      }
      return jac;
    };
  }
  const Vec f0 = system.vector_field(z0);
  Vec guess(2 * m);
  guess << f0, f0;
  const NewtonResult res =
      newton_solve(residual, jacobian, guess, spec.newton_options());
  const Vec& k = res.solution;
  return {z0 + (0.5 * h) * (k.head(m) + k.tail(m)), res.iterations,
          res.residual_norm};
}

StepResult step(const HamiltonianSystem& system, const Vec& z0, double h,
                const IntegratorSpec& spec) {
  switch (spec.kind) {
    case Kind::kRetraction:
      return retraction_step(system, z0, h, spec.delta, spec);
    case Kind::kVerlet: return verlet_step(system, z0, h, spec);
    case Kind::kRk2: return rk2_step(system, z0, h);
    case Kind::kRk4: return rk4_step(system, z0, h);
    case Kind::kGl4: return gl4_step(system, z0, h, spec);
  }
  throw std::invalid_argument("unknown integrator kind");
}

geometry::OneStepMap one_step_map(const HamiltonianSystem& system,
                                  const IntegratorSpec& spec) {
  return [system, spec](const Vec& z, double h) {
    return step(system, z, h, spec).state;
  };
}

Trajectory integrate(const HamiltonianSystem& system, const Vec& z0, double h,
                     int n_steps, const IntegratorSpec& spec) {
  if (n_steps < 1) throw std::invalid_argument("integrate: n_steps must be >= 1");
  if (!(h > 0.0)) throw std::invalid_argument("integrate: h must be > 0");
  spec.validate();
  check_state(system, z0);

  Trajectory traj;
  traj.h = h;
  traj.times.reserve(n_steps + 1);
  traj.states.reserve(n_steps + 1);
  traj.diagnostics.reserve(n_steps);
  traj.times.push_back(0.0);
  traj.states.push_back(z0);

  for (int i = 0; i < n_steps; ++i) {
    try {
      StepResult r = step(system, traj.states.back(), h, spec);
      traj.states.push_back(std::move(r.state));
      traj.times.push_back(static_cast<double>(i + 1) * h);
      traj.diagnostics.push_back({r.newton_iters, r.residual});
    } catch (const NewtonDivergence& e) {
      traj.failure = SolverFailure{i, e.what(), e.last_residual()};
      break;
    } catch (const SingularJacobian& e) {
      traj.failure = SolverFailure{i, e.what(), 0.0};
      break;
    }
  }
  return traj;
}

Trajectory integrate(const ocp::OCPModel& model, const Vec& z0, double h,
                     int n_steps, const IntegratorSpec& spec) {
  return integrate(hamiltonian_system(model), z0, h, n_steps, spec);
}

}  // namespace nhoc::integrators
