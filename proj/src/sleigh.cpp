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

#include "nhoc/sleigh.hpp"

#include <cmath>
#include <numbers>

namespace nhoc::sleigh {

void SleighParams::validate() const {
  if (!(m > 0.0)) throw std::invalid_argument("sleigh: m must be > 0");
  if (!(J > 0.0)) throw std::invalid_argument("sleigh: J must be > 0");
  if (!(a >= 0.0)) throw std::invalid_argument("sleigh: a must be >= 0");
}

Mat kinetic_metric(const SleighParams& p, const Vec& q) {
  const double s = std::sin(q(2));
  const double c = std::cos(q(2));
  Mat g(3, 3);
  g << p.m, 0.0, -p.m * p.a * s,
       0.0, p.m, p.m * p.a * c,
       -p.m * p.a * s, p.m * p.a * c, p.J + p.m * p.a * p.a;
  return g;
}

nonholonomic::DistributionModel sleigh_distribution(const SleighParams& params) {
  params.validate();
  const double m = params.m;
  const double J = params.J;

  nonholonomic::DistributionModel d;
  d.name = "sleigh";
  d.n = 3;
  d.k = 2;
  d.anchor = [m, J](const Vec& q) {
    Mat rho = Mat::Zero(3, 2);
    rho(2, 0) = 1.0 / J;
    rho(0, 1) = std::cos(q(2)) / m;
    rho(1, 1) = std::sin(q(2)) / m;
    return rho;
  };
  d.anchor_jacobian = [m](const Vec& q) {
    nonholonomic::AnchorJacobian drho(3, Mat::Zero(3, 2));
    drho[2](0, 1) = -std::sin(q(2)) / m;
    drho[2](1, 1) = std::cos(q(2)) / m;
    return drho;
  };
  d.metric = [params](const Vec& q) { return kinetic_metric(params, q); };
  // J thetadot X1 + m (xdot cos + ydot sin) X2
  d.projector = [m, J](const Vec& q, const Vec& qdot) {
    Vec y(2);
    y << J * qdot(2), m * (qdot(0) * std::cos(q(2)) + qdot(1) * std::sin(q(2)));
    return y;
  };
  d.base_names = {"x", "y", "theta"};
  d.fiber_names = {"z1", "z2"};
  return d;
}

ocp::OCPModel sleigh_model(const SleighParams& params) {
  ocp::OCPModel model;
  model.hamel.distribution = sleigh_distribution(params);
  model.weight = Mat::Identity(2, 2);
  model.hamiltonian_hessian = [params](const Vec& z) {
    return closed_form_hessian(params, z);
  };
  return model;
}

double closed_form_hamiltonian(const SleighParams& p,
                               const ocp::CostatePoint& z) {
  const double theta = z.q(2);
  const double z1 = z.y(0);
  const double z2 = z.y(1);
  const double px = z.pq(0);
  const double py = z.pq(1);
  const double ptheta = z.pq(2);
  return 0.5 * (z.py(0) * z.py(0) + z.py(1) * z.py(1)) + ptheta / p.J * z1 +
         px * std::cos(theta) / p.m * z2 + py * std::sin(theta) / p.m * z2;
}

Mat closed_form_hessian(const SleighParams& p, const Vec& z) {
  if (z.size() != 10) throw DimensionError("sleigh hessian: expected 10 entries");
  enum { X, Y, TH, Z1, Z2, PX, PY, PTH, P1, P2 };
  const double s = std::sin(z(TH));
  const double c = std::cos(z(TH));
  Mat hess = Mat::Zero(10, 10);
  auto set = [&](int i, int j, double v) {
    hess(i, j) = v;
    hess(j, i) = v;
  };
  set(TH, TH, -(z(PX) * c + z(PY) * s) * z(Z2) / p.m);
  set(TH, Z2, (-z(PX) * s + z(PY) * c) / p.m);
  set(TH, PX, -s * z(Z2) / p.m);
  set(TH, PY, c * z(Z2) / p.m);
  set(Z1, PTH, 1.0 / p.J);
  set(Z2, PX, c / p.m);
  set(Z2, PY, s / p.m);
  set(P1, P1, 1.0);
  set(P2, P2, 1.0);
  return hess;
}

double constraint_residual(const Vec& q, const Vec& qdot) {
  return std::sin(q(2)) * qdot(0) - std::cos(q(2)) * qdot(1);
}

Vec to_sleigh_controls(const Vec& fiber_controls) {
  if (fiber_controls.size() != 2) {
    throw DimensionError("to_sleigh_controls: expected 2 entries");
  }
  Vec u(2);
  u << fiber_controls(1), fiber_controls(0);
  return u;
}

Vec paper_initial_state() {
  Vec z(10);
  z << 1.0, 1.0, std::numbers::pi, 0.05, 0.05, 0.0, 1.0, 0.0, 0.0, 0.0;
  return z;
}

harness::ExperimentConfig paper_experiment_config() {
  using integrators::IntegratorSpec;
  using integrators::Kind;
  harness::ExperimentConfig config;
  config.model = "sleigh";
  config.model_params = {{"m", 1.0}, {"J", 1.0}, {"a", 0.0}};
  config.init = paper_initial_state();
  config.h = 0.005;
  config.t_final = 20.0;
  IntegratorSpec midpoint;
  midpoint.kind = Kind::kRetraction;
  midpoint.delta = 0.5;
  IntegratorSpec verlet;
  verlet.kind = Kind::kVerlet;
  IntegratorSpec rk2;
  rk2.kind = Kind::kRk2;
  IntegratorSpec rk4;
  rk4.kind = Kind::kRk4;
  IntegratorSpec gl4;
  gl4.kind = Kind::kGl4;
  config.methods = {midpoint, verlet, rk2, rk4, gl4};
  return config;
}

}  // namespace nhoc::sleigh
