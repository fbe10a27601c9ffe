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

// Chaplygin sleigh: a planar rigid body with a knife edge at (x, y) that
// forbids sideways slip, sin(theta) xdot - cos(theta) ydot = 0.
//
// Frame: X1 = (1/J) d/dtheta, X2 = (cos(theta)/m) d/dx + (sin(theta)/m) d/dy,
// so the adapted coordinates are (x, y, theta; z1, z2). The free motion has
// zero drift, and the optimal control problem uses C = 1/2 |u|^2. With
// controls indexed as in the classical sleigh equations, u2 drives z1 and u1
// drives z2; the generic ocp code indexes controls like the fibers, so
// to_sleigh_controls swaps them.

#ifndef NHOC_SLEIGH_HPP_
#define NHOC_SLEIGH_HPP_

#include "nhoc/experiment_config.hpp"
#include "nhoc/ocp.hpp"

namespace nhoc::sleigh {

struct SleighParams {
  double m = 1.0;  // mass
  double J = 1.0;  // inertia about the center of mass
  double a = 0.0;  // center-of-mass offset from the knife edge

  // (a^2 m + J) / J
  double b() const { return (a * a * m + J) / J; }
  // Throws std::invalid_argument unless m > 0, J > 0, a >= 0.
  void validate() const;
};

// Kinetic metric of the body in (x, y, theta); diag(m, m, J) when a = 0.
Mat kinetic_metric(const SleighParams& params, const Vec& q);

nonholonomic::DistributionModel sleigh_distribution(const SleighParams& params);
ocp::OCPModel sleigh_model(const SleighParams& params);

// 1/2 (p1^2 + p2^2) + ptheta z1 / J + (px cos + py sin) z2 / m
double closed_form_hamiltonian(const SleighParams& params,
                               const ocp::CostatePoint& z);

// Hessian of the closed-form Hamiltonian, flattened (x, y, theta, z1, z2,
// px, py, ptheta, p1, p2) order.
Mat closed_form_hessian(const SleighParams& params, const Vec& z);

// sin(theta) xdot - cos(theta) ydot
double constraint_residual(const Vec& q, const Vec& qdot);

// Reorders fiber-indexed controls (u^A drives zdot^A) to (u1, u2).
Vec to_sleigh_controls(const Vec& fiber_controls);

// (x, y, theta, z1, z2, px, py, ptheta, p1, p2) at t = 0 of the reference run.
Vec paper_initial_state();

// h = 0.005, T = 20, m = J = 1, a = 0, the five compared methods.
harness::ExperimentConfig paper_experiment_config();

}  // namespace nhoc::sleigh

#endif  // NHOC_SLEIGH_HPP_
