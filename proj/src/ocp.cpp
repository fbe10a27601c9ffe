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

#include "nhoc/ocp.hpp"

#include <string>

namespace nhoc::ocp {

namespace nh = nhoc::nonholonomic;

Vec CostatePoint::to_vector() const {
  Vec out(q.size() + y.size() + pq.size() + py.size());
  out << q, y, pq, py;
  return out;
}

CostatePoint CostatePoint::from_vector(const Vec& flat, int n, int k) {
  if (flat.size() != 2 * (n + k)) {
    throw DimensionError("CostatePoint: expected " +
                         std::to_string(2 * (n + k)) + " entries, got " +
                         std::to_string(flat.size()));
  }
  return {flat.segment(0, n), flat.segment(n, k), flat.segment(n + k, n),
          flat.segment(2 * n + k, k)};
}

Vec HamiltonianGradient::to_vector() const {
  return CostatePoint{dq, dy, dpq, dpy}.to_vector();
}

namespace {

void check_costate(const OCPModel& model, const CostatePoint& z) {
  if (z.q.size() != model.n() || z.pq.size() != model.n() ||
      z.y.size() != model.k() || z.py.size() != model.k()) {
    throw DimensionError("costate point does not match model " +
                         model.distribution().name);
  }
}

Vec weight_solve(const OCPModel& model, const Vec& rhs) {
  if (!regularity_check(model)) {
    throw SingularControlWeight("control weight W is singular");
  }
  return model.weight.ldlt().solve(rhs);
}

}  // namespace

bool regularity_check(const OCPModel& model) {
  if (model.weight.rows() != model.k() || model.weight.cols() != model.k()) {
    return false;
  }
  return std::abs(model.weight.determinant()) > 1e-12;
}

double lagrangian(const OCPModel& model, const Vec& q, const Vec& y,
                  const Vec& ydot) {
  const Vec u = ydot - nh::drift(model.hamel, q, y);
  return 0.5 * u.dot(model.weight * u);
}

Vec legendre(const OCPModel& model, const Vec& q, const Vec& y,
             const Vec& ydot) {
  if (!regularity_check(model)) {
    throw SingularControlWeight("control weight W is singular");
  }
  return model.weight * (ydot - nh::drift(model.hamel, q, y));
}

Vec ydot_from_p(const OCPModel& model, const Vec& q, const Vec& y,
                const Vec& py) {
  return weight_solve(model, py) + nh::drift(model.hamel, q, y);
}

double hamiltonian(const OCPModel& model, const CostatePoint& z) {
  check_costate(model, z);
  const Vec u = weight_solve(model, z.py);
  return 0.5 * z.py.dot(u) + z.py.dot(nh::drift(model.hamel, z.q, z.y)) +
         z.pq.dot(model.distribution().anchor(z.q) * z.y);
}

double hamiltonian(const OCPModel& model, const Vec& z) {
  return hamiltonian(model, CostatePoint::from_vector(z, model.n(), model.k()));
}

HamiltonianGradient hamiltonian_gradient(const OCPModel& model,
                                         const CostatePoint& z) {
  check_costate(model, z);
  const auto& dist = model.distribution();
  const Mat rho = dist.anchor(z.q);
  const nh::AnchorJacobian drho = dist.anchor_jacobian(z.q);

  HamiltonianGradient g;
  g.dpq = rho * z.y;
  g.dpy = weight_solve(model, z.py) + nh::drift(model.hamel, z.q, z.y);
  g.dq = nh::drift_dq(model.hamel, z.q, z.y).transpose() * z.py;
  for (int j = 0; j < model.n(); ++j) g.dq(j) += z.pq.dot(drho[j] * z.y);
  g.dy = rho.transpose() * z.pq +
         nh::drift_dy(model.hamel, z.q, z.y).transpose() * z.py;
  return g;
}

Vec hamiltonian_gradient(const OCPModel& model, const Vec& z) {
  return hamiltonian_gradient(
             model, CostatePoint::from_vector(z, model.n(), model.k()))
      .to_vector();
}

CostatePoint hamiltonian_vector_field(const OCPModel& model,
                                      const CostatePoint& z) {
  const HamiltonianGradient g = hamiltonian_gradient(model, z);
  return {g.dpq, g.dpy, -g.dq, -g.dy};
}

ControlHistory reconstruct_controls_and_cost(const OCPModel& model,
                                             const std::vector<double>& times,
                                             const std::vector<Vec>& states) {
  if (times.size() != states.size()) {
    throw DimensionError("reconstruct_controls_and_cost: " +
                         std::to_string(times.size()) + " times for " +
                         std::to_string(states.size()) + " states");
  }
  const int n = model.n();
  const int k = model.k();
  auto control = [&](const Vec& z) {
    return weight_solve(model, z.segment(2 * n + k, k));
  };
  auto running_cost = [&](const Vec& u) { return 0.5 * u.dot(model.weight * u); };

  ControlHistory out;
  if (states.empty()) return out;
  out.step_controls.reserve(states.size() - 1);
  double previous = running_cost(control(states.front()));
  for (std::size_t i = 1; i < states.size(); ++i) {
    out.step_controls.push_back(control(0.5 * (states[i - 1] + states[i])));
    const double current = running_cost(control(states[i]));
    out.total_cost += 0.5 * (times[i] - times[i - 1]) * (previous + current);
    previous = current;
  }
  return out;
}

}  // namespace nhoc::ocp
