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

// Pontryagin Hamiltonian for fully actuated optimal control on D.
//
// The controlled system is qdot = rho(q) y, ydot = f(q, y) + u with running
// cost C(u) = 1/2 u^T W u. Eliminating u through the Legendre transform
// p_A = dL/dydot^A gives the Hamiltonian on T*D
//
//   H(q, y, p_q, p_y) = 1/2 p_y^T W^{-1} p_y + p_y^T f(q, y) + p_q^T rho(q) y.
//
// Controls are indexed like the fiber coordinates here (u^A drives ydot^A).
// The sleigh module documents its own index swap.

#ifndef NHOC_OCP_HPP_
#define NHOC_OCP_HPP_

#include <functional>
#include <vector>

#include "nhoc/nonholonomic.hpp"
#include "nhoc/types.hpp"

namespace nhoc::ocp {

// A point of T*D. Flattened order is (q, y, p_q, p_y): the first n + k
// entries are positions, the rest their conjugate momenta.
struct CostatePoint {
  Vec q, y, pq, py;

  Vec to_vector() const;
  static CostatePoint from_vector(const Vec& flat, int n, int k);
};

struct OCPModel {
  nonholonomic::HamelModel hamel;
  Mat weight;  // W, k x k
  // Optional analytic Hessian of H in flattened order.
  std::function<Mat(const Vec& z)> hamiltonian_hessian;

  int n() const { return hamel.distribution.n; }
  int k() const { return hamel.distribution.k; }
  int state_size() const { return 2 * (n() + k()); }
  const nonholonomic::DistributionModel& distribution() const {
    return hamel.distribution;
  }
};

class SingularControlWeight : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// |det W| > 1e-12
bool regularity_check(const OCPModel& model);

double lagrangian(const OCPModel& model, const Vec& q, const Vec& y,
                  const Vec& ydot);
Vec legendre(const OCPModel& model, const Vec& q, const Vec& y,
             const Vec& ydot);
Vec ydot_from_p(const OCPModel& model, const Vec& q, const Vec& y,
                const Vec& py);

double hamiltonian(const OCPModel& model, const CostatePoint& z);
double hamiltonian(const OCPModel& model, const Vec& z);

struct HamiltonianGradient {
  Vec dq, dy, dpq, dpy;

  // (dq, dy, dpq, dpy) in flattened order.
  Vec to_vector() const;
};

HamiltonianGradient hamiltonian_gradient(const OCPModel& model,
                                         const CostatePoint& z);
Vec hamiltonian_gradient(const OCPModel& model, const Vec& z);

// (dH/dp_q, dH/dp_y, -dH/dq, -dH/dy), as a tangent vector to T*D.
CostatePoint hamiltonian_vector_field(const OCPModel& model,
                                      const CostatePoint& z);

struct ControlHistory {
  // One entry per step, evaluated at the average of the step's end states.
  std::vector<Vec> step_controls;
  // Trapezoidal integral of C(W^{-1} p_y) over the stored states.
  double total_cost = 0.0;
};

ControlHistory reconstruct_controls_and_cost(const OCPModel& model,
                                             const std::vector<double>& times,
                                             const std::vector<Vec>& states);

}  // namespace nhoc::ocp

#endif  // NHOC_OCP_HPP_
