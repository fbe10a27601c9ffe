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

// Distributions in adapted coordinates (q^i, y^A).
//
// A frame e_A = rho_A^i(q) d/dq^i spans the distribution D, so a point of D
// is (q, y) with natural velocity qdot = rho(q) y. Models are immutable
// values built from callables; the sleigh is the only registered instance.

#ifndef NHOC_NONHOLONOMIC_HPP_
#define NHOC_NONHOLONOMIC_HPP_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nhoc/geometry.hpp"
#include "nhoc/types.hpp"

namespace nhoc::nonholonomic {

struct AdaptedPoint {
  Vec q;  // base point, n entries
  Vec y;  // fiber coordinates, k entries
};

struct AdaptedVelocity {
  Vec qdot;  // n entries
  Vec ydot;  // k entries
};

// Entry j holds d rho / d q^j as an n x k matrix.
using AnchorJacobian = std::vector<Mat>;

// Raised when rho^T G rho cannot be factored at the requested point.
class DegenerateDistribution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DistributionModel {
  std::string name;
  int n = 0;  // base dimension
  int k = 0;  // rank of D
  std::function<Mat(const Vec& q)> anchor;
  std::function<AnchorJacobian(const Vec& q)> anchor_jacobian;
  // Metric used by the projector. Identity when unset.
  std::function<Mat(const Vec& q)> metric;
  // Closed-form projector qdot -> y. Overrides the normal equations when set.
  std::function<Vec(const Vec& q, const Vec& qdot)> projector;
  std::vector<std::string> base_names;
  std::vector<std::string> fiber_names;
};

// Mechanical system on D written in drift form ydot = f(q, y) (+ controls).
// The drift folds in the Christoffel and potential terms of the Hamel
// equations. Unset drift callables mean f == 0.
struct HamelModel {
  DistributionModel distribution;
  std::function<Vec(const Vec& q, const Vec& y)> drift;
  std::function<Mat(const Vec& q, const Vec& y)> drift_dq;  // k x n
  std::function<Mat(const Vec& q, const Vec& y)> drift_dy;  // k x k
};

Mat metric_at(const DistributionModel& model, const Vec& q);
// (G^D)_{AB} = rho^T G rho.
Mat restricted_metric(const DistributionModel& model, const Vec& q);

Vec drift(const HamelModel& model, const Vec& q, const Vec& y);
Mat drift_dq(const HamelModel& model, const Vec& q, const Vec& y);
Mat drift_dy(const HamelModel& model, const Vec& q, const Vec& y);

// Smallest singular value of rho(q) exceeds `threshold`.
bool anchor_has_full_rank(const DistributionModel& model, const Vec& q,
                          double threshold = 1e-10);

// max |anchor_jacobian - central differences of anchor|.
double anchor_jacobian_defect(const DistributionModel& model, const Vec& q,
                              double fd_step = 1e-5);

// (q, rho(q) y)
geometry::TangentVector include(const DistributionModel& model,
                                const AdaptedPoint& pt);

// Fiber coordinates of the projection of qdot onto D_q. Uses the model's
// closed form when present, else y = (rho^T G rho)^{-1} rho^T G qdot.
Vec project(const DistributionModel& model, const Vec& q, const Vec& qdot);

// Pushforward of (qdot, ydot) at pt under the inclusion D -> TQ, in natural
// coordinates (q, v, qdot, vdot).
struct NaturalTangent {
  Vec q, v;
  Vec qdot, vdot;
};
NaturalTangent push_forward(const DistributionModel& model,
                            const AdaptedPoint& pt, const AdaptedVelocity& vel);

// (P x P) o R_d o Ti_D with R_d the delta map on the TQ chart.
std::pair<AdaptedPoint, AdaptedPoint> induced_discretization(
    const DistributionModel& model, const AdaptedPoint& pt,
    const AdaptedVelocity& vel, double delta);

// The delta map applied componentwise in the adapted chart.
std::pair<AdaptedPoint, AdaptedPoint> local_discretization(
    const AdaptedPoint& pt, const AdaptedVelocity& vel, double delta);

// Flat views over (q, y) for the generic axiom checker.
Vec flatten(const AdaptedPoint& pt);
AdaptedPoint unflatten(const DistributionModel& model, const Vec& flat);
geometry::DiscretizationMap induced_discretization_map(
    const DistributionModel& model, double delta);

// qdot = rho(q) y, ydot = f(q, y)
AdaptedVelocity hamel_vector_field(const HamelModel& model,
                                   const AdaptedPoint& pt);

// 1/2 y^T G^D(q) y
double restricted_kinetic_energy(const DistributionModel& model,
                                 const AdaptedPoint& pt);

// max |(q1 - q0)/h - rho((q0 + q1)/2) y_mid|
double admissibility_residual(const DistributionModel& model, const Vec& q0,
                              const Vec& q1, const Vec& y_mid, double h);

}  // namespace nhoc::nonholonomic

#endif  // NHOC_NONHOLONOMIC_HPP_
