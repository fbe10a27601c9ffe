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

#include "nhoc/nonholonomic.hpp"

#include <string>

namespace nhoc::nonholonomic {

namespace {

void check_point(const DistributionModel& model, const AdaptedPoint& pt) {
  if (pt.q.size() != model.n || pt.y.size() != model.k) {
    throw DimensionError("adapted point (" + std::to_string(pt.q.size()) +
                         ", " + std::to_string(pt.y.size()) +
                         ") does not match model " + model.name);
  }
}

}  // namespace

Mat metric_at(const DistributionModel& model, const Vec& q) {
  return model.metric ? model.metric(q) : Mat::Identity(model.n, model.n);
}

Mat restricted_metric(const DistributionModel& model, const Vec& q) {
  const Mat rho = model.anchor(q);
  return rho.transpose() * metric_at(model, q) * rho;
}

Vec drift(const HamelModel& model, const Vec& q, const Vec& y) {
  return model.drift ? model.drift(q, y) : Vec::Zero(model.distribution.k);
}

Mat drift_dq(const HamelModel& model, const Vec& q, const Vec& y) {
  return model.drift_dq
             ? model.drift_dq(q, y)
             : Mat::Zero(model.distribution.k, model.distribution.n);
}

Mat drift_dy(const HamelModel& model, const Vec& q, const Vec& y) {
  return model.drift_dy
             ? model.drift_dy(q, y)
             : Mat::Zero(model.distribution.k, model.distribution.k);
}

bool anchor_has_full_rank(const DistributionModel& model, const Vec& q,
                          double threshold) {
  const Eigen::JacobiSVD<Mat> svd(model.anchor(q));
  const Vec& sv = svd.singularValues();
  return sv.size() == model.k && sv.minCoeff() > threshold;
}

double anchor_jacobian_defect(const DistributionModel& model, const Vec& q,
                              double fd_step) {
  const AnchorJacobian analytic = model.anchor_jacobian(q);
  double worst = 0.0;
  Vec qp = q;
  Vec qm = q;
  for (int j = 0; j < model.n; ++j) {
    qp(j) = q(j) + fd_step;
    qm(j) = q(j) - fd_step;
    const Mat fd = (model.anchor(qp) - model.anchor(qm)) / (2.0 * fd_step);
    worst = std::max(worst, max_abs(Mat(fd - analytic[j])));
    qp(j) = q(j);
    qm(j) = q(j);
  }
  return worst;
}

geometry::TangentVector include(const DistributionModel& model,
                                const AdaptedPoint& pt) {
  check_point(model, pt);
  return {pt.q, model.anchor(pt.q) * pt.y};
}

Vec project(const DistributionModel& model, const Vec& q, const Vec& qdot) {
  if (q.size() != model.n || qdot.size() != model.n) {
    throw DimensionError("project: expected base dimension " +
                         std::to_string(model.n));
  }
  if (model.projector) return model.projector(q, qdot);

  const Mat rho = model.anchor(q);
  const Mat g = metric_at(model, q);
  const Mat normal = rho.transpose() * g * rho;
  const Eigen::LDLT<Mat> ldlt(normal);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      ldlt.vectorD().minCoeff() <= 1e-12 * std::max(1.0, max_abs(normal))) {
    throw DegenerateDistribution("project: rho^T G rho is singular for " +
                                 model.name);
  }
  return ldlt.solve(rho.transpose() * (g * qdot));
}

NaturalTangent push_forward(const DistributionModel& model,
                            const AdaptedPoint& pt,
                            const AdaptedVelocity& vel) {
  check_point(model, pt);
  if (vel.qdot.size() != model.n || vel.ydot.size() != model.k) {
    throw DimensionError("push_forward: velocity does not match model");
  }
  const Mat rho = model.anchor(pt.q);
  const AnchorJacobian drho = model.anchor_jacobian(pt.q);
  // d/dt (rho(q) y) = sum_j (d rho / d q^j) qdot^j y + rho ydot
  Vec vdot = rho * vel.ydot;
  for (int j = 0; j < model.n; ++j) vdot += vel.qdot(j) * (drho[j] * pt.y);
  return {pt.q, rho * pt.y, vel.qdot, vdot};
}

std::pair<AdaptedPoint, AdaptedPoint> induced_discretization(
    const DistributionModel& model, const AdaptedPoint& pt,
    const AdaptedVelocity& vel, double delta) {
  const NaturalTangent tt = push_forward(model, pt, vel);
  const auto base = geometry::delta_map_forward(tt.q, tt.qdot, delta);
  const auto fiber = geometry::delta_map_forward(tt.v, tt.vdot, delta);
  AdaptedPoint pt0{base.first, project(model, base.first, fiber.first)};
  AdaptedPoint pt1{base.second, project(model, base.second, fiber.second)};
  return {std::move(pt0), std::move(pt1)};
}

std::pair<AdaptedPoint, AdaptedPoint> local_discretization(
    const AdaptedPoint& pt, const AdaptedVelocity& vel, double delta) {
  const auto base = geometry::delta_map_forward(pt.q, vel.qdot, delta);
  const auto fiber = geometry::delta_map_forward(pt.y, vel.ydot, delta);
  return {{base.first, fiber.first}, {base.second, fiber.second}};
}

Vec flatten(const AdaptedPoint& pt) {
  Vec out(pt.q.size() + pt.y.size());
  out << pt.q, pt.y;
  return out;
}

AdaptedPoint unflatten(const DistributionModel& model, const Vec& flat) {
  if (flat.size() != model.n + model.k) {
    throw DimensionError("unflatten: expected " +
                         std::to_string(model.n + model.k) + " entries");
  }
  return {flat.head(model.n), flat.tail(model.k)};
}

geometry::DiscretizationMap induced_discretization_map(
    const DistributionModel& model, double delta) {
  geometry::validate_delta(delta);
  return [model, delta](const Vec& point, const Vec& velocity) {
    const AdaptedPoint pt = unflatten(model, point);
    const AdaptedPoint v = unflatten(model, velocity);
    const auto [pt0, pt1] =
        induced_discretization(model, pt, {v.q, v.y}, delta);
    return geometry::PointPair{flatten(pt0), flatten(pt1)};
  };
}

AdaptedVelocity hamel_vector_field(const HamelModel& model,
                                   const AdaptedPoint& pt) {
  check_point(model.distribution, pt);
  return {model.distribution.anchor(pt.q) * pt.y, drift(model, pt.q, pt.y)};
}

double restricted_kinetic_energy(const DistributionModel& model,
                                 const AdaptedPoint& pt) {
  check_point(model, pt);
  return 0.5 * pt.y.dot(restricted_metric(model, pt.q) * pt.y);
}

double admissibility_residual(const DistributionModel& model, const Vec& q0,
                              const Vec& q1, const Vec& y_mid, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("admissibility_residual: h <= 0");
  require_same_size(q0, q1, "admissibility_residual");
  if (y_mid.size() != model.k) {
    throw DimensionError("admissibility_residual: y_mid has wrong size");
  }
  const Vec mid = 0.5 * (q0 + q1);
  return max_abs(Vec((q1 - q0) / h - model.anchor(mid) * y_mid));
}

}  // namespace nhoc::nonholonomic
