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

#include "nhoc/geometry.hpp"

#include <string>

namespace nhoc::geometry {

void validate_delta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("delta must lie in [0, 1], got " +
                                std::to_string(delta));
  }
}

PointPair delta_map_forward(const Vec& q, const Vec& v, double delta) {
  require_same_size(q, v, "delta_map_forward");
  validate_delta(delta);
  return {q - delta * v, q + (1.0 - delta) * v};
}

TangentVector delta_map_inverse(const Vec& q0, const Vec& q1, double delta) {
  require_same_size(q0, q1, "delta_map_inverse");
  validate_delta(delta);
  return {(1.0 - delta) * q0 + delta * q1, q1 - q0};
}

CotangentPair cotangent_lift_forward(const Vec& q, const Vec& p,
                                     const Vec& qdot, const Vec& pdot,
                                     double delta) {
  require_same_size(q, p, "cotangent_lift_forward");
  require_same_size(q, qdot, "cotangent_lift_forward");
  require_same_size(q, pdot, "cotangent_lift_forward");
  validate_delta(delta);
  return {q - delta * qdot, p - (1.0 - delta) * pdot,
          q + (1.0 - delta) * qdot, p + delta * pdot};
}

CotangentTangent cotangent_lift_inverse(const Vec& q0, const Vec& p0,
                                        const Vec& q1, const Vec& p1,
                                        double delta) {
  require_same_size(q0, p0, "cotangent_lift_inverse");
  require_same_size(q0, q1, "cotangent_lift_inverse");
  require_same_size(q0, p1, "cotangent_lift_inverse");
  validate_delta(delta);
  return {(1.0 - delta) * q0 + delta * q1, delta * p0 + (1.0 - delta) * p1,
          q1 - q0, p1 - p0};
}

DeltaMap::DeltaMap(double delta, int dim) : delta_(delta), dim_(dim) {
  validate_delta(delta);
  if (dim <= 0) throw std::invalid_argument("DeltaMap: dim must be positive");
}

void DeltaMap::check_dim(const Vec& a) const {
  if (a.size() != dim_) {
    throw DimensionError("DeltaMap: expected dimension " +
                         std::to_string(dim_) + ", got " +
                         std::to_string(a.size()));
  }
}

PointPair DeltaMap::forward(const Vec& q, const Vec& v) const {
  check_dim(q);
  check_dim(v);
  return delta_map_forward(q, v, delta_);
}

TangentVector DeltaMap::inverse(const Vec& q0, const Vec& q1) const {
  check_dim(q0);
  check_dim(q1);
  return delta_map_inverse(q0, q1, delta_);
}

CotangentDeltaMap::CotangentDeltaMap(double delta, int dim)
    : delta_(delta), dim_(dim) {
  validate_delta(delta);
  if (dim <= 0) {
    throw std::invalid_argument("CotangentDeltaMap: dim must be positive");
  }
}

void CotangentDeltaMap::check_dim(const Vec& a) const {
  if (a.size() != dim_) {
    throw DimensionError("CotangentDeltaMap: expected dimension " +
                         std::to_string(dim_) + ", got " +
                         std::to_string(a.size()));
  }
}

CotangentPair CotangentDeltaMap::forward(const Vec& q, const Vec& p,
                                         const Vec& qdot,
                                         const Vec& pdot) const {
  check_dim(q);
  return cotangent_lift_forward(q, p, qdot, pdot, delta_);
}

CotangentTangent CotangentDeltaMap::inverse(const Vec& q0, const Vec& p0,
                                            const Vec& q1,
                                            const Vec& p1) const {
  check_dim(q0);
  return cotangent_lift_inverse(q0, p0, q1, p1, delta_);
}

Mat central_difference_jacobian(const std::function<Vec(const Vec&)>& f,
                                const Vec& x, double step) {
  Mat jac;
  Vec xp = x;
  Vec xm = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    xp(j) = x(j) + step;
    xm(j) = x(j) - step;
    // Divide by the perturbation actually represented, not 2 * step.
    const Vec column = (f(xp) - f(xm)) / (xp(j) - xm(j));
    if (j == 0) jac.resize(column.size(), x.size());
    jac.col(j) = column;
    xp(j) = x(j);
    xm(j) = x(j);
  }
  return jac;
}

AxiomReport check_discretization_axioms(const DiscretizationMap& map,
                                        const Vec& q, double tol,
                                        double fd_step) {
  const Eigen::Index dim = q.size();
  AxiomReport report;
  report.tolerance = tol;

  const PointPair at_zero = map(q, Vec::Zero(dim));
  report.zero_section_defect = std::max(max_abs(Vec(at_zero.first - q)),
                                        max_abs(Vec(at_zero.second - q)));

  // D_v (R2 - R1) at v = 0.
  auto difference = [&](const Vec& v) -> Vec {
    const PointPair out = map(q, v);
    return out.second - out.first;
  };
  const Mat jac = central_difference_jacobian(difference, Vec::Zero(dim),
                                              fd_step);
  report.identity_defect = max_abs(Mat(jac - Mat::Identity(dim, dim)));
  return report;
}

Mat canonical_symplectic_matrix(int n) {
  Mat j = Mat::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n).setIdentity();
  j.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return j;
}

double symplecticity_defect(const OneStepMap& step, const Vec& z, double h,
                            double fd_step) {
  if (z.size() % 2 != 0) {
    throw DimensionError("symplecticity_defect: state size must be even");
  }
  const Mat m = central_difference_jacobian(
      [&](const Vec& x) { return step(x, h); }, z, fd_step);
  const Mat j = canonical_symplectic_matrix(static_cast<int>(z.size() / 2));
  return max_abs(Mat(m.transpose() * j * m - j));
}

}  // namespace nhoc::geometry
