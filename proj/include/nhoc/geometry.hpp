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

// Discretization maps on flat charts and their cotangent lifts.
//
// A discretization map sends a tangent vector (q, v) to a pair of nearby
// points (q0, q1). The delta family used throughout is
//
//   R(q, v) = (q - delta v, q + (1 - delta) v),   0 <= delta <= 1,
//
// and its cotangent lift acts on (q, p, qdot, pdot) with the weights of the
// momenta crossed relative to the positions. Charts are flat: angles are
// stored unwrapped so every map here stays affine.

#ifndef NHOC_GEOMETRY_HPP_
#define NHOC_GEOMETRY_HPP_

#include <functional>

#include "nhoc/types.hpp"

namespace nhoc::geometry {

struct PointPair {
  Vec first;
  Vec second;
};

struct TangentVector {
  Vec point;
  Vec velocity;
};

struct CotangentPair {
  Vec q0, p0;
  Vec q1, p1;
};

struct CotangentTangent {
  Vec q, p;
  Vec qdot, pdot;
};

void validate_delta(double delta);

PointPair delta_map_forward(const Vec& q, const Vec& v, double delta);
TangentVector delta_map_inverse(const Vec& q0, const Vec& q1, double delta);

CotangentPair cotangent_lift_forward(const Vec& q, const Vec& p,
                                     const Vec& qdot, const Vec& pdot,
                                     double delta);
CotangentTangent cotangent_lift_inverse(const Vec& q0, const Vec& p0,
                                        const Vec& q1, const Vec& p1,
                                        double delta);

// The delta map bound to a chart dimension.
class DeltaMap {
 public:
  DeltaMap(double delta, int dim);

  double delta() const { return delta_; }
  int dim() const { return dim_; }

  PointPair forward(const Vec& q, const Vec& v) const;
  TangentVector inverse(const Vec& q0, const Vec& q1) const;

 private:
  void check_dim(const Vec& a) const;

  double delta_;
  int dim_;
};

// Cotangent lift of DeltaMap; `dim` is the base chart dimension.
class CotangentDeltaMap {
 public:
  CotangentDeltaMap(double delta, int dim);

  double delta() const { return delta_; }
  int dim() const { return dim_; }

  CotangentPair forward(const Vec& q, const Vec& p, const Vec& qdot,
                        const Vec& pdot) const;
  CotangentTangent inverse(const Vec& q0, const Vec& p0, const Vec& q1,
                           const Vec& p1) const;

 private:
  void check_dim(const Vec& a) const;

  double delta_;
  int dim_;
};

using DiscretizationMap =
    std::function<PointPair(const Vec& point, const Vec& velocity)>;

struct AxiomReport {
  // max |R(q, 0) - (q, q)|
  double zero_section_defect = 0.0;
  // max |D_v R2(q, 0) - D_v R1(q, 0) - I|
  double identity_defect = 0.0;
  double tolerance = 0.0;

  bool passed() const {
    return zero_section_defect < tolerance && identity_defect < tolerance;
  }
};

AxiomReport check_discretization_axioms(const DiscretizationMap& map,
                                        const Vec& q, double tol,
                                        double fd_step = 1e-5);

// Central-difference Jacobian of f at x.
Mat central_difference_jacobian(const std::function<Vec(const Vec&)>& f,
                                const Vec& x, double step);

// J = [[0, I], [-I, 0]] of size 2n.
Mat canonical_symplectic_matrix(int n);

using OneStepMap = std::function<Vec(const Vec& state, double h)>;

// max |M^T J M - J| with M the central-difference Jacobian of the step map.
// Solver failures inside `step` propagate.
double symplecticity_defect(const OneStepMap& step, const Vec& z, double h,
                            double fd_step = 1e-5);

}  // namespace nhoc::geometry

#endif  // NHOC_GEOMETRY_HPP_
