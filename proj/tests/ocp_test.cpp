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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nhoc/geometry.hpp"
#include "nhoc/sleigh.hpp"
#include "oracles.hpp"

namespace nhoc::ocp {
namespace {

using nhoc::testing::random_sleigh_state;
using nhoc::testing::random_vec;

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

OCPModel unit_sleigh() { return sleigh::sleigh_model({}); }

OCPModel with_weight(Mat w) {
  OCPModel model = unit_sleigh();
  model.weight = std::move(w);
  model.hamiltonian_hessian = nullptr;
  return model;
}

// Sleigh with a made-up drift f(q, y) = (sin(theta) y2, -x y1) and its
// partials, to exercise the drift terms of the gradient.
OCPModel drifting_sleigh() {
  OCPModel model = with_weight(vec({2.0, 0.5}).asDiagonal());
  model.hamel.drift = [](const Vec& q, const Vec& y) {
    return vec({std::sin(q(2)) * y(1), -q(0) * y(0)});
  };
  model.hamel.drift_dq = [](const Vec& q, const Vec& y) {
    Mat d = Mat::Zero(2, 3);
    d(0, 2) = std::cos(q(2)) * y(1);
    d(1, 0) = -y(0);
    return d;
  };
  model.hamel.drift_dy = [](const Vec& q, const Vec&) {
    Mat d = Mat::Zero(2, 2);
    d(0, 1) = std::sin(q(2));
    d(1, 0) = -q(0);
    return d;
  };
  return model;
}

Vec fd_gradient(const OCPModel& model, const Vec& z, double step) {
  Vec g(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    Vec plus = z, minus = z;
    plus(i) += step;
    minus(i) -= step;
    g(i) = (hamiltonian(model, plus) - hamiltonian(model, minus)) / (2 * step);
  }
  return g;
}

TEST(Lagrangian, SleighExamples) {
  const OCPModel model = unit_sleigh();
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const Vec q = random_vec(rng, 3, -3, 3);
    const Vec y = random_vec(rng, 2, -3, 3);
    const Vec yd = random_vec(rng, 2, -3, 3);
    EXPECT_DOUBLE_EQ(lagrangian(model, q, y, yd), 0.5 * yd.squaredNorm());
  }
  EXPECT_DOUBLE_EQ(lagrangian(model, Vec::Zero(3), Vec::Zero(2), vec({3, 4})), 12.5);
}

TEST(Lagrangian, UncontrolledMotionIsFree) {
  const OCPModel model = drifting_sleigh();
  const Vec q = vec({0.5, -1, 0.3});
  const Vec y = vec({1.2, 0.4});
  EXPECT_EQ(lagrangian(model, q, y, model.hamel.drift(q, y)), 0.0);
}

TEST(Legendre, Examples) {
  const OCPModel sleigh = unit_sleigh();
  const Vec q = vec({1, 2, 0.3});
  const Vec y = vec({0.2, -0.1});
  EXPECT_EQ(legendre(sleigh, q, y, vec({0.7, -1.1})), vec({0.7, -1.1}));
  EXPECT_EQ(ydot_from_p(sleigh, q, y, vec({0.7, -1.1})), vec({0.7, -1.1}));

  const OCPModel scaled = with_weight(vec({2.0, 3.0}).asDiagonal());
  EXPECT_EQ(legendre(scaled, q, y, vec({1, 1})), vec({2, 3}));

  const OCPModel drifting = drifting_sleigh();
  EXPECT_EQ(legendre(drifting, q, y, drifting.hamel.drift(q, y)), Vec::Zero(2));
}

TEST(Legendre, RoundTrip) {
  std::mt19937_64 rng(2);
  Mat w(2, 2);
  w << 2.0, 0.3, 0.3, 0.7;
  OCPModel model = drifting_sleigh();
  model.weight = w;
  for (int i = 0; i < 50; ++i) {
    const Vec q = random_vec(rng, 3, -3, 3);
    const Vec y = random_vec(rng, 2, -3, 3);
    const Vec yd = random_vec(rng, 2, -3, 3);
    const Vec back = ydot_from_p(model, q, y, legendre(model, q, y, yd));
    EXPECT_LT(max_abs(Vec(back - yd)), 1e-12);
  }
}

TEST(Legendre, SingularWeightThrows) {
  const OCPModel model = with_weight(Mat::Zero(2, 2));
  EXPECT_THROW(ydot_from_p(model, Vec::Zero(3), Vec::Zero(2), Vec::Ones(2)),
               SingularControlWeight);
}

TEST(Hamiltonian, Examples) {
  const OCPModel model = unit_sleigh();
  const CostatePoint z{vec({0, 0, 0}), vec({1, 2}), vec({1, 1, 1}), vec({1, 1})};
  EXPECT_DOUBLE_EQ(hamiltonian(model, z), 4.0);

  std::mt19937_64 rng(3);
  Vec zero_momenta = random_sleigh_state(rng);
  zero_momenta.tail(5).setZero();
  EXPECT_EQ(hamiltonian(model, zero_momenta), 0.0);

  EXPECT_NEAR(hamiltonian(model, sleigh::paper_initial_state()), 0.0, 1e-17);
}

TEST(Hamiltonian, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  for (const OCPModel& model :
       {unit_sleigh(), sleigh::sleigh_model({1.7, 0.6, 0.3}), drifting_sleigh()}) {
    for (int i = 0; i < 50; ++i) {
      const Vec z = random_sleigh_state(rng);
      const Vec g = hamiltonian_gradient(model, z);
      EXPECT_LT(max_abs(Vec(g - fd_gradient(model, z, 1e-5))), 1e-7);
    }
  }
}

TEST(Hamiltonian, AngleDerivativeAtReferenceHeading) {
  const OCPModel model = unit_sleigh();
  const CostatePoint z{vec({1, 1, std::numbers::pi}), vec({0.05, 0.3}),
                       vec({0, 1, 0}), vec({0, 0})};
  const HamiltonianGradient g = hamiltonian_gradient(model, z);
  EXPECT_NEAR(g.dq(2), -0.3, 1e-15);
}

TEST(Hamiltonian, ZeroMomentaGiveZeroConfigurationGradient) {
  std::mt19937_64 rng(5);
  const OCPModel model = unit_sleigh();
  for (int i = 0; i < 10; ++i) {
    Vec z = random_sleigh_state(rng);
    z.tail(5).setZero();
    const HamiltonianGradient g =
        hamiltonian_gradient(model, CostatePoint::from_vector(z, 3, 2));
    EXPECT_EQ(g.dq, Vec::Zero(3));
    EXPECT_EQ(g.dy, Vec::Zero(2));
  }
}

TEST(VectorField, ReferenceInitialState) {
  const OCPModel model = unit_sleigh();
  const CostatePoint z0 =
      CostatePoint::from_vector(sleigh::paper_initial_state(), 3, 2);
  const CostatePoint f = hamiltonian_vector_field(model, z0);
  EXPECT_NEAR(f.q(0), -0.05, 1e-17);
  EXPECT_NEAR(f.q(1), 0.0, 1e-17);
  EXPECT_DOUBLE_EQ(f.q(2), 0.05);
  EXPECT_EQ(f.y, Vec::Zero(2));
  EXPECT_EQ(f.pq(0), 0.0);
  EXPECT_EQ(f.pq(1), 0.0);
  EXPECT_DOUBLE_EQ(f.pq(2), 0.05);
  EXPECT_EQ(f.py(0), 0.0);
  EXPECT_NEAR(f.py(1), 0.0, 1e-15);  // sin(pi) roundoff
}

TEST(VectorField, GradientIsOrthogonalToField) {
  std::mt19937_64 rng(6);
  const OCPModel model = drifting_sleigh();
  for (int i = 0; i < 20; ++i) {
    const Vec z = random_sleigh_state(rng);
    const Vec g = hamiltonian_gradient(model, z);
    const Vec f =
        hamiltonian_vector_field(model, CostatePoint::from_vector(z, 3, 2)).to_vector();
    EXPECT_LT(std::abs(g.dot(f)), 1e-13);
  }
}

TEST(VectorField, SleighLinearMomentaAreConstant) {
  std::mt19937_64 rng(7);
  const OCPModel model = unit_sleigh();
  for (int i = 0; i < 50; ++i) {
    const CostatePoint f = hamiltonian_vector_field(
        model, CostatePoint::from_vector(random_sleigh_state(rng), 3, 2));
    EXPECT_EQ(f.pq(0), 0.0);
    EXPECT_EQ(f.pq(1), 0.0);
  }
}

TEST(Regularity, Examples) {
  EXPECT_TRUE(regularity_check(unit_sleigh()));
  EXPECT_FALSE(regularity_check(with_weight(Mat::Zero(2, 2))));
  EXPECT_FALSE(regularity_check(with_weight(vec({1.0, 1e-15}).asDiagonal())));
  EXPECT_FALSE(regularity_check(with_weight(Mat::Identity(3, 3))));
}

TEST(Controls, ZeroCostateMeansNoControl) {
  const OCPModel model = unit_sleigh();
  std::vector<double> times{0.0, 0.1, 0.2};
  std::vector<Vec> states(3, Vec::Zero(10));
  states[1](0) = 3.0;
  const ControlHistory out = reconstruct_controls_and_cost(model, times, states);
  ASSERT_EQ(out.step_controls.size(), 2u);
  for (const Vec& u : out.step_controls) EXPECT_EQ(u, Vec::Zero(2));
  EXPECT_EQ(out.total_cost, 0.0);
}

TEST(Controls, FiberControlsAndSleighIndexing) {
  const OCPModel model = unit_sleigh();
  Vec z = Vec::Zero(10);
  z(8) = 0.4;   // p1
  z(9) = -1.5;  // p2
  const ControlHistory out = reconstruct_controls_and_cost(model, {0.0, 1.0}, {z, z});
  EXPECT_EQ(out.step_controls[0], vec({0.4, -1.5}));
  const Vec u = sleigh::to_sleigh_controls(out.step_controls[0]);
  EXPECT_EQ(u(0), -1.5);  // u1 = p2
  EXPECT_EQ(u(1), 0.4);   // u2 = p1
}

TEST(Controls, ConstantCostateCost) {
  const OCPModel model = unit_sleigh();
  const double c = 1.7;
  const double T = 3.0;
  const int n = 30;
  std::vector<double> times;
  std::vector<Vec> states;
  for (int i = 0; i <= n; ++i) {
    times.push_back(T * i / n);
    Vec z = Vec::Zero(10);
    z(2) = 0.1 * i;
    z(9) = c;
    states.push_back(z);
  }
  const ControlHistory out = reconstruct_controls_and_cost(model, times, states);
  EXPECT_EQ(out.step_controls.size(), static_cast<std::size_t>(n));
  EXPECT_NEAR(out.total_cost, 0.5 * c * c * T, 1e-12);
}

TEST(Controls, MismatchedLengthsThrow) {
  EXPECT_THROW(reconstruct_controls_and_cost(unit_sleigh(), {0.0},
                                             {Vec::Zero(10), Vec::Zero(10)}),
               DimensionError);
}

TEST(CostatePoint, VectorRoundTrip) {
  Vec z(10);
  for (int i = 0; i < 10; ++i) z(i) = i;
  const CostatePoint p = CostatePoint::from_vector(z, 3, 2);
  EXPECT_EQ(p.q, vec({0, 1, 2}));
  EXPECT_EQ(p.y, vec({3, 4}));
  EXPECT_EQ(p.pq, vec({5, 6, 7}));
  EXPECT_EQ(p.py, vec({8, 9}));
  EXPECT_EQ(p.to_vector(), z);
  EXPECT_THROW(CostatePoint::from_vector(Vec::Zero(9), 3, 2), DimensionError);
}

}  // namespace
}  // namespace nhoc::ocp
