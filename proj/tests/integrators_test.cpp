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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "nhoc/geometry.hpp"
#include "nhoc/harness.hpp"
#include "nhoc/nonholonomic.hpp"
#include "nhoc/sleigh.hpp"
#include "oracles.hpp"

namespace nhoc::integrators {
namespace {

using nhoc::testing::Oscillator;

IntegratorSpec spec_of(Kind kind, double delta = 0.5) {
  IntegratorSpec spec;
  spec.kind = kind;
  spec.delta = delta;
  return spec;
}

std::vector<IntegratorSpec> all_specs() {
  return {spec_of(Kind::kRetraction, 0.0), spec_of(Kind::kRetraction, 0.5),
          spec_of(Kind::kRetraction, 1.0), spec_of(Kind::kVerlet),
          spec_of(Kind::kRk2),             spec_of(Kind::kRk4),
          spec_of(Kind::kGl4)};
}

// z -> S z gradient, so H = z^T S z / 2.
HamiltonianSystem quadratic_system(const Mat& S, bool with_hessian) {
  HamiltonianSystem system;
  system.dim = static_cast<int>(S.rows()) / 2;
  system.gradient = [S](const Vec& z) { return Vec(S * z); };
  if (with_hessian) system.hessian = [S](const Vec&) { return S; };
  system.energy = [S](const Vec& z) { return 0.5 * z.dot(S * z); };
  return system;
}

HamiltonianSystem oscillator() {
  return quadratic_system(Mat::Identity(2, 2), true);
}

Vec pair(double q, double p) {
  Vec z(2);
  z << q, p;
  return z;
}

Mat random_spd(std::mt19937_64& rng, int size) {
  const Mat a = nhoc::testing::random_vec(rng, size * size, -1, 1).reshaped(size, size);
  return a * a.transpose() + 0.5 * Mat::Identity(size, size);
}

TEST(Spec, LabelsAndParsing) {
  EXPECT_EQ(spec_of(Kind::kRetraction, 0.5).label(), "retraction_d0.5");
  EXPECT_EQ(spec_of(Kind::kRetraction, 0.0).label(), "retraction_d0");
  EXPECT_EQ(spec_of(Kind::kRetraction, 1.0).label(), "retraction_d1");
  EXPECT_EQ(spec_of(Kind::kVerlet).label(), "verlet");
  EXPECT_EQ(spec_of(Kind::kGl4).label(), "gl4");
  for (Kind k : {Kind::kRetraction, Kind::kVerlet, Kind::kRk2, Kind::kRk4, Kind::kGl4}) {
    EXPECT_EQ(parse_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_kind("euler").has_value());
}

TEST(Spec, Validation) {
  EXPECT_NO_THROW(spec_of(Kind::kRetraction, 1.0).validate());
  EXPECT_THROW(spec_of(Kind::kRetraction, 1.01).validate(), std::invalid_argument);
  EXPECT_THROW(spec_of(Kind::kRetraction, -0.5).validate(), std::invalid_argument);
  IntegratorSpec bad = spec_of(Kind::kGl4);
  bad.newton_tol = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = spec_of(Kind::kGl4);
  bad.newton_max_iters = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Step, ZeroStepIsIdentity) {
  const HamiltonianSystem system = hamiltonian_system(sleigh::sleigh_model({}));
  const Vec z0 = sleigh::paper_initial_state();
  for (const IntegratorSpec& spec : all_specs()) {
    EXPECT_EQ(step(system, z0, 0.0, spec).state, z0) << spec.label();
  }
}

TEST(Step, SymplecticEulerVariantsOnOscillator) {
  const HamiltonianSystem system = oscillator();
  Oscillator a{0.8, -0.3}, b{0.8, -0.3};
  Vec za = pair(a.q, a.p), zb = za;
  for (int i = 0; i < 50; ++i) {
    a = nhoc::testing::symplectic_euler_p_then_q(a, 0.1);
    b = nhoc::testing::symplectic_euler_q_then_p(b, 0.1);
    za = retraction_step(system, za, 0.1, 0.0, spec_of(Kind::kRetraction, 0.0)).state;
    zb = retraction_step(system, zb, 0.1, 1.0, spec_of(Kind::kRetraction, 1.0)).state;
  }
  EXPECT_LT((za - pair(a.q, a.p)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((zb - pair(b.q, b.p)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Step, VerletMatchesLeapfrogOnOscillator) {
  const HamiltonianSystem system = oscillator();
  for (double h : {0.01, 0.1, 0.4}) {
    Oscillator s{1.0, 0.25};
    const Oscillator ref = nhoc::testing::leapfrog_drift_kick_drift(s, h);
    const Vec z1 = verlet_step(system, pair(s.q, s.p), h, spec_of(Kind::kVerlet)).state;
    EXPECT_NEAR(z1(0), ref.q, 1e-14);
    EXPECT_NEAR(z1(1), ref.p, 1e-14);
  }
}

TEST(Step, VerletIsCompositionOfHalfSteps) {
  const HamiltonianSystem system = hamiltonian_system(sleigh::sleigh_model({}));
  std::mt19937_64 rng(3);
  const Vec z0 = nhoc::testing::random_sleigh_state(rng);
  const double h = 0.02;
  const Vec half = retraction_step(system, z0, h / 2, 1.0, spec_of(Kind::kRetraction, 1.0)).state;
  const Vec full = retraction_step(system, half, h / 2, 0.0, spec_of(Kind::kRetraction, 0.0)).state;
  EXPECT_LT(max_abs(Vec(verlet_step(system, z0, h, spec_of(Kind::kVerlet)).state - full)), 1e-14);
}

TEST(Step, LinearSystemsAgainstPropagators) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat S = random_spd(rng, 4);
    const Mat A = nhoc::testing::linear_hamiltonian_field(S);
    const Vec z0 = nhoc::testing::random_vec(rng, 4, -1, 1);
    const double h = 0.1;
    for (bool analytic : {true, false}) {
      const HamiltonianSystem system = quadratic_system(S, analytic);
      const Vec mid = retraction_step(system, z0, h, 0.5, spec_of(Kind::kRetraction)).state;
      EXPECT_LT(max_abs(Vec(mid - nhoc::testing::midpoint_propagator(A, h) * z0)), 1e-13);
      const Vec gl = gl4_step(system, z0, h, spec_of(Kind::kGl4)).state;
      EXPECT_LT(max_abs(Vec(gl - nhoc::testing::gauss4_propagator(A, h) * z0)), 1e-13);
    }
    const HamiltonianSystem system = quadratic_system(S, true);
    const Mat hA = h * A;
    const Mat I = Mat::Identity(4, 4);
    EXPECT_LT(max_abs(Vec(rk2_step(system, z0, h).state - (I + hA + hA * hA / 2) * z0)), 1e-14);
    EXPECT_LT(max_abs(Vec(rk4_step(system, z0, h).state - nhoc::testing::taylor4(A, h) * z0)), 1e-14);
  }
}

TEST(Step, RetractionSolvesItsDefiningEquations) {
  const HamiltonianSystem system = hamiltonian_system(sleigh::sleigh_model({1.4, 0.7, 0.2}));
  std::mt19937_64 rng(5);
  for (double delta : {0.0, 0.3, 0.5, 1.0}) {
    const Vec z0 = nhoc::testing::random_sleigh_state(rng);
    const double h = 0.05;
    const Vec z1 = retraction_step(system, z0, h, delta, spec_of(Kind::kRetraction, delta)).state;
    Vec bar(10);
    bar.head(5) = (1 - delta) * z0.head(5) + delta * z1.head(5);
    bar.tail(5) = delta * z0.tail(5) + (1 - delta) * z1.tail(5);
    const Vec g = system.gradient(bar);
    EXPECT_LT(max_abs(Vec((z1.head(5) - z0.head(5)) / h - g.tail(5))), 1e-11);
    EXPECT_LT(max_abs(Vec((z1.tail(5) - z0.tail(5)) / h + g.head(5))), 1e-11);
  }
}

TEST(Step, StraightLineMotionAtZeroMomenta) {
  const HamiltonianSystem system = hamiltonian_system(sleigh::sleigh_model({}));
  Vec z0 = Vec::Zero(10);
  z0(4) = 1.0;
  const StepResult r = retraction_step(system, z0, 0.1, 0.5, spec_of(Kind::kRetraction));
  Vec expected = Vec::Zero(10);
  expected(0) = 0.1;
  expected(4) = 1.0;
  EXPECT_EQ(r.state, expected);
  EXPECT_LE(r.newton_iters, 1);
}

TEST(Symplecticity, RetractionStepAtReferenceState) {
  const HamiltonianSystem system = hamiltonian_system(sleigh::sleigh_model({}));
  const auto map = one_step_map(system, spec_of(Kind::kRetraction));
  EXPECT_LT(geometry::symplecticity_defect(map, sleigh::paper_initial_state(), 0.005), 1e-6);
}

TEST(Symplecticity, Rk2SeparatesFromSymplecticMethodsAtReferenceState) {
  const HamiltonianSystem system = hamiltonian_system(sleigh::sleigh_model({}));
  const Vec z0 = sleigh::paper_initial_state();
  double worst_symplectic = 0.0;
  for (const IntegratorSpec& spec : all_specs()) {
    if (spec.kind == Kind::kRk2 || spec.kind == Kind::kRk4) continue;
    worst_symplectic = std::max(
        worst_symplectic, geometry::symplecticity_defect(one_step_map(system, spec), z0, 0.01));
  }
  const double rk2 = geometry::symplecticity_defect(one_step_map(system, spec_of(Kind::kRk2)), z0, 0.01);
  EXPECT_GT(rk2, 5e-9);
  EXPECT_GT(rk2, 100.0 * worst_symplectic);
}

TEST(Symplecticity, SeededStates) {
  const HamiltonianSystem system = hamiltonian_system(sleigh::sleigh_model({}));
  const auto states = harness::envelope_sample_states(42, 5);
  ASSERT_EQ(states.size(), 5u);
  double rk2_worst = 0.0;
  for (const Vec& z : states) {
    for (const IntegratorSpec& spec : all_specs()) {
      const double d = geometry::symplecticity_defect(one_step_map(system, spec), z, 0.01);
      if (spec.kind == Kind::kRk2) {
        rk2_worst = std::max(rk2_worst, d);
      } else if (spec.kind != Kind::kRk4) {
        EXPECT_LT(d, 1e-6) << spec.label();
      }
    }
  }
  EXPECT_GT(rk2_worst, 1e-6);
}

TEST(Integrate, SingleStepEqualsStepMap) {
  const ocp::OCPModel model = sleigh::sleigh_model({});
  const HamiltonianSystem system = hamiltonian_system(model);
  const Vec z0 = sleigh::paper_initial_state();
  for (const IntegratorSpec& spec : all_specs()) {
    const Trajectory t = integrate(model, z0, 0.01, 1, spec);
    ASSERT_EQ(t.states.size(), 2u);
    EXPECT_EQ(t.states[1], step(system, z0, 0.01, spec).state) << spec.label();
    EXPECT_EQ(t.states[1], one_step_map(system, spec)(z0, 0.01)) << spec.label();
  }
}

TEST(Integrate, UniformTimesAndCounts) {
  const Trajectory t =
      integrate(sleigh::sleigh_model({}), sleigh::paper_initial_state(), 0.005, 4000, spec_of(Kind::kRk4));
  EXPECT_TRUE(t.complete());
  EXPECT_EQ(t.states.size(), 4001u);
  EXPECT_EQ(t.times.size(), 4001u);
  EXPECT_EQ(t.steps(), 4000u);
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    EXPECT_EQ(t.times[i], static_cast<double>(i) * 0.005);
  }
  EXPECT_DOUBLE_EQ(t.times.back(), 20.0);
}

TEST(Integrate, NewtonFailureKeepsPrefix) {
  // The gradient blows up once |q| > 1, so implicit solves fail there.
  HamiltonianSystem system = oscillator();
  system.gradient = [](const Vec& z) {
    if (std::abs(z(0)) > 1.0) return Vec(Vec::Constant(2, std::numeric_limits<double>::quiet_NaN()));
    Vec g(2);
    g << 0.0, z(1);
    return g;
  };
  system.hessian = nullptr;
  const Trajectory t = integrate(system, pair(0.0, 1.0), 0.3, 10, spec_of(Kind::kRetraction));
  ASSERT_FALSE(t.complete());
  EXPECT_EQ(t.failure->step, 3);
  EXPECT_EQ(t.states.size(), 4u);
  EXPECT_EQ(t.steps(), 3u);
  EXPECT_FALSE(t.failure->message.empty());
}

TEST(Integrate, ReferenceRunInvariants) {
  const ocp::OCPModel model = sleigh::sleigh_model({});
  const Vec z0 = sleigh::paper_initial_state();
  for (const IntegratorSpec& spec : all_specs()) {
    const Trajectory t = integrate(model, z0, 0.005, 4000, spec);
    ASSERT_TRUE(t.complete()) << spec.label();
    double px = 0.0, py = 0.0;
    for (const Vec& z : t.states) {
      px = std::max(px, std::abs(z(5)));
      py = std::max(py, std::abs(z(6) - 1.0));
    }
    EXPECT_LE(px, 1e-12) << spec.label();
    EXPECT_LE(py, 1e-12) << spec.label();
    for (const StepDiagnostics& d : t.diagnostics) {
      EXPECT_LE(d.newton_iters, spec.kind == Kind::kRetraction ? 5 : spec.newton_max_iters);
    }
  }
}

// Storing q1 rounds it to the nearest double, which moves (q1 - q0) / h by
// up to ulp(|q|) / h no matter how well the step equations were solved. By
// the end of the reference run |theta| is about 671, where that floor alone
// is 2.3e-11. The check therefore allows 10 * newton_tol on top of it.
double representation_floor(const Vec& q0, const Vec& q1, double h) {
  const double scale = std::max(q0.cwiseAbs().maxCoeff(), q1.cwiseAbs().maxCoeff());
  return (std::nextafter(scale, 2 * scale + 1) - scale) / h;
}

TEST(Integrate, AdmissibilityOfRetractionAndVerletSteps) {
  const ocp::OCPModel model = sleigh::sleigh_model({});
  const HamiltonianSystem system = hamiltonian_system(model);
  const auto& dist = model.distribution();
  const double tol = IntegratorSpec{}.newton_tol;
  const double h = 0.005;

  const Trajectory mid = integrate(model, sleigh::paper_initial_state(), h, 4000, spec_of(Kind::kRetraction));
  for (const StepDiagnostics& d : mid.diagnostics) EXPECT_LE(d.residual, tol);
  double worst_excess = -1.0;
  for (std::size_t i = 1; i < mid.states.size(); ++i) {
    const Vec& a = mid.states[i - 1];
    const Vec& b = mid.states[i];
    const double r = nonholonomic::admissibility_residual(
        dist, a.head(3), b.head(3), 0.5 * (a.segment(3, 2) + b.segment(3, 2)), h);
    worst_excess = std::max(worst_excess, r - representation_floor(a.head(3), b.head(3), h));
  }
  EXPECT_LE(worst_excess, 10 * tol);

  // Verlet: the fiber value that moves the base across the whole step is the
  // one at the internal half step.
  Vec z = sleigh::paper_initial_state();
  worst_excess = -1.0;
  for (int i = 0; i < 4000; ++i) {
    const Vec half = retraction_step(system, z, h / 2, 1.0, spec_of(Kind::kRetraction, 1.0)).state;
    const Vec next = verlet_step(system, z, h, spec_of(Kind::kVerlet)).state;
    const double r = nonholonomic::admissibility_residual(dist, z.head(3), next.head(3), half.segment(3, 2), h);
    worst_excess = std::max(worst_excess, r - representation_floor(z.head(3), next.head(3), h));
    z = next;
  }
  EXPECT_LE(worst_excess, 10 * tol);
}

TEST(Integrate, AdmissibilityEarlyInRunMeetsPlainBound) {
  // While |q| = O(1) the representation floor is far below newton_tol and the
  // plain bound applies directly.
  const ocp::OCPModel model = sleigh::sleigh_model({});
  const double h = 0.005;
  const Trajectory mid = integrate(model, sleigh::paper_initial_state(), h, 200, spec_of(Kind::kRetraction));
  double worst = 0.0;
  for (std::size_t i = 1; i < mid.states.size(); ++i) {
    const Vec& a = mid.states[i - 1];
    const Vec& b = mid.states[i];
    worst = std::max(worst, nonholonomic::admissibility_residual(
                                model.distribution(), a.head(3), b.head(3),
                                0.5 * (a.segment(3, 2) + b.segment(3, 2)), h));
  }
  EXPECT_LE(worst, 10 * IntegratorSpec{}.newton_tol);
}

TEST(Integrate, EnergyErrorTrendOfMidpointBelowRk2) {
  const ocp::OCPModel model = sleigh::sleigh_model({});
  const Vec z0 = sleigh::paper_initial_state();
  auto trend = [&](const IntegratorSpec& spec) {
    const Trajectory t = integrate(model, z0, 0.005, 4000, spec);
    const double h0 = ocp::hamiltonian(model, t.states.front());
    std::vector<double> err;
    for (const Vec& z : t.states) err.push_back(std::abs(ocp::hamiltonian(model, z) - h0));
    return nhoc::testing::regression_slope(t.times, err);
  };
  const double midpoint = trend(spec_of(Kind::kRetraction));
  const double rk2 = trend(spec_of(Kind::kRk2));
  EXPECT_LT(std::abs(midpoint), std::abs(rk2));
}

}  // namespace
}  // namespace nhoc::integrators
