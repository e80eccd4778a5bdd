#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "symflow/errors.hpp"
#include "symflow/model.hpp"
#include "symflow/solutions.hpp"

using namespace symflow;

TEST(FluidParams, RejectsNonPositiveGravity) {
  FluidParams p;
  p.gravity = 0;
  EXPECT_THROW(p.validate(), DomainError);
  p.gravity = 1;
  p.H = std::nan("");
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(Residual, GalileanSolutionByHand) {
  const FluidParams p{1.0, 1.0};
  const double c1 = 0.3, c2 = 1.4, t = 1.7, x = -0.2;
  JetPoint j;
  j.t = t;
  j.x = x;
  j.u = (x + c1) / t;
  j.h = c2 / t;
  j.u_t = -(x + c1) / (t * t);
  j.u_x = 1 / t;
  j.h_t = -c2 / (t * t);
  j.h_x = 0;
  const Residual2 r = mswe_residual(j, p);
  EXPECT_NEAR(r.r1, 0, 1e-15);
  EXPECT_NEAR(r.r2, 0, 1e-15);
}

TEST(Residual, PressureTermUsesGravityAndDepth) {
  JetPoint j;
  j.h = 2;
  j.h_x = 1;
  EXPECT_DOUBLE_EQ(mswe_residual(j, {1.0, 1.0}).r1, 1.5);
  EXPECT_DOUBLE_EQ(mswe_residual(j, {0.0, 9.81}).r1, 9.81);
}

TEST(Residual, LinearizedSystemOfSimplePair) {
  const FluidParams p{0.7, 1.0};
  const HodographPair pair = simple_pair({1, 0, 0, 0, 0}, p);
  for (double u : {-0.5, 0.3}) {
    for (double h : {0.6, 1.9}) {
      EXPECT_LT(linearized_residual(pair, u, h, p).max_abs(), 1e-13);
    }
  }
}

TEST(Residual, SingleFResidualOfKnownPolynomial) {
  // f = u: 2 f_h + h f_hh - G(1+H/h) f_uu = 0.
  EXPECT_DOUBLE_EQ(single_f_residual({0.4, 1, 0, 0, 0}, 0.4, 1.3, {}), 0.0);
  // f = h: residual 2.
  EXPECT_DOUBLE_EQ(single_f_residual({1.3, 0, 1, 0, 0}, 0.4, 1.3, {}), 2.0);
}

TEST(Sampling, JetsLieOnTheManifold) {
  std::mt19937_64 rng(3);
  const FluidParams p{2.0, 1.5};
  for (int k = 0; k < 200; ++k) {
    const JetPoint j = sample_manifold_jet(rng, p);
    EXPECT_LT(mswe_residual(j, p).max_abs(), 1e-12);
    EXPECT_GT(j.h, 0);
  }
}

TEST(Sampling, SeedDeterminesJet) {
  const JetPoint a = sample_manifold_jet(std::uint64_t{9}, {});
  const JetPoint b = sample_manifold_jet(std::uint64_t{9}, {});
  EXPECT_EQ(a.u_t, b.u_t);
  EXPECT_EQ(a.h_x, b.h_x);
}

TEST(Sampling, InvalidBox) {
  SamplingBox box;
  box.h = {-1, 1};
  EXPECT_THROW(box.validate(), ConfigError);
  box.h = {2, 1};
  EXPECT_THROW(box.validate(), ConfigError);
}

TEST(DiscreteSymmetry, ImagesOfGalileanSolution) {
  const SolutionField f = galilean_solution(0.2, 1.0, Rect{{0.5, 2.0}, {-1, 1}});
  const SolutionField s1 = apply_discrete_symmetry(f, DiscreteSymmetry::S1);
  const SolutionField s2 = apply_discrete_symmetry(f, DiscreteSymmetry::S2);
  // S1: (t, x) -> (-t, -x); S2: (x, u) -> (-x, -u).
  EXPECT_NEAR(s1(-1.0, 0.5).u, f(1.0, -0.5).u, 1e-15);
  EXPECT_NEAR(s1(-1.0, 0.5).h, f(1.0, -0.5).h, 1e-15);
  EXPECT_NEAR(s2(1.0, 0.5).u, -f(1.0, -0.5).u, 1e-15);
  EXPECT_NEAR(s2(1.0, 0.5).h, f(1.0, -0.5).h, 1e-15);
}
