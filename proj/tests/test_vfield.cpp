#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "symflow/errors.hpp"
#include "symflow/model.hpp"
#include "symflow/solutions.hpp"
#include "symflow/vfield.hpp"

using namespace symflow;

namespace {

double max_defect(const VectorFieldSpec& v, const FluidParams& p, std::uint64_t seed,
                  int jets = 200) {
  std::mt19937_64 rng(seed);
  double worst = 0;
  for (int k = 0; k < jets; ++k) {
    worst = std::max(worst, invariance_defect(v, sample_manifold_jet(rng, p), p).max_abs());
  }
  return worst;
}

// A smooth field that is not a symmetry.
VectorFieldSpec wobble() {
  return VectorFieldSpec::finite_difference("wobble", [](const Point& p) {
    return std::array<double, 4>{std::sin(p.x) + p.u * p.h, p.t * p.t - p.u,
                                 std::cos(p.t * p.h), p.x * p.u + p.h * p.h};
  });
}

}  // namespace

class GeneratorDefect : public ::testing::TestWithParam<double> {};

TEST_P(GeneratorDefect, PointSymmetriesAnnihilateTheSystem) {
  const FluidParams p{GetParam(), 1.0};
  for (const auto& g : {generators::dilation(), generators::galilean_boost(),
                        generators::time_translation(), generators::space_translation()}) {
    EXPECT_LT(max_defect(g, p, 11), 1e-7) << g.name();
  }
  for (const auto& c : {std::array<double, 5>{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0},
                        {0.3, -1, 2, 0.5, 1}}) {
    EXPECT_LT(max_defect(generators::linearizing(simple_pair(c, p)), p, 12), 1e-7);
  }
}

INSTANTIATE_TEST_SUITE_P(Depths, GeneratorDefect, ::testing::Values(0.0, 0.5, 1.0, 2.0));

TEST(GeneratorDefect, NonSymmetriesAreDetected) {
  const FluidParams p{1.0, 1.0};
  EXPECT_GT(max_defect(generators::velocity_shift(), p, 1), 1e-2);
  EXPECT_GT(max_defect(generators::time_scaling(), p, 1), 1e-2);
  EXPECT_GT(max_defect(generators::swe_height_scaling(), p, 1), 1e-2);
}

TEST(GeneratorDefect, ShallowWaterExtras) {
  const FluidParams swe{0.0, 1.0};
  EXPECT_LT(max_defect(generators::swe_height_scaling(), swe, 5), 1e-7);
  for (double g : {1.0, 2.0}) {
    EXPECT_LT(max_defect(generators::swe_projective(g), {0.0, g}, 5), 1e-7);
  }
}

TEST(GeneratorDefect, OffManifoldJetRejected) {
  JetPoint j;
  j.u_t = 1;
  EXPECT_THROW(invariance_defect(generators::dilation(), j, {}), PreconditionError);
}

TEST(Prolongation, DilationByHand) {
  // t dt + x dx: eta^t = -u_t, eta^x = -u_x.
  JetPoint j;
  j.u_t = 0.3;
  j.u_x = -0.7;
  j.h_t = 1.1;
  j.h_x = 0.2;
  const ProlongedCoefficients c = prolong1(generators::dilation(), j);
  EXPECT_DOUBLE_EQ(c.eta_t, -0.3);
  EXPECT_DOUBLE_EQ(c.eta_x, 0.7);
  EXPECT_DOUBLE_EQ(c.phi_t, -1.1);
  EXPECT_DOUBLE_EQ(c.phi_x, -0.2);
}

TEST(Prolongation, BoostByHand) {
  // t dx + du: eta^t = -u_x, eta^x = 0, phi^t = -h_x.
  JetPoint j;
  j.u_x = 0.25;
  j.h_x = 0.5;
  const ProlongedCoefficients c = prolong1(generators::galilean_boost(), j);
  EXPECT_DOUBLE_EQ(c.eta_t, -0.25);
  EXPECT_DOUBLE_EQ(c.eta_x, 0.0);
  EXPECT_DOUBLE_EQ(c.phi_t, -0.5);
  EXPECT_DOUBLE_EQ(c.phi_x, 0.0);
}

TEST(Determining, GeneralSolutionSatisfiesAllEight) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(0.5, 1.5);
  for (double H : {0.5, 1.0, 2.0}) {
    const FluidParams p{H, 1.0};
    const auto v = generators::general_solution(0.7, -1.2, simple_pair({1, 2, -1, 0.5, 3}, p));
    for (int k = 0; k < 50; ++k) {
      const Point pt{d(rng), d(rng) - 1, d(rng) - 1, d(rng)};
      for (double e : determining_defect(v, pt, p)) EXPECT_LT(std::abs(e), 1e-9);
    }
  }
}

// Invariance defect reassembled from the determining equations, with the
// polynomial in (u_x, h_x) written out by hand.
TEST(Determining, DefectIsPolynomialInDeterminingEquations) {
  const FluidParams p{1.3, 1.0};
  const VectorFieldSpec v = wobble();
  std::mt19937_64 rng(8);
  for (int k = 0; k < 20; ++k) {
    const JetPoint j = sample_manifold_jet(rng, p);
    const Point pt{j.t, j.x, j.u, j.h};
    const auto L = determining_defect(v, pt, p);
    const double K = p.pressure_factor(j.h);
    const double d1 = j.h * L[1] * j.u_x * j.u_x - K * L[1] * j.h_x * j.h_x + L[4] * j.u_x -
                      p.gravity * L[2] * j.h_x + L[6];
    const double d2 = -j.h * L[0] * j.u_x * j.u_x + K * L[0] * j.h_x * j.h_x + L[3] * j.u_x +
                      L[5] * j.h_x + L[7];
    const Residual2 r = invariance_defect(v, j, p);
    EXPECT_NEAR(r.r1, d1, 1e-6);
    EXPECT_NEAR(r.r2, d2, 1e-6);
  }
}

TEST(Bracket, TranslationsAndDilation) {
  const Point p{1.3, -0.4, 0.2, 1.1};
  const auto b = lie_bracket(generators::dilation(), generators::time_translation(), p);
  EXPECT_NEAR(b[0], -1, 1e-12);
  EXPECT_NEAR(b[1], 0, 1e-12);
  const auto g = lie_bracket(generators::galilean_boost(), generators::time_translation(), p);
  EXPECT_NEAR(g[1], -1, 1e-12);
  const auto z = lie_bracket(generators::dilation(), generators::galilean_boost(), p);
  for (double c : z) EXPECT_NEAR(c, 0, 1e-12);
}

TEST(Bracket, Antisymmetric) {
  const Point p{0.9, 0.3, -0.2, 1.4};
  const auto a = lie_bracket(wobble(), generators::dilation(), p);
  const auto b = lie_bracket(generators::dilation(), wobble(), p);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(a[i], -b[i], 1e-9);
}

TEST(VectorField, AnalyticPartialsMatchDifferences) {
  const FluidParams p{1.0, 1.0};
  const Point pt{1.2, 0.1, 0.3, 0.9};
  EXPECT_LT(partials_mismatch(generators::swe_projective(1.0), pt), 1e-7);
  EXPECT_LT(partials_mismatch(generators::linearizing(simple_pair({1, 1, 1, 1, 1}, p)), pt), 1e-7);
}

TEST(VectorField, NonFiniteCoefficientRaises) {
  const auto bad = VectorFieldSpec::finite_difference(
      "bad", [](const Point&) { return std::array<double, 4>{std::nan(""), 0, 0, 0}; });
  EXPECT_THROW(bad(Point{}), EvaluationError);
}

TEST(VectorField, LinearCombination) {
  const auto v = linear_combination({{2.0, generators::dilation()}, {-1.0, generators::space_translation()}});
  const auto c = v.coefficients({1.5, 0.5, 0, 1});
  EXPECT_DOUBLE_EQ(c[0], 3.0);
  EXPECT_DOUBLE_EQ(c[1], 0.0);
  EXPECT_TRUE(v.analytic_partials());
}
