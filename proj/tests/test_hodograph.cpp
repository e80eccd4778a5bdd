#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "symflow/errors.hpp"
#include "symflow/hodograph.hpp"
#include "symflow/solutions.hpp"

using namespace symflow;

TEST(PairFromF, HalfOrderMatchesHandDerivedPartner) {
  const FluidParams p{1.0, 1.0};
  const HodographPair pair = pair_from_f(half_order_f(p), 1.0, 1.0, 0.0, p, {{0.25, 2}, {0.5, 2}});
  const double offset = pair(1.0, 1.0).g - oracle::half_order_g(1.0, 1.0, 1.0);
  for (double u : {0.3, 0.9, 1.7}) {
    for (double h : {0.6, 1.2, 1.9}) {
      EXPECT_NEAR(pair(u, h).g - oracle::half_order_g(u, h, 1.0), offset, 1e-9);
      EXPECT_NEAR(pair(u, h).f, oracle::half_order_f(u, h, 1.0), 1e-14);
    }
  }
}

TEST(PairFromF, PathOrderIrrelevantForCompatibleF) {
  const FluidParams p{1.0, 1.0};
  const FFunction f = half_order_f(p);
  const double a = integrate_g(f, 1, 1, 0, p, 1.6, 0.7, PathOrder::UThenH);
  const double b = integrate_g(f, 1, 1, 0, p, 1.6, 0.7, PathOrder::HThenU);
  EXPECT_NEAR(a, b, 1e-10);
}

TEST(PairFromF, IncompatibleFRejected) {
  const FFunction f = [](double u, double h) { return FDerivatives{h * h, 0, 2 * h, 0, 2}; };
  EXPECT_THROW(pair_from_f(f, 0, 1, 0, {}, kDefaultPairBox), CompatibilityError);
}

TEST(Inversion, RoundTripWithPerturbedGuess) {
  const FluidParams p{1.0, 1.0};
  std::mt19937_64 rng(6);
  for (const auto& e : catalog(p)) {
    if (!e.make_pair || e.audit_failed) continue;
    const HodographPair pair = e.make_pair();
    std::uniform_real_distribution<double> du(e.box.u.lo, e.box.u.hi), dh(e.box.h.lo, e.box.h.hi);
    for (int k = 0; k < 100; ++k) {
      const double u = du(rng), h = dh(rng);
      const PairValue v = pair(u, h);
      const State s = invert_point(pair, v.f, v.g, {u * 1.05, h * 0.95});
      EXPECT_NEAR(s.u, u, 1e-9) << e.id;
      EXPECT_NEAR(s.h, h, 1e-9) << e.id;
    }
  }
}

TEST(Inversion, SingularJacobianRaises) {
  const HodographPair flat("flat", [](double, double) { return PairValue{1, 0, 0, 1, 0, 0}; },
                           kDefaultPairBox);
  EXPECT_THROW(invert_point(flat, 2, 1, {0, 1}), DegenerateMapError);
}

TEST(Inversion, SimplePairGivesGalileanSolution) {
  const FluidParams p{1.0, 1.0};
  const Rect d{{1, 2}, {0, 1}};
  const InvertedField inv = field_from_pair(simple_pair({0, 1, 0, 0, 0}, p), d, 11, 11);
  EXPECT_DOUBLE_EQ(inv.converged_fraction(), 1.0);
  for (double t : {1.0, 1.3, 2.0}) {
    for (double x : {0.0, 0.45, 1.0}) {
      EXPECT_NEAR(inv.field(t, x).u, x / t, 1e-9);
      EXPECT_NEAR(inv.field(t, x).h, 1 / t, 1e-9);
    }
  }
}

TEST(Inversion, HalfOrderFieldSolvesTheSystem) {
  const FluidParams p{1.0, 1.0};
  const auto entries = catalog(p);
  const InvertedField inv =
      field_from_pair(find_entry(entries, "half_order").make_pair(), {{0.30, 0.34}, {-0.1, 0.1}}, 21, 21);
  EXPECT_GT(inv.converged_fraction(), 0.9);
  VerifyOptions vo;
  vo.use_analytic = false;
  const ResidualReport r = verify_field(inv.field, p, vo);
  EXPECT_GT(r.evaluated, 50);
  EXPECT_LT(r.max_abs(), 1e-5);
}

TEST(Verify, DetectsWrongField) {
  const SolutionField wrong("wrong", {{1, 2}, {0, 1}},
                            [](double t, double x) { return State{x * t, 1 + x}; });
  EXPECT_GT(verify_field(wrong, {}).max_abs(), 0.1);
}

TEST(Verify, FiniteDifferenceJetOfGalilean) {
  const SolutionField g = galilean_solution(0.1, 1.0);
  const FieldJet j = fd_jet(g, 1.2, 0.3);
  EXPECT_NEAR(j.u_t, -(0.4) / (1.44), 1e-9);
  EXPECT_NEAR(j.u_x, 1 / 1.2, 1e-9);
  EXPECT_NEAR(j.h_t, -1 / 1.44, 1e-9);
}

TEST(LinearizedResidual, StatedPartnerFails) {
  const FluidParams p{1.0, 1.0};
  const auto entries = catalog(p);
  const CatalogEntry& e = find_entry(entries, "half_order_stated_g");
  EXPECT_TRUE(e.audit_failed);
  EXPECT_GT(e.audit_residual, 0.1);
  EXPECT_LT(max_linearized_residual(find_entry(entries, "half_order").make_pair(), p), 1e-7);
}
