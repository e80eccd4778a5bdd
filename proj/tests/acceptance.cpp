// Acceptance criteria; one PASS/FAIL line each, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "symflow/algebra.hpp"
#include "symflow/campaign.hpp"
#include "symflow/fvsolver.hpp"
#include "symflow/hodograph.hpp"
#include "symflow/model.hpp"
#include "symflow/reduce.hpp"
#include "symflow/solutions.hpp"
#include "symflow/special.hpp"
#include "symflow/vfield.hpp"

using namespace symflow;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (!out.ok) ++failures;
  std::printf("%s %2d %s (%.2fs)%s\n", out.ok ? "PASS" : "FAIL", id, title.c_str(), secs,
              out.detail.str().c_str());
}

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

double max_defect(const VectorFieldSpec& v, const FluidParams& p, std::uint64_t seed,
                  const SamplingBox& box = {}) {
  std::mt19937_64 rng(seed);
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    worst = std::max(worst, invariance_defect(v, sample_manifold_jet(rng, p, box), p).max_abs());
  }
  return worst;
}

std::vector<CatalogEntry> pair_entries(const FluidParams& p) {
  std::vector<CatalogEntry> out;
  for (auto& e : catalog(p)) {
    if (e.make_pair && !e.audit_failed) out.push_back(std::move(e));
  }
  return out;
}

double field_gap(const SolutionField& a, const SolutionField& b, const Rect& d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dt(d.t.lo, d.t.hi), dx(d.x.lo, d.x.hi);
  double gap = 0;
  for (int k = 0; k < 100; ++k) {
    const double t = dt(rng), x = dx(rng);
    const State u = a(t, x), v = b(t, x);
    gap = std::max({gap, std::abs(u.u - v.u), std::abs(u.h - v.h)});
  }
  return gap;
}

}  // namespace

int main() {
  criterion(1, "symmetry certification, H in {0.5, 1, 2}", [](Outcome& o) {
    const auto start = Clock::now();
    double worst = 0;
    for (double H : {0.5, 1.0, 2.0}) {
      const FluidParams p{H, 1.0};
      std::vector<VectorFieldSpec> gens{generators::dilation(), generators::galilean_boost(),
                                        generators::time_translation(),
                                        generators::space_translation()};
      for (const char* id : {"simple_c1", "simple_c2", "simple_c3"}) {
        const auto entries = catalog(p);
        gens.push_back(generators::linearizing(find_entry(entries, id).make_pair()));
      }
      for (const auto& g : gens) {
        o.require(g.analytic_partials(), g.name() + " analytic");
        worst = std::max(worst, max_defect(g, p, 100));
      }
    }
    const double secs = seconds_since(start);
    o.detail << " max defect " << worst;
    o.require(worst < 1e-7, "defect < 1e-7");
    o.require(secs < 5, "runtime < 5 s");
  });

  criterion(2, "shallow-water branch and projective audit", [](Outcome& o) {
    const FluidParams p{0.0, 1.0};
    double worst = 0;
    for (const auto& g : {generators::dilation(), generators::galilean_boost(),
                          generators::swe_height_scaling(),
                          generators::linearizing(simple_pair({1, 0, 0, 0, 0}, p))}) {
      worst = std::max(worst, max_defect(g, p, 200));
    }
    o.detail << " max defect " << worst;
    o.require(worst < 1e-7, "defect < 1e-7");
    const Report r = run(parse_config(R"({"command": "audit", "H": 0})"));
    const auto it = std::find_if(r.checks.begin(), r.checks.end(), [](const Check& c) {
      return c.name == "audit/projective_generator";
    });
    o.require(it != r.checks.end() && it->status == CheckStatus::Flag && std::isfinite(it->value),
              "flagged projective entry with measured defect");
    if (it != r.checks.end()) o.detail << "; projective defect " << it->value << " (flag)";
  });

  criterion(3, "determining equations for the general solution family", [](Outcome& o) {
    const FluidParams p{1.0, 1.0};
    double worst = 0;
    std::mt19937_64 rng(300);
    for (const auto& e : pair_entries(p)) {
      const auto v = generators::general_solution(1.3, -0.7, e.make_pair());
      std::uniform_real_distribution<double> dt(0.5, 2), dx(-1, 1), du(e.box.u.lo, e.box.u.hi),
          dh(e.box.h.lo, e.box.h.hi);
      for (int k = 0; k < 100; ++k) {
        for (double d : determining_defect(v, {dt(rng), dx(rng), du(rng), dh(rng)}, p)) {
          worst = std::max(worst, std::abs(d));
        }
      }
    }
    o.detail << " max defect " << worst;
    o.require(worst < 1e-7, "8-vector < 1e-7");
  });

  criterion(4, "commutator table and adjoint closed forms", [](Outcome& o) {
    const FluidParams p{1.0, 1.0};
    std::vector<HodographPair> pairs;
    for (const auto& e : pair_entries(p)) pairs.push_back(e.make_pair());
    const CommutatorReport r = commutator_table_check(pairs, p, 50, 400);
    o.detail << " commutator deviation " << r.max() << " ([L,L] " << r.linearizing_linearizing
             << ")";
    o.require(r.max() < 1e-7, "table to 1e-7");

    const HodographPair pair = simple_pair({1, 0.5, 0, 0, 0}, p);
    const AlgebraElement d_el{1, 0, std::nullopt}, g_el{0, 1, std::nullopt}, l_el{0, 0, pair};
    double ratio = 0;
    const Point pt{1.1, 0.3, 0.2, 1.2};
    for (double eps : {0.1, 0.05, -0.05, -0.1}) {
      const double bound = 10 * std::pow(eps, 4);
      const std::vector<std::pair<VectorFieldSpec, AlgebraElement>> cases{
          {lie_series(generators::dilation(), generators::linearizing(pair), eps, 3),
           adjoint(DilationGenerator{}, eps, l_el)},
          {lie_series(generators::galilean_boost(), generators::linearizing(pair), eps, 3),
           adjoint(BoostGenerator{}, eps, l_el)},
          {lie_series(generators::linearizing(pair), generators::dilation(), eps, 3),
           adjoint(LinearizingGenerator{pair}, eps, d_el)},
          {lie_series(generators::linearizing(pair), generators::galilean_boost(), eps, 3),
           adjoint(LinearizingGenerator{pair}, eps, g_el)},
      };
      for (const auto& [series, closed] : cases) {
        const auto a = series.coefficients(pt), b = element_field(closed).coefficients(pt);
        for (int i = 0; i < 4; ++i) ratio = std::max(ratio, std::abs(a[i] - b[i]) / bound);
      }
    }
    o.detail << "; series gap / (10 eps^4) " << ratio;
    o.require(ratio <= 1, "adjoint vs series");
  });

  criterion(5, "classification of the finite-dimensional subalgebra", [](Outcome& o) {
    const auto start = Clock::now();
    const OrbitInvarianceReport r = orbit_invariance_audit(1000, 500, false);
    o.detail << " " << r.trials << " draws, violations " << r.violations << ", idempotence "
             << r.idempotence_failures << ", span " << r.span_failures;
    o.require(r.violations == 0 && r.idempotence_failures == 0 && r.span_failures == 0,
              "orbit invariance");
    const OrbitSearchResult d = orbit_equivalent_g1({{0, 0, 1, 1}}, {{0, 0, 0, 1}}, 20, 501);
    o.detail << "; delta verdict: " << (d.equivalent ? "removable" : "not removable")
             << " (residual " << d.residual << ")";
    const double secs = seconds_since(start);
    o.require(secs < 10, "runtime < 10 s");
  });

  criterion(6, "hodograph roundtrip and simple-pair inversion", [](Outcome& o) {
    const FluidParams p{1.0, 1.0};
    std::mt19937_64 rng(600);
    double worst = 0;
    for (const auto& e : pair_entries(p)) {
      const HodographPair pair = e.make_pair();
      std::uniform_real_distribution<double> du(e.box.u.lo, e.box.u.hi), dh(e.box.h.lo, e.box.h.hi);
      for (int k = 0; k < 100; ++k) {
        const double u = du(rng), h = dh(rng);
        const PairValue v = pair(u, h);
        const State s = invert_point(pair, v.f, v.g, {u + 0.05, h * 0.95});
        worst = std::max({worst, std::abs(s.u - u), std::abs(s.h - h)});
      }
    }
    o.detail << " roundtrip " << worst;
    o.require(worst < 1e-9, "roundtrip 1e-9");
    const Rect d{{1, 2}, {0, 1}};
    const InvertedField inv = field_from_pair(simple_pair({0, 1, 0, 0, 0}, p), d, 11, 11);
    const double gap = field_gap(inv.field, galilean_solution(0, 1, d), d, 601);
    o.detail << "; Galilean gap " << gap;
    o.require(gap < 1e-9, "simple pair inversion 1e-9");
  });

  criterion(7, "non-Lie solution from the half-order pair", [](Outcome& o) {
    const FluidParams p{1.0, 1.0};
    const auto entries = catalog(p);
    const InvertedField inv = field_from_pair(find_entry(entries, "half_order").make_pair(),
                                              {{0.30, 0.34}, {-0.1, 0.1}}, 21, 21);
    VerifyOptions vo;
    vo.seed = 700;
    vo.use_analytic = false;
    const ResidualReport r = verify_field(inv.field, p, vo);
    o.detail << " residual " << r.max_abs() << " over " << r.evaluated << " points (converged "
             << inv.converged_fraction() << ")";
    o.require(r.evaluated > 0 && r.max_abs() < 1e-5, "residual < 1e-5");
    const CatalogEntry& stated = find_entry(entries, "half_order_stated_g");
    o.detail << "; stated partner residual " << stated.audit_residual;
    o.require(stated.audit_failed && std::isfinite(stated.audit_residual), "audit entry present");
  });

  criterion(8, "separable Bessel family", [](Outcome& o) {
    const FluidParams p{1.0, 1.0};
    std::mt19937_64 rng(800);
    std::uniform_real_distribution<double> du(-1, 1), dh(0.5, 2);
    double single = 0;
    for (double c : {0.125, 0.1875, 0.25}) {
      const FFunction f = bessel_f(c, {1, 0.5, 1, 0.5}, p);
      for (int k = 0; k < 100; ++k) {
        const double u = du(rng), h = dh(rng);
        single = std::max(single, std::abs(single_f_residual(f(u, h), u, h, p)));
      }
    }
    const double c = 3.0 / 16.0, m = 2 * std::sqrt(c / p.H);
    const FFunction b = bessel_f(c, {1, 0, 1, 0}, p), e = half_order_f(p);
    double identity = 0;
    for (int k = 0; k < 50; ++k) {
      const double u = du(rng), h = dh(rng);
      identity = std::max(identity, std::abs(b(u, h).f - std::sqrt(2 / (M_PI * m)) * e(u, h).f));
    }
    double wronskian = 0;
    for (double nu : {0.0, 0.5, std::sqrt(0.5)}) {
      for (double z = 0.1; z <= 20.0; z += 0.1) {
        const double w = special::bessel_j(nu, z) * special::bessel_y_prime(nu, z) -
                         special::bessel_j_prime(nu, z) * special::bessel_y(nu, z);
        wronskian = std::max(wronskian, std::abs(w - 2 / (M_PI * z)));
      }
    }
    o.detail << " single-f " << single << "; identity " << identity << "; Wronskian " << wronskian;
    o.require(single < 1e-7, "single-f < 1e-7");
    o.require(identity < 1e-8, "identity < 1e-8");
    o.require(wronskian < 1e-10, "Wronskian < 1e-10");
  });

  criterion(9, "reductions", [](Outcome& o) {
    const FluidParams p{1.0, 1.0};
    const Trajectory tr = integrate_case_i(1.0, p, 0.0, {0.0, 1.0}, 0.5);
    const Rect d{{1.0, 1.2}, {-1.0, -0.5}};
    const LiftedField lifted = lift_case_i(tr, d);
    VerifyOptions vo;
    vo.seed = 900;
    vo.use_analytic = false;
    const double lift_res = verify_field(lifted.field, p, vo).max_abs();
    o.detail << " case-i residual " << lift_res;
    o.require(lift_res < 1e-5, "case-i lift");

    const Rect g{{1, 2}, {0, 1}};
    const double ii = field_gap(case_ii_field(0.25, 1.0, g), galilean_solution(0.25, 1.0, g), g, 901);
    o.detail << "; case-ii gap " << ii;
    o.require(ii <= 1e-14, "case-ii matches to round-off");

    const auto [r1, r2] = case_iii_residual(simple_pair({1, 1, 0, 0, 0}, p), {0.2, 0.3, 1.1}, 0, 0, p);
    o.require(r1 == 0 && r2 == 0, "case-iii constants");

    const LiftedField plus = lift_general_ia(1, 1, 0, 0, tr, LogSign::Corrected, lifted.field.domain());
    const LiftedField stated =
        lift_general_ia(1, 1, 0, 0, tr, LogSign::AsStated, lifted.field.domain());
    const double gap = field_gap(plus.field, lifted.field, lifted.field.domain(), 902);
    const double stated_res = verify_field(stated.field, p, vo).max_abs();
    o.detail << "; general ansatz gap with + sign " << gap << ", residual with stated sign "
             << stated_res << " (sign discrepancy recorded)";
    o.require(gap < 1e-9, "general ansatz reconciles");
  });

  criterion(10, "finite-volume cross-check", [](Outcome& o) {
    const auto start = Clock::now();
    const FluidParams p{1.0, 1.0};
    const Rect gw{{1, 2}, {0, 1}};
    const ConvergenceResult g = convergence_order(galilean_solution(0.25, 1, gw), p, gw, {100, 200, 400});
    const Rect hw{{0.30, 0.34}, {-0.1, 0.1}};
    const auto entries = catalog(p);
    const InvertedField inv = field_from_pair(find_entry(entries, "half_order").make_pair(), hw, 21, 21);
    const ConvergenceResult h = convergence_order(inv.field, p, hw, {100, 200, 400});
    auto in_band = [](const ConvergenceResult& r) {
      return !r.degenerate && r.order_u >= 0.8 && r.order_u <= 1.3 && r.order_h >= 0.8 &&
             r.order_h <= 1.3;
    };
    o.detail << " Galilean orders " << g.order_u << "/" << g.order_h << "; hodograph orders "
             << h.order_u << "/" << h.order_h;
    o.require(in_band(g), "Galilean order");
    o.require(in_band(h), "hodograph order");
    GridState gs = make_grid(
        SolutionField("wave", {{0, 1}, {0, 1}},
                      [](double, double x) {
                        return State{0.2 * std::sin(2 * M_PI * x), 1 + 0.1 * std::cos(2 * M_PI * x)};
                      }),
        0, {0, 1}, 100);
    double drift = 0;
    for (int k = 0; k < 200; ++k) {
      const double m0 = total_mass(gs);
      gs = step(gs, p, 0.45, Boundary::periodic());
      drift = std::max(drift, std::abs(total_mass(gs) - m0));
    }
    o.detail << "; mass change per step " << drift;
    o.require(drift <= 1e-12, "mass conservation");
    o.require(seconds_since(start) < 30, "runtime < 30 s");
  });

  criterion(11, "discrete symmetries of closed-form solutions", [](Outcome& o) {
    const FluidParams p{1.0, 1.0};
    double worst = 0, invol = 0;
    for (const auto& e : catalog(p)) {
      if (e.kind != EntryKind::ClosedField) continue;
      const SolutionField f = e.make_field();
      for (auto s : {DiscreteSymmetry::S1, DiscreteSymmetry::S2}) {
        const SolutionField img = apply_discrete_symmetry(f, s);
        VerifyOptions vo;
        vo.seed = 1100;
        vo.use_analytic = false;
        const ResidualReport r = verify_field(img, p, vo);
        o.require(r.evaluated > 0, e.id + " evaluated");
        worst = std::max(worst, r.max_abs());
        invol = std::max(invol, field_gap(apply_discrete_symmetry(img, s), f, f.domain(), 1101));
      }
    }
    o.detail << " image residual " << worst << "; involution gap " << invol;
    o.require(worst < 1e-5, "images solve the system");
    o.require(invol == 0, "involutions");
  });

  criterion(12, "deterministic reports", [](Outcome& o) {
    for (const char* cmd :
         {"verify-symmetries", "classify", "reduce", "invert", "simulate", "audit"}) {
      const Campaign c =
          parse_config(std::string(R"({"H": 1, "seed": 12, "command": ")") + cmd + "\"}");
      const std::string a = format_report(run(c), ReportFormat::Json);
      const std::string b = format_report(run(c), ReportFormat::Json);
      o.require(a == b, std::string(cmd) + " identical");
    }
    o.detail << " six commands replayed";
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
