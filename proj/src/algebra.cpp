#include "symflow/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <unsupported/Eigen/NonLinearOptimization>

#include "symflow/errors.hpp"
#include "symflow/finite_diff.hpp"
#include "symflow/model.hpp"

namespace symflow {

namespace {

const Box kReferenceBox{{-1.0, 1.0}, {0.5, 2.0}};

VectorFieldSpec zero_field() {
  return VectorFieldSpec::analytic("0", [](const Point&) { return FieldValue{}; });
}

std::optional<HodographPair> accumulate(const std::optional<HodographPair>& base, double c,
                                        const HodographPair& term) {
  if (c == 0) return base;
  if (!base) return scale_pair(term, c);
  return add_pairs(*base, 1.0, term, c);
}

}  // namespace

VectorFieldSpec element_field(const AlgebraElement& v) {
  std::vector<std::pair<double, VectorFieldSpec>> terms;
  if (v.a != 0) terms.emplace_back(v.a, generators::dilation());
  if (v.b != 0) terms.emplace_back(v.b, generators::galilean_boost());
  if (v.pair) terms.emplace_back(1.0, generators::linearizing(*v.pair));
  if (terms.empty()) return zero_field();
  return linear_combination(terms);
}

HodographPair scale_pair(const HodographPair& p, double factor) {
  auto eval = [p, factor](double u, double h) {
    PairValue q = p(u, h);
    return PairValue{factor * q.f, factor * q.f_u, factor * q.f_h,
                     factor * q.g, factor * q.g_u, factor * q.g_h};
  };
  return HodographPair(p.name(), eval, p.box(), p.analytic_partials(), p.parameters());
}

HodographPair add_pairs(const HodographPair& p, double cp, const HodographPair& q, double cq) {
  auto eval = [p, cp, q, cq](double u, double h) {
    const PairValue a = p(u, h), b = q(u, h);
    return PairValue{cp * a.f + cq * b.f,     cp * a.f_u + cq * b.f_u,
                     cp * a.f_h + cq * b.f_h, cp * a.g + cq * b.g,
                     cp * a.g_u + cq * b.g_u, cp * a.g_h + cq * b.g_h};
  };
  return HodographPair(p.name() + "+" + q.name(), eval, p.box(),
                       p.analytic_partials() && q.analytic_partials());
}

HodographPair shift_pair(const HodographPair& p, double eps) {
  auto eval = [p, eps](double u, double h) {
    const PairValue q = p(u - eps, h);
    return PairValue{q.f, q.f_u, q.f_h, q.g + eps * q.f, q.g_u + eps * q.f_u,
                     q.g_h + eps * q.f_h};
  };
  return HodographPair(p.name(), eval, p.box(), p.analytic_partials(), p.parameters());
}

HodographPair boost_derivative(const HodographPair& p) {
  auto eval = [p](double u, double h) {
    const PairValue q = p(u, h);
    const double su = fd::step_for(u);
    const double sh = std::min(fd::step_for(h), 0.2 * h);
    const double f_uu = fd::derivative([&](double s) { return p(s, h).f_u; }, u, su);
    const double f_uh = fd::derivative([&](double s) { return p(u, s).f_u; }, h, sh);
    const double g_uu = fd::derivative([&](double s) { return p(s, h).g_u; }, u, su);
    const double g_uh = fd::derivative([&](double s) { return p(u, s).g_u; }, h, sh);
    return PairValue{q.f_u, f_uu, f_uh, q.g_u - q.f, g_uu - q.f_u, g_uh - q.f_h};
  };
  return HodographPair("d_u " + p.name(), eval, p.box(), false);
}

AlgebraElement adjoint(const Generator& generator, double eps, const AlgebraElement& target) {
  AlgebraElement out = target;
  if (std::holds_alternative<DilationGenerator>(generator)) {
    if (target.pair) out.pair = scale_pair(*target.pair, std::exp(eps));
  } else if (std::holds_alternative<BoostGenerator>(generator)) {
    if (target.pair) out.pair = shift_pair(*target.pair, eps);
  } else {
    const HodographPair& p = std::get<LinearizingGenerator>(generator).pair;
    out.pair = accumulate(out.pair, -eps * target.a, p);
    if (target.b != 0) out.pair = accumulate(out.pair, eps * target.b, boost_derivative(p));
  }
  return out;
}

VectorFieldSpec lie_series(const VectorFieldSpec& v, const VectorFieldSpec& w, double eps,
                           int order) {
  if (order < 0) throw PreconditionError("lie_series: order must be non-negative");
  std::vector<std::pair<double, VectorFieldSpec>> terms{{1.0, w}};
  VectorFieldSpec current = w;
  double coef = 1.0;
  for (int n = 1; n <= order; ++n) {
    current = bracket_field(v, current);
    coef *= -eps / n;
    terms.emplace_back(coef, current);
  }
  return linear_combination(terms);
}

double CommutatorReport::max() const {
  return std::max({dilation_boost, linearizing_dilation, boost_linearizing,
                   linearizing_linearizing});
}

CommutatorReport commutator_table_check(const std::vector<HodographPair>& pairs,
                                        const FluidParams& params, int samples,
                                        std::uint64_t seed) {
  params.validate();
  std::mt19937_64 rng(seed);
  auto draw = [&rng](const Interval& i) {
    return std::uniform_real_distribution<double>(i.lo, i.hi)(rng);
  };
  const VectorFieldSpec D = generators::dilation();
  const VectorFieldSpec G = generators::galilean_boost();
  std::vector<VectorFieldSpec> L;
  for (const auto& p : pairs) L.push_back(generators::linearizing(p));

  auto dev = [](const std::array<double, 4>& a, const std::array<double, 4>& b) {
    double m = 0;
    for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
  };

  CommutatorReport out;
  for (int s = 0; s < samples; ++s) {
    const Point base{draw({0.5, 2.0}), draw({-1.0, 1.0}), 0, 1};
    out.dilation_boost =
        std::max(out.dilation_boost, dev(lie_bracket(D, G, base), {0, 0, 0, 0}));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      Point p = base;
      p.u = draw(pairs[i].box().u);
      p.h = draw(pairs[i].box().h);
      const PairValue q = pairs[i](p.u, p.h);
      const double membership = linearized_residual(q, p.u, p.h, params).max_abs();
      out.linearizing_dilation =
          std::max({out.linearizing_dilation, membership,
                    dev(lie_bracket(L[i], D, p), {q.f, q.g, 0, 0})});
      out.boost_linearizing =
          std::max({out.boost_linearizing, membership,
                    dev(lie_bracket(G, L[i], p), {q.f_u, q.g_u - q.f, 0, 0})});
      for (std::size_t j = i + 1; j < pairs.size(); ++j) {
        out.linearizing_linearizing =
            std::max(out.linearizing_linearizing, dev(lie_bracket(L[i], L[j], p), {0, 0, 0, 0}));
      }
    }
  }
  return out;
}

G1Element adjoint_g1(G1Flow flow, double eps, const G1Element& v) {
  auto [a1, a2, a3, a4] = v.a;
  switch (flow) {
    case G1Flow::Dilation:
      return {{a1, a2, std::exp(eps) * a3, std::exp(eps) * a4}};
    case G1Flow::Boost:
      return {{a1, a2, a3 + eps * a4, a4}};
    case G1Flow::SpaceTranslation:
      return {{a1, a2, a3 - eps * a1, a4}};
    case G1Flow::TimeTranslation:
      return {{a1, a2, a3 - eps * a2, a4 - eps * a1}};
  }
  return v;
}

G1Element discrete_g1(DiscreteSymmetry which, const G1Element& v) {
  auto [a1, a2, a3, a4] = v.a;
  if (which == DiscreteSymmetry::S1) return {{a1, a2, -a3, -a4}};
  return {{a1, -a2, -a3, a4}};
}

std::string CanonicalClass::to_string() const {
  std::ostringstream os;
  os.precision(12);
  switch (tag) {
    case ClassTag::DPlusAG: os << "<D + " << a << " G>"; break;
    case ClassTag::GOnly: os << "<G>"; break;
    case ClassTag::LClass: os << "<L(" << (pair ? pair->name() : "") << ")>"; break;
    case ClassTag::GPlusDeltaDt: os << "<G + " << delta << " dt>"; break;
    case ClassTag::DtPlusDeltaDx: os << "<dt + " << delta << " dx>"; break;
    case ClassTag::DxOnly: os << "<dx>"; break;
  }
  return os.str();
}

bool same_class(const CanonicalClass& x, const CanonicalClass& y, double tol) {
  if (x.tag != y.tag) return false;
  switch (x.tag) {
    case ClassTag::DPlusAG:
      return std::abs(x.a - y.a) <= tol * std::max(1.0, std::abs(x.a));
    case ClassTag::GPlusDeltaDt:
    case ClassTag::DtPlusDeltaDx:
      return x.delta == y.delta;
    case ClassTag::LClass: {
      if (x.fingerprint.size() != y.fingerprint.size()) return false;
      for (std::size_t i = 0; i < x.fingerprint.size(); ++i) {
        if (std::abs(x.fingerprint[i] - y.fingerprint[i]) > tol) return false;
      }
      return true;
    }
    default:
      return true;
  }
}

namespace {

template <class F>
double reference_integral(F&& integrand) {
  using Rule = boost::math::quadrature::gauss<double, 15>;
  const Box& b = kReferenceBox;
  return Rule::integrate(
      [&](double u) {
        return Rule::integrate([&](double h) { return integrand(u, h); }, b.h.lo, b.h.hi);
      },
      b.u.lo, b.u.hi);
}

// Root of m nearest to zero on [-3, 3], or nullopt when m has no sign change.
std::optional<double> nearest_root(const std::function<double(double)>& m) {
  constexpr int kScan = 60;
  constexpr double kReach = 3.0;
  std::optional<double> best;
  const double m0 = m(0.0);
  if (m0 == 0) return 0.0;
  for (int dir : {-1, 1}) {
    double prev_s = 0, prev_m = m0;
    for (int k = 1; k <= kScan / 2; ++k) {
      const double s = dir * kReach * k / (kScan / 2);
      const double ms = m(s);
      if ((ms <= 0) != (prev_m <= 0)) {
        double lo = prev_s, hi = s, mlo = prev_m;
        for (int it = 0; it < 80 && std::abs(hi - lo) > 1e-15; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double mm = m(mid);
          if ((mm <= 0) == (mlo <= 0)) {
            lo = mid;
            mlo = mm;
          } else {
            hi = mid;
          }
        }
        const double root = 0.5 * (lo + hi);
        if (!best || std::abs(root) < std::abs(*best)) best = root;
        break;
      }
      prev_s = s;
      prev_m = ms;
    }
  }
  return best;
}

double pair_shift(const HodographPair& p) {
  const double mass = reference_integral([&](double u, double h) {
    const double f = p(u, h).f;
    return f * f;
  });
  const double gmag = reference_integral([&](double u, double h) { return std::abs(p(u, h).g); });
  auto moment_f = [&](double s) {
    return reference_integral([&](double u, double h) {
      const double f = p(u - s, h).f;
      return u * f * f;
    });
  };
  auto mean_g = [&](double s) {
    return reference_integral([&](double u, double h) {
      const PairValue q = p(u - s, h);
      return q.g + s * q.f;
    });
  };
  // The f-moment is used when f depends on u; otherwise the shift only
  // moves g and the mean of g serves as the marker.
  bool f_moves = false;
  for (double s : {-2.0, -1.0, 1.0, 2.0}) {
    if (std::abs(moment_f(s) - moment_f(0.0)) > 1e-10 * (mass + 1e-300)) f_moves = true;
  }
  if (f_moves) return nearest_root(moment_f).value_or(0.0);
  bool g_moves = false;
  for (double s : {-2.0, 2.0}) {
    if (std::abs(mean_g(s) - mean_g(0.0)) > 1e-10 * (gmag + mass + 1e-300)) g_moves = true;
  }
  if (g_moves) return nearest_root(mean_g).value_or(0.0);
  return 0.0;
}

std::vector<double> fingerprint(const HodographPair& p) {
  constexpr int nu = 7, nh = 5;
  std::vector<double> out;
  out.reserve(2 * nu * nh);
  for (int i = 0; i < nu; ++i) {
    const double u = kReferenceBox.u.lo + kReferenceBox.u.width() * i / (nu - 1);
    for (int j = 0; j < nh; ++j) {
      const double h = kReferenceBox.h.lo + kReferenceBox.h.width() * j / (nh - 1);
      const PairValue q = p(u, h);
      out.push_back(q.f);
      out.push_back(q.g);
    }
  }
  return out;
}

CanonicalClass normalize_pair(const HodographPair& pair) {
  const double s = pair_shift(pair);
  const HodographPair shifted = shift_pair(pair, s);
  std::vector<double> fp = fingerprint(shifted);
  double peak = 0;
  for (double v : fp) peak = std::max(peak, std::abs(v));
  if (!(peak > 0)) throw PreconditionError("normalize_g: element is zero on the reference box");
  double scale = 1.0 / peak;
  for (double v : fp) {
    if (std::abs(v) > 1e-6 * peak) {
      if (v < 0) scale = -scale;
      break;
    }
  }
  for (double& v : fp) v *= scale;
  CanonicalClass c;
  c.tag = ClassTag::LClass;
  c.pair = scale_pair(shifted, scale);
  c.fingerprint = std::move(fp);
  c.shift = s;
  c.scale = scale;
  return c;
}

}  // namespace

CanonicalClass normalize_g(const AlgebraElement& v) {
  CanonicalClass c;
  if (v.a != 0) {
    c.tag = ClassTag::DPlusAG;
    c.a = v.b / v.a;
    return c;
  }
  if (v.b != 0) {
    c.tag = ClassTag::GOnly;
    return c;
  }
  if (!v.pair) throw PreconditionError("normalize_g: zero element");
  return normalize_pair(*v.pair);
}

AlgebraElement representative(const CanonicalClass& c) {
  switch (c.tag) {
    case ClassTag::DPlusAG: return {1.0, c.a, std::nullopt};
    case ClassTag::GOnly: return {0.0, 1.0, std::nullopt};
    case ClassTag::LClass:
      if (!c.pair) throw PreconditionError("representative: L class without a pair");
      return {0.0, 0.0, c.pair};
    default:
      throw PreconditionError("representative: class belongs to the g1 list");
  }
}

CanonicalClass normalize_g1(const G1Element& v) {
  double peak = 0;
  for (double x : v.a) {
    if (!std::isfinite(x)) throw DomainError("normalize_g1: non-finite component");
    peak = std::max(peak, std::abs(x));
  }
  if (peak == 0) throw PreconditionError("normalize_g1: zero element");
  auto nonzero = [&](int i) { return std::abs(v.a[i]) > 1e-12 * peak; };
  CanonicalClass c;
  if (nonzero(0)) {
    c.tag = ClassTag::DPlusAG;
    c.a = v.a[1] / v.a[0];
  } else if (nonzero(1)) {
    c.tag = ClassTag::GPlusDeltaDt;
    c.delta = nonzero(3) ? 1 : 0;
  } else if (nonzero(3)) {
    c.tag = ClassTag::DtPlusDeltaDx;
    c.delta = nonzero(2) ? 1 : 0;
  } else {
    c.tag = ClassTag::DxOnly;
  }
  return c;
}

G1Element representative_g1(const CanonicalClass& c) {
  switch (c.tag) {
    case ClassTag::DPlusAG: return {{1.0, c.a, 0.0, 0.0}};
    case ClassTag::GPlusDeltaDt: return {{0.0, 1.0, 0.0, double(c.delta)}};
    case ClassTag::DtPlusDeltaDx: return {{0.0, 0.0, double(c.delta), 1.0}};
    case ClassTag::DxOnly: return {{0.0, 0.0, 1.0, 0.0}};
    default:
      throw PreconditionError("representative_g1: class does not belong to the g1 list");
  }
}

namespace {

G1Element apply_word(const std::array<double, 4>& e, const G1Element& v) {
  G1Element w = adjoint_g1(G1Flow::Dilation, e[0], v);
  w = adjoint_g1(G1Flow::Boost, e[1], w);
  w = adjoint_g1(G1Flow::TimeTranslation, e[2], w);
  return adjoint_g1(G1Flow::SpaceTranslation, e[3], w);
}

G1Element apply_discrete(int option, G1Element v) {
  if (option & 1) v = discrete_g1(DiscreteSymmetry::S1, v);
  if (option & 2) v = discrete_g1(DiscreteSymmetry::S2, v);
  return v;
}

Eigen::Vector4d unit(const G1Element& v) {
  Eigen::Vector4d x(v.a[0], v.a[1], v.a[2], v.a[3]);
  const double n = x.norm();
  if (!(n > 0)) throw PreconditionError("orbit_equivalent_g1: zero element");
  return x / n;
}

constexpr double kMaxFlowParameter = 10.0;

// Residual lambda * Ad(theta) v - w with lambda chosen by least squares.
struct OrbitFunctor {
  OrbitFunctor(G1Element v, Eigen::Vector4d w) : v(v), w(std::move(w)) {}

  int inputs() const { return 4; }
  int values() const { return 4; }

  Eigen::Vector4d image(const Eigen::VectorXd& theta, double* lambda) const {
    const G1Element y = apply_word({theta[0], theta[1], theta[2], theta[3]}, v);
    Eigen::Vector4d yv(y.a[0], y.a[1], y.a[2], y.a[3]);
    const double yy = yv.squaredNorm();
    const double l = yy > 0 ? yv.dot(w) / yy : 0.0;
    if (lambda) *lambda = l;
    return l * yv;
  }

  int operator()(const Eigen::VectorXd& theta, Eigen::VectorXd& r) const {
    r = image(theta, nullptr) - w;
    return 0;
  }

  int df(const Eigen::VectorXd& theta, Eigen::MatrixXd& jac) const {
    jac.resize(4, 4);
    for (int k = 0; k < 4; ++k) {
      const double step = fd::step_for(theta[k]);
      auto at = [&](double s) {
        Eigen::VectorXd t = theta;
        t[k] = s;
        return image(t, nullptr);
      };
      const double x = theta[k];
      jac.col(k) = (at(x - 2 * step) - 8.0 * at(x - step) + 8.0 * at(x + step) - at(x + 2 * step)) /
                   (12.0 * step);
    }
    // Flows that act trivially leave only difference noise; exact zeros let
    // the solver see the rank deficiency.
    const double peak = jac.colwise().norm().maxCoeff();
    for (int k = 0; k < 4; ++k) {
      if (jac.col(k).norm() <= 1e-9 * peak) jac.col(k).setZero();
    }
    return 0;
  }

  G1Element v;
  Eigen::Vector4d w;
};

}  // namespace

OrbitSearchResult orbit_equivalent_g1(const G1Element& v, const G1Element& w, int trials,
                                      std::uint64_t seed, bool allow_discrete) {
  const Eigen::Vector4d wv = unit(w);
  const Eigen::Vector4d vv = unit(v);
  const G1Element vn{{vv[0], vv[1], vv[2], vv[3]}};
  const double v_norm = Eigen::Vector4d(v.a[0], v.a[1], v.a[2], v.a[3]).norm();
  const double w_norm = Eigen::Vector4d(w.a[0], w.a[1], w.a[2], w.a[3]).norm();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> start(-2.0, 2.0);

  OrbitSearchResult best;
  best.residual = (OrbitFunctor(vn, wv).image(Eigen::VectorXd::Zero(4), &best.scale) - wv).norm();
  best.scale *= w_norm / v_norm;
  const int options = allow_discrete ? 4 : 1;
  for (int option = 0; option < options; ++option) {
    const G1Element base = apply_discrete(option, vn);
    OrbitFunctor functor(base, wv);
    for (int trial = 0; trial < std::max(1, trials); ++trial) {
      Eigen::VectorXd theta = Eigen::VectorXd::Zero(4);
      if (trial > 0) {
        for (int k = 0; k < 4; ++k) theta[k] = start(rng);
      }
      Eigen::LevenbergMarquardt<OrbitFunctor> lm(functor);
      lm.parameters.xtol = 1e-15;
      lm.parameters.ftol = 1e-15;
      lm.parameters.gtol = 0;
      lm.parameters.maxfev = 400;
      // Unit scaling: a flat direction must not inflate the trust region.
      lm.useExternalScaling = true;
      lm.diag = Eigen::VectorXd::Ones(4);
      lm.minimize(theta);
      // Residuals reached only as a parameter runs off to infinity are
      // orbit-closure points, not witnesses.
      if (!(theta.cwiseAbs().maxCoeff() <= kMaxFlowParameter)) continue;
      double lambda = 0;
      const double res = (functor.image(theta, &lambda) - wv).norm();
      if (std::isfinite(res) && res < best.residual) {
        best.residual = res;
        best.flows = {theta[0], theta[1], theta[2], theta[3]};
        best.discrete = option;
        // Witness in the caller's units: scale * Ad(flows)(S v) = w.
        best.scale = lambda * w_norm / v_norm;
      }
      if (best.residual < 1e-8 && lambda != 0) {
        best.equivalent = true;
        return best;
      }
    }
  }
  best.equivalent = best.residual < 1e-8;
  return best;
}

OrbitInvarianceReport orbit_invariance_audit(int trials, std::uint64_t seed, bool stratified) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> eps(-1.0, 1.0);
  std::uniform_int_distribution<int> flow(0, 3);
  std::uniform_int_distribution<int> length(1, 6);
  std::bernoulli_distribution coin(0.5);

  auto nonzero = [&]() {
    double x;
    do {
      x = coef(rng);
    } while (std::abs(x) < 0.05);
    return x;
  };

  OrbitInvarianceReport rep;
  for (int trial = 0; trial < trials; ++trial) {
    const int stratum = stratified ? trial % 4 : 0;
    G1Element v;
    switch (stratum) {
      case 0: v = {{nonzero(), nonzero(), nonzero(), nonzero()}}; break;
      case 1: v = {{0, nonzero(), nonzero(), coin(rng) ? nonzero() : 0.0}}; break;
      case 2: v = {{0, 0, coin(rng) ? nonzero() : 0.0, nonzero()}}; break;
      default: v = {{0, 0, nonzero(), 0}}; break;
    }
    G1Element moved = v;
    const int n = length(rng);
    for (int k = 0; k < n; ++k) {
      const auto f = static_cast<G1Flow>(flow(rng));
      moved = adjoint_g1(f, eps(rng), moved);
    }
    const double lambda = nonzero();
    G1Element scaled = v;
    for (double& x : scaled.a) x *= lambda;

    const CanonicalClass c = normalize_g1(v);
    ++rep.trials;
    ++rep.trials_by_stratum[stratum];
    if (!same_class(c, normalize_g1(moved), 1e-9)) {
      ++rep.violations;
      ++rep.violations_by_stratum[stratum];
    }
    if (!same_class(c, normalize_g1(representative_g1(c)), 1e-12)) ++rep.idempotence_failures;
    if (!same_class(c, normalize_g1(scaled), 1e-12)) ++rep.span_failures;
  }
  return rep;
}

}  // namespace symflow
