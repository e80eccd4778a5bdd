#include "symflow/hodograph.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "symflow/errors.hpp"
#include "symflow/finite_diff.hpp"

namespace symflow {

namespace {

double gk_integrate(const std::function<double(double)>& fn, double a, double b, double tol) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(fn, a, b, 15, tol);
}

// g_u and g_h implied by the linearized system.
double g_u_of(const FDerivatives& d, double u, double h) { return u * d.f_u - h * d.f_h; }
double g_h_of(const FDerivatives& d, double u, double h, const FluidParams& params) {
  return u * d.f_h - params.pressure_factor(h) * d.f_u;
}

std::optional<double> mismatch(const HodographPair& pair, State s, double t, double x,
                               PairValue& out) {
  if (!(s.h > 0) || !std::isfinite(s.u)) return std::nullopt;
  try {
    out = pair(s.u, s.h);
  } catch (const DomainError&) {
    return std::nullopt;
  } catch (const EvaluationError&) {
    return std::nullopt;
  }
  return std::abs(out.f - t) + std::abs(out.g - x);
}

}  // namespace

double integrate_g(const FFunction& f, double u0, double h0, double g0,
                   const FluidParams& params, double u, double h, PathOrder path, double tol) {
  if (!(h0 > 0) || !(h > 0)) {
    throw DomainError("integration path for g leaves the region h > 0");
  }
  auto along_u = [&](double h_fixed) {
    return [&f, h_fixed](double s) { return g_u_of(f(s, h_fixed), s, h_fixed); };
  };
  auto along_h = [&](double u_fixed) {
    return [&f, &params, u_fixed](double s) { return g_h_of(f(u_fixed, s), u_fixed, s, params); };
  };
  if (path == PathOrder::UThenH) {
    return g0 + gk_integrate(along_u(h0), u0, u, tol) + gk_integrate(along_h(u), h0, h, tol);
  }
  return g0 + gk_integrate(along_h(u0), h0, h, tol) + gk_integrate(along_u(h), u0, u, tol);
}

HodographPair pair_from_f(const FFunction& f, double u0, double h0, double g0,
                          const FluidParams& params, const Box& box,
                          const PairFromFOptions& options) {
  params.validate();
  if (!box.contains(u0, h0)) {
    throw PreconditionError("pair_from_f: base point outside the box");
  }
  if (!(box.h.lo > 0)) throw DomainError("pair_from_f: box must lie in h > 0");

  const int n = std::max(2, options.compatibility_grid);
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double u = box.u.lo + box.u.width() * i / (n - 1);
      const double h = box.h.lo + box.h.width() * j / (n - 1);
      worst = std::max(worst, std::abs(single_f_residual(f(u, h), u, h, params)));
    }
  }
  if (!(worst <= options.compatibility_tol)) {
    throw CompatibilityError("pair_from_f: f violates the compatibility equation", worst);
  }

  auto eval = [f, u0, h0, g0, params, options](double u, double h) {
    const FDerivatives d = f(u, h);
    PairValue v;
    v.f = d.f;
    v.f_u = d.f_u;
    v.f_h = d.f_h;
    v.g = integrate_g(f, u0, h0, g0, params, u, h, options.path, options.quadrature_tol);
    v.g_u = g_u_of(d, u, h);
    v.g_h = g_h_of(d, u, h, params);
    return v;
  };
  return HodographPair("from_f", eval, box, true,
                       {{"u0", u0}, {"h0", h0}, {"g0", g0}, {"H", params.H},
                        {"gravity", params.gravity}});
}

State invert_point(const HodographPair& pair, double t, double x, State guess, double tol,
                   const NewtonOptions& options) {
  if (!(guess.h > 0)) throw PreconditionError("invert_point: guess must have h > 0");
  State s = guess;
  PairValue pv;
  auto norm = mismatch(pair, s, t, x, pv);
  if (!norm) throw DivergenceError("invert_point: guess is not evaluable", s.u, s.h);

  bool polishing = false;
  for (int it = 0; it < options.max_iterations; ++it) {
    if (*norm < tol) polishing = true;
    const double det = pv.f_u * pv.g_h - pv.f_h * pv.g_u;
    if (!(std::abs(det) >= options.singular_det)) {
      if (polishing) return s;
      throw DegenerateMapError("invert_point: singular Jacobian of (f, g)");
    }
    const double F1 = pv.f - t, F2 = pv.g - x;
    const double du = -(pv.g_h * F1 - pv.f_h * F2) / det;
    const double dh = -(-pv.g_u * F1 + pv.f_u * F2) / det;

    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k <= options.max_halvings; ++k, lambda *= 0.5) {
      const State cand{s.u + lambda * du, s.h + lambda * dh};
      PairValue cand_value;
      const auto cand_norm = mismatch(pair, cand, t, x, cand_value);
      if (cand_norm && (*cand_norm < *norm || (polishing && *cand_norm <= *norm))) {
        s = cand;
        pv = cand_value;
        norm = cand_norm;
        accepted = true;
        break;
      }
      if (polishing) break;
    }
    if (polishing) return s;
    if (!accepted) {
      throw DivergenceError("invert_point: damped Newton step failed to reduce the mismatch",
                            s.u, s.h);
    }
  }
  if (*norm < tol) return s;
  throw DivergenceError("invert_point: no convergence within the iteration limit", s.u, s.h);
}

double InvertedField::converged_fraction() const {
  if (converged.empty()) return 0.0;
  return static_cast<double>(std::count(converged.begin(), converged.end(), 1)) /
         static_cast<double>(converged.size());
}

namespace {

struct GridData {
  Rect grid;
  int nt, nx;
  std::vector<char> converged;
  std::vector<State> nodes;

  double t_at(int i) const { return nt > 1 ? grid.t.lo + grid.t.width() * i / (nt - 1) : grid.t.lo; }
  double x_at(int j) const { return nx > 1 ? grid.x.lo + grid.x.width() * j / (nx - 1) : grid.x.lo; }
  bool ok(int i, int j) const {
    return i >= 0 && j >= 0 && i < nt && j < nx && converged[i * nx + j];
  }
  const State& at(int i, int j) const { return nodes[i * nx + j]; }

  std::optional<State> nearest(double fi, double fj) const {
    double best = 1e300;
    std::optional<State> out;
    for (int i = 0; i < nt; ++i) {
      for (int j = 0; j < nx; ++j) {
        if (!converged[i * nx + j]) continue;
        const double d = (i - fi) * (i - fi) + (j - fj) * (j - fj);
        if (d < best) {
          best = d;
          out = nodes[i * nx + j];
        }
      }
    }
    return out;
  }
};

}  // namespace

InvertedField field_from_pair(const HodographPair& pair, const Rect& grid, int nt, int nx,
                              const FieldFromPairOptions& options) {
  if (nt < 1 || nx < 1 || grid.empty()) {
    throw ConstructionError("field_from_pair: empty grid");
  }
  auto data = std::make_shared<GridData>();
  data->grid = grid;
  data->nt = nt;
  data->nx = nx;
  data->converged.assign(static_cast<std::size_t>(nt) * nx, 0);
  data->nodes.assign(static_cast<std::size_t>(nt) * nx, State{});

  const State fallback = options.initial_guess.value_or(
      State{pair.box().u.mid(), pair.box().h.mid()});

  auto attempt = [&](double t, double x, State seed) -> std::optional<State> {
    try {
      return invert_point(pair, t, x, seed, options.tol, options.newton);
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nx; ++j) {
      std::optional<State> seed;
      if (data->ok(i, j - 1)) {
        seed = data->at(i, j - 1);
      } else if (data->ok(i - 1, j)) {
        seed = data->at(i - 1, j);
      } else {
        seed = data->nearest(i, j);
      }
      std::optional<State> sol = attempt(data->t_at(i), data->x_at(j), seed.value_or(fallback));
      if (!sol && seed) sol = attempt(data->t_at(i), data->x_at(j), fallback);
      if (sol) {
        data->converged[i * nx + j] = 1;
        data->nodes[i * nx + j] = *sol;
      }
    }
  }
  if (std::find(data->converged.begin(), data->converged.end(), 1) == data->converged.end()) {
    throw ConstructionError("field_from_pair: no grid point could be inverted");
  }

  const double tol = options.tol;
  const NewtonOptions newton = options.newton;
  auto eval = [pair, data, tol, newton](double t, double x) {
    const double fi = data->nt > 1 ? (t - data->grid.t.lo) / data->grid.t.width() * (data->nt - 1) : 0.0;
    const double fj = data->nx > 1 ? (x - data->grid.x.lo) / data->grid.x.width() * (data->nx - 1) : 0.0;
    const int i0 = std::clamp(static_cast<int>(std::floor(fi)), 0, std::max(0, data->nt - 2));
    const int j0 = std::clamp(static_cast<int>(std::floor(fj)), 0, std::max(0, data->nx - 2));
    std::optional<State> seed;
    if (data->nt > 1 && data->nx > 1 && data->ok(i0, j0) && data->ok(i0 + 1, j0) &&
        data->ok(i0, j0 + 1) && data->ok(i0 + 1, j0 + 1)) {
      const double a = std::clamp(fi - i0, 0.0, 1.0), b = std::clamp(fj - j0, 0.0, 1.0);
      auto mix = [&](auto member) {
        return (1 - a) * (1 - b) * (data->at(i0, j0).*member) +
               a * (1 - b) * (data->at(i0 + 1, j0).*member) +
               (1 - a) * b * (data->at(i0, j0 + 1).*member) +
               a * b * (data->at(i0 + 1, j0 + 1).*member);
      };
      seed = State{mix(&State::u), mix(&State::h)};
    }
    const std::optional<State> near = data->nearest(fi, fj);
    if (seed) {
      try {
        return invert_point(pair, t, x, *seed, tol, newton);
      } catch (const Error&) {
      }
    }
    if (!near) throw EvaluationError("inverted field has no converged node");
    return invert_point(pair, t, x, *near, tol, newton);
  };

  InvertedField out{SolutionField("hodograph:" + pair.name(), grid, eval), nt, nx,
                    data->converged, data->nodes};
  return out;
}

FieldJet fd_jet(const SolutionField& field, double t, double x) {
  const State c = field(t, x);
  const double st = fd::step_for(t), sx = fd::step_for(x);
  auto ut = fd::derivative([&](double s) { return field(s, x).u; }, t, st);
  auto ht = fd::derivative([&](double s) { return field(s, x).h; }, t, st);
  auto ux = fd::derivative([&](double s) { return field(t, s).u; }, x, sx);
  auto hx = fd::derivative([&](double s) { return field(t, s).h; }, x, sx);
  return FieldJet{c.u, c.h, ut, ux, ht, hx};
}

ResidualReport verify_field(const SolutionField& field, const FluidParams& params,
                            const VerifyOptions& options) {
  const Rect& d = field.domain();
  if (d.empty()) throw PreconditionError("verify_field: empty validity domain");
  std::mt19937_64 rng(options.seed);
  auto inset = [&](const Interval& i) {
    const double m = std::max(options.margin_fraction * i.width(),
                              3.0 * fd::step_for(std::max(std::abs(i.lo), std::abs(i.hi))));
    return Interval{i.lo + m, i.hi - m};
  };
  const Interval ti = inset(d.t), xi = inset(d.x);
  if (!(ti.hi > ti.lo) || !(xi.hi > xi.lo)) {
    throw PreconditionError("verify_field: domain too small for the difference stencil");
  }
  std::uniform_real_distribution<double> dt(ti.lo, ti.hi), dx(xi.lo, xi.hi);
  ResidualReport rep;
  for (int k = 0; k < options.samples; ++k) {
    const double t = dt(rng), x = dx(rng);
    try {
      FieldJet j;
      if (options.use_analytic && field.has_analytic_jet()) {
        j = *field.analytic_jet(t, x);
      } else {
        j = fd_jet(field, t, x);
      }
      const Residual2 r = mswe_residual(JetPoint{t, x, j.u, j.h, j.u_t, j.u_x, j.h_t, j.h_x}, params);
      ++rep.evaluated;
      if (std::abs(r.r1) > rep.max_r1 || std::abs(r.r2) > rep.max_r2) {
        if (std::max(std::abs(r.r1), std::abs(r.r2)) >= rep.max_abs()) {
          rep.worst_t = t;
          rep.worst_x = x;
        }
        rep.max_r1 = std::max(rep.max_r1, std::abs(r.r1));
        rep.max_r2 = std::max(rep.max_r2, std::abs(r.r2));
      }
    } catch (const Error&) {
      ++rep.failed;
    }
  }
  return rep;
}

double max_linearized_residual(const HodographPair& pair, const FluidParams& params,
                               int samples, std::uint64_t seed, bool fd_partials) {
  std::mt19937_64 rng(seed);
  const Box& b = pair.box();
  std::uniform_real_distribution<double> du(b.u.lo, b.u.hi), dh(b.h.lo, b.h.hi);
  double worst = 0;
  for (int k = 0; k < samples; ++k) {
    const double u = du(rng), h = dh(rng);
    PairValue v = pair(u, h);
    if (fd_partials) {
      const double su = fd::step_for(u), sh = std::min(fd::step_for(h), 0.2 * h);
      v.f_u = fd::derivative([&](double s) { return pair(s, h).f; }, u, su);
      v.g_u = fd::derivative([&](double s) { return pair(s, h).g; }, u, su);
      v.f_h = fd::derivative([&](double s) { return pair(u, s).f; }, h, sh);
      v.g_h = fd::derivative([&](double s) { return pair(u, s).g; }, h, sh);
    }
    worst = std::max(worst, linearized_residual(v, u, h, params).max_abs());
  }
  return worst;
}

}  // namespace symflow
