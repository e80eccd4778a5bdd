#include "symflow/fvsolver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

#include "symflow/errors.hpp"

namespace symflow {

namespace {

struct Flux {
  double u = 0;
  double h = 0;
};

Flux physical_flux(double u, double h, const FluidParams& params) {
  return {0.5 * u * u + params.gravity * (h + params.H * std::log(h)), u * h};
}

double wave_speed(double u, double h, const FluidParams& params) {
  return std::abs(u) + std::sqrt(params.gravity * (h + params.H));
}

}  // namespace

GridState make_grid(const SolutionField& init, double t0, const Interval& x, int nx) {
  if (nx < 4) throw PreconditionError("make_grid: need at least 4 cells");
  if (!(x.hi > x.lo)) throw PreconditionError("make_grid: empty interval");
  GridState gs;
  gs.nx = nx;
  gs.x0 = x.lo;
  gs.dx = x.width() / nx;
  gs.time = t0;
  gs.u.resize(nx);
  gs.h.resize(nx);
  for (int i = 0; i < nx; ++i) {
    const State s = init(t0, gs.center(i));
    if (!(s.h > 0)) throw DomainError("make_grid: initial height is not positive");
    gs.u[i] = s.u;
    gs.h[i] = s.h;
  }
  return gs;
}

double stable_dt(const GridState& gs, const FluidParams& params, double cfl) {
  double smax = 0;
  for (int i = 0; i < gs.nx; ++i) smax = std::max(smax, wave_speed(gs.u[i], gs.h[i], params));
  return cfl * gs.dx / smax;
}

GridState step(const GridState& gs, const FluidParams& params, double cfl,
               const Boundary& boundary, double max_dt) {
  if (!(cfl > 0 && cfl <= 0.9)) throw PreconditionError("step: cfl must lie in (0, 0.9]");
  if (gs.nx < 4 || static_cast<int>(gs.u.size()) != gs.nx ||
      static_cast<int>(gs.h.size()) != gs.nx) {
    throw PreconditionError("step: malformed grid");
  }
  params.validate();
  const int n = gs.nx;
  // Extended arrays with one ghost cell per side.
  std::vector<double> u(n + 2), h(n + 2);
  std::copy(gs.u.begin(), gs.u.end(), u.begin() + 1);
  std::copy(gs.h.begin(), gs.h.end(), h.begin() + 1);
  switch (boundary.kind) {
    case BoundaryKind::Periodic:
      u[0] = gs.u[n - 1], h[0] = gs.h[n - 1];
      u[n + 1] = gs.u[0], h[n + 1] = gs.h[0];
      break;
    case BoundaryKind::Dirichlet: {
      if (!boundary.reference) throw PreconditionError("step: Dirichlet boundary without a field");
      const State l = (*boundary.reference)(gs.time, gs.x0 - 0.5 * gs.dx);
      const State r = (*boundary.reference)(gs.time, gs.x0 + (n + 0.5) * gs.dx);
      u[0] = l.u, h[0] = l.h;
      u[n + 1] = r.u, h[n + 1] = r.h;
      break;
    }
    case BoundaryKind::Extrapolate:
      u[0] = gs.u[0], h[0] = gs.h[0];
      u[n + 1] = gs.u[n - 1], h[n + 1] = gs.h[n - 1];
      break;
  }
  for (int i = 0; i < n + 2; ++i) {
    if (!(h[i] > 0)) throw PositivityError("step: non-positive height", i - 1);
  }

  double smax = 0;
  for (int i = 0; i < n + 2; ++i) smax = std::max(smax, wave_speed(u[i], h[i], params));
  const double dt = std::min(cfl * gs.dx / smax, max_dt);
  if (!(dt > 0)) throw PreconditionError("step: non-positive time step");

  // Interface i + 1/2 between extended cells i and i + 1.
  std::vector<Flux> flux(n + 1);
  for (int i = 0; i <= n; ++i) {
    const Flux fl = physical_flux(u[i], h[i], params);
    const Flux fr = physical_flux(u[i + 1], h[i + 1], params);
    const double s = std::max(wave_speed(u[i], h[i], params), wave_speed(u[i + 1], h[i + 1], params));
    flux[i] = {0.5 * (fl.u + fr.u) - 0.5 * s * (u[i + 1] - u[i]),
               0.5 * (fl.h + fr.h) - 0.5 * s * (h[i + 1] - h[i])};
  }

  GridState out = gs;
  out.time = gs.time + dt;
  const double r = dt / gs.dx;
  for (int i = 0; i < n; ++i) {
    out.u[i] = gs.u[i] - r * (flux[i + 1].u - flux[i].u);
    out.h[i] = gs.h[i] - r * (flux[i + 1].h - flux[i].h);
    if (!(out.h[i] > 0)) throw PositivityError("step: non-positive height", i);
  }
  return out;
}

GridState simulate(const SolutionField& init, const FluidParams& params, double t0, double t1,
                   const Interval& x, int nx, double cfl, const Boundary& boundary) {
  if (!(t1 > t0)) throw PreconditionError("simulate: requires t0 < t1");
  GridState gs = make_grid(init, t0, x, nx);
  while (gs.time < t1) {
    const double remaining = t1 - gs.time;
    gs = step(gs, params, cfl, boundary, remaining);
    if (t1 - gs.time <= 1e-14 * std::max(1.0, std::abs(t1))) gs.time = t1;
  }
  return gs;
}

L1Error l1_error(const GridState& gs, const SolutionField& exact) {
  L1Error e;
  for (int i = 0; i < gs.nx; ++i) {
    const State s = exact(gs.time, gs.center(i));
    e.u += std::abs(gs.u[i] - s.u) * gs.dx;
    e.h += std::abs(gs.h[i] - s.h) * gs.dx;
  }
  return e;
}

double total_mass(const GridState& gs) {
  double m = 0;
  for (double v : gs.h) m += v * gs.dx;
  return m;
}

ConvergenceResult convergence_order(const SolutionField& exact, const FluidParams& params,
                                    const Rect& window, const std::vector<int>& resolutions,
                                    double cfl) {
  if (resolutions.size() < 3) {
    throw PreconditionError("convergence_order: need at least three resolutions");
  }
  const double ratio = double(resolutions[1]) / resolutions[0];
  for (std::size_t i = 1; i < resolutions.size(); ++i) {
    const double r = double(resolutions[i]) / resolutions[i - 1];
    if (!(ratio > 1) || std::abs(r - ratio) > 1e-12 * ratio) {
      throw PreconditionError("convergence_order: resolutions must refine geometrically");
    }
  }
  ConvergenceResult out;
  out.resolutions = resolutions;
  std::vector<double> lx, lu, lh;
  for (int nx : resolutions) {
    const GridState gs = simulate(exact, params, window.t.lo, window.t.hi, window.x, nx, cfl,
                                  Boundary::dirichlet(exact));
    const L1Error e = l1_error(gs, exact);
    out.errors.push_back(e);
    lx.push_back(std::log(gs.dx));
    lu.push_back(std::log(e.u));
    lh.push_back(std::log(e.h));
  }
  double worst = 0;
  for (const L1Error& e : out.errors) worst = std::max({worst, e.u, e.h});
  if (worst < 1e-12) {
    out.degenerate = true;
    out.notice = "errors at round-off level; no order fitted";
    return out;
  }
  auto slope = [&](const std::vector<double>& ly) {
    const double n = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i], sy += ly[i], sxx += lx[i] * lx[i], sxy += lx[i] * ly[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  for (const L1Error& e : out.errors) {
    if (!(e.u > 0) || !(e.h > 0)) {
      out.degenerate = true;
      out.notice = "an error vanished exactly; no order fitted";
      return out;
    }
  }
  out.order_u = slope(lu);
  out.order_h = slope(lh);
  return out;
}

void write_csv(const GridState& gs, std::ostream& out) {
  out << "x,u,h\n" << std::setprecision(17);
  for (int i = 0; i < gs.nx; ++i) out << gs.center(i) << ',' << gs.u[i] << ',' << gs.h[i] << '\n';
}

}  // namespace symflow
