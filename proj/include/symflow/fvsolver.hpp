#pragma once

#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "symflow/types.hpp"

namespace symflow {

/// Cell values of (u, h) on a uniform grid over [x0, x0 + nx dx].
struct GridState {
  int nx = 0;
  double x0 = 0;
  double dx = 0;
  double time = 0;
  std::vector<double> u;
  std::vector<double> h;

  double center(int i) const { return x0 + (i + 0.5) * dx; }
  Interval extent() const { return {x0, x0 + nx * dx}; }
};

enum class BoundaryKind { Extrapolate, Periodic, Dirichlet };

/// Ghost-cell rule. Dirichlet takes ghost values from a reference field at
/// the ghost centres and the current time.
struct Boundary {
  BoundaryKind kind = BoundaryKind::Extrapolate;
  std::optional<SolutionField> reference;

  static Boundary extrapolate() { return {}; }
  static Boundary periodic() { return {BoundaryKind::Periodic, std::nullopt}; }
  static Boundary dirichlet(SolutionField field) {
    return {BoundaryKind::Dirichlet, std::move(field)};
  }
};

/// Samples a field at the cell centres of [x.lo, x.hi] at time t0.
/// Throws PreconditionError for nx < 4 or an empty interval and
/// DomainError when the sampled h is not positive.
GridState make_grid(const SolutionField& init, double t0, const Interval& x, int nx);

/// Largest stable step cfl dx / max(|u| + sqrt(G (h + H))).
double stable_dt(const GridState& gs, const FluidParams& params, double cfl);

/// One forward-Euler Rusanov step of
///   u_t + (u^2/2 + G (h + H ln h))_x = 0,   h_t + (u h)_x = 0,
/// the divergence form of the system for smooth h > 0. The step is the stable
/// step, capped at max_dt.
/// Throws PreconditionError unless 0 < cfl <= 0.9 and PositivityError when a
/// cell height becomes non-positive.
GridState step(const GridState& gs, const FluidParams& params, double cfl,
               const Boundary& boundary = {},
               double max_dt = std::numeric_limits<double>::infinity());

/// Steps from t0 to t1; the last step lands exactly on t1.
GridState simulate(const SolutionField& init, const FluidParams& params, double t0, double t1,
                   const Interval& x, int nx, double cfl, const Boundary& boundary = {});

struct L1Error {
  double u = 0;
  double h = 0;
};

/// Sum over cells of |numerical - exact| dx at the cell centres.
L1Error l1_error(const GridState& gs, const SolutionField& exact);

/// Sum of h dx.
double total_mass(const GridState& gs);

struct ConvergenceResult {
  std::vector<int> resolutions;
  std::vector<L1Error> errors;
  double order_u = 0;
  double order_h = 0;
  /// Set when errors are at round-off level and no slope can be fitted.
  bool degenerate = false;
  std::string notice;
};

/// Runs simulate at each resolution with Dirichlet data from the exact
/// field and fits the slope of log(L1 error) against log(dx).
/// Throws PreconditionError for fewer than three resolutions or a
/// non-geometric sequence.
ConvergenceResult convergence_order(const SolutionField& exact, const FluidParams& params,
                                    const Rect& window, const std::vector<int>& resolutions,
                                    double cfl = 0.45);

/// Writes x,u,h rows with a header.
void write_csv(const GridState& gs, std::ostream& out);

}  // namespace symflow
