#pragma once

#include <cstdint>
#include <vector>

#include "symflow/model.hpp"
#include "symflow/types.hpp"

namespace symflow {

/// Order of the two legs of the L-shaped integration path for g.
enum class PathOrder { UThenH, HThenU };

struct PairFromFOptions {
  double quadrature_tol = 1e-10;
  /// Max |single_f_residual| accepted over the compatibility grid.
  double compatibility_tol = 1e-7;
  int compatibility_grid = 10;
  PathOrder path = PathOrder::UThenH;
};

/// g at (u, h) by integrating
///   g_u = u f_u - h f_h,   g_h = u f_h - G(1+H/h) f_u
/// from (u0, h0), where g = g0, along an L-shaped path.
double integrate_g(const FFunction& f, double u0, double h0, double g0,
                   const FluidParams& params, double u, double h,
                   PathOrder path = PathOrder::UThenH, double tol = 1e-10);

/// Builds the partner g of a compatible f. The returned pair evaluates g by
/// quadrature and its first partials from f in closed form.
/// Throws CompatibilityError when f fails the compatibility equation on
/// the box, PreconditionError when the base point lies outside the box.
HodographPair pair_from_f(const FFunction& f, double u0, double h0, double g0,
                          const FluidParams& params, const Box& box,
                          const PairFromFOptions& options = {});

struct NewtonOptions {
  int max_iterations = 50;
  int max_halvings = 20;
  double singular_det = 1e-12;
};

/// Solves f(u,h) = t, g(u,h) = x by damped Newton iteration from the guess.
/// Stops when |f - t| + |g - x| < tol, then takes one polishing step.
State invert_point(const HodographPair& pair, double t, double x, State guess,
                   double tol = 1e-12, const NewtonOptions& options = {});

/// Field built by pointwise hodograph inversion over a (t, x) grid.
struct InvertedField {
  SolutionField field;
  int nt = 0;
  int nx = 0;
  std::vector<char> converged;   // row-major, nt rows of nx
  std::vector<State> nodes;      // valid where converged
  double converged_fraction() const;
};

struct FieldFromPairOptions {
  double tol = 1e-12;
  NewtonOptions newton{};
  /// First seed; defaults to the centre of the pair's box.
  std::optional<State> initial_guess;
};

/// Sweeps a grid row by row, seeding each Newton solve from the nearest
/// converged neighbour. The returned field re-solves at every query, seeded
/// bilinearly from the surrounding converged nodes.
/// Throws ConstructionError when no node converges.
InvertedField field_from_pair(const HodographPair& pair, const Rect& grid, int nt, int nx,
                              const FieldFromPairOptions& options = {});

/// Derivatives of a field by fourth-order central differences.
FieldJet fd_jet(const SolutionField& field, double t, double x);

struct VerifyOptions {
  int samples = 100;
  std::uint64_t seed = 0;
  /// Use the field's closed-form derivatives when it has them.
  bool use_analytic = true;
  /// Fraction of each side kept clear of the domain edge.
  double margin_fraction = 0.02;
};

struct ResidualReport {
  double max_r1 = 0;
  double max_r2 = 0;
  double worst_t = 0;
  double worst_x = 0;
  int evaluated = 0;
  int failed = 0;
  double max_abs() const { return max_r1 > max_r2 ? max_r1 : max_r2; }
};

/// Max MSWE residual of a field at seeded interior sample points.
ResidualReport verify_field(const SolutionField& field, const FluidParams& params,
                            const VerifyOptions& options = {});

/// Max linearized residual of a pair over seeded points of its box. With
/// fd_partials the pair's own partials are replaced by finite differences of
/// its values.
double max_linearized_residual(const HodographPair& pair, const FluidParams& params,
                               int samples = 100, std::uint64_t seed = 0,
                               bool fd_partials = false);

}  // namespace symflow
