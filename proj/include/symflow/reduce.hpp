#pragma once

#include <string>
#include <vector>

#include "symflow/errors.hpp"
#include "symflow/types.hpp"

namespace symflow {

/// State of a reduced ODE system: similarity variable and the reduced unknowns.
struct ReducedState {
  double p = 0;
  double u = 0;
  double h = 1;
};

struct ReducedRates {
  double du = 0;
  double dh = 0;
};

/// Discriminant (u - p)^2 - G (h + H) of the case-(i) system; it vanishes at
/// sonic points where the system cannot be solved for the derivatives.
double sonic_discriminant(const FluidParams& params, const ReducedState& s);

/// Right-hand side of the reduction by <D + a G>:
///   a + (u - p) u' + G(1 + H/h) h' = 0,   (u - p) h' + h u' = 0,
/// solved by Cramer's rule: u' = -a (u - p)/Delta, h' = a h/Delta.
/// Throws SonicPointError when |Delta| < 1e-10 and DomainError for h <= 0.
ReducedRates reduced_rhs_case_i(double a, const FluidParams& params, const ReducedState& s);

/// Residuals of the two case-(i) reduced equations for candidate derivatives.
std::pair<double, double> case_i_residual(double a, const FluidParams& params,
                                          const ReducedState& s, double du, double dh);

struct IntegrationOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double h_floor = 1e-8;
  double initial_step = 1e-3;
  double min_step = 1e-14;
  int max_steps = 100000;
};

class Trajectory {
 public:
  enum class Status { Complete, SonicApproach, HeightFloor, StepUnderflow };

  Trajectory(double a, FluidParams params, IntegrationOptions options,
             std::vector<ReducedState> nodes, Status status);

  /// State at p by one Dormand-Prince step from the nearest node.
  /// Throws DomainError outside p_range().
  ReducedState eval(double p) const;
  /// State and reduced derivatives at p.
  std::pair<ReducedState, ReducedRates> eval_with_rates(double p) const;
  Interval p_range() const;

  double a() const { return a_; }
  const FluidParams& params() const { return params_; }
  const std::vector<ReducedState>& nodes() const { return nodes_; }
  Status status() const { return status_; }
  std::string status_name() const;

 private:
  double a_;
  FluidParams params_;
  IntegrationOptions options_;
  std::vector<ReducedState> nodes_;  // sorted by increasing p
  Status status_;
};

/// Raised when the step size underflows; carries what was integrated so far.
class PartialResultError : public Error {
 public:
  PartialResultError(const std::string& what, Trajectory partial)
      : Error(what), partial(std::move(partial)) {}
  Trajectory partial;
};

/// Adaptive Dormand-Prince integration of the case-(i) system from p0 to
/// p_end (either direction). Steps that would cross the sonic line are
/// rejected; the run halts with a partial trajectory when the discriminant
/// gets within 1e-10 of zero, when step control stalls within 1e-3 G(h + H)
/// of the sonic line, or when h drops below the floor.
/// Throws SonicPointError when the initial state is sonic.
Trajectory integrate_case_i(double a, const FluidParams& params, double p0,
                            const State& state0, double p_end,
                            const IntegrationOptions& options = {});

/// p = x/t - a ln t + a.
double case_i_variable(double a, double t, double x);

struct LiftedField {
  SolutionField field;
  /// Set when the requested domain was shrunk to keep p inside the trajectory.
  bool clipped = false;
};

/// u = u~(p) + a ln t, h = h~(p). The x-range is clipped so that p stays in
/// the trajectory's range for every t of the domain.
/// Throws DomainError for t <= 0 or an empty clipped domain.
LiftedField lift_case_i(const Trajectory& traj, const Rect& domain);

enum class LogSign { AsStated, Corrected };

/// Reduction by <a1 D + a2 G + a3 dx + a4 dt>, a1 != 0, with T = a1 t + a4:
///   p = (a1^2 x + a1 a3 - a2 a4)/(a1^2 T) - (a2/a1^2) ln T,
///   u = u~(a1 p + a2/a1) -+ (a2/a1) ln T,   h = h~(a1 p + a2/a1),
/// with u~, h~ from a case-(i) trajectory for a = a2/a1. AsStated uses the
/// minus sign of the log term; Corrected uses plus.
/// Throws DomainError when T <= 0 on the domain, PreconditionError for
/// a1 = 0 or a trajectory computed for a different a.
LiftedField lift_general_ia(double a1, double a2, double a3, double a4, const Trajectory& traj,
                            LogSign sign, const Rect& domain);

/// Case (ii): u = u~(p) + x/t, h = h~(p), p = t; reduced residuals
///   u~' + u~/p,  h~' + h~/p.
std::pair<double, double> case_ii_residual(const ReducedState& s, double du, double dh);
/// Field of the case-(ii) ansatz with u~ = c1/p, h~ = c2/p.
SolutionField case_ii_field(double c1, double c2, const Rect& domain);

/// Case (iii) with p = f x - g t:
///   -g u' + f u u' + f G(1 + H/h) h',   -g h' + f u h' + f h u',
/// with f, g evaluated at (u~, h~).
std::pair<double, double> case_iii_residual(const HodographPair& pair, const ReducedState& s,
                                            double du, double dh, const FluidParams& params);

}  // namespace symflow
