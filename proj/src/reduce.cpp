#include "symflow/reduce.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "symflow/errors.hpp"
#include "symflow/model.hpp"

namespace symflow {

namespace odeint = boost::numeric::odeint;

namespace {

using Vec2 = std::array<double, 2>;

constexpr double kSonicTol = 1e-10;
constexpr double kSonicStallFraction = 1e-3;

struct CaseISystem {
  double a;
  FluidParams params;
  void operator()(const Vec2& y, Vec2& dy, double p) const {
    const ReducedRates r = reduced_rhs_case_i(a, params, {p, y[0], y[1]});
    dy = {r.du, r.dh};
  }
};

// x-interval that keeps p(t, x) inside [lo, hi] for every sampled t of the
// domain, for a variable of the form p = scale(t) x + offset(t), scale > 0.
template <class Scale, class Offset>
Interval admissible_x(const Rect& domain, double lo, double hi, Scale scale, Offset offset) {
  constexpr int kSamples = 400;
  Interval out{domain.x.lo, domain.x.hi};
  for (int i = 0; i <= kSamples; ++i) {
    const double t = domain.t.lo + domain.t.width() * i / kSamples;
    const double s = scale(t), o = offset(t);
    out.lo = std::max(out.lo, (lo - o) / s);
    out.hi = std::min(out.hi, (hi - o) / s);
  }
  // Keep clear of the sampled envelope between sample times.
  const double margin = 1e-6 * std::max(1.0, domain.x.width());
  if (out.lo > domain.x.lo) out.lo += margin;
  if (out.hi < domain.x.hi) out.hi -= margin;
  return out;
}

}  // namespace

double sonic_discriminant(const FluidParams& params, const ReducedState& s) {
  const double d = s.u - s.p;
  return d * d - params.gravity * (s.h + params.H);
}

ReducedRates reduced_rhs_case_i(double a, const FluidParams& params, const ReducedState& s) {
  if (!(s.h > 0)) throw DomainError("reduced_rhs_case_i: requires h > 0");
  if (!std::isfinite(s.p) || !std::isfinite(s.u) || !std::isfinite(a)) {
    throw DomainError("reduced_rhs_case_i: non-finite input");
  }
  const double delta = sonic_discriminant(params, s);
  if (std::abs(delta) < kSonicTol) {
    throw SonicPointError("reduced_rhs_case_i: sonic point", s.p);
  }
  return {-a * (s.u - s.p) / delta, a * s.h / delta};
}

std::pair<double, double> case_i_residual(double a, const FluidParams& params,
                                          const ReducedState& s, double du, double dh) {
  const double w = s.u - s.p;
  return {a + w * du + params.pressure_factor(s.h) * dh, w * dh + s.h * du};
}

Trajectory::Trajectory(double a, FluidParams params, IntegrationOptions options,
                       std::vector<ReducedState> nodes, Status status)
    : a_(a), params_(params), options_(options), nodes_(std::move(nodes)), status_(status) {
  if (nodes_.empty()) throw ConstructionError("trajectory needs at least one node");
  std::sort(nodes_.begin(), nodes_.end(),
            [](const ReducedState& x, const ReducedState& y) { return x.p < y.p; });
}

Interval Trajectory::p_range() const { return {nodes_.front().p, nodes_.back().p}; }

std::string Trajectory::status_name() const {
  switch (status_) {
    case Status::Complete: return "complete";
    case Status::SonicApproach: return "sonic_approach";
    case Status::HeightFloor: return "height_floor";
    case Status::StepUnderflow: return "step_underflow";
  }
  return "unknown";
}

ReducedState Trajectory::eval(double p) const {
  const Interval r = p_range();
  const double slack = 1e-6 * std::max(1.0, r.width());
  if (!(p >= r.lo - slack && p <= r.hi + slack)) {
    throw DomainError("trajectory: p outside the integrated range");
  }
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), p,
                             [](const ReducedState& s, double v) { return s.p < v; });
  if (it == nodes_.end()) {
    --it;
  } else if (it != nodes_.begin() && std::abs(std::prev(it)->p - p) < std::abs(it->p - p)) {
    --it;
  }
  if (it->p == p) return *it;
  Vec2 y{it->u, it->h};
  odeint::runge_kutta_dopri5<Vec2> stepper;
  stepper.do_step(CaseISystem{a_, params_}, y, it->p, p - it->p);
  return {p, y[0], y[1]};
}

std::pair<ReducedState, ReducedRates> Trajectory::eval_with_rates(double p) const {
  const ReducedState s = eval(p);
  return {s, reduced_rhs_case_i(a_, params_, s)};
}

Trajectory integrate_case_i(double a, const FluidParams& params, double p0,
                            const State& state0, double p_end,
                            const IntegrationOptions& options) {
  params.validate();
  if (!(state0.h > 0)) throw DomainError("integrate_case_i: initial height must be positive");
  ReducedState s0{p0, state0.u, state0.h};
  if (std::abs(sonic_discriminant(params, s0)) < kSonicTol) {
    throw SonicPointError("integrate_case_i: initial state is sonic", p0);
  }
  if (!(options.rtol > 0) || !(options.atol > 0) || !(options.initial_step > 0)) {
    throw PreconditionError("integrate_case_i: tolerances and initial step must be positive");
  }

  using Status = Trajectory::Status;
  std::vector<ReducedState> nodes{s0};
  if (p_end == p0) return Trajectory(a, params, options, nodes, Status::Complete);

  const double dir = p_end > p0 ? 1.0 : -1.0;
  const CaseISystem sys{a, params};
  auto stepper = odeint::make_controlled(options.atol, options.rtol,
                                         odeint::runge_kutta_dopri5<Vec2>());
  Vec2 y{state0.u, state0.h};
  double p = p0;
  double dt = dir * std::min(options.initial_step, std::abs(p_end - p0));
  const bool sonic_side = sonic_discriminant(params, s0) > 0;
  enum class Reject { None, Sonic, Floor } last = Reject::None;

  for (int step = 0; step < options.max_steps; ++step) {
    if (dir * (p_end - p) <= 0) return Trajectory(a, params, options, nodes, Status::Complete);
    if (dir * (p + dt - p_end) > 0) dt = p_end - p;
    if (std::abs(dt) < options.min_step * std::max(1.0, std::abs(p))) {
      // The reduced solution has a square-root branch at a sonic point, so
      // step control stalls while the discriminant is still well above
      // kSonicTol.
      const ReducedState here{p, y[0], y[1]};
      const double scale = params.gravity * (here.h + params.H);
      if (last == Reject::Sonic ||
          std::abs(sonic_discriminant(params, here)) < kSonicStallFraction * scale) {
        return Trajectory(a, params, options, nodes, Status::SonicApproach);
      }
      if (last == Reject::Floor) return Trajectory(a, params, options, nodes, Status::HeightFloor);
      throw PartialResultError("integrate_case_i: step size underflow",
                               Trajectory(a, params, options, nodes, Status::StepUnderflow));
    }
    Vec2 out{}, dy{}, dy_out{};
    double p_try = p;
    double dt_try = dt;
    odeint::controlled_step_result res;
    try {
      sys(y, dy, p);
      res = stepper.try_step(sys, y, dy, p_try, out, dy_out, dt_try);
    } catch (const SonicPointError&) {
      last = Reject::Sonic;
      dt *= 0.5;
      continue;
    } catch (const DomainError&) {
      last = Reject::Floor;
      dt *= 0.5;
      continue;
    }
    if (res == odeint::fail) {
      dt = dt_try;
      continue;
    }
    const ReducedState next{p_try, out[0], out[1]};
    if (!(next.h > options.h_floor)) {
      last = Reject::Floor;
      dt *= 0.5;
      continue;
    }
    const double delta = sonic_discriminant(params, next);
    if ((delta > 0) != sonic_side) {
      last = Reject::Sonic;
      dt *= 0.5;
      continue;
    }
    last = Reject::None;
    p = p_try;
    y = out;
    dt = dt_try;
    nodes.push_back(next);
    if (std::abs(delta) < kSonicTol * 10) {
      return Trajectory(a, params, options, nodes, Status::SonicApproach);
    }
  }
  throw PartialResultError("integrate_case_i: step budget exhausted",
                           Trajectory(a, params, options, nodes, Status::StepUnderflow));
}

double case_i_variable(double a, double t, double x) {
  if (!(t > 0)) throw DomainError("case_i_variable: requires t > 0");
  return x / t - a * std::log(t) + a;
}

LiftedField lift_case_i(const Trajectory& traj, const Rect& domain) {
  if (!(domain.t.lo > 0)) throw DomainError("lift_case_i: domain must lie in t > 0");
  const double a = traj.a();
  const Interval pr = traj.p_range();
  const Interval xs = admissible_x(
      domain, pr.lo, pr.hi, [](double t) { return 1.0 / t; },
      [a](double t) { return -a * std::log(t) + a; });
  Rect clipped{domain.t, xs};
  if (clipped.empty()) throw DomainError("lift_case_i: domain misses the trajectory's p-range");
  const bool was_clipped = xs.lo > domain.x.lo || xs.hi < domain.x.hi;

  auto eval = [traj, a](double t, double x) {
    const ReducedState s = traj.eval(case_i_variable(a, t, x));
    return State{s.u + a * std::log(t), s.h};
  };
  auto jet = [traj, a](double t, double x) {
    const auto [s, r] = traj.eval_with_rates(case_i_variable(a, t, x));
    const double p_t = -x / (t * t) - a / t, p_x = 1.0 / t;
    return FieldJet{s.u + a * std::log(t), s.h, r.du * p_t + a / t, r.du * p_x,
                    r.dh * p_t,            r.dh * p_x};
  };
  return {SolutionField("case_i", clipped, eval, jet), was_clipped};
}

LiftedField lift_general_ia(double a1, double a2, double a3, double a4, const Trajectory& traj,
                            LogSign sign, const Rect& domain) {
  if (a1 == 0) throw PreconditionError("lift_general_ia: a1 must be nonzero");
  const double a = a2 / a1;
  if (std::abs(traj.a() - a) > 1e-12 * std::max(1.0, std::abs(a))) {
    throw PreconditionError("lift_general_ia: trajectory was integrated for a different a");
  }
  for (double t : {domain.t.lo, domain.t.hi}) {
    if (!(a1 * t + a4 > 0)) throw DomainError("lift_general_ia: a1 t + a4 must be positive");
  }
  const double s = sign == LogSign::Corrected ? 1.0 : -1.0;
  const double a1sq = a1 * a1;
  // q = a1 p + a2/a1 is affine in x with slope a1/T.
  auto q_of = [=](double t, double x) {
    const double T = a1 * t + a4;
    const double p = (a1sq * x + a1 * a3 - a2 * a4) / (a1sq * T) - a2 / a1sq * std::log(T);
    return a1 * p + a2 / a1;
  };
  const Interval pr = traj.p_range();
  Interval xs;
  if (a1 > 0) {
    xs = admissible_x(
        domain, pr.lo, pr.hi, [=](double t) { return a1 / (a1 * t + a4); },
        [=](double t) { return q_of(t, 0.0); });
  } else {
    // Slope negative: work with -q.
    xs = admissible_x(
        domain, -pr.hi, -pr.lo, [=](double t) { return -a1 / (a1 * t + a4); },
        [=](double t) { return -q_of(t, 0.0); });
  }
  Rect clipped{domain.t, xs};
  if (clipped.empty()) throw DomainError("lift_general_ia: domain misses the trajectory's p-range");
  const bool was_clipped = xs.lo > domain.x.lo || xs.hi < domain.x.hi;

  auto eval = [=](double t, double x) {
    const ReducedState st = traj.eval(q_of(t, x));
    return State{st.u + s * a * std::log(a1 * t + a4), st.h};
  };
  auto jet = [=](double t, double x) {
    const double T = a1 * t + a4;
    const auto [st, r] = traj.eval_with_rates(q_of(t, x));
    const double p_t = -(a1sq * x + a1 * a3 - a2 * a4) / (a1 * T * T) - a2 / (a1 * T);
    const double q_t = a1 * p_t, q_x = a1 / T;
    return FieldJet{st.u + s * a * std::log(T), st.h, r.du * q_t + s * a2 / T, r.du * q_x,
                    r.dh * q_t, r.dh * q_x};
  };
  const std::string name = sign == LogSign::Corrected ? "general_ia" : "general_ia_stated";
  return {SolutionField(name, clipped, eval, jet), was_clipped};
}

std::pair<double, double> case_ii_residual(const ReducedState& s, double du, double dh) {
  if (s.p == 0) throw DomainError("case_ii_residual: requires p != 0");
  return {du + s.u / s.p, dh + s.h / s.p};
}

SolutionField case_ii_field(double c1, double c2, const Rect& domain) {
  if (!(c2 > 0)) throw ParameterError("case_ii_field: c2 must be positive");
  if (!(domain.t.lo > 0)) throw DomainError("case_ii_field: domain must lie in t > 0");
  auto eval = [c1, c2](double t, double x) {
    const double p = t;
    return State{c1 / p + x / t, c2 / p};
  };
  auto jet = [c1, c2](double t, double x) {
    const double p = t;
    return FieldJet{c1 / p + x / t, c2 / p, -c1 / (p * p) - x / (t * t), 1.0 / t,
                    -c2 / (p * p), 0.0};
  };
  return SolutionField("case_ii", domain, eval, jet);
}

std::pair<double, double> case_iii_residual(const HodographPair& pair, const ReducedState& s,
                                            double du, double dh, const FluidParams& params) {
  if (!(s.h > 0)) throw DomainError("case_iii_residual: requires h > 0");
  const PairValue q = pair(s.u, s.h);
  return {-q.g * du + q.f * s.u * du + q.f * params.pressure_factor(s.h) * dh,
          -q.g * dh + q.f * s.u * dh + q.f * s.h * du};
}

}  // namespace symflow
