#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

namespace symflow {

/// Physical constants of the modified shallow-water system.
/// H = 0 selects the classical shallow-water equations.
struct FluidParams {
  double H = 1.0;
  double gravity = 1.0;

  /// Throws DomainError unless gravity > 0 and both values are finite.
  void validate() const;
  /// 1 + H/h scaled by gravity; the pressure coefficient of the u-equation.
  double pressure_factor(double h) const { return gravity * (1.0 + H / h); }
};

/// First-order jet: base point plus first derivatives of u and h.
struct JetPoint {
  double t = 0, x = 0, u = 0, h = 1;
  double u_t = 0, u_x = 0, h_t = 0, h_x = 0;
};

/// Base point (t, x, u, h) of the space of independent and dependent variables.
struct Point {
  double t = 0, x = 0, u = 0, h = 1;
};

struct Interval {
  double lo = 0, hi = 0;
  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Rectangle in (t, x).
struct Rect {
  Interval t;
  Interval x;
  bool contains(double tv, double xv) const { return t.contains(tv) && x.contains(xv); }
  bool empty() const { return !(t.hi > t.lo) || !(x.hi > x.lo); }
};

/// Rectangle in (u, h).
struct Box {
  Interval u;
  Interval h;
  bool contains(double uv, double hv) const { return u.contains(uv) && h.contains(hv); }
};

struct State {
  double u = 0;
  double h = 1;
};

/// Values and first derivatives of a solution at one (t, x).
struct FieldJet {
  double u = 0, h = 1;
  double u_t = 0, u_x = 0, h_t = 0, h_x = 0;
};

/// A candidate solution (u, h)(t, x) over a rectangular validity domain.
class SolutionField {
 public:
  using Evaluator = std::function<State(double t, double x)>;
  using JetEvaluator = std::function<FieldJet(double t, double x)>;

  SolutionField(std::string provenance, Rect domain, Evaluator eval,
                JetEvaluator jet = {});

  /// Evaluates the field; throws EvaluationError on non-finite output.
  State operator()(double t, double x) const;
  /// Analytic first derivatives, when the constructor supplied them.
  std::optional<FieldJet> analytic_jet(double t, double x) const;
  bool has_analytic_jet() const { return static_cast<bool>(jet_); }

  const Rect& domain() const { return domain_; }
  const std::string& provenance() const { return provenance_; }

 private:
  std::string provenance_;
  Rect domain_;
  Evaluator eval_;
  JetEvaluator jet_;
};

/// f together with the partials needed by the single-equation form of the
/// linearized system.
struct FDerivatives {
  double f = 0, f_u = 0, f_h = 0, f_uu = 0, f_hh = 0;
};
using FFunction = std::function<FDerivatives(double u, double h)>;

/// Values of a hodograph pair (f, g) and their first partials at one (u, h).
struct PairValue {
  double f = 0, f_u = 0, f_h = 0;
  double g = 0, g_u = 0, g_h = 0;
};

/// A pair (f, g) of functions of (u, h); a solution of the linearized system
/// gives the symmetry f(u,h) dt + g(u,h) dx and, via t = f, x = g, an
/// implicit solution of the nonlinear system.
class HodographPair {
 public:
  using Evaluator = std::function<PairValue(double u, double h)>;

  HodographPair(std::string name, Evaluator eval, Box box,
                bool analytic_partials = true,
                std::map<std::string, double> parameters = {});

  /// Throws DomainError for h <= 0 and EvaluationError for non-finite output.
  PairValue operator()(double u, double h) const;

  const std::string& name() const { return name_; }
  const Box& box() const { return box_; }
  bool analytic_partials() const { return analytic_partials_; }
  const std::map<std::string, double>& parameters() const { return parameters_; }

 private:
  std::string name_;
  Evaluator eval_;
  Box box_;
  bool analytic_partials_;
  std::map<std::string, double> parameters_;
};

}  // namespace symflow
