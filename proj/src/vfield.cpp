#include "symflow/vfield.hpp"

#include <algorithm>
#include <cmath>

#include "symflow/errors.hpp"
#include "symflow/finite_diff.hpp"

namespace symflow {

namespace {

enum Coord { kT = 0, kX = 1, kU = 2, kH = 3 };
enum Comp { kTau = 0, kXi = 1, kEta = 2, kPhi = 3 };

Point shifted(Point p, int coord, double delta) {
  switch (coord) {
    case kT: p.t += delta; break;
    case kX: p.x += delta; break;
    case kU: p.u += delta; break;
    default: p.h += delta; break;
  }
  return p;
}

double coordinate(const Point& p, int coord) {
  switch (coord) {
    case kT: return p.t;
    case kX: return p.x;
    case kU: return p.u;
    default: return p.h;
  }
}

FieldValue fd_value(const VectorFieldSpec::Coefficients& coef, const Point& p) {
  FieldValue out;
  out.coef = coef(p);
  for (int j = 0; j < 4; ++j) {
    const double step = fd::step_for(coordinate(p, j));
    // A step that would cross h = 0 is shrunk so the stencil stays physical.
    double s = step;
    if (j == kH) s = std::min(step, 0.2 * p.h);
    auto along = [&](double delta) { return coef(shifted(p, j, delta)); };
    const auto fp1 = along(s), fm1 = along(-s), fp2 = along(2 * s), fm2 = along(-2 * s);
    for (int i = 0; i < 4; ++i) {
      out.grad[i][j] = (fm2[i] - 8.0 * fm1[i] + 8.0 * fp1[i] - fp2[i]) / (12.0 * s);
    }
  }
  return out;
}

// Total derivatives truncated at first order along the jet.
double total_t(const std::array<double, 4>& grad, const JetPoint& j) {
  return grad[kT] + j.u_t * grad[kU] + j.h_t * grad[kH];
}
double total_x(const std::array<double, 4>& grad, const JetPoint& j) {
  return grad[kX] + j.u_x * grad[kU] + j.h_x * grad[kH];
}

double directional(const std::array<double, 4>& dir, const std::array<double, 4>& grad) {
  return dir[0] * grad[0] + dir[1] * grad[1] + dir[2] * grad[2] + dir[3] * grad[3];
}

}  // namespace

VectorFieldSpec::VectorFieldSpec(std::string name, Evaluator eval, Coefficients coef,
                                 bool analytic)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      coef_(std::move(coef)),
      analytic_(analytic) {}

VectorFieldSpec VectorFieldSpec::analytic(std::string name, Evaluator eval) {
  Coefficients coef = [eval](const Point& p) { return eval(p).coef; };
  return VectorFieldSpec(std::move(name), std::move(eval), std::move(coef), true);
}

VectorFieldSpec VectorFieldSpec::finite_difference(std::string name, Coefficients coef) {
  Evaluator eval = [coef](const Point& p) { return fd_value(coef, p); };
  return VectorFieldSpec(std::move(name), std::move(eval), std::move(coef), false);
}

FieldValue VectorFieldSpec::operator()(const Point& p) const {
  FieldValue v = eval_(p);
  for (int i = 0; i < 4; ++i) {
    bool ok = std::isfinite(v.coef[i]);
    for (int j = 0; j < 4; ++j) ok = ok && std::isfinite(v.grad[i][j]);
    if (!ok) throw EvaluationError("vector field '" + name_ + "' is not finite");
  }
  return v;
}

std::array<double, 4> VectorFieldSpec::coefficients(const Point& p) const {
  return coef_(p);
}

FieldValue VectorFieldSpec::finite_difference_value(const Point& p) const {
  return fd_value(coef_, p);
}

ProlongedCoefficients prolong1(const VectorFieldSpec& v, const JetPoint& j) {
  const FieldValue q = v(Point{j.t, j.x, j.u, j.h});
  const double dt_tau = total_t(q.grad[kTau], j), dx_tau = total_x(q.grad[kTau], j);
  const double dt_xi = total_t(q.grad[kXi], j), dx_xi = total_x(q.grad[kXi], j);
  ProlongedCoefficients out;
  out.eta_t = total_t(q.grad[kEta], j) - j.u_t * dt_tau - j.u_x * dt_xi;
  out.eta_x = total_x(q.grad[kEta], j) - j.u_t * dx_tau - j.u_x * dx_xi;
  out.phi_t = total_t(q.grad[kPhi], j) - j.h_t * dt_tau - j.h_x * dt_xi;
  out.phi_x = total_x(q.grad[kPhi], j) - j.h_t * dx_tau - j.h_x * dx_xi;
  return out;
}

Residual2 invariance_defect(const VectorFieldSpec& v, const JetPoint& j,
                            const FluidParams& params) {
  const Residual2 r = mswe_residual(j, params);
  const double scale = 1.0 + std::abs(j.u_t) + std::abs(j.h_t) +
                       std::abs(j.u * j.u_x) + std::abs(j.h * j.u_x) +
                       std::abs(params.pressure_factor(j.h) * j.h_x);
  if (r.max_abs() > 1e-12 * scale) {
    throw PreconditionError("invariance_defect: jet is not on the solution manifold");
  }
  const ProlongedCoefficients pr = prolong1(v, j);
  const auto c = v.coefficients(Point{j.t, j.x, j.u, j.h});
  const double eta = c[kEta], phi = c[kPhi];
  const double G = params.gravity;
  return {pr.eta_t + j.u * pr.eta_x + eta * j.u_x + params.pressure_factor(j.h) * pr.phi_x -
              G * params.H / (j.h * j.h) * phi * j.h_x,
          pr.phi_t + j.u * pr.phi_x + eta * j.h_x + j.h * pr.eta_x + phi * j.u_x};
}

std::array<double, 4> lie_bracket(const VectorFieldSpec& v, const VectorFieldSpec& w,
                                  const Point& p) {
  const FieldValue a = v(p);
  const FieldValue b = w(p);
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    out[i] = directional(a.coef, b.grad[i]) - directional(b.coef, a.grad[i]);
  }
  return out;
}

VectorFieldSpec bracket_field(const VectorFieldSpec& v, const VectorFieldSpec& w) {
  return VectorFieldSpec::finite_difference(
      "[" + v.name() + "," + w.name() + "]",
      [v, w](const Point& p) { return lie_bracket(v, w, p); });
}

VectorFieldSpec linear_combination(
    const std::vector<std::pair<double, VectorFieldSpec>>& terms) {
  bool analytic = true;
  std::string name;
  for (const auto& [c, f] : terms) {
    analytic = analytic && f.analytic_partials();
    if (!name.empty()) name += "+";
    name += std::to_string(c) + "*" + f.name();
  }
  if (analytic) {
    return VectorFieldSpec::analytic(name, [terms](const Point& p) {
      FieldValue out;
      for (const auto& [c, f] : terms) {
        const FieldValue v = f(p);
        for (int i = 0; i < 4; ++i) {
          out.coef[i] += c * v.coef[i];
          for (int j = 0; j < 4; ++j) out.grad[i][j] += c * v.grad[i][j];
        }
      }
      return out;
    });
  }
  return VectorFieldSpec::finite_difference(name, [terms](const Point& p) {
    std::array<double, 4> out{};
    for (const auto& [c, f] : terms) {
      const auto v = f.coefficients(p);
      for (int i = 0; i < 4; ++i) out[i] += c * v[i];
    }
    return out;
  });
}

std::array<double, 8> determining_defect(const VectorFieldSpec& v, const Point& p,
                                         const FluidParams& params) {
  if (!(p.h > 0)) throw DomainError("determining_defect: requires h > 0");
  params.validate();
  const FieldValue q = v(p);
  const double u = p.u, h = p.h, H = params.H;
  const double K = params.pressure_factor(h);
  const double tau_t = q.grad[kTau][kT], tau_x = q.grad[kTau][kX];
  const double tau_u = q.grad[kTau][kU], tau_h = q.grad[kTau][kH];
  const double xi_t = q.grad[kXi][kT], xi_x = q.grad[kXi][kX];
  const double xi_u = q.grad[kXi][kU], xi_h = q.grad[kXi][kH];
  const double eta = q.coef[kEta], phi = q.coef[kPhi];
  const double eta_t = q.grad[kEta][kT], eta_x = q.grad[kEta][kX];
  const double eta_u = q.grad[kEta][kU], eta_h = q.grad[kEta][kH];
  const double phi_t = q.grad[kPhi][kT], phi_x = q.grad[kPhi][kX];
  const double phi_u = q.grad[kPhi][kU], phi_h = q.grad[kPhi][kH];
  const double common = u * (tau_t - xi_x) - xi_t + u * u * tau_x;
  return {
      xi_u - u * tau_u + h * tau_h,
      xi_h - u * tau_h + K * tau_u,
      H / (h * h) * phi - (1.0 + H / h) * (tau_t - xi_x - eta_u + phi_h + 2 * u * tau_x),
      phi + h * (tau_t - xi_x + eta_u - phi_h + 2 * u * tau_x),
      eta - h * eta_h + common + K * (phi_u + h * tau_x),
      eta + h * eta_h + common - K * (phi_u - h * tau_x),
      eta_t + u * eta_x + K * phi_x,
      phi_t + u * phi_x + h * eta_x,
  };
}

double partials_mismatch(const VectorFieldSpec& v, const Point& p) {
  const FieldValue a = v(p);
  const FieldValue b = v.finite_difference_value(p);
  double worst = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(a.grad[i][j] - b.grad[i][j]));
  }
  return worst;
}

namespace generators {

VectorFieldSpec dilation() {
  return VectorFieldSpec::analytic("D", [](const Point& p) {
    FieldValue v;
    v.coef = {p.t, p.x, 0, 0};
    v.grad[kTau][kT] = 1;
    v.grad[kXi][kX] = 1;
    return v;
  });
}

VectorFieldSpec galilean_boost() {
  return VectorFieldSpec::analytic("G", [](const Point& p) {
    FieldValue v;
    v.coef = {0, p.t, 1, 0};
    v.grad[kXi][kT] = 1;
    return v;
  });
}

VectorFieldSpec time_translation() {
  return VectorFieldSpec::analytic("dt", [](const Point&) {
    FieldValue v;
    v.coef = {1, 0, 0, 0};
    return v;
  });
}

VectorFieldSpec space_translation() {
  return VectorFieldSpec::analytic("dx", [](const Point&) {
    FieldValue v;
    v.coef = {0, 1, 0, 0};
    return v;
  });
}

VectorFieldSpec velocity_shift() {
  return VectorFieldSpec::analytic("du", [](const Point&) {
    FieldValue v;
    v.coef = {0, 0, 1, 0};
    return v;
  });
}

VectorFieldSpec time_scaling() {
  return VectorFieldSpec::analytic("t*dt", [](const Point& p) {
    FieldValue v;
    v.coef = {p.t, 0, 0, 0};
    v.grad[kTau][kT] = 1;
    return v;
  });
}

VectorFieldSpec linearizing(const HodographPair& pair) {
  auto eval = [pair](const Point& p) {
    const PairValue q = pair(p.u, p.h);
    FieldValue v;
    v.coef = {q.f, q.g, 0, 0};
    v.grad[kTau][kU] = q.f_u;
    v.grad[kTau][kH] = q.f_h;
    v.grad[kXi][kU] = q.g_u;
    v.grad[kXi][kH] = q.g_h;
    return v;
  };
  const std::string name = "L(" + pair.name() + ")";
  if (pair.analytic_partials()) return VectorFieldSpec::analytic(name, eval);
  return VectorFieldSpec::finite_difference(
      name, [eval](const Point& p) { return eval(p).coef; });
}

VectorFieldSpec swe_height_scaling() {
  return VectorFieldSpec::analytic("D2", [](const Point& p) {
    FieldValue v;
    v.coef = {-p.t, 0, p.u, 2 * p.h};
    v.grad[kTau][kT] = -1;
    v.grad[kEta][kU] = 1;
    v.grad[kPhi][kH] = 2;
    return v;
  });
}

VectorFieldSpec swe_projective(double gravity) {
  return VectorFieldSpec::analytic("C", [gravity](const Point& p) {
    const double t = p.t, x = p.x, u = p.u, h = p.h, G = gravity;
    FieldValue v;
    v.coef = {2 * x - 6 * u * t, 6 * h * G * t - 3 * u * u * t, 4 * h * G + u * u, 4 * h * u};
    v.grad[kTau] = {-6 * u, 2, -6 * t, 0};
    v.grad[kXi] = {6 * h * G - 3 * u * u, 0, -6 * u * t, 6 * G * t};
    v.grad[kEta] = {0, 0, 2 * u, 4 * G};
    v.grad[kPhi] = {0, 0, 4 * h, 4 * u};
    return v;
  });
}

VectorFieldSpec general_solution(double c1, double c2, const HodographPair& pair) {
  auto eval = [c1, c2, pair](const Point& p) {
    const PairValue q = pair(p.u, p.h);
    FieldValue v;
    v.coef = {c1 * p.t + q.f, c1 * p.x + c2 * p.t + q.g, c2, 0};
    v.grad[kTau] = {c1, 0, q.f_u, q.f_h};
    v.grad[kXi] = {c2, c1, q.g_u, q.g_h};
    return v;
  };
  const std::string name = "family(" + pair.name() + ")";
  if (pair.analytic_partials()) return VectorFieldSpec::analytic(name, eval);
  return VectorFieldSpec::finite_difference(
      name, [eval](const Point& p) { return eval(p).coef; });
}

}  // namespace generators

}  // namespace symflow
