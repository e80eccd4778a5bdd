#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "symflow/model.hpp"
#include "symflow/types.hpp"

namespace symflow {

/// Coefficients (tau, xi, eta, phi) of a point vector field and their first
/// partials; grad[i][j] is the derivative of coefficient i along coordinate j
/// of (t, x, u, h).
struct FieldValue {
  std::array<double, 4> coef{};
  std::array<std::array<double, 4>, 4> grad{};
};

/// A candidate symmetry generator
///   Q = tau dt + xi dx + eta du + phi dh
/// with coefficients depending on (t, x, u, h).
class VectorFieldSpec {
 public:
  using Evaluator = std::function<FieldValue(const Point&)>;
  using Coefficients = std::function<std::array<double, 4>(const Point&)>;

  /// Coefficients and partials supplied in closed form.
  static VectorFieldSpec analytic(std::string name, Evaluator eval);
  /// Only coefficient values supplied; partials come from fourth-order
  /// central differences and the field is marked as such.
  static VectorFieldSpec finite_difference(std::string name, Coefficients coef);

  /// Throws EvaluationError on any non-finite coefficient or partial.
  FieldValue operator()(const Point& p) const;
  std::array<double, 4> coefficients(const Point& p) const;

  /// Partials recomputed by finite differences regardless of provenance.
  FieldValue finite_difference_value(const Point& p) const;

  bool analytic_partials() const { return analytic_; }
  const std::string& name() const { return name_; }

 private:
  VectorFieldSpec(std::string name, Evaluator eval, Coefficients coef, bool analytic);

  std::string name_;
  Evaluator eval_;
  Coefficients coef_;
  bool analytic_;
};

/// Coefficients of the first prolongation Q^(1) at a jet point.
struct ProlongedCoefficients {
  double eta_t = 0, eta_x = 0, phi_t = 0, phi_x = 0;
};

ProlongedCoefficients prolong1(const VectorFieldSpec& v, const JetPoint& jet);

/// Q^(1) applied to both residuals at an on-manifold jet. Vanishes for
/// symmetries. Throws PreconditionError when the jet is off the manifold.
Residual2 invariance_defect(const VectorFieldSpec& v, const JetPoint& jet,
                            const FluidParams& params);

/// Commutator [v, w] = (v . grad) w - (w . grad) v evaluated at a point.
std::array<double, 4> lie_bracket(const VectorFieldSpec& v, const VectorFieldSpec& w,
                                  const Point& p);

/// [v, w] as a vector field (finite-difference partials), for nested brackets.
VectorFieldSpec bracket_field(const VectorFieldSpec& v, const VectorFieldSpec& w);

/// Sum of scaled fields; analytic iff every term is.
VectorFieldSpec linear_combination(
    const std::vector<std::pair<double, VectorFieldSpec>>& terms);

/// Left-hand sides of the eight determining equations, in the order
///   xi_u - u tau_u + h tau_h,
///   xi_h - u tau_h + G(1+H/h) tau_u,
///   (H/h^2) phi - (1+H/h)(tau_t - xi_x - eta_u + phi_h + 2u tau_x),
///   phi + h(tau_t - xi_x + eta_u - phi_h + 2u tau_x),
///   eta - h eta_h + u(tau_t - xi_x) - xi_t + u^2 tau_x + G(1+H/h)(phi_u + h tau_x),
///   eta + h eta_h + u(tau_t - xi_x) - xi_t + u^2 tau_x - G(1+H/h)(phi_u - h tau_x),
///   eta_t + u eta_x + G(1+H/h) phi_x,
///   phi_t + u phi_x + h eta_x.
std::array<double, 8> determining_defect(const VectorFieldSpec& v, const Point& p,
                                         const FluidParams& params);

/// Largest difference between a field's analytic partials and finite differences.
double partials_mismatch(const VectorFieldSpec& v, const Point& p);

namespace generators {

VectorFieldSpec dilation();           // t dt + x dx
VectorFieldSpec galilean_boost();     // t dx + du
VectorFieldSpec time_translation();   // dt
VectorFieldSpec space_translation();  // dx
VectorFieldSpec velocity_shift();     // du (not a symmetry)
VectorFieldSpec time_scaling();       // t dt (not a symmetry)
/// f(u,h) dt + g(u,h) dx
VectorFieldSpec linearizing(const HodographPair& pair);
/// Shallow-water (H = 0) extras: 2h dh + u du - t dt
VectorFieldSpec swe_height_scaling();
/// 4hu dh + (4hg + u^2) du + (2x - 6ut) dt + (6hgt - 3u^2 t) dx, with g read
/// as the gravity constant.
VectorFieldSpec swe_projective(double gravity);
/// tau = c1 t + f, xi = c1 x + c2 t + g, eta = c2, phi = 0.
VectorFieldSpec general_solution(double c1, double c2, const HodographPair& pair);

}  // namespace generators

}  // namespace symflow
