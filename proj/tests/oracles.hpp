#pragma once

// Reference values computed without the library code under test.

#include <array>
#include <cmath>

#include <Eigen/Dense>

namespace oracle {

/// J_nu(z) by its power series; accurate for z up to about 10.
inline double bessel_j_series(double nu, double z) {
  double sum = 0;
  const double half = 0.5 * z;
  for (int k = 0; k < 60; ++k) {
    const double term = std::exp((2 * k + nu) * std::log(half) - std::lgamma(k + 1.0) -
                                 std::lgamma(k + nu + 1.0));
    sum += (k % 2 == 0 ? term : -term);
  }
  return sum;
}

/// Partner g of the half-order f = h^{-3/4} sin(ku) sin(m sqrt h) at gravity 1,
/// derived by hand, up to an additive constant.
inline double half_order_g(double u, double h, double H) {
  const double c = 3.0 / 16.0;
  const double k = std::sqrt(c / H);
  const double m = std::sqrt(4 * c / H);
  const double s = std::sqrt(h);
  return std::pow(h, -0.75) *
         (u * std::sin(k * u) * std::sin(m * s) +
          std::cos(k * u) * (std::sqrt(H / 3.0) * std::sin(m * s) + s * std::cos(m * s)));
}

inline double half_order_f(double u, double h, double H) {
  const double c = 3.0 / 16.0;
  return std::pow(h, -0.75) * std::sin(std::sqrt(c / H) * u) *
         std::sin(std::sqrt(4 * c / H) * std::sqrt(h));
}

/// Adjoint action on span{D, G, dx, dt} from the bracket table
///   [D, dt] = -dt, [D, dx] = -dx, [G, dt] = -dx, all others zero,
/// as exp(-eps ad_v) summed to convergence.
inline std::array<double, 4> adjoint_by_exponential(int flow, double eps,
                                                    const std::array<double, 4>& a) {
  // Column j of ad is [basis_flow, basis_j] in coordinates (D, G, dx, dt).
  Eigen::Matrix4d ad = Eigen::Matrix4d::Zero();
  switch (flow) {
    case 0:  // D
      ad(2, 2) = -1;
      ad(3, 3) = -1;
      break;
    case 1:  // G
      ad(2, 3) = -1;
      break;
    case 2:  // dx
      ad(2, 0) = 1;
      break;
    case 3:  // dt
      ad(3, 0) = 1;
      ad(2, 1) = 1;
      break;
  }
  Eigen::Matrix4d sum = Eigen::Matrix4d::Identity(), term = Eigen::Matrix4d::Identity();
  for (int n = 1; n < 40; ++n) {
    term = term * (-eps * ad) / n;
    sum += term;
  }
  const Eigen::Vector4d out = sum * Eigen::Vector4d(a[0], a[1], a[2], a[3]);
  return {out[0], out[1], out[2], out[3]};
}

/// Derivatives of the reduced case-(i) system by a dense linear solve.
inline std::array<double, 2> case_i_rates(double a, double G, double H, double p, double u,
                                          double h) {
  Eigen::Matrix2d m;
  m << u - p, G * (1 + H / h), h, u - p;
  const Eigen::Vector2d rhs(-a, 0.0);
  const Eigen::Vector2d x = m.fullPivLu().solve(rhs);
  return {x[0], x[1]};
}

}  // namespace oracle
