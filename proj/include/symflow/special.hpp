#pragma once

namespace symflow::special {

/// Bessel functions of real order nu >= 0 and argument z > 0, with
/// derivatives. Second derivatives follow from Bessel's equation.
double bessel_j(double nu, double z);
double bessel_y(double nu, double z);
double bessel_j_prime(double nu, double z);
double bessel_y_prime(double nu, double z);

/// Z'' from Bessel's equation: -Z'/z - (1 - nu^2/z^2) Z.
inline double bessel_second_derivative(double nu, double z, double value, double slope) {
  return -slope / z - (1.0 - nu * nu / (z * z)) * value;
}

}  // namespace symflow::special
