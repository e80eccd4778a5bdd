#include "symflow/special.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "symflow/errors.hpp"

namespace symflow::special {

namespace {

void check(double nu, double z) {
  if (!(z > 0)) throw DomainError("Bessel functions require z > 0");
  if (!(nu >= 0)) throw UnsupportedOrderError("Bessel order must be real and non-negative");
}

}  // namespace

double bessel_j(double nu, double z) {
  check(nu, z);
  return boost::math::cyl_bessel_j(nu, z);
}

double bessel_y(double nu, double z) {
  check(nu, z);
  return boost::math::cyl_neumann(nu, z);
}

double bessel_j_prime(double nu, double z) {
  check(nu, z);
  return boost::math::cyl_bessel_j_prime(nu, z);
}

double bessel_y_prime(double nu, double z) {
  check(nu, z);
  return boost::math::cyl_neumann_prime(nu, z);
}

}  // namespace symflow::special
