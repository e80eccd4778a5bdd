#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

namespace symflow::fd {

/// Step for the fourth-order central stencil: eps^(1/5) times the coordinate
/// scale, which balances truncation against round-off.
inline double step_for(double x) {
  static const double base = std::pow(std::numeric_limits<double>::epsilon(), 0.2);
  return base * std::max(1.0, std::abs(x));
}

/// Fourth-order central first derivative of a scalar-valued callable.
template <class F>
auto derivative(F&& f, double x, double step) -> std::decay_t<decltype(f(x))> {
  const auto fp1 = f(x + step);
  const auto fm1 = f(x - step);
  const auto fp2 = f(x + 2 * step);
  const auto fm2 = f(x - 2 * step);
  return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * step);
}

template <class F>
auto derivative(F&& f, double x) {
  return derivative(std::forward<F>(f), x, step_for(x));
}

}  // namespace symflow::fd
