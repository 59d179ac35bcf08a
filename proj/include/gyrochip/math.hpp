#pragma once

#include <cmath>

#include "gyrochip/units.hpp"

namespace gyrochip::math {

// sin(pi x) with exact argument reduction, so zeros at integer x stay at the
// rounding level of x itself.
inline double sin_pi(double x) {
  const double r = std::remainder(x, 2.0);  // [-1, 1]
  const double a = std::abs(r);
  const double s = a > 0.5 ? std::sin(units::pi * (1.0 - a)) : std::sin(units::pi * a);
  return r < 0.0 ? -s : s;
}

}  // namespace gyrochip::math
