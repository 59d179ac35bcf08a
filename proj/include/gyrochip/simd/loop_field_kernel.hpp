#pragma once

// Reference (scalar) kernel for the field of a circular filamentary loop.
// The vectorized variants in src/simd/ replay exactly this sequence of IEEE
// operations lane by lane, so every ISA yields bitwise-identical results.

#include <cmath>

#include "gyrochip/units.hpp"

namespace gyrochip::simd {

struct LoopParams {
  double radius;
  double current;
  double height;
};

struct PointField {
  double b_rho;
  double b_z;
};

// Points closer than this to the filament are rejected.
inline constexpr double filament_tolerance = 1e-12;  // m
// Below rho = near_axis_fraction * radius the radial component switches to
// its leading-order series to avoid cancellation.
inline constexpr double near_axis_fraction = 1e-4;
// Fixed AGM iteration count; converges to full double precision for any point
// farther than filament_tolerance from a sub-metre loop.
inline constexpr int agm_iterations = 16;

inline bool is_singular(const LoopParams& p, double rho, double z) {
  const double dr = rho - p.radius;
  const double dz = z - p.height;
  return dr * dr + dz * dz <= filament_tolerance * filament_tolerance;
}

inline PointField loop_field_kernel(const LoopParams& p, double rho, double z) {
  constexpr double half_pi = 0.5 * units::pi;
  const double a = p.radius;
  const double zr = z - p.height;
  const double dm = rho - a;
  const double dp = rho + a;
  const double zr2 = zr * zr;
  const double a2 = a * a;
  const double rho2 = rho * rho;
  const double alpha2 = dm * dm + zr2;
  const double beta2 = dp * dp + zr2;
  const double beta = std::sqrt(beta2);
  const double m = (4.0 * a * rho) / beta2;

  // Complete elliptic integrals K(m), E(m) by the arithmetic-geometric mean.
  double an = 1.0;
  double bn = std::sqrt(alpha2 / beta2);
  double weight = 0.5;
  double csum = weight * m;
  for (int i = 0; i < agm_iterations; ++i) {
    const double cn = 0.5 * (an - bn);
    const double an1 = 0.5 * (an + bn);
    bn = std::sqrt(an * bn);
    an = an1;
    weight = weight * 2.0;
    csum = csum + weight * (cn * cn);
  }
  const double k_int = half_pi / an;
  const double e_int = k_int * (1.0 - csum);

  const double c = (units::vacuum_permeability * p.current) / units::pi;
  const double denom = 2.0 * alpha2 * beta;
  const double b_z = c * ((a2 - rho2 - zr2) * e_int + alpha2 * k_int) / denom;

  double b_rho;
  if (rho < near_axis_fraction * a) {
    const double q = a2 + zr2;
    const double q52 = q * q * std::sqrt(q);
    b_rho = (3.0 * units::vacuum_permeability * p.current * a2 * zr * rho) / (4.0 * q52);
  } else {
    b_rho = c * zr * ((a2 + rho2 + zr2) * e_int - alpha2 * k_int) / (denom * rho);
  }
  return {b_rho, b_z};
}

}  // namespace gyrochip::simd
