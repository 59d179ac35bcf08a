// NEON (AArch64) variant of loop_field_kernel: two points per step, same
// operation order as the scalar reference.

#include <arm_neon.h>

#include "kernels_internal.hpp"

namespace gyrochip::simd::detail {

namespace {

struct Vec2 {
  float64x2_t b_rho;
  float64x2_t b_z;
};

inline Vec2 loop_field_neon(const LoopParams& p, float64x2_t rho, float64x2_t z) {
  const float64x2_t half = vdupq_n_f64(0.5);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t two = vdupq_n_f64(2.0);
  const float64x2_t a = vdupq_n_f64(p.radius);

  const float64x2_t zr = vsubq_f64(z, vdupq_n_f64(p.height));
  const float64x2_t dm = vsubq_f64(rho, a);
  const float64x2_t dp = vaddq_f64(rho, a);
  const float64x2_t zr2 = vmulq_f64(zr, zr);
  const float64x2_t a2 = vmulq_f64(a, a);
  const float64x2_t rho2 = vmulq_f64(rho, rho);
  const float64x2_t alpha2 = vaddq_f64(vmulq_f64(dm, dm), zr2);
  const float64x2_t beta2 = vaddq_f64(vmulq_f64(dp, dp), zr2);
  const float64x2_t beta = vsqrtq_f64(beta2);
  const float64x2_t m = vdivq_f64(vmulq_f64(vmulq_f64(vdupq_n_f64(4.0), a), rho), beta2);

  float64x2_t an = one;
  float64x2_t bn = vsqrtq_f64(vdivq_f64(alpha2, beta2));
  float64x2_t weight = half;
  float64x2_t csum = vmulq_f64(weight, m);
  for (int i = 0; i < agm_iterations; ++i) {
    const float64x2_t cn = vmulq_f64(half, vsubq_f64(an, bn));
    const float64x2_t an1 = vmulq_f64(half, vaddq_f64(an, bn));
    bn = vsqrtq_f64(vmulq_f64(an, bn));
    an = an1;
    weight = vmulq_f64(weight, two);
    csum = vaddq_f64(csum, vmulq_f64(weight, vmulq_f64(cn, cn)));
  }
  const float64x2_t k_int = vdivq_f64(vdupq_n_f64(0.5 * units::pi), an);
  const float64x2_t e_int = vmulq_f64(k_int, vsubq_f64(one, csum));

  const float64x2_t c = vdupq_n_f64((units::vacuum_permeability * p.current) / units::pi);
  const float64x2_t denom = vmulq_f64(vmulq_f64(two, alpha2), beta);
  const float64x2_t bz_num =
      vaddq_f64(vmulq_f64(vsubq_f64(vsubq_f64(a2, rho2), zr2), e_int), vmulq_f64(alpha2, k_int));
  const float64x2_t b_z = vdivq_f64(vmulq_f64(c, bz_num), denom);

  const float64x2_t q = vaddq_f64(a2, zr2);
  const float64x2_t q52 = vmulq_f64(vmulq_f64(q, q), vsqrtq_f64(q));
  const float64x2_t mu_i = vdupq_n_f64(3.0 * units::vacuum_permeability * p.current);
  const float64x2_t series =
      vdivq_f64(vmulq_f64(vmulq_f64(vmulq_f64(mu_i, a2), zr), rho), vmulq_f64(vdupq_n_f64(4.0), q52));

  const float64x2_t br_num =
      vsubq_f64(vmulq_f64(vaddq_f64(vaddq_f64(a2, rho2), zr2), e_int), vmulq_f64(alpha2, k_int));
  const float64x2_t full = vdivq_f64(vmulq_f64(vmulq_f64(c, zr), br_num), vmulq_f64(denom, rho));

  const uint64x2_t near_axis = vcltq_f64(rho, vmulq_f64(vdupq_n_f64(near_axis_fraction), a));
  return {vbslq_f64(near_axis, series, full), b_z};
}

}  // namespace

void accumulate_neon(const LoopParams& loop, const double* rho, const double* z, double* b_rho,
                     double* b_z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const Vec2 f = loop_field_neon(loop, vld1q_f64(rho + i), vld1q_f64(z + i));
    vst1q_f64(b_rho + i, vaddq_f64(vld1q_f64(b_rho + i), f.b_rho));
    vst1q_f64(b_z + i, vaddq_f64(vld1q_f64(b_z + i), f.b_z));
  }
  if (i < n) accumulate_scalar(loop, rho + i, z + i, b_rho + i, b_z + i, n - i);
}

}  // namespace gyrochip::simd::detail
