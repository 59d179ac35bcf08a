// AVX2 variant of loop_field_kernel: four points per step, same operation
// order as the scalar reference.

#include <immintrin.h>

#include "kernels_internal.hpp"

namespace gyrochip::simd::detail {

namespace {

struct Vec4 {
  __m256d b_rho;
  __m256d b_z;
};

inline Vec4 loop_field_avx2(const LoopParams& p, __m256d rho, __m256d z) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d a = _mm256_set1_pd(p.radius);

  const __m256d zr = _mm256_sub_pd(z, _mm256_set1_pd(p.height));
  const __m256d dm = _mm256_sub_pd(rho, a);
  const __m256d dp = _mm256_add_pd(rho, a);
  const __m256d zr2 = _mm256_mul_pd(zr, zr);
  const __m256d a2 = _mm256_mul_pd(a, a);
  const __m256d rho2 = _mm256_mul_pd(rho, rho);
  const __m256d alpha2 = _mm256_add_pd(_mm256_mul_pd(dm, dm), zr2);
  const __m256d beta2 = _mm256_add_pd(_mm256_mul_pd(dp, dp), zr2);
  const __m256d beta = _mm256_sqrt_pd(beta2);
  const __m256d m = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(4.0), a), rho), beta2);

  __m256d an = one;
  __m256d bn = _mm256_sqrt_pd(_mm256_div_pd(alpha2, beta2));
  __m256d weight = half;
  __m256d csum = _mm256_mul_pd(weight, m);
  for (int i = 0; i < agm_iterations; ++i) {
    const __m256d cn = _mm256_mul_pd(half, _mm256_sub_pd(an, bn));
    const __m256d an1 = _mm256_mul_pd(half, _mm256_add_pd(an, bn));
    bn = _mm256_sqrt_pd(_mm256_mul_pd(an, bn));
    an = an1;
    weight = _mm256_mul_pd(weight, two);
    csum = _mm256_add_pd(csum, _mm256_mul_pd(weight, _mm256_mul_pd(cn, cn)));
  }
  const __m256d k_int = _mm256_div_pd(_mm256_set1_pd(0.5 * units::pi), an);
  const __m256d e_int = _mm256_mul_pd(k_int, _mm256_sub_pd(one, csum));

  const __m256d c = _mm256_set1_pd((units::vacuum_permeability * p.current) / units::pi);
  const __m256d denom = _mm256_mul_pd(_mm256_mul_pd(two, alpha2), beta);
  const __m256d bz_num = _mm256_add_pd(
      _mm256_mul_pd(_mm256_sub_pd(_mm256_sub_pd(a2, rho2), zr2), e_int), _mm256_mul_pd(alpha2, k_int));
  const __m256d b_z = _mm256_div_pd(_mm256_mul_pd(c, bz_num), denom);

  // Near-axis series.
  const __m256d q = _mm256_add_pd(a2, zr2);
  const __m256d q52 = _mm256_mul_pd(_mm256_mul_pd(q, q), _mm256_sqrt_pd(q));
  const __m256d mu_i = _mm256_set1_pd(3.0 * units::vacuum_permeability * p.current);
  const __m256d series = _mm256_div_pd(
      _mm256_mul_pd(_mm256_mul_pd(_mm256_mul_pd(mu_i, a2), zr), rho),
      _mm256_mul_pd(_mm256_set1_pd(4.0), q52));

  // Full expression; lanes on the axis divide by zero but are masked below.
  const __m256d br_num = _mm256_sub_pd(
      _mm256_mul_pd(_mm256_add_pd(_mm256_add_pd(a2, rho2), zr2), e_int), _mm256_mul_pd(alpha2, k_int));
  const __m256d full = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(c, zr), br_num), _mm256_mul_pd(denom, rho));

  const __m256d near_axis = _mm256_cmp_pd(rho, _mm256_mul_pd(_mm256_set1_pd(near_axis_fraction), a), _CMP_LT_OQ);
  const __m256d b_rho = _mm256_blendv_pd(full, series, near_axis);
  return {b_rho, b_z};
}

}  // namespace

void accumulate_avx2(const LoopParams& loop, const double* rho, const double* z, double* b_rho,
                     double* b_z, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const Vec4 f = loop_field_avx2(loop, _mm256_loadu_pd(rho + i), _mm256_loadu_pd(z + i));
    _mm256_storeu_pd(b_rho + i, _mm256_add_pd(_mm256_loadu_pd(b_rho + i), f.b_rho));
    _mm256_storeu_pd(b_z + i, _mm256_add_pd(_mm256_loadu_pd(b_z + i), f.b_z));
  }
  if (i < n) accumulate_scalar(loop, rho + i, z + i, b_rho + i, b_z + i, n - i);
}

}  // namespace gyrochip::simd::detail
