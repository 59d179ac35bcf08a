#pragma once

#include <cstddef>

#include "gyrochip/simd/loop_field_kernel.hpp"

namespace gyrochip::simd::detail {

void accumulate_scalar(const LoopParams& loop, const double* rho, const double* z,
                       double* b_rho, double* b_z, std::size_t n);
#if defined(GYROCHIP_HAVE_AVX2)
void accumulate_avx2(const LoopParams& loop, const double* rho, const double* z,
                     double* b_rho, double* b_z, std::size_t n);
#endif
#if defined(GYROCHIP_HAVE_NEON)
void accumulate_neon(const LoopParams& loop, const double* rho, const double* z,
                     double* b_rho, double* b_z, std::size_t n);
#endif

}  // namespace gyrochip::simd::detail
