#include "gyrochip/simd/field_kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "gyrochip/errors.hpp"
#include "kernels_internal.hpp"

namespace gyrochip::simd {

namespace detail {

void accumulate_scalar(const LoopParams& loop, const double* rho, const double* z,
                       double* b_rho, double* b_z, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const PointField f = loop_field_kernel(loop, rho[i], z[i]);
    b_rho[i] = b_rho[i] + f.b_rho;
    b_z[i] = b_z[i] + f.b_z;
  }
}

}  // namespace detail

namespace {

// -1: no override.
std::atomic<int> isa_override{-1};

std::optional<Isa> isa_from_env() {
  const char* env = std::getenv("GYROCHIP_SIMD");
  if (env == nullptr) return std::nullopt;
  const std::string_view v(env);
  if (v == "scalar") return Isa::scalar;
  if (v == "avx2") return Isa::avx2;
  if (v == "neon") return Isa::neon;
  return std::nullopt;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "?";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(GYROCHIP_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::neon:
#if defined(GYROCHIP_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa best_available_isa() {
  if (isa_available(Isa::avx2)) return Isa::avx2;
  if (isa_available(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

Isa active_isa() {
  const int forced = isa_override.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Isa>(forced);
  if (auto env = isa_from_env(); env && isa_available(*env)) return *env;
  return best_available_isa();
}

void set_isa_override(std::optional<Isa> isa) {
  if (isa && !isa_available(*isa)) {
    throw InvalidInputError("SIMD variant '" + std::string(isa_name(*isa)) + "' is not available on this machine");
  }
  isa_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

std::size_t accumulate_loop_field(const LoopParams& loop, std::span<const double> rho,
                                  std::span<const double> z, std::span<double> b_rho,
                                  std::span<double> b_z, Isa isa) {
  const std::size_t n = rho.size();
  if (z.size() != n || b_rho.size() != n || b_z.size() != n) {
    throw InvalidInputError("accumulate_loop_field: span sizes differ");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (is_singular(loop, rho[i], z[i])) return i;
  }
  if (!isa_available(isa)) isa = Isa::scalar;
  switch (isa) {
    case Isa::avx2:
#if defined(GYROCHIP_HAVE_AVX2)
      detail::accumulate_avx2(loop, rho.data(), z.data(), b_rho.data(), b_z.data(), n);
      return no_singular_point;
#else
      break;
#endif
    case Isa::neon:
#if defined(GYROCHIP_HAVE_NEON)
      detail::accumulate_neon(loop, rho.data(), z.data(), b_rho.data(), b_z.data(), n);
      return no_singular_point;
#else
      break;
#endif
    case Isa::scalar:
      break;
  }
  detail::accumulate_scalar(loop, rho.data(), z.data(), b_rho.data(), b_z.data(), n);
  return no_singular_point;
}

}  // namespace gyrochip::simd
