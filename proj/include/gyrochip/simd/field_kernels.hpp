#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "gyrochip/simd/loop_field_kernel.hpp"

namespace gyrochip::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);
bool isa_available(Isa isa);
// Best ISA supported by both the build and the running CPU.
Isa best_available_isa();
// ISA used by default dispatch: the override if set, else GYROCHIP_SIMD
// ("scalar", "avx2", "neon") if available, else best_available_isa().
Isa active_isa();
void set_isa_override(std::optional<Isa> isa);

inline constexpr std::size_t no_singular_point = static_cast<std::size_t>(-1);

// Adds the field of one loop at each (rho[i], z[i]) into b_rho[i], b_z[i].
// Returns the index of the first point on the filament (outputs untouched) or
// no_singular_point.
std::size_t accumulate_loop_field(const LoopParams& loop, std::span<const double> rho,
                                  std::span<const double> z, std::span<double> b_rho,
                                  std::span<double> b_z, Isa isa);

inline std::size_t accumulate_loop_field(const LoopParams& loop, std::span<const double> rho,
                                         std::span<const double> z, std::span<double> b_rho,
                                         std::span<double> b_z) {
  return accumulate_loop_field(loop, rho, z, b_rho, b_z, active_isa());
}

}  // namespace gyrochip::simd
