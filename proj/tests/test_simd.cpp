#include "doctest.h"

#include <cstdlib>
#include <random>
#include <vector>

#include "gyrochip/errors.hpp"
#include "gyrochip/simd/field_kernels.hpp"

using namespace gyrochip;
using namespace gyrochip::simd;

namespace {

struct Points {
  std::vector<double> rho, z;
};

// Random points plus the awkward ones: on axis, inside the near-axis series
// band, on the loop plane, and far away.
Points test_points(std::size_t n, const LoopParams& loop, std::uint64_t seed) {
  Points p;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ur(0.0, 3.0 * loop.radius), uz(-loop.radius, loop.radius);
  for (std::size_t i = 0; i < n; ++i) {
    switch (i % 7) {
      case 0: p.rho.push_back(0.0); break;
      case 1: p.rho.push_back(near_axis_fraction * loop.radius * 0.3 * ur(rng) / loop.radius); break;
      case 2: p.rho.push_back(near_axis_fraction * loop.radius * (1.0 + 1e-9)); break;
      default: p.rho.push_back(ur(rng));
    }
    p.z.push_back(i % 11 == 0 ? loop.height : loop.height + uz(rng));
  }
  return p;
}

std::vector<Isa> vector_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (isa_available(isa)) out.push_back(isa);
  }
  return out;
}

}  // namespace

TEST_CASE("SIMD kernels are bitwise identical to the scalar kernel") {
  const LoopParams loop{500e-6, -0.123, 2e-6};
  for (Isa isa : vector_isas()) {
    CAPTURE(isa_name(isa));
    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 1001u}) {
      const auto p = test_points(n, loop, n);
      std::vector<double> sr(n, 0.25), sz(n, -0.5), vr(n, 0.25), vz(n, -0.5);
      const auto s_bad = accumulate_loop_field(loop, p.rho, p.z, sr, sz, Isa::scalar);
      const auto v_bad = accumulate_loop_field(loop, p.rho, p.z, vr, vz, isa);
      CHECK(s_bad == no_singular_point);
      CHECK(v_bad == no_singular_point);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(sr[i] == vr[i]);
        CHECK(sz[i] == vz[i]);
      }
    }
  }
}

TEST_CASE("SIMD kernels report the same singular point") {
  const LoopParams loop{1e-3, 1.0, 0.0};
  std::vector<double> rho{0.2e-3, 0.4e-3, 0.6e-3, 0.8e-3, 1e-3, 1.2e-3, 1e-3};
  std::vector<double> z{1e-4, 1e-4, 1e-4, 1e-4, 0.0, 1e-4, 0.0};
  for (Isa isa : vector_isas()) {
    std::vector<double> br(rho.size()), bz(rho.size());
    CHECK(accumulate_loop_field(loop, rho, z, br, bz, isa) == 4);
    std::vector<double> sr(rho.size()), sz(rho.size());
    CHECK(accumulate_loop_field(loop, rho, z, sr, sz, Isa::scalar) == 4);
  }
}

TEST_CASE("dispatch") {
  CHECK(isa_available(Isa::scalar));
  CHECK(isa_available(best_available_isa()));
  set_isa_override(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  set_isa_override(std::nullopt);
  CHECK(isa_available(active_isa()));
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (!isa_available(isa)) CHECK_THROWS_AS(set_isa_override(isa), InvalidInputError);
  }
  const LoopParams loop{1e-3, 1.0, 0.0};
  std::vector<double> rho(3), z(3), br(2), bz(3);
  CHECK_THROWS_AS(accumulate_loop_field(loop, rho, z, br, bz, Isa::scalar), InvalidInputError);
}
