#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "gyrochip/errors.hpp"
#include "gyrochip/guide.hpp"

using namespace gyrochip;
using namespace gyrochip::guide;
using magnetostatics::GuideGeometry;
using magnetostatics::reference_guide_geometry;

namespace {

constexpr double b0 = 1e-2;

double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

TEST_CASE("reference guide sits about 13 um above the chip") {
  const auto p = find_guide_minimum(reference_guide_geometry());
  CHECK(p.z == doctest::Approx(13e-6).epsilon(0.2));
  CHECK(p.rho == doctest::Approx(500e-6).epsilon(0.01));
  const auto again = find_guide_minimum(reference_guide_geometry());
  CHECK(again.rho == p.rho);
  CHECK(again.z == p.z);
}

TEST_CASE("uniform current scaling leaves the minimum in place") {
  const auto g = reference_guide_geometry();
  const auto p = find_guide_minimum(g);
  for (double s : {2.0, 0.5, -1.0}) {
    const auto q = find_guide_minimum(g.scaled(s));
    CHECK(std::abs(q.rho - p.rho) <= 1e-9);
    CHECK(std::abs(q.z - p.z) <= 1e-9);
  }
}

TEST_CASE("fine grid oracle agrees with the refined minimum to one cell") {
  const auto g = reference_guide_geometry();
  const auto p = find_guide_minimum(g);
  const auto box = search_box(g);
  const std::size_t n = 2001;
  std::vector<double> rho(n * n), z(n * n), ax_r(n), ax_z(n);
  for (std::size_t i = 0; i < n; ++i) {
    ax_r[i] = box.rho_min + (box.rho_max - box.rho_min) * static_cast<double>(i) / (n - 1);
    ax_z[i] = box.z_floor + (box.z_max - box.z_floor) * static_cast<double>(i + 1) / n;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      rho[i * n + j] = ax_r[i];
      z[i * n + j] = ax_z[j];
    }
  }
  const auto m = magnetostatics::field_modulus_batch(g, rho, z);
  // Lowest value within a 20 um window of the guide; the grid scan has no
  // other information.
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (std::abs(rho[k] - 500e-6) > 20e-6 || std::abs(z[k] - 13e-6) > 10e-6) continue;
    if (!best || m[k] < m[*best]) best = k;
  }
  REQUIRE(best);
  const double cell_r = ax_r[1] - ax_r[0], cell_z = ax_z[1] - ax_z[0];
  CHECK(std::abs(rho[*best] - p.rho) <= cell_r);
  CHECK(std::abs(z[*best] - p.z) <= cell_z);
}

TEST_CASE("non-trapping configurations have no guide") {
  const GuideGeometry zero({{487e-6, 0.0, 0.0}, {500e-6, 0.0, 0.0}, {513e-6, 0.0, 0.0}});
  CHECK_THROWS_AS(find_guide_minimum(zero), NoGuideError);
  const GuideGeometry same_sign({{487e-6, 0.1, 0.0}, {500e-6, 0.1, 0.0}, {513e-6, 0.1, 0.0}});
  CHECK_THROWS_AS(find_guide_minimum(same_sign), NoGuideError);
}

TEST_CASE("reference guide characterization") {
  const auto rb = units::species_rb87();
  const auto c = characterize_guide(reference_guide_geometry(), rb, b0);
  CHECK(c.min_position.z > 0.0);
  CHECK(c.b_min >= 0.0);
  CHECK(c.radial_frequency >= 500.0);
  CHECK(c.radial_frequency <= 4500.0);
  CHECK(c.depth_temperature >= 100e-6);
  CHECK(c.depth_temperature <= 900e-6);
  CHECK(c.depth_temperature == rb.magnetic_moment() * c.depth_field / units::boltzmann);
  CHECK(c.gradient > 50.0);
  CHECK(c.hessian_asymmetry < 1e-3);
  CHECK(std::abs(c.hessian[0][1] - c.hessian[1][0]) <= 1e-3 * std::max(c.hessian[0][0], c.hessian[1][1]));
  CHECK(c.offset_b0 == b0);
}

TEST_CASE("a bare quadrupole zero needs an offset") {
  CHECK_THROWS_AS(characterize_guide(reference_guide_geometry(), units::species_rb87(), 0.0),
                  NonSmoothPotentialError);
  CHECK_THROWS_AS(characterize_guide(reference_guide_geometry(), units::species_rb87(), -1.0), InvalidInputError);
}

TEST_CASE("radial frequency scales as sqrt of the current scale with co-scaled offset") {
  const auto rb = units::species_rb87();
  const auto g = reference_guide_geometry();
  const double f = characterize_guide(g, rb, b0).radial_frequency;
  for (double s : {2.0, 0.5}) {
    const double fs = characterize_guide(g.scaled(s), rb, s * b0).radial_frequency;
    CHECK(fs / f == doctest::Approx(std::sqrt(s)).epsilon(1e-3));
  }
}

TEST_CASE("synthetic quadrupole matches the small-oscillation formula") {
  const auto rb = units::species_rb87();
  const double grad = 150.0, offset = 1e-3;
  const GuidePosition at{500e-6, 13e-6};
  FieldFunction quad = [&](double rho, double z) {
    return FieldPoint{grad * (z - at.z), grad * (rho - at.rho)};
  };
  const auto c = potential_curvature(quad, at, rb, offset);
  const double expected = grad * std::sqrt(rb.magnetic_moment() / (rb.mass() * offset)) / (2 * units::pi);
  CHECK(c.radial_frequency == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("potential map") {
  const auto rb = units::species_rb87();
  const auto g = reference_guide_geometry();
  const auto box = search_box(g);
  const auto map = potential_map(g, rb, b0, box, 5, 4);
  REQUIRE(map.energy.size() == 20);
  CHECK(map.rho.front() == box.rho_min);
  CHECK(map.z.back() == box.z_max);
  const auto f = magnetostatics::total_field(g, map.rho[2], map.z[1]);
  CHECK(map.energy[2 * 4 + 1] ==
        doctest::Approx(rb.magnetic_moment() * std::sqrt(f.b_rho * f.b_rho + f.b_z * f.b_z + b0 * b0)));
  CHECK_THROWS_AS(potential_map(g, rb, b0, box, 1, 4), InvalidInputError);
}

TEST_CASE("corrugation profile") {
  const auto c = CorrugationModel::generate(0.01, 20e-6, 42, 2 * units::pi * 500e-6, 4096, 13e-6);
  CHECK(c.profile.size() == 4096);
  const double mean = std::accumulate(c.profile.begin(), c.profile.end(), 0.0) / 4096.0;
  CHECK(std::abs(mean) < 1e-10 * rms(c.profile));
  CHECK(rms(c.profile) == doctest::Approx(0.01).epsilon(1e-12));
  const auto again = CorrugationModel::generate(0.01, 20e-6, 42, 2 * units::pi * 500e-6, 4096, 13e-6);
  CHECK(again.profile == c.profile);
  const auto other = CorrugationModel::generate(0.01, 20e-6, 43, 2 * units::pi * 500e-6, 4096, 13e-6);
  CHECK(other.profile != c.profile);
}

TEST_CASE("roughness potential is odd in the current and linear in its size") {
  const auto rb = units::species_rb87();
  const auto c = CorrugationModel::generate(0.01, 20e-6, 5, 2 * units::pi * 500e-6, 2048, 13e-6);
  const auto plus = roughness_potential(c, 0.12, rb);
  const auto minus = roughness_potential(c, -0.12, rb);
  for (std::size_t i = 0; i < plus.size(); ++i) CHECK(minus[i] == -plus[i]);
  const auto imax = std::max_element(plus.begin(), plus.end()) - plus.begin();
  CHECK(std::min_element(minus.begin(), minus.end()) - minus.begin() == imax);

  const double r10 = rms(roughness_potential(c, 0.010, rb));
  CHECK(rms(roughness_potential(c, 0.020, rb)) == doctest::Approx(2 * r10).epsilon(1e-12));
  CHECK(rms(roughness_potential(c, 0.040, rb)) == doctest::Approx(4 * r10).epsilon(1e-12));

  const auto flat = CorrugationModel::generate(0.0, 20e-6, 5, 2 * units::pi * 500e-6, 2048, 13e-6);
  for (double v : roughness_potential(flat, 0.12, rb)) CHECK(v == 0.0);
}

TEST_CASE("zero-mean current modulation nulls the averaged roughness") {
  const auto rb = units::species_rb87();
  const auto c = CorrugationModel::generate(0.01, 20e-6, 9, 2 * units::pi * 500e-6, 2048, 13e-6);
  const double i0 = 0.12;
  const auto reference = roughness_potential(c, i0, rb);
  const double scale = rms(reference);

  const auto sine = modulated_roughness_average(c, sine_waveform(i0, 64), rb);
  CHECK(sine.zero_mean);
  for (double v : sine.potential) CHECK(std::abs(v) <= 1e-10 * scale);

  const auto square = modulated_roughness_average(c, square_waveform(i0, 64), rb);
  CHECK(square.zero_mean);
  for (double v : square.potential) CHECK(std::abs(v) <= 1e-12 * scale);

  const auto offset = modulated_roughness_average(c, sine_waveform(i0, 64, 0.01 * i0), rb);
  CHECK_FALSE(offset.zero_mean);
  for (std::size_t i = 0; i < reference.size(); ++i) {
    CHECK(std::abs(offset.potential[i] - 0.01 * reference[i]) <= 1e-9 * scale);
  }
  CHECK_THROWS_AS(square_waveform(i0, 63), InvalidInputError);
}
