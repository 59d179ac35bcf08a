#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "gyrochip/errors.hpp"
#include "gyrochip/units.hpp"

using namespace gyrochip;
using namespace gyrochip::units;

TEST_CASE("rb87 constants") {
  const auto rb = species_rb87();
  CHECK(rb.name() == "Rb87");
  CHECK(rb.mass() == 1.44316e-25);
  CHECK(rb.wavelength() == 780.241e-9);
  CHECK(rb.magnetic_moment() == bohr_magneton);
  CHECK(rb.recoil_velocity() == doctest::Approx(5.885e-3).epsilon(1e-3));
  CHECK(rb.mass_over_hbar() == doctest::Approx(1.3686e9).epsilon(1e-4));
}

TEST_CASE("recoil velocity and wavevector follow from the stored primitives") {
  const auto rb = species_rb87();
  CHECK(rb.wavevector() == 2.0 * pi / rb.wavelength());
  const double hk = hbar * rb.wavevector();
  const double ulp = std::nextafter(hk, 2 * hk) - hk;
  CHECK(std::abs(rb.recoil_velocity() * rb.mass() - hk) <= ulp);
}

TEST_CASE("species validation") {
  CHECK_THROWS_AS(AtomSpecies("x", 0.0, 1e-6, 1e-24), InvalidInputError);
  CHECK_THROWS_AS(AtomSpecies("x", 1e-25, -1e-6, 1e-24), InvalidInputError);
  CHECK_THROWS_AS(AtomSpecies("x", 1e-25, 1e-6, 0.0), InvalidInputError);
  CHECK_THROWS_AS(AtomSpecies("x", std::numeric_limits<double>::infinity(), 1e-6, 1e-24), InvalidInputError);
}

TEST_CASE("rotation conversions") {
  CHECK(convert_rotation(1.0, RotationUnit::deg_per_hour) == doctest::Approx(2.0626e5).epsilon(1e-4));
  CHECK(convert_rotation(3.4e-8, RotationUnit::deg_per_root_hour) == doctest::Approx(1.17e-4).epsilon(1e-2));
  CHECK(convert_rotation(0.0, RotationUnit::deg_per_hour) == 0.0);
  CHECK(convert_rotation(0.0, RotationUnit::deg_per_root_hour) == 0.0);
  CHECK(convert_rotation(2.5, RotationUnit::rad_per_s) == 2.5);
}

TEST_CASE("conversions round-trip") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> exponent(-15.0, 5.0);
  for (auto unit : {RotationUnit::rad_per_s, RotationUnit::deg_per_hour, RotationUnit::deg_per_root_hour}) {
    for (int i = 0; i < 1000; ++i) {
      const double v = std::pow(10.0, exponent(rng)) * (i % 2 ? -1.0 : 1.0);
      const double back = rotation_to_si(convert_rotation(v, unit), unit);
      CHECK(std::abs(back - v) <= 1e-12 * std::abs(v));
    }
  }
}

TEST_CASE("unit tags") {
  for (auto unit : {RotationUnit::rad_per_s, RotationUnit::deg_per_hour, RotationUnit::deg_per_root_hour}) {
    CHECK(parse_rotation_unit(rotation_unit_tag(unit)) == unit);
  }
  CHECK_THROWS_AS(parse_rotation_unit("furlong_per_fortnight"), InvalidInputError);
  CHECK_THROWS_AS(convert_rotation(std::nan(""), RotationUnit::deg_per_hour), InvalidInputError);
  CHECK_THROWS_AS(rotation_to_si(std::numeric_limits<double>::infinity(), RotationUnit::deg_per_hour),
                  InvalidInputError);
}

TEST_CASE("RotationRate views") {
  const auto r = RotationRate::from(15.0, RotationUnit::deg_per_hour);
  CHECK(r.si() == doctest::Approx(15.0 / deg_per_hour_per_rad_per_s));
  CHECK(r.in(RotationUnit::deg_per_hour) == doctest::Approx(15.0).epsilon(1e-12));
  CHECK(RotationRate::rad_per_s(earth_rotation_rate).si() == 7.29e-5);
}
