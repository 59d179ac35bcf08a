#include "doctest.h"

#include <cmath>
#include <vector>

#include "gyrochip/errors.hpp"
#include "gyrochip/stability.hpp"

using namespace gyrochip;
using namespace gyrochip::stability;
using interferometer::InterferometerConfig;
using interferometer::SequenceParameters;
using noise::NoiseDomain;
using noise::PowerSpectralDensity;

namespace {

const units::AtomSpecies rb = units::species_rb87();

SequenceParameters section_five() {
  SequenceParameters p;
  p.atom_number = 1e5;
  p.launch_velocity_over_recoil = 2.0;
  p.latitude = 48.85 * units::pi / 180.0;
  return p;
}

SequenceParameters mission_hypothesis() {
  SequenceParameters p;
  p.atom_number = 1e5;
  return p;
}

InterferometerConfig small_config() {
  SequenceParameters p;
  p.pulse_duration = 1e-3;
  return InterferometerConfig::from_interrogation_time(rb, p, 0.1);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("projection-noise Allan deviation") {
  const auto c = InterferometerConfig::from_interrogation_time(rb, section_five(), 10.0);
  const double one = projection_allan(c, 10.0);
  CHECK(one == interferometer::shot_noise_sensitivity(c));
  const double coefficient = projection_allan(c, 100.0) * 10.0;
  CHECK(coefficient > 1.9e-9 / 2);
  CHECK(coefficient < 1.9e-9 * 2);
  const double year = projection_allan(c, units::julian_year);
  CHECK(rel(projection_allan(c, 10.0) / year, std::sqrt(units::julian_year / 10.0)) < 1e-12);
  CHECK(year > 3.5e-13 / 2);
  CHECK(year < 3.5e-13 * 2);
  CHECK(rel(projection_allan(c, 400.0), 0.5 * projection_allan(c, 100.0)) < 1e-15);
  CHECK_THROWS_AS(projection_allan(c, 9.99), InvalidAveragingError);
}

TEST_CASE("dead time enters the cycle") {
  auto p = section_five();
  p.dead_time = 5.0;
  const auto c = InterferometerConfig::from_interrogation_time(rb, p, 10.0);
  CHECK_THROWS_AS(projection_allan(c, 12.0), InvalidAveragingError);
  CHECK(rel(projection_allan(c, 150.0), interferometer::shot_noise_sensitivity(c) * std::sqrt(15.0 / 150.0)) <
        1e-15);
}

TEST_CASE("harmonic sum: zero noise and bad inputs") {
  const auto c = small_config();
  const auto zero = dick_sum_allan(PowerSpectralDensity::analytic(NoiseDomain::rotation, 0.0), c, 1.0, 1000);
  CHECK(zero.value == 0.0);
  CHECK(zero.tail_bound == 0.0);
  CHECK_THROWS_AS(dick_sum_allan(PowerSpectralDensity::analytic(NoiseDomain::phase, 1.0), c, 1.0, 10),
                  DomainMismatchError);
  CHECK_THROWS_AS(dick_sum_allan(PowerSpectralDensity::analytic(NoiseDomain::rotation, 1.0), c, 1.0, 0),
                  InvalidInputError);
  CHECK_THROWS_AS(dick_sum_allan(PowerSpectralDensity::analytic(NoiseDomain::rotation, 1.0), c, 0.05, 10),
                  InvalidAveragingError);
}

TEST_CASE("harmonic sum: white noise scales as 1/tau") {
  const auto c = small_config();
  const auto s = PowerSpectralDensity::analytic(NoiseDomain::rotation, 1e-16);
  const double ref = std::pow(dick_sum_allan(s, c, 1.0, 20000).value, 2) * 1.0;
  for (double tau : {10.0, 100.0}) {
    const double v = dick_sum_allan(s, c, tau, 20000).value;
    CHECK(rel(v * v * tau, ref) < 1e-12);
  }
}

TEST_CASE("harmonic sum converges and the tail bound holds") {
  const auto c = small_config();
  const auto s = PowerSpectralDensity::analytic(NoiseDomain::rotation, 1e-16, 1e-17);
  const auto a = dick_sum_allan(s, c, 1.0, 10000);
  const auto b = dick_sum_allan(s, c, 1.0, 100000);
  CHECK(a.converged);
  CHECK(b.converged);
  CHECK(rel(a.value, b.value) < 1e-3);
  CHECK(b.value >= a.value);
  CHECK(b.value * b.value - a.value * a.value <= a.tail_bound * a.tail_bound);
  CHECK(default_harmonic_count(c) >= 15000);
  CHECK(default_harmonic_count(c) <= 15001);
}

TEST_CASE("harmonic sum flags a truncated sum") {
  const auto c = InterferometerConfig::from_interrogation_time(rb, {}, 4.0);
  const auto r = dick_sum_allan(PowerSpectralDensity::analytic(NoiseDomain::rotation, 1e-16), c, 10.0, 1000);
  CHECK_FALSE(r.converged);
  CHECK(r.last_decade_change > 1e-4);
  CHECK(r.value > 0.0);
  CHECK(std::isfinite(r.tail_bound));
  CHECK(default_harmonic_count(c) >= 30000000);
  CHECK(default_harmonic_count(c) <= 30000001);
}

TEST_CASE("white harmonic-sum and projection curves share the -1/2 slope") {
  const auto c = small_config();
  const auto taus = log_grid(1.0, 1e4, 9);
  const auto dick = dick_sum_allan_curve(PowerSpectralDensity::analytic(NoiseDomain::rotation, 1e-16), c, taus,
                                         default_harmonic_count(c));
  const auto proj = projection_allan_curve(c, taus);
  auto slope = [](const AllanCurve& curve) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(curve.points.size());
    for (const auto& p : curve.points) {
      const double x = std::log(p.averaging_time), y = std::log(p.sigma);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  CHECK(std::abs(slope(dick) + 0.5) < 0.005);
  CHECK(std::abs(slope(proj) + 0.5) < 0.005);
  CHECK(dick.converged);
  for (const auto& curve : {dick, proj}) {
    for (const auto& p : curve.points) {
      CHECK(p.sigma > 0.0);
      CHECK(std::isfinite(p.sigma));
    }
  }
  // White-dominated: the coefficient is the same at every tau.
  for (const auto& p : proj.points) CHECK(rel(p.sigma * std::sqrt(p.averaging_time), proj.white_coefficient()) < 1e-12);
}

TEST_CASE("log grid") {
  const auto g = log_grid(1.0, 1000.0, 4);
  CHECK(g.front() == 1.0);
  CHECK(g.back() == 1000.0);
  CHECK(g[1] == doctest::Approx(10.0).epsilon(1e-14));
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), InvalidInputError);
  CHECK_THROWS_AS(log_grid(1.0, 2.0, 1), InvalidInputError);
}

TEST_CASE("allan model names") {
  CHECK(parse_allan_model(allan_model_name(AllanModel::projection)) == AllanModel::projection);
  CHECK(parse_allan_model(allan_model_name(AllanModel::dick_sum)) == AllanModel::dick_sum);
  CHECK_THROWS_AS(parse_allan_model("overlapping"), InvalidInputError);
}

TEST_CASE("required interrogation time for the geodetic goal") {
  const double vr = rb.recoil_velocity();
  const auto r = required_interrogation_time(geodetic_target_sigma(), units::julian_year, 4 * vr, rb,
                                             mission_hypothesis());
  CHECK(r.interrogation_time >= 4.5);
  CHECK(r.interrogation_time <= 18.0);
  CHECK(r.achieved_sigma <= geodetic_target_sigma());
  CHECK(rel(r.guide_radius, 4 * vr * r.interrogation_time / units::pi) < 1e-12);
  MESSAGE("min 2T at 4 v_r: " << r.interrogation_time << " s, R = " << r.guide_radius << " m");
}

TEST_CASE("required interrogation time is self-consistent") {
  const double vr = rb.recoil_velocity();
  const auto p = mission_hypothesis();
  for (double two_t : {0.5, 3.0, 27.0}) {
    auto q = p;
    q.launch_velocity_over_recoil = 3.0;
    const double sigma = projection_allan(InterferometerConfig::from_interrogation_time(rb, q, two_t), 1e5);
    const auto r = required_interrogation_time(sigma, 1e5, 3 * vr, rb, p);
    CHECK(rel(r.interrogation_time, two_t) < 1e-3);
  }
}

TEST_CASE("feasibility boundary is strictly decreasing") {
  const double vr = rb.recoil_velocity();
  std::vector<double> v;
  for (int i = 1; i <= 10; ++i) v.push_back(i * vr);
  for (double tol : {1e-3, 1e-5}) {
    InterrogationSearch s;
    s.relative_tolerance = tol;
    const auto b = feasibility_boundary(geodetic_target_sigma(), units::julian_year, v, rb, mission_hypothesis(), 1, s);
    REQUIRE(b.points.size() == v.size());
    for (std::size_t i = 1; i < b.points.size(); ++i) {
      CHECK(b.points[i].interrogation_time < b.points[i - 1].interrogation_time);
    }
  }
  const std::vector<double> bad{2 * vr, vr};
  CHECK_THROWS_AS(feasibility_boundary(1e-13, units::julian_year, bad, rb, mission_hypothesis()), InvalidInputError);
}

TEST_CASE("unreachable target reports the floor") {
  const double vr = rb.recoil_velocity();
  try {
    required_interrogation_time(1e-20, 1e4, vr, rb, mission_hypothesis());
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.achieved_floor() > 1e-20);
    CHECK(std::isfinite(e.achieved_floor()));
  }
  CHECK_THROWS_AS(required_interrogation_time(-1.0, 1e4, vr, rb, mission_hypothesis()), InvalidInputError);
}

TEST_CASE("phenomenon rates") {
  const auto rates = phenomenon_rates();
  REQUIRE(rates.size() == 3);
  CHECK(rates[0].name == "earth_rotation");
  CHECK(rates[0].rate == 7.29e-5);
  CHECK(rates[0].rate_relative_to_earth == 1.0);
  CHECK(rates[1].rate == doctest::Approx(6.6 * 4.848e-6 / 3.156e7).epsilon(1e-3));
  CHECK(rates[1].rate == doctest::Approx(1.01e-12).epsilon(0.01));
  CHECK(rates[2].rate / rates[1].rate == doctest::Approx(5e-3).epsilon(1e-12));
  for (const auto& r : rates) CHECK(rel(r.rate_relative_to_earth, r.rate / 7.29e-5) < 1e-15);
  CHECK(rel(geodetic_target_sigma(), 0.05 * rates[1].rate) < 1e-15);
}
