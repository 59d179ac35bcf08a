#include "doctest.h"

#include <cmath>
#include <random>

#include "gyrochip/errors.hpp"
#include "gyrochip/interferometer.hpp"
#include "gyrochip/quadrature.hpp"

using namespace gyrochip;
using namespace gyrochip::interferometer;

namespace {

const units::AtomSpecies rb = units::species_rb87();

InterferometerConfig make(double two_t, SequenceParameters p = {}) {
  return InterferometerConfig::from_interrogation_time(rb, p, two_t);
}

SequenceParameters paris() {
  SequenceParameters p;
  p.latitude = 48.85 * units::pi / 180.0;
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("acceleration phase") {
  const double k_eff = 2 * rb.wavevector();
  CHECK(acceleration_phase(k_eff, 0.0, 0.1) == 0.0);
  CHECK(rel(acceleration_phase(k_eff, 9.81, 0.1), 2 * 8.0529e6 * 9.81 * 0.01) < 1e-4);
  CHECK(rel(acceleration_phase(k_eff, 9.81, 0.2), 4 * acceleration_phase(k_eff, 9.81, 0.1)) < 1e-15);
  CHECK(acceleration_phase({0, 0, k_eff}, {1.0, 2.0, 9.81}, 0.1) == acceleration_phase(k_eff, 9.81, 0.1));
}

TEST_CASE("free-space rotation phase") {
  const double k_eff = 2 * rb.wavevector();
  CHECK(rotation_phase_free(k_eff, 0.0, 1.0, 1.0) == 0.0);
  CHECK(rotation_phase_free(k_eff, 1e-3, 0.0, 1.0) == 0.0);
  const double v = rb.recoil_velocity();
  CHECK(rotation_phase_free(k_eff, -units::earth_rotation_rate, v, 1.0) ==
        -rotation_phase_free(k_eff, units::earth_rotation_rate, v, 1.0));
  const double expected = 2.0 * (2.0 * (2.0 * units::pi / 780.241e-9)) * 7.29e-5 * v * 1.0;
  CHECK(rel(rotation_phase_free(k_eff, 7.29e-5, v, 1.0), expected) < 1e-14);
}

TEST_CASE("Sagnac phase forms agree") {
  const auto c = make(3.0);
  CHECK(sagnac_phase(c, 0.0) == 0.0);
  const double omega = 1e-6;
  CHECK(rel(sagnac_phase(c, omega), sagnac_phase_time_form(c, omega)) < 1e-12);
  const double area = units::pi * c.guide_radius() * c.guide_radius();
  CHECK(rel(sagnac_phase(c, omega), sagnac_phase_area_form(rb, area, omega)) < 1e-12);
  CHECK(rel(scale_factor(c) * omega, sagnac_phase(c, omega)) < 1e-15);
  CHECK(sagnac_phase(c, -omega) == -sagnac_phase(c, omega));
}

TEST_CASE("a multi-loop guide matches a single loop of the same interrogation time") {
  const auto single = InterferometerConfig::from_geometry(rb, {}, 6e-3, 1);
  const auto multi = InterferometerConfig::from_geometry(rb, {}, 600e-6, 10);
  CHECK(rel(single.interrogation_time(), multi.interrogation_time()) < 1e-12);
  CHECK(rel(sagnac_phase(single, 1e-6), sagnac_phase(multi, 1e-6)) < 1e-12);
  CHECK(rel(shot_noise_sensitivity(single), shot_noise_sensitivity(multi)) < 1e-12);
  CHECK(rel(single.interrogation_time(), units::pi * 6e-3 / rb.recoil_velocity()) < 1e-12);
}

TEST_CASE("fringe model") {
  SequenceParameters p;
  CHECK(fringe_population(make(1.0, p), 0.0).expected_population == doctest::Approx(p.atom_number / 2));
  CHECK(fringe_population(make(1.0, p), units::pi / 2).expected_population == doctest::Approx(p.atom_number));
  p.contrast = 0.8;
  CHECK(fringe_population(make(1.0, p), 0.0).expected_population == doctest::Approx(5000.0));
  CHECK(fringe_population(make(1.0, p), 0.0).operating_phase_offset == units::pi / 2);
}

TEST_CASE("fringe population stays within [0, N]") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> phase(-50.0, 50.0), eta(1e-3, 1.0);
  for (int i = 0; i < 2000; ++i) {
    SequenceParameters p;
    p.contrast = eta(rng);
    const auto r = fringe_population(make(1.0, p), phase(rng));
    CHECK(r.expected_population >= 0.0);
    CHECK(r.expected_population <= p.atom_number);
  }
}

TEST_CASE("shot-noise sensitivity") {
  const auto c = make(3.0, paris());
  CHECK(shot_noise_sensitivity(c) == doctest::Approx(3.4e-8).epsilon(0.1));
  auto p = paris();
  p.atom_number *= 4;
  CHECK(rel(shot_noise_sensitivity(make(3.0, p)), 0.5 * shot_noise_sensitivity(c)) < 1e-14);
  CHECK(rel(shot_noise_sensitivity(make(6.0, paris())), 0.25 * shot_noise_sensitivity(c)) < 1e-14);
  p = paris();
  p.dead_time = 1.0;
  CHECK(rel(sensitivity_per_root_hz(make(3.0, p)), shot_noise_sensitivity(c) * 2.0) < 1e-14);
}

TEST_CASE("sensitivity is invariant under (R, n_loops) at fixed 2T") {
  for (int n : {1, 2, 5, 10}) {
    const auto c = InterferometerConfig::from_interrogation_time(rb, paris(), 3.0, n);
    CHECK(rel(shot_noise_sensitivity(c), shot_noise_sensitivity(make(3.0, paris()))) < 1e-14);
  }
}

TEST_CASE("rotation in the interferometer plane is degenerate") {
  SequenceParameters p;
  p.latitude = 0.0;
  CHECK_THROWS_AS(shot_noise_sensitivity(make(1.0, p)), DegenerateOrientationError);
}

TEST_CASE("config validation") {
  SequenceParameters p;
  p.pulse_duration = 2.0;
  CHECK_THROWS_AS(make(2.0, p), InvalidInputError);
  p = {};
  p.contrast = 0.0;
  CHECK_THROWS_AS(make(2.0, p), InvalidInputError);
  p = {};
  p.squeezing = 1.5;
  CHECK_THROWS_AS(make(2.0, p), InvalidInputError);
  CHECK_THROWS_AS(InterferometerConfig::from_geometry(rb, {}, 1e-3, 0), InvalidInputError);
  CHECK_THROWS_AS(make(-1.0), InvalidInputError);
}

TEST_CASE("sensitivity function and its derivative") {
  SequenceParameters p;
  p.pulse_duration = 1e-3;
  const auto c = make(0.1, p);
  const double T = c.half_interrogation_time(), tau = p.pulse_duration;
  CHECK(sensitivity_function_g(0.0, c) == 1.0);
  CHECK(sensitivity_function_g(-T, c) == 0.0);
  CHECK(sensitivity_function_g(-T + tau, c) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sensitivity_function_g(T, c) == 0.0);
  CHECK(sensitivity_function_g(2 * T, c) == 0.0);
  const double d = 1e-7 * tau;
  for (double t : {-T + 0.1 * tau, -T + 0.5 * tau, T - 0.5 * tau, T - 0.9 * tau}) {
    const double deriv = (sensitivity_function_g(t + d, c) - sensitivity_function_g(t - d, c)) / (2 * d);
    CHECK(std::abs(deriv - transfer_h(t, c)) * tau < 1e-6);
  }
}

TEST_CASE("time-domain transfer function") {
  SequenceParameters p;
  p.pulse_duration = 1e-3;
  const auto c = make(0.1, p);
  const double T = c.half_interrogation_time(), tau = p.pulse_duration;
  CHECK(transfer_h(-T + tau / 2, c) == 1.0 / tau);
  CHECK(transfer_h(T - tau / 2, c) == -1.0 / tau);
  CHECK(transfer_h(0.0, c) == 0.0);
  auto h = [&](double t) { return transfer_h(t, c); };
  const std::vector<double> br{-T - 1e-3, -T, -T + tau, T - tau, T, T + 1e-3};
  CHECK(std::abs(quadrature::integrate(h, br).value) < 1e-12);
}

TEST_CASE("frequency-domain transfer function") {
  const auto c = make(4.0);
  CHECK(rel(high_pass_corner(c), 15.9e3) < 1e-3);
  CHECK(rel(high_pass_corner(c), 1.0 / (units::pi * 20e-6)) < 1e-15);
  CHECK(low_pass_corner(c) == doctest::Approx(0.0796).epsilon(1e-3));
  CHECK(transfer_H(0.0, c) == std::complex<double>(0.0, 0.0));
  const double hmax = 2.0;  // |H| <= 2 |sin(pi f tau)| / (pi f tau) <= 2
  for (int n : {1, 2, 7}) {
    CHECK(std::abs(transfer_H(n / 20e-6, c)) < 1e-12 * hmax);
    CHECK(std::abs(transfer_H(n / (4.0 - 20e-6), c)) < 1e-12 * hmax);
  }
  // DC rejection: |H| ~ 2 pi f (2T - tau) as f -> 0.
  CHECK(rel(std::abs(transfer_H(1e-6, c)), 2 * units::pi * 1e-6 * (4.0 - 20e-6)) < 1e-6);
  const double f = 123.456;
  CHECK(rel(std::norm(transfer_H(f, c)), transfer_H_squared(f, 20e-6, 4.0)) < 1e-14);
  CHECK_THROWS_AS(transfer_H(-1.0, c), InvalidInputError);
}

TEST_CASE("|H|^2 equals omega^2 |G|^2 with G the Fourier transform of g") {
  SequenceParameters p;
  p.pulse_duration = 1e-3;
  const auto c = make(0.02, p);
  const double T = c.half_interrogation_time(), tau = p.pulse_duration;
  for (double f : {3.3, 17.0, 141.0, 333.3, 777.0, 2345.0}) {
    const double w = 2 * units::pi * f;
    // g is even, so G(f) = 2 int_0^T g(t) cos(wt) dt.
    auto integrand = [&](double t) { return 2.0 * sensitivity_function_g(t, c) * std::cos(w * t); };
    std::vector<double> br{0.0};
    for (int k = 1; k * 0.25 / f < T; ++k) br.push_back(k * 0.25 / f);
    br.push_back(T - tau);
    br.push_back(T);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end(), [](double a, double b) { return b - a < 1e-15; }), br.end());
    quadrature::Options o;
    o.relative_tolerance = 1e-12;
    o.absolute_tolerance = 1e-16;
    const double G = quadrature::integrate(integrand, br, o).value;
    const double h2 = transfer_H_squared(f, tau, 2 * T);
    if (h2 < 1e-6) continue;
    CHECK(rel(w * w * G * G, h2) < 1e-3);
  }
}
