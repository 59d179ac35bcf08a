#include "gyrochip/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gyrochip/errors.hpp"
#include "gyrochip/math.hpp"

namespace gyrochip::interferometer {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidInputError("interferometer config: " + what);
}

double projected_sine(const InterferometerConfig& config) {
  const double s = std::sin(config.latitude());
  if (std::abs(s) < 1e-15) {
    throw DegenerateOrientationError("sin(latitude) = 0: the rotation axis lies in the interferometer plane");
  }
  return s;
}

}  // namespace

InterferometerConfig::InterferometerConfig(const units::AtomSpecies& species, const SequenceParameters& params,
                                           double interrogation_time, double guide_radius, int n_loops)
    : species_(species),
      params_(params),
      interrogation_time_(interrogation_time),
      guide_radius_(guide_radius),
      n_loops_(n_loops),
      launch_velocity_(params.launch_velocity_over_recoil * species.recoil_velocity()) {
  require(params.pulse_duration > 0.0 && std::isfinite(params.pulse_duration), "pulse duration must be positive");
  require(interrogation_time > 0.0 && std::isfinite(interrogation_time), "interrogation time must be positive");
  require(params.pulse_duration < interrogation_time, "pulse duration must be shorter than the interrogation time");
  require(guide_radius > 0.0 && std::isfinite(guide_radius), "guide radius must be positive");
  require(n_loops >= 1, "loop count must be >= 1");
  require(params.atom_number > 0.0 && std::isfinite(params.atom_number), "atom number must be positive");
  require(params.contrast > 0.0 && params.contrast <= 1.0, "contrast must lie in (0, 1]");
  require(params.squeezing > 0.0 && params.squeezing <= 1.0, "squeezing factor must lie in (0, 1]");
  require(params.dead_time >= 0.0 && std::isfinite(params.dead_time), "dead time must be >= 0");
  require(std::isfinite(params.latitude), "latitude must be finite");
  require(params.launch_velocity_over_recoil > 0.0 && std::isfinite(params.launch_velocity_over_recoil),
          "launch velocity must be positive");
}

InterferometerConfig InterferometerConfig::from_interrogation_time(const units::AtomSpecies& species,
                                                                   const SequenceParameters& params,
                                                                   double interrogation_time, int n_loops) {
  const double v = params.launch_velocity_over_recoil * species.recoil_velocity();
  require(n_loops >= 1, "loop count must be >= 1");
  const double radius = v * interrogation_time / (n_loops * units::pi);
  return InterferometerConfig(species, params, interrogation_time, radius, n_loops);
}

InterferometerConfig InterferometerConfig::from_geometry(const units::AtomSpecies& species,
                                                         const SequenceParameters& params, double guide_radius,
                                                         int n_loops) {
  const double v = params.launch_velocity_over_recoil * species.recoil_velocity();
  const double two_t = n_loops * units::pi * guide_radius / v;
  return InterferometerConfig(species, params, two_t, guide_radius, n_loops);
}

double acceleration_phase(double k_eff, double acceleration, double half_time) {
  return k_eff * acceleration * half_time * half_time;
}

double acceleration_phase(const std::array<double, 3>& k_eff, const std::array<double, 3>& acceleration,
                          double half_time) {
  const double dot = k_eff[0] * acceleration[0] + k_eff[1] * acceleration[1] + k_eff[2] * acceleration[2];
  return dot * half_time * half_time;
}

double rotation_phase_free(double k_eff, double rotation_rate, double velocity, double half_time) {
  return 2.0 * k_eff * rotation_rate * velocity * half_time * half_time;
}

double sagnac_phase(const InterferometerConfig& config, double rotation_rate) {
  const double omega_proj = rotation_rate * std::sin(config.latitude());
  return 4.0 * config.species().wavevector() * config.effective_radius() * omega_proj * config.interrogation_time();
}

double sagnac_phase_time_form(const InterferometerConfig& config, double rotation_rate) {
  const auto& sp = config.species();
  const double two_t = config.interrogation_time();
  return (4.0 / units::pi) * sp.mass_over_hbar() * sp.recoil_velocity() * config.launch_velocity() * two_t * two_t *
         rotation_rate * std::sin(config.latitude());
}

double sagnac_phase_area_form(const units::AtomSpecies& species, double area, double rotation_rate) {
  return 2.0 * 2.0 * species.mass_over_hbar() * area * rotation_rate;
}

double scale_factor(const InterferometerConfig& config) {
  return 4.0 * config.species().wavevector() * config.effective_radius() * std::sin(config.latitude()) *
         config.interrogation_time();
}

FringeReadout fringe_population(const InterferometerConfig& config, double phase) {
  const double n = config.atom_number();
  const double p = 0.5 * n * (1.0 - config.contrast() * std::cos(phase + 0.5 * units::pi));
  return {std::clamp(p, 0.0, n), 0.5 * units::pi};
}

double shot_noise_sensitivity(const InterferometerConfig& config) {
  const auto& sp = config.species();
  const double two_t = config.interrogation_time();
  const double s = projected_sine(config);
  return config.squeezing() * units::pi /
         (2.0 * config.contrast() * std::sqrt(2.0 * config.atom_number()) * sp.mass_over_hbar() *
          sp.recoil_velocity() * config.launch_velocity() * two_t * two_t * std::abs(s));
}

double sensitivity_per_root_hz(const InterferometerConfig& config) {
  return shot_noise_sensitivity(config) * std::sqrt(config.cycle_time());
}

double sensitivity_function_g(double t, const InterferometerConfig& config) {
  const double half = config.half_interrogation_time();
  const double tau = config.pulse_duration();
  if (t < -half || t > half) return 0.0;
  if (t <= -half + tau) return (t + half) / tau;
  if (t >= half - tau) return (half - t) / tau;
  return 1.0;
}

double transfer_h(double t, const InterferometerConfig& config) {
  const double half = config.half_interrogation_time();
  const double tau = config.pulse_duration();
  if (t >= -half && t <= -half + tau) return 1.0 / tau;
  if (t >= half - tau && t <= half) return -1.0 / tau;
  return 0.0;
}

std::complex<double> transfer_H(double frequency, const InterferometerConfig& config) {
  if (!(frequency >= 0.0)) throw InvalidInputError("transfer_H: frequency must be >= 0");
  if (frequency == 0.0) return {0.0, 0.0};
  const double tau = config.pulse_duration();
  const double x = frequency * tau;
  const double mag = 2.0 / (units::pi * x) * math::sin_pi(x) *
                     math::sin_pi(frequency * (config.interrogation_time() - tau));
  return {0.0, -mag};
}

double transfer_H_squared(double frequency, double pulse_duration, double interrogation_time) {
  if (frequency == 0.0) return 0.0;
  const double x = frequency * pulse_duration;
  const double a = 2.0 / (units::pi * x) * math::sin_pi(x);
  const double b = math::sin_pi(frequency * (interrogation_time - pulse_duration));
  return a * a * b * b;
}

double high_pass_corner(const InterferometerConfig& config) {
  return 1.0 / (units::pi * config.pulse_duration());
}

double low_pass_corner(const InterferometerConfig& config) {
  return 1.0 / (units::pi * (config.interrogation_time() - config.pulse_duration()));
}

}  // namespace gyrochip::interferometer
