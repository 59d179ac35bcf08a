#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gyrochip/interferometer.hpp"
#include "gyrochip/noise.hpp"

namespace gyrochip::stability {

// sigma_Omega(tau_I) = delta_Omega sqrt(T_c / tau_I), T_c the cycle time.
double projection_allan(const interferometer::InterferometerConfig& config, double averaging_time);

struct DickSumResult {
  double value;       // rad/s
  std::size_t m_max;
  double tail_bound;  // rad/s, upper bound on what the omitted harmonics add
  double last_decade_change;  // relative change of the variance over m in (m_max/10, m_max]
  bool converged;     // last_decade_change < 1e-4
};

// Harmonic count large enough for the transfer function's 1/f^2 roll-off to
// settle the sum: ceil(300 T / tau), clamped to [1000, 1e8].
std::size_t default_harmonic_count(const interferometer::InterferometerConfig& config);

// sigma^2 = [(pi/4)(hbar/M) / (v_r v (2T)^2 sin theta)]^2 (4 pi / tau_I)
//           sum_{m=1}^{m_max} (2 k_eff R)^2 / [2 pi m / (2T)]^2 |H(m/T)|^2 S_Omega(m/T)
DickSumResult dick_sum_allan(const noise::PowerSpectralDensity& rotation_psd,
                             const interferometer::InterferometerConfig& config, double averaging_time,
                             std::size_t m_max);

enum class AllanModel { projection, dick_sum };
std::string_view allan_model_name(AllanModel model);
AllanModel parse_allan_model(std::string_view name);

struct AllanPoint {
  double averaging_time;  // s
  double sigma;           // rad/s
};

struct AllanCurve {
  std::vector<AllanPoint> points;
  AllanModel model;
  interferometer::InterferometerConfig config;
  // Dick sum only.
  std::size_t m_max = 0;
  bool converged = true;

  // sigma(tau) sqrt(tau), constant for white-noise-limited curves.
  double white_coefficient() const;
};

// n log-spaced values in [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

AllanCurve projection_allan_curve(const interferometer::InterferometerConfig& config,
                                  std::span<const double> averaging_times);
AllanCurve dick_sum_allan_curve(const noise::PowerSpectralDensity& rotation_psd,
                                const interferometer::InterferometerConfig& config,
                                std::span<const double> averaging_times, std::size_t m_max);

struct InterrogationSearch {
  double lower = 1e-2;               // s
  double upper = 1e3;                // s
  double relative_tolerance = 1e-3;
};

struct RequiredInterrogation {
  double interrogation_time;  // s, smallest 2T meeting the target
  double guide_radius;        // m
  double achieved_sigma;      // rad/s at that 2T
};

// Smallest 2T with projection_allan(config(2T, v_launch), tau_I) <= target, by
// bisection in log(2T). The template supplies everything but 2T and v_launch.
RequiredInterrogation required_interrogation_time(double target_sigma, double integration_time,
                                                  double launch_velocity, const units::AtomSpecies& species,
                                                  const interferometer::SequenceParameters& template_params,
                                                  int n_loops = 1, const InterrogationSearch& search = {});

struct FeasibilityPoint {
  double launch_velocity;  // m/s
  double interrogation_time;  // s, minimum 2T
  double guide_radius;     // m
};

struct FeasibilityBoundary {
  std::vector<FeasibilityPoint> points;
  double target_sigma;
  double integration_time;
};

// Minimum 2T for each launch velocity (m/s, strictly increasing).
FeasibilityBoundary feasibility_boundary(double target_sigma, double integration_time,
                                         std::span<const double> launch_velocities,
                                         const units::AtomSpecies& species,
                                         const interferometer::SequenceParameters& template_params,
                                         int n_loops = 1, const InterrogationSearch& search = {});

struct PhenomenonRate {
  std::string name;
  double rate;                     // rad/s
  double rate_relative_to_earth;   // rate / Omega_E
};

// Earth rotation, geodetic precession (6.6 arcsec/yr) and Lense-Thirring
// frame dragging (33 mas/yr) at a 642 km polar orbit.
std::vector<PhenomenonRate> phenomenon_rates();

// 5% of the geodetic precession rate, the mission resolution goal.
double geodetic_target_sigma();

}  // namespace gyrochip::stability
