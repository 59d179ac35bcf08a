#pragma once

#include <array>
#include <complex>

#include "gyrochip/units.hpp"

namespace gyrochip::interferometer {

// Everything except the (2T, R, n_loops) triple, which the factories fill in.
struct SequenceParameters {
  double pulse_duration = 20e-6;          // tau, s
  double atom_number = 1e4;               // N
  double contrast = 1.0;                  // eta in (0, 1]
  double latitude = units::pi / 2.0;      // rad; sin(latitude) projects Omega
  double squeezing = 1.0;                 // xi in (0, 1]
  double dead_time = 0.0;                 // s
  double launch_velocity_over_recoil = 1.0;
};

// Two-pulse guided Sagnac interferometer. The guide radius and interrogation
// time are tied by 2T = n_loops pi R / v_launch.
class InterferometerConfig {
 public:
  static InterferometerConfig from_interrogation_time(const units::AtomSpecies& species,
                                                      const SequenceParameters& params,
                                                      double interrogation_time, int n_loops = 1);
  static InterferometerConfig from_geometry(const units::AtomSpecies& species, const SequenceParameters& params,
                                            double guide_radius, int n_loops = 1);

  const units::AtomSpecies& species() const noexcept { return species_; }
  const SequenceParameters& parameters() const noexcept { return params_; }
  double pulse_duration() const noexcept { return params_.pulse_duration; }
  double interrogation_time() const noexcept { return interrogation_time_; }  // 2T
  double half_interrogation_time() const noexcept { return 0.5 * interrogation_time_; }  // T
  double guide_radius() const noexcept { return guide_radius_; }
  int n_loops() const noexcept { return n_loops_; }
  double atom_number() const noexcept { return params_.atom_number; }
  double contrast() const noexcept { return params_.contrast; }
  double latitude() const noexcept { return params_.latitude; }
  double squeezing() const noexcept { return params_.squeezing; }
  double dead_time() const noexcept { return params_.dead_time; }
  double launch_velocity() const noexcept { return launch_velocity_; }
  double effective_wavevector() const noexcept { return 2.0 * species_.wavevector(); }
  // Unrolled path radius n_loops * R entering the scale factor.
  double effective_radius() const noexcept { return n_loops_ * guide_radius_; }
  double cycle_time() const noexcept { return interrogation_time_ + params_.dead_time; }

 private:
  InterferometerConfig(const units::AtomSpecies& species, const SequenceParameters& params,
                       double interrogation_time, double guide_radius, int n_loops);

  units::AtomSpecies species_;
  SequenceParameters params_;
  double interrogation_time_;
  double guide_radius_;
  int n_loops_;
  double launch_velocity_;
};

// Phase k_eff a T^2 of a free-fall interferometer under acceleration.
double acceleration_phase(double k_eff, double acceleration, double half_time);
double acceleration_phase(const std::array<double, 3>& k_eff, const std::array<double, 3>& acceleration,
                          double half_time);

// 2 k_eff Omega v T^2 for orthogonal Omega and v.
double rotation_phase_free(double k_eff, double rotation_rate, double velocity, double half_time);

// 4 k (n R) Omega sin(latitude) (2T).
double sagnac_phase(const InterferometerConfig& config, double rotation_rate);
// (4/pi)(M/hbar) v_r v_launch (2T)^2 Omega sin(latitude): same phase written
// through the interrogation time only.
double sagnac_phase_time_form(const InterferometerConfig& config, double rotation_rate);
// 2 * 2 (M/hbar) A Omega for an enclosed area A.
double sagnac_phase_area_form(const units::AtomSpecies& species, double area, double rotation_rate);
// dPhi/dOmega.
double scale_factor(const InterferometerConfig& config);

struct FringeReadout {
  double expected_population;     // atoms at the |p=0> port
  double operating_phase_offset;  // rad
};

// (N/2)[1 - eta cos(Phi + pi/2)], mid-fringe bias.
FringeReadout fringe_population(const InterferometerConfig& config, double phase);

// Projection-noise-limited rotation resolution per shot, rad/s.
double shot_noise_sensitivity(const InterferometerConfig& config);
// Per-shot resolution times sqrt(cycle time): rad s^-1 Hz^-1/2.
double sensitivity_per_root_hz(const InterferometerConfig& config);

// Sensitivity function: linear ramps over each pulse, 1 in between.
double sensitivity_function_g(double t, const InterferometerConfig& config);
// Time-domain transfer function: +1/tau over the first pulse, -1/tau over the last.
double transfer_h(double t, const InterferometerConfig& config);
// H(f) = -(2i/(pi f tau)) sin(pi f tau) sin(pi f (2T - tau)); H(0) = 0.
std::complex<double> transfer_H(double frequency, const InterferometerConfig& config);
double transfer_H_squared(double frequency, double pulse_duration, double interrogation_time);

double high_pass_corner(const InterferometerConfig& config);  // 1/(pi tau)
double low_pass_corner(const InterferometerConfig& config);   // 1/(pi (2T - tau))

}  // namespace gyrochip::interferometer
