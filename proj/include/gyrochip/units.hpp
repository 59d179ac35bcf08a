#pragma once

#include <numbers>
#include <string>
#include <string_view>

namespace gyrochip::units {

// CODATA 2018 values, SI.
inline constexpr double pi = std::numbers::pi;
inline constexpr double planck = 6.62607015e-34;            // J s
inline constexpr double hbar = planck / (2.0 * pi);         // J s
inline constexpr double bohr_magneton = 9.2740100783e-24;   // J/T
inline constexpr double vacuum_permeability = 1.25663706212e-6;  // T m/A
inline constexpr double boltzmann = 1.380649e-23;           // J/K

inline constexpr double earth_rotation_rate = 7.29e-5;      // rad/s
inline constexpr double julian_year = 3.156e7;              // s
inline constexpr double arcsecond = pi / (180.0 * 3600.0);  // rad
inline constexpr double milliarcsecond = arcsecond * 1e-3;  // rad

inline constexpr double deg_per_rad = 180.0 / pi;
// rad/s -> deg/h
inline constexpr double deg_per_hour_per_rad_per_s = deg_per_rad * 3600.0;
// rad s^-1 Hz^-1/2 -> deg h^-1/2 (sqrt(3600 s/h) = 60)
inline constexpr double deg_root_hour_per_rad_root_s = deg_per_rad * 60.0;

class AtomSpecies {
 public:
  AtomSpecies(std::string name, double mass, double wavelength, double magnetic_moment);

  const std::string& name() const noexcept { return name_; }
  double mass() const noexcept { return mass_; }
  double wavelength() const noexcept { return wavelength_; }
  double wavevector() const noexcept { return wavevector_; }
  double recoil_velocity() const noexcept { return recoil_velocity_; }
  double magnetic_moment() const noexcept { return magnetic_moment_; }
  // M / hbar, the ratio that sets the Sagnac scale factor.
  double mass_over_hbar() const noexcept { return mass_ / hbar; }

 private:
  std::string name_;
  double mass_;
  double wavelength_;
  double wavevector_;
  double recoil_velocity_;
  double magnetic_moment_;
};

// 87Rb, D2 line; the guided state is |F=2, m_F=2>, so mu = g_F m_F mu_B = mu_B.
AtomSpecies species_rb87();

enum class RotationUnit {
  rad_per_s,
  deg_per_hour,
  // Sensitivity in rad s^-1 Hz^-1/2 expressed as angular random walk.
  deg_per_root_hour,
};

RotationUnit parse_rotation_unit(std::string_view tag);
std::string_view rotation_unit_tag(RotationUnit unit);

// Converts a rate given in rad/s (or rad s^-1 Hz^-1/2 for ARW) to `target`.
double convert_rotation(double value_rad_s, RotationUnit target);
// Inverse of convert_rotation.
double rotation_to_si(double value, RotationUnit source);

// Angular rate with SI storage; the other units exist only as views.
class RotationRate {
 public:
  constexpr RotationRate() = default;
  static RotationRate from(double value, RotationUnit unit) {
    return RotationRate(rotation_to_si(value, unit));
  }
  static constexpr RotationRate rad_per_s(double v) { return RotationRate(v); }

  constexpr double si() const noexcept { return value_; }
  double in(RotationUnit unit) const { return convert_rotation(value_, unit); }

 private:
  constexpr explicit RotationRate(double v) : value_(v) {}
  double value_ = 0.0;
};

}  // namespace gyrochip::units
