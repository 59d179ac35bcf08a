#include "gyrochip/units.hpp"

#include <cmath>

#include "gyrochip/errors.hpp"

namespace gyrochip::units {

AtomSpecies::AtomSpecies(std::string name, double mass, double wavelength,
                         double magnetic_moment)
    : name_(std::move(name)),
      mass_(mass),
      wavelength_(wavelength),
      magnetic_moment_(magnetic_moment) {
  if (!(mass > 0.0) || !(wavelength > 0.0) || !(magnetic_moment > 0.0) ||
      !std::isfinite(mass) || !std::isfinite(wavelength) || !std::isfinite(magnetic_moment)) {
    throw InvalidInputError("atom species '" + name_ + "': mass, wavelength and magnetic moment must be positive");
  }
  wavevector_ = 2.0 * pi / wavelength_;
  recoil_velocity_ = hbar * wavevector_ / mass_;
}

AtomSpecies species_rb87() {
  return AtomSpecies("Rb87", 1.44316e-25, 780.241e-9, bohr_magneton);
}

RotationUnit parse_rotation_unit(std::string_view tag) {
  if (tag == "rad/s" || tag == "rad_s") return RotationUnit::rad_per_s;
  if (tag == "deg/h" || tag == "deg_h") return RotationUnit::deg_per_hour;
  if (tag == "deg/sqrt(h)" || tag == "deg_sqrt_h" || tag == "deg_root_h") return RotationUnit::deg_per_root_hour;
  throw InvalidInputError("unknown rotation unit '" + std::string(tag) + "'");
}

std::string_view rotation_unit_tag(RotationUnit unit) {
  switch (unit) {
    case RotationUnit::rad_per_s: return "rad/s";
    case RotationUnit::deg_per_hour: return "deg/h";
    case RotationUnit::deg_per_root_hour: return "deg/sqrt(h)";
  }
  return "?";
}

namespace {
double factor(RotationUnit unit) {
  switch (unit) {
    case RotationUnit::rad_per_s: return 1.0;
    case RotationUnit::deg_per_hour: return deg_per_hour_per_rad_per_s;
    case RotationUnit::deg_per_root_hour: return deg_root_hour_per_rad_root_s;
  }
  throw InvalidInputError("unknown rotation unit");
}
}  // namespace

double convert_rotation(double value_rad_s, RotationUnit target) {
  if (!std::isfinite(value_rad_s)) throw InvalidInputError("rotation value must be finite");
  return value_rad_s * factor(target);
}

double rotation_to_si(double value, RotationUnit source) {
  if (!std::isfinite(value)) throw InvalidInputError("rotation value must be finite");
  return value / factor(source);
}

}  // namespace gyrochip::units
