#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gyrochip/magnetostatics.hpp"
#include "gyrochip/units.hpp"

namespace gyrochip::guide {

struct GuidePosition {
  double rho;  // m
  double z;    // m
};

// Region searched for the guide: rho in [rho_min, rho_max], z in (z_floor, z_max].
struct SearchBox {
  double rho_min;
  double rho_max;
  double z_floor;
  double z_max;
};

// rho in [0.5 R, 1.5 R], z in (h, h + 10 s] with R the central radius, s the
// wire spacing and h the chip (loop) plane.
SearchBox search_box(const magnetostatics::GuideGeometry& geometry);

inline constexpr std::size_t coarse_grid_points = 201;
inline constexpr std::size_t depth_grid_points = 1001;
inline constexpr double position_tolerance = 1e-9;  // m
inline constexpr double hessian_step = 1e-8;        // m

// Minimizer of |B| in the search box: coarse scan then Nelder-Mead.
// Throws NoGuideError when the minimum is not interior to the box.
GuidePosition find_guide_minimum(const magnetostatics::GuideGeometry& geometry);

struct GuideCharacterization {
  GuidePosition min_position;
  double b_min;              // T, |B| of the static field at the minimum
  double gradient;           // T/m, steepest transverse slope of |B|
  double offset_b0;          // T
  double radial_frequency;   // Hz
  double depth_field;        // T, escape barrier of |B| minus b_min
  double depth_temperature;  // K
  double hessian[2][2];      // J/m^2, of U = mu sqrt(|B|^2 + B0^2), (rho, z) order
  double hessian_asymmetry;  // |d2U/drho dz - d2U/dz drho| / lambda_max
  GuidePosition escape_point;
};

GuideCharacterization characterize_guide(const magnetostatics::GuideGeometry& geometry,
                                         const units::AtomSpecies& species, double offset_b0);

struct FieldPoint {
  double b_rho;
  double b_z;
};
using FieldFunction = std::function<FieldPoint(double rho, double z)>;

struct PotentialCurvature {
  double hessian[2][2];
  double lambda_max;
  double radial_frequency;  // Hz
  double asymmetry;
};

// Harmonic curvature of U = mu sqrt(|B|^2 + B0^2) at `at` by central
// differences with step hessian_step.
PotentialCurvature potential_curvature(const FieldFunction& field, GuidePosition at,
                                       const units::AtomSpecies& species, double offset_b0);

struct PotentialMap {
  std::vector<double> rho;
  std::vector<double> z;
  std::vector<double> energy;  // J, row-major with rho varying slowest
};

PotentialMap potential_map(const magnetostatics::GuideGeometry& geometry, const units::AtomSpecies& species,
                           double offset_b0, const SearchBox& window, std::size_t n_rho, std::size_t n_z);

// Wire-edge corrugation along the guide, as a relative current deviation f(s)
// on a uniform periodic arc-length grid.
struct CorrugationModel {
  double amplitude;           // rms of f
  double correlation_length;  // m
  std::uint64_t seed;
  double arc_step;            // m
  double kernel_width;        // m, guide height; width of the geometry low-pass
  std::vector<double> profile;

  // Gaussian-correlated zero-mean profile with rms `amplitude`.
  static CorrugationModel generate(double amplitude, double correlation_length, std::uint64_t seed,
                                   double circumference, std::size_t n_points, double kernel_width);
};

// First-order roughness potential V(s) = mu c I g(s), where g is f' smoothed by
// a Gaussian of width kernel_width and c = 1 T m / A.
std::vector<double> roughness_potential(const CorrugationModel& corrugation, double current,
                                        const units::AtomSpecies& species);

struct ModulatedRoughness {
  std::vector<double> potential;  // J, period-averaged V(s)
  double mean_current;            // A
  double peak_current;            // A
  bool zero_mean;                 // |mean| <= 1e-10 peak
};

// Period average of roughness_potential over a sampled waveform (uniform
// samples spanning one period). A nonzero-mean waveform is accepted and
// leaves a proportional residual.
ModulatedRoughness modulated_roughness_average(const CorrugationModel& corrugation,
                                               std::span<const double> current_waveform,
                                               const units::AtomSpecies& species);

std::vector<double> sine_waveform(double amplitude, std::size_t samples, double dc_offset = 0.0);
std::vector<double> square_waveform(double amplitude, std::size_t samples);

}  // namespace gyrochip::guide
