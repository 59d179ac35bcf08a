#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gyrochip::magnetostatics {

// Filamentary circular loop centred on the z axis. Positive current flows
// counter-clockwise seen from +z. The chip surface is z = 0.
struct WireLoop {
  double radius;   // m
  double current;  // A
  double height;   // m
};

// Concentric, coplanar loops with strictly increasing radii.
class GuideGeometry {
 public:
  GuideGeometry(std::vector<WireLoop> loops, std::string label = {});

  const std::vector<WireLoop>& loops() const noexcept { return loops_; }
  const std::string& label() const noexcept { return label_; }

  // Every current multiplied by `factor`.
  GuideGeometry scaled(double factor) const;
  // Radius of the middle loop.
  double central_radius() const;
  // Mean centre-to-centre spacing of adjacent loops (radius / 10 for a single loop).
  double wire_spacing() const;

 private:
  std::vector<WireLoop> loops_;
  std::string label_;
};

// Three-wire ring guide: radii 487/500/513 um, currents -123/+121/-123 mA.
GuideGeometry reference_guide_geometry();

struct FieldVector {
  double b_rho;  // T
  double b_z;    // T
  double rho;    // m, evaluation point
  double z;      // m
  double modulus() const { return std::hypot(b_rho, b_z); }
};

// Closed-form field (complete elliptic integrals via AGM).
FieldVector loop_field(const WireLoop& loop, double rho, double z);

// Biot-Savart sum over an inscribed polygon of n_segments straight pieces;
// an independent check on loop_field with O(1/n^2) error.
FieldVector loop_field_oracle(const WireLoop& loop, double rho, double z, std::size_t n_segments);

FieldVector total_field(const GuideGeometry& geometry, double rho, double z);

struct FieldSamples {
  std::vector<double> b_rho;
  std::vector<double> b_z;
};

// Superposed field at many points through the active SIMD kernel. Results are
// bitwise identical to total_field() at each point.
FieldSamples total_field_batch(const GuideGeometry& geometry, std::span<const double> rho,
                               std::span<const double> z);

// |B| at many points, optionally regularized by a longitudinal offset:
// sqrt(B_rho^2 + B_z^2 + offset^2).
std::vector<double> field_modulus_batch(const GuideGeometry& geometry, std::span<const double> rho,
                                        std::span<const double> z, double offset = 0.0);

}  // namespace gyrochip::magnetostatics
