#include "gyrochip/magnetostatics.hpp"

#include <array>
#include <sstream>

#include "gyrochip/errors.hpp"
#include "gyrochip/simd/field_kernels.hpp"
#include "gyrochip/units.hpp"

namespace gyrochip::magnetostatics {

namespace {

simd::LoopParams params(const WireLoop& loop) { return {loop.radius, loop.current, loop.height}; }

void check_loop(const WireLoop& loop) {
  if (!(loop.radius > 0.0) || !std::isfinite(loop.radius)) {
    throw InvalidInputError("wire loop radius must be positive and finite");
  }
  if (!std::isfinite(loop.current) || !std::isfinite(loop.height)) {
    throw InvalidInputError("wire loop current and height must be finite");
  }
}

void check_point(double rho, double z) {
  if (!(rho >= 0.0) || !std::isfinite(rho) || !std::isfinite(z)) {
    throw InvalidInputError("field point must have finite rho >= 0 and finite z");
  }
}

std::string describe_point(double rho, double z) {
  std::ostringstream os;
  os.precision(17);
  os << "(rho=" << rho << " m, z=" << z << " m)";
  return os.str();
}

using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Compensated running sum.
struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace

GuideGeometry::GuideGeometry(std::vector<WireLoop> loops, std::string label)
    : loops_(std::move(loops)), label_(std::move(label)) {
  if (loops_.empty()) throw InvalidInputError("guide geometry needs at least one loop");
  for (std::size_t i = 0; i < loops_.size(); ++i) {
    check_loop(loops_[i]);
    if (i > 0) {
      if (!(loops_[i].radius > loops_[i - 1].radius)) {
        throw InvalidInputError("guide geometry: loop radii must be strictly increasing");
      }
      if (loops_[i].height != loops_[0].height) {
        throw InvalidInputError("guide geometry: all loops must share the same height");
      }
    }
  }
}

GuideGeometry GuideGeometry::scaled(double factor) const {
  auto loops = loops_;
  for (auto& l : loops) l.current *= factor;
  return GuideGeometry(std::move(loops), label_);
}

double GuideGeometry::central_radius() const { return loops_[loops_.size() / 2].radius; }

double GuideGeometry::wire_spacing() const {
  if (loops_.size() < 2) return loops_.front().radius / 10.0;
  return (loops_.back().radius - loops_.front().radius) / static_cast<double>(loops_.size() - 1);
}

GuideGeometry reference_guide_geometry() {
  return GuideGeometry({{487e-6, -0.123, 0.0}, {500e-6, 0.121, 0.0}, {513e-6, -0.123, 0.0}},
                       "three-wire ring guide");
}

FieldVector loop_field(const WireLoop& loop, double rho, double z) {
  check_loop(loop);
  check_point(rho, z);
  const auto p = params(loop);
  if (simd::is_singular(p, rho, z)) {
    throw SingularPointError("field evaluated on the loop filament at " + describe_point(rho, z));
  }
  const auto f = simd::loop_field_kernel(p, rho, z);
  return {f.b_rho, f.b_z, rho, z};
}

FieldVector loop_field_oracle(const WireLoop& loop, double rho, double z, std::size_t n_segments) {
  check_loop(loop);
  check_point(rho, z);
  if (n_segments < 8) throw InvalidInputError("loop_field_oracle needs at least 8 segments");
  if (simd::is_singular(params(loop), rho, z)) {
    throw SingularPointError("field evaluated on the loop filament at " + describe_point(rho, z));
  }
  const Vec3 point{rho, 0.0, z};
  const double step = 2.0 * units::pi / static_cast<double>(n_segments);
  auto vertex = [&](std::size_t j) {
    const double phi = step * static_cast<double>(j);
    return Vec3{loop.radius * std::cos(phi), loop.radius * std::sin(phi), loop.height};
  };
  Neumaier bx, by, bz;
  Vec3 start = vertex(0);
  for (std::size_t j = 0; j < n_segments; ++j) {
    const Vec3 end = vertex(j + 1 == n_segments ? 0 : j + 1);
    const Vec3 a{start[0] - point[0], start[1] - point[1], start[2] - point[2]};
    const Vec3 b{end[0] - point[0], end[1] - point[1], end[2] - point[2]};
    const double la = norm(a);
    const double lb = norm(b);
    const double denom = la * lb * (la * lb + dot(a, b));
    const Vec3 c = cross(a, b);
    const double s = (la + lb) / denom;
    bx.add(c[0] * s);
    by.add(c[1] * s);
    bz.add(c[2] * s);
    start = end;
  }
  const double pref = units::vacuum_permeability * loop.current / (4.0 * units::pi);
  return {pref * bx.value(), pref * bz.value(), rho, z};
}

FieldVector total_field(const GuideGeometry& geometry, double rho, double z) {
  check_point(rho, z);
  double b_rho = 0.0;
  double b_z = 0.0;
  const auto& loops = geometry.loops();
  for (std::size_t i = 0; i < loops.size(); ++i) {
    const auto p = params(loops[i]);
    if (simd::is_singular(p, rho, z)) {
      throw SingularPointError("field evaluated on the filament of loop " + std::to_string(i) + " at " +
                               describe_point(rho, z));
    }
    const auto f = simd::loop_field_kernel(p, rho, z);
    b_rho = b_rho + f.b_rho;
    b_z = b_z + f.b_z;
  }
  return {b_rho, b_z, rho, z};
}

FieldSamples total_field_batch(const GuideGeometry& geometry, std::span<const double> rho,
                               std::span<const double> z) {
  if (rho.size() != z.size()) throw InvalidInputError("total_field_batch: rho and z sizes differ");
  for (std::size_t i = 0; i < rho.size(); ++i) check_point(rho[i], z[i]);
  FieldSamples out{std::vector<double>(rho.size(), 0.0), std::vector<double>(rho.size(), 0.0)};
  const auto& loops = geometry.loops();
  const auto isa = simd::active_isa();
  for (std::size_t i = 0; i < loops.size(); ++i) {
    const std::size_t bad = simd::accumulate_loop_field(params(loops[i]), rho, z, out.b_rho, out.b_z, isa);
    if (bad != simd::no_singular_point) {
      throw SingularPointError("field evaluated on the filament of loop " + std::to_string(i) + " at " +
                               describe_point(rho[bad], z[bad]));
    }
  }
  return out;
}

std::vector<double> field_modulus_batch(const GuideGeometry& geometry, std::span<const double> rho,
                                        std::span<const double> z, double offset) {
  const auto f = total_field_batch(geometry, rho, z);
  std::vector<double> out(rho.size());
  const double o2 = offset * offset;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::sqrt(f.b_rho[i] * f.b_rho[i] + f.b_z[i] * f.b_z[i] + o2);
  }
  return out;
}

}  // namespace gyrochip::magnetostatics
