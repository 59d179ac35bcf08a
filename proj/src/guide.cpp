#include "gyrochip/guide.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <random>

#include "gyrochip/errors.hpp"

namespace gyrochip::guide {

using magnetostatics::GuideGeometry;

namespace {

constexpr double corrugation_constant = 1.0;  // T m / A per unit f'
constexpr std::size_t slope_directions = 360;

double modulus(double b_rho, double b_z, double offset) {
  return std::sqrt(b_rho * b_rho + b_z * b_z + offset * offset);
}

bool inside(const SearchBox& box, double rho, double z) {
  return rho >= box.rho_min && rho <= box.rho_max && z > box.z_floor && z <= box.z_max;
}

struct Vertex {
  double rho;
  double z;
  double value;
};

// Derivative-free Nelder-Mead on a 2D function; ties resolved toward smaller z.
template <class F>
Vertex nelder_mead(F&& f, double rho0, double z0, double step, double tolerance) {
  std::array<Vertex, 3> s{Vertex{rho0, z0, f(rho0, z0)}, Vertex{rho0 + step, z0, f(rho0 + step, z0)},
                          Vertex{rho0, z0 + step, f(rho0, z0 + step)}};
  auto order = [](const Vertex& a, const Vertex& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.z != b.z) return a.z < b.z;
    return a.rho < b.rho;
  };
  for (int iter = 0; iter < 10000; ++iter) {
    std::sort(s.begin(), s.end(), order);
    const double size = std::max(std::hypot(s[1].rho - s[0].rho, s[1].z - s[0].z),
                                 std::hypot(s[2].rho - s[0].rho, s[2].z - s[0].z));
    if (size < tolerance) break;
    const double c_rho = 0.5 * (s[0].rho + s[1].rho);
    const double c_z = 0.5 * (s[0].z + s[1].z);
    auto at = [&](double t) {
      const double r = c_rho + t * (s[2].rho - c_rho);
      const double z = c_z + t * (s[2].z - c_z);
      return Vertex{r, z, f(r, z)};
    };
    const Vertex reflected = at(-1.0);
    if (reflected.value < s[0].value) {
      const Vertex expanded = at(-2.0);
      s[2] = expanded.value < reflected.value ? expanded : reflected;
    } else if (reflected.value < s[1].value) {
      s[2] = reflected;
    } else {
      const Vertex contracted = reflected.value < s[2].value ? at(-0.5) : at(0.5);
      if (contracted.value < std::min(reflected.value, s[2].value)) {
        s[2] = contracted;
      } else {
        for (int k = 1; k < 3; ++k) {
          const double r = s[0].rho + 0.5 * (s[k].rho - s[0].rho);
          const double z = s[0].z + 0.5 * (s[k].z - s[0].z);
          s[k] = Vertex{r, z, f(r, z)};
        }
      }
    }
  }
  std::sort(s.begin(), s.end(), order);
  return s[0];
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return v;
}

// z grid on (floor, top]: the chip plane itself is excluded.
std::vector<double> z_grid(const SearchBox& box, std::size_t n) {
  std::vector<double> v(n);
  const double span = box.z_max - box.z_floor;
  for (std::size_t j = 0; j < n; ++j) {
    v[j] = box.z_floor + span * static_cast<double>(j + 1) / static_cast<double>(n);
  }
  return v;
}

struct Grid {
  std::vector<double> rho;
  std::vector<double> z;
  std::vector<double> value;  // rho-major
  std::size_t index(std::size_t i, std::size_t j) const { return i * z.size() + j; }
};

Grid modulus_grid(const GuideGeometry& geometry, const SearchBox& box, std::size_t n, double offset) {
  Grid g{linspace(box.rho_min, box.rho_max, n), z_grid(box, n), {}};
  std::vector<double> pr(n * n), pz(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      pr[g.index(i, j)] = g.rho[i];
      pz[g.index(i, j)] = g.z[j];
    }
  }
  g.value = magnetostatics::field_modulus_batch(geometry, pr, pz, offset);
  return g;
}

// Lowest grid point that is no higher than its eight neighbours and not on the
// grid edge; ties toward smaller z, then smaller rho. The guide zero is far
// narrower than a cell, so the global grid minimum can sit on the box edge
// while the guide is interior.
std::optional<std::pair<std::size_t, std::size_t>> interior_argmin(const Grid& g) {
  const std::size_t nr = g.rho.size();
  const std::size_t nz = g.z.size();
  std::optional<std::pair<std::size_t, std::size_t>> best;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j + 1 < nz; ++j) {
    for (std::size_t i = 1; i + 1 < nr; ++i) {
      const double v = g.value[g.index(i, j)];
      if (!(v < best_value)) continue;
      bool local = true;
      for (int di = -1; di <= 1 && local; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (g.value[g.index(i + di, j + dj)] < v) {
            local = false;
            break;
          }
        }
      }
      if (local) {
        best_value = v;
        best = {i, j};
      }
    }
  }
  return best;
}

struct Barrier {
  double level;
  GuidePosition escape;
};

// Lowest level at which the basin of (i0, j0) connects to the grid boundary
// (minimax path over 4-connected cells).
Barrier escape_barrier(const Grid& g, std::size_t i0, std::size_t j0) {
  const std::size_t nr = g.rho.size();
  const std::size_t nz = g.z.size();
  std::vector<char> seen(nr * nz, 0);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
  frontier.emplace(g.value[g.index(i0, j0)], g.index(i0, j0));
  double level = 0.0;
  while (!frontier.empty()) {
    const auto [v, idx] = frontier.top();
    frontier.pop();
    if (seen[idx]) continue;
    seen[idx] = 1;
    level = std::max(level, v);
    const std::size_t i = idx / nz;
    const std::size_t j = idx % nz;
    if (i == 0 || j == 0 || i + 1 == nr || j + 1 == nz) return {level, {g.rho[i], g.z[j]}};
    const std::array<std::size_t, 4> next{g.index(i - 1, j), g.index(i + 1, j), g.index(i, j - 1),
                                          g.index(i, j + 1)};
    for (std::size_t n : next) {
      if (!seen[n]) frontier.emplace(g.value[n], n);
    }
  }
  throw NoGuideError("escape-barrier search did not reach the box boundary");
}

double dc_modulus(const GuideGeometry& geometry, double rho, double z) {
  const auto f = magnetostatics::total_field(geometry, rho, z);
  return modulus(f.b_rho, f.b_z, 0.0);
}

std::vector<double> gaussian_smooth_periodic(const std::vector<double>& x, double step, double width) {
  const std::size_t n = x.size();
  if (width <= 0.0) return x;
  const auto half = static_cast<std::ptrdiff_t>(
      std::min<double>(std::ceil(5.0 * width / step), static_cast<double>(n / 2)));
  std::vector<double> w(static_cast<std::size_t>(2 * half + 1));
  double norm = 0.0;
  for (std::ptrdiff_t k = -half; k <= half; ++k) {
    const double d = static_cast<double>(k) * step / width;
    w[static_cast<std::size_t>(k + half)] = std::exp(-0.5 * d * d);
    norm += w[static_cast<std::size_t>(k + half)];
  }
  std::vector<double> y(n, 0.0);
  const auto sn = static_cast<std::ptrdiff_t>(n);
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    double acc = 0.0;
    for (std::ptrdiff_t k = -half; k <= half; ++k) {
      const std::ptrdiff_t idx = ((i + k) % sn + sn) % sn;
      acc += w[static_cast<std::size_t>(k + half)] * x[static_cast<std::size_t>(idx)];
    }
    y[static_cast<std::size_t>(i)] = acc / norm;
  }
  return y;
}

double mean_of(const std::vector<double>& x) {
  double s = 0.0, c = 0.0;
  for (double v : x) {
    const double t = s + v;
    c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  return (s + c) / static_cast<double>(x.size());
}

// Geometry kernel g = smoothed f'.
std::vector<double> geometry_kernel(const CorrugationModel& c) {
  const std::size_t n = c.profile.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double next = c.profile[(i + 1) % n];
    const double prev = c.profile[(i + n - 1) % n];
    d[i] = (next - prev) / (2.0 * c.arc_step);
  }
  return gaussian_smooth_periodic(d, c.arc_step, c.kernel_width);
}

void check_corrugation(const CorrugationModel& c) {
  if (c.profile.size() < 3) throw InvalidInputError("corrugation profile needs at least 3 samples");
  if (!(c.arc_step > 0.0)) throw InvalidInputError("corrugation arc step must be positive");
  if (!(c.kernel_width >= 0.0)) throw InvalidInputError("corrugation kernel width must be >= 0");
}

}  // namespace

SearchBox search_box(const GuideGeometry& geometry) {
  const double r = geometry.central_radius();
  const double s = geometry.wire_spacing();
  const double h = geometry.loops().front().height;
  return {0.5 * r, 1.5 * r, h, h + 10.0 * s};
}

GuidePosition find_guide_minimum(const GuideGeometry& geometry) {
  const SearchBox box = search_box(geometry);
  const Grid g = modulus_grid(geometry, box, coarse_grid_points, 0.0);
  const double lowest = *std::min_element(g.value.begin(), g.value.end());
  const double highest = *std::max_element(g.value.begin(), g.value.end());
  if (!(highest > 0.0) || lowest == highest) {
    throw NoGuideError("no guide: the field modulus is flat (all currents zero?)");
  }
  const auto found = interior_argmin(g);
  if (!found) {
    throw NoGuideError("no guide: |B| has no interior minimum in the search box; the current configuration does not trap");
  }
  const auto [i, j] = *found;
  auto objective = [&](double rho, double z) {
    if (!inside(box, rho, z)) return std::numeric_limits<double>::infinity();
    return dc_modulus(geometry, rho, z);
  };
  const double cell = g.rho[1] - g.rho[0];
  Vertex v = nelder_mead(objective, g.rho[i], g.z[j], cell, 0.01 * position_tolerance);
  // Restart from the converged point to shake off a collapsed simplex.
  v = nelder_mead(objective, v.rho, v.z, 100.0 * position_tolerance, 0.01 * position_tolerance);
  if (v.rho - box.rho_min < cell || box.rho_max - v.rho < cell || v.z - box.z_floor < 0.5 * (g.z[1] - g.z[0]) ||
      box.z_max - v.z < g.z[1] - g.z[0]) {
    throw NoGuideError("no guide: the |B| minimum drifts onto the search-box boundary");
  }
  return {v.rho, v.z};
}

PotentialCurvature potential_curvature(const FieldFunction& field, GuidePosition at,
                                       const units::AtomSpecies& species, double offset_b0) {
  const double h = hessian_step;
  const double mu = species.magnetic_moment();
  auto u = [&](double dr, double dz) {
    const FieldPoint f = field(at.rho + dr, at.z + dz);
    return mu * modulus(f.b_rho, f.b_z, offset_b0);
  };
  const double u0 = u(0.0, 0.0);
  const double hrr = (u(h, 0.0) - 2.0 * u0 + u(-h, 0.0)) / (h * h);
  const double hzz = (u(0.0, h) - 2.0 * u0 + u(0.0, -h)) / (h * h);
  const double mixed_a = (u(h, 2 * h) - u(h, -2 * h) - u(-h, 2 * h) + u(-h, -2 * h)) / (8.0 * h * h);
  const double mixed_b = (u(2 * h, h) - u(2 * h, -h) - u(-2 * h, h) + u(-2 * h, -h)) / (8.0 * h * h);
  const double hrz = 0.5 * (mixed_a + mixed_b);

  PotentialCurvature c{};
  c.hessian[0][0] = hrr;
  c.hessian[1][1] = hzz;
  c.hessian[0][1] = mixed_a;
  c.hessian[1][0] = mixed_b;
  const double mean = 0.5 * (hrr + hzz);
  const double diff = 0.5 * (hrr - hzz);
  c.lambda_max = mean + std::sqrt(diff * diff + hrz * hrz);
  c.radial_frequency =
      c.lambda_max > 0.0 ? std::sqrt(c.lambda_max / species.mass()) / (2.0 * units::pi) : 0.0;
  c.asymmetry = c.lambda_max > 0.0 ? std::abs(mixed_a - mixed_b) / c.lambda_max
                                   : std::numeric_limits<double>::infinity();
  return c;
}

GuideCharacterization characterize_guide(const GuideGeometry& geometry, const units::AtomSpecies& species,
                                         double offset_b0) {
  if (!(offset_b0 >= 0.0) || !std::isfinite(offset_b0)) {
    throw InvalidInputError("offset_B0 must be finite and >= 0");
  }
  const GuidePosition pos = find_guide_minimum(geometry);
  GuideCharacterization out{};
  out.min_position = pos;
  out.offset_b0 = offset_b0;
  out.b_min = dc_modulus(geometry, pos.rho, pos.z);

  const double d = 3.0 * hessian_step;
  double slope = 0.0;
  for (std::size_t k = 0; k < slope_directions; ++k) {
    const double phi = 2.0 * units::pi * static_cast<double>(k) / static_cast<double>(slope_directions);
    const double b = dc_modulus(geometry, pos.rho + d * std::cos(phi), pos.z + d * std::sin(phi));
    slope = std::max(slope, (b - out.b_min) / d);
  }
  out.gradient = slope;

  if (offset_b0 == 0.0 && out.b_min < slope * hessian_step) {
    throw NonSmoothPotentialError(
        "the field modulus vanishes at the guide minimum, so the potential is not harmonic there; supply offset_B0 > 0");
  }

  FieldFunction field = [&](double rho, double z) {
    const auto f = magnetostatics::total_field(geometry, rho, z);
    return FieldPoint{f.b_rho, f.b_z};
  };
  const PotentialCurvature c = potential_curvature(field, pos, species, offset_b0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out.hessian[a][b] = c.hessian[a][b];
  out.hessian_asymmetry = c.asymmetry;
  out.radial_frequency = c.radial_frequency;

  const SearchBox box = search_box(geometry);
  const Grid g = modulus_grid(geometry, box, depth_grid_points, 0.0);
  // Flood from the grid node nearest the refined minimum.
  const auto nearest = [](const std::vector<double>& axis, double x) {
    const auto it = std::lower_bound(axis.begin(), axis.end(), x);
    if (it == axis.begin()) return std::size_t{0};
    if (it == axis.end()) return axis.size() - 1;
    const auto k = static_cast<std::size_t>(it - axis.begin());
    return (x - axis[k - 1] <= axis[k] - x) ? k - 1 : k;
  };
  const std::size_t i0 = nearest(g.rho, pos.rho);
  const std::size_t j0 = nearest(g.z, pos.z);
  const Barrier barrier = escape_barrier(g, i0, j0);
  out.depth_field = barrier.level - out.b_min;
  out.escape_point = barrier.escape;
  out.depth_temperature = species.magnetic_moment() * out.depth_field / units::boltzmann;
  return out;
}

PotentialMap potential_map(const GuideGeometry& geometry, const units::AtomSpecies& species, double offset_b0,
                           const SearchBox& window, std::size_t n_rho, std::size_t n_z) {
  if (n_rho < 2 || n_z < 2) throw InvalidInputError("potential map needs at least 2x2 points");
  PotentialMap map{linspace(window.rho_min, window.rho_max, n_rho), z_grid(window, n_z), {}};
  std::vector<double> pr(n_rho * n_z), pz(n_rho * n_z);
  for (std::size_t i = 0; i < n_rho; ++i) {
    for (std::size_t j = 0; j < n_z; ++j) {
      pr[i * n_z + j] = map.rho[i];
      pz[i * n_z + j] = map.z[j];
    }
  }
  map.energy = magnetostatics::field_modulus_batch(geometry, pr, pz, offset_b0);
  for (double& e : map.energy) e *= species.magnetic_moment();
  return map;
}

CorrugationModel CorrugationModel::generate(double amplitude, double correlation_length, std::uint64_t seed,
                                            double circumference, std::size_t n_points, double kernel_width) {
  if (!(amplitude >= 0.0) || !(correlation_length > 0.0) || !(circumference > 0.0) || n_points < 3) {
    throw InvalidInputError("corrugation: amplitude >= 0, correlation length > 0, circumference > 0, n >= 3 required");
  }
  CorrugationModel c{amplitude, correlation_length, seed, circumference / static_cast<double>(n_points),
                     kernel_width, {}};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> white(n_points);
  for (double& w : white) w = normal(rng);
  std::vector<double> f = gaussian_smooth_periodic(white, c.arc_step, correlation_length);
  const double m = mean_of(f);
  for (double& v : f) v -= m;
  double ss = 0.0;
  for (double v : f) ss += v * v;
  const double rms = std::sqrt(ss / static_cast<double>(n_points));
  const double scale = rms > 0.0 ? amplitude / rms : 0.0;
  for (double& v : f) v *= scale;
  c.profile = std::move(f);
  return c;
}

std::vector<double> roughness_potential(const CorrugationModel& corrugation, double current,
                                        const units::AtomSpecies& species) {
  check_corrugation(corrugation);
  if (!std::isfinite(current)) throw InvalidInputError("current must be finite");
  const std::vector<double> g = geometry_kernel(corrugation);
  const double pref = species.magnetic_moment() * corrugation_constant * current;
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = pref * g[i];
  return v;
}

ModulatedRoughness modulated_roughness_average(const CorrugationModel& corrugation,
                                               std::span<const double> current_waveform,
                                               const units::AtomSpecies& species) {
  check_corrugation(corrugation);
  if (current_waveform.empty()) throw InvalidInputError("current waveform is empty");
  const std::vector<double> g = geometry_kernel(corrugation);
  const double base = species.magnetic_moment() * corrugation_constant;
  const double n = static_cast<double>(current_waveform.size());

  ModulatedRoughness out{std::vector<double>(g.size(), 0.0), 0.0, 0.0, false};
  for (double i_t : current_waveform) {
    if (!std::isfinite(i_t)) throw InvalidInputError("current waveform must be finite");
    out.peak_current = std::max(out.peak_current, std::abs(i_t));
    out.mean_current += i_t;
    const double pref = base * i_t;
    for (std::size_t k = 0; k < g.size(); ++k) out.potential[k] += pref * g[k];
  }
  out.mean_current /= n;
  for (double& v : out.potential) v /= n;
  out.zero_mean = std::abs(out.mean_current) <= 1e-10 * out.peak_current;
  return out;
}

std::vector<double> sine_waveform(double amplitude, std::size_t samples, double dc_offset) {
  std::vector<double> w(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    w[k] = amplitude * std::sin(2.0 * units::pi * static_cast<double>(k) / static_cast<double>(samples)) + dc_offset;
  }
  return w;
}

std::vector<double> square_waveform(double amplitude, std::size_t samples) {
  if (samples % 2 != 0) throw InvalidInputError("square waveform needs an even sample count");
  std::vector<double> w(samples);
  for (std::size_t k = 0; k < samples; ++k) w[k] = k < samples / 2 ? amplitude : -amplitude;
  return w;
}

}  // namespace gyrochip::guide
