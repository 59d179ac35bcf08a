#include "gyrochip/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gyrochip/errors.hpp"

namespace gyrochip::stability {

namespace {

void check_averaging(const interferometer::InterferometerConfig& config, double averaging_time) {
  if (!(averaging_time >= config.cycle_time()) || !std::isfinite(averaging_time)) {
    throw InvalidAveragingError("averaging time " + std::to_string(averaging_time) +
                                " s is shorter than one cycle (" + std::to_string(config.cycle_time()) + " s)");
  }
}

// Sum over m of the harmonic terms, without the tau_I-dependent prefactor.
struct HarmonicSum {
  double sum;
  double tail;
  double last_decade_change;
};

HarmonicSum harmonic_sum(const noise::PowerSpectralDensity& psd, const interferometer::InterferometerConfig& config,
                         std::size_t m_max) {
  const double tau = config.pulse_duration();
  const double two_t = config.interrogation_time();
  const double half_t = config.half_interrogation_time();
  const double g = 2.0 * config.effective_wavevector() * config.effective_radius();
  const double g2 = g * g;
  const std::size_t decade_start = m_max / 10;

  // Neumaier summation; the sum can run to 1e8 terms.
  double sum = 0.0, comp = 0.0, at_decade = 0.0;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const double f = static_cast<double>(m) / half_t;
    const double s = psd(f);
    if (s != 0.0) {
      const double w = 2.0 * units::pi * static_cast<double>(m) / two_t;
      const double term = g2 / (w * w) * interferometer::transfer_H_squared(f, tau, two_t) * s;
      const double t = sum + term;
      if (std::abs(sum) >= std::abs(term)) comp += (sum - t) + term;
      else comp += (term - t) + sum;
      sum = t;
    }
    if (m == decade_start) at_decade = sum + comp;
  }
  const double total = sum + comp;

  // Tail: |H|^2 <= (2 / (pi f tau))^2, so terms fall at least as m^-4 S(m/T).
  const double big_m = static_cast<double>(m_max);
  const double f_m = big_m / half_t;
  const double a = g2 * (two_t * two_t) / (4.0 * units::pi * units::pi) * 4.0 * (half_t * half_t) /
                   (units::pi * units::pi * tau * tau);
  const double e_high = psd.high_frequency_exponent();
  double tail = std::numeric_limits<double>::infinity();
  if (e_high <= 0.0) {
    double s_sup = psd(f_m);
    if (psd.is_tabulated()) {
      const auto& fs = psd.frequencies();
      const auto& vs = psd.values();
      for (std::size_t i = 0; i < fs.size(); ++i) {
        if (fs[i] > f_m) s_sup = std::max(s_sup, vs[i]);
      }
    }
    tail = a * s_sup / (3.0 * big_m * big_m * big_m);
  } else if (!psd.is_tabulated() && e_high < 3.0) {
    tail = a * psd(f_m) / ((3.0 - e_high) * big_m * big_m * big_m);
  }
  double change = 0.0;
  if (total != 0.0) change = std::abs(total - at_decade) / std::abs(total);
  return {total, tail, change};
}

double dick_prefactor(const interferometer::InterferometerConfig& config, double averaging_time) {
  const double s = std::sin(config.latitude());
  if (std::abs(s) < 1e-15) {
    throw DegenerateOrientationError("sin(latitude) = 0: the rotation axis lies in the interferometer plane");
  }
  const auto& sp = config.species();
  const double two_t = config.interrogation_time();
  const double c = (units::pi / 4.0) / sp.mass_over_hbar() /
                   (sp.recoil_velocity() * config.launch_velocity() * two_t * two_t * s);
  return c * c * (4.0 * units::pi / averaging_time);
}

}  // namespace

double projection_allan(const interferometer::InterferometerConfig& config, double averaging_time) {
  check_averaging(config, averaging_time);
  return interferometer::shot_noise_sensitivity(config) * std::sqrt(config.cycle_time() / averaging_time);
}

std::size_t default_harmonic_count(const interferometer::InterferometerConfig& config) {
  const double m = std::ceil(300.0 * config.half_interrogation_time() / config.pulse_duration());
  return static_cast<std::size_t>(std::clamp(m, 1e3, 1e8));
}

DickSumResult dick_sum_allan(const noise::PowerSpectralDensity& rotation_psd,
                             const interferometer::InterferometerConfig& config, double averaging_time,
                             std::size_t m_max) {
  if (rotation_psd.domain() != noise::NoiseDomain::rotation) {
    throw DomainMismatchError("the harmonic-sum Allan variance needs a rotation-domain PSD");
  }
  if (m_max < 1) throw InvalidInputError("m_max must be at least 1");
  check_averaging(config, averaging_time);
  const double pre = dick_prefactor(config, averaging_time);
  const auto h = harmonic_sum(rotation_psd, config, m_max);
  return {std::sqrt(pre * h.sum), m_max, std::sqrt(pre * h.tail), h.last_decade_change,
          h.last_decade_change < 1e-4};
}

std::string_view allan_model_name(AllanModel model) {
  return model == AllanModel::projection ? "projection" : "dick_sum";
}

AllanModel parse_allan_model(std::string_view name) {
  if (name == "projection") return AllanModel::projection;
  if (name == "dick_sum") return AllanModel::dick_sum;
  throw InvalidInputError("unknown Allan model '" + std::string(name) + "' (expected projection or dick_sum)");
}

double AllanCurve::white_coefficient() const {
  if (points.empty()) return 0.0;
  return points.front().sigma * std::sqrt(points.front().averaging_time);
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) throw InvalidInputError("log grid needs 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  const double ratio = hi / lo;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo * std::pow(ratio, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.back() = hi;
  return out;
}

namespace {

void check_grid(std::span<const double> taus) {
  if (taus.empty()) throw InvalidInputError("averaging-time grid is empty");
  for (std::size_t i = 1; i < taus.size(); ++i) {
    if (!(taus[i] > taus[i - 1])) throw InvalidInputError("averaging times must be strictly increasing");
  }
}

}  // namespace

AllanCurve projection_allan_curve(const interferometer::InterferometerConfig& config,
                                  std::span<const double> averaging_times) {
  check_grid(averaging_times);
  AllanCurve curve{{}, AllanModel::projection, config};
  for (double t : averaging_times) curve.points.push_back({t, projection_allan(config, t)});
  return curve;
}

AllanCurve dick_sum_allan_curve(const noise::PowerSpectralDensity& rotation_psd,
                                const interferometer::InterferometerConfig& config,
                                std::span<const double> averaging_times, std::size_t m_max) {
  check_grid(averaging_times);
  if (rotation_psd.domain() != noise::NoiseDomain::rotation) {
    throw DomainMismatchError("the harmonic-sum Allan variance needs a rotation-domain PSD");
  }
  if (m_max < 1) throw InvalidInputError("m_max must be at least 1");
  check_averaging(config, averaging_times.front());
  // The sum does not depend on tau_I; evaluate it once.
  const auto h = harmonic_sum(rotation_psd, config, m_max);
  AllanCurve curve{{}, AllanModel::dick_sum, config, m_max, h.last_decade_change < 1e-4};
  for (double t : averaging_times) curve.points.push_back({t, std::sqrt(dick_prefactor(config, t) * h.sum)});
  return curve;
}

RequiredInterrogation required_interrogation_time(double target_sigma, double integration_time,
                                                  double launch_velocity, const units::AtomSpecies& species,
                                                  const interferometer::SequenceParameters& template_params,
                                                  int n_loops, const InterrogationSearch& search) {
  if (!(target_sigma > 0.0) || !std::isfinite(target_sigma)) throw InvalidInputError("target sigma must be > 0");
  if (!(launch_velocity > 0.0)) throw InvalidInputError("launch velocity must be > 0");
  if (!(search.lower > 0.0) || !(search.upper > search.lower) || !(search.relative_tolerance > 0.0)) {
    throw InvalidInputError("interrogation-time bracket must satisfy 0 < lower < upper");
  }
  auto params = template_params;
  params.launch_velocity_over_recoil = launch_velocity / species.recoil_velocity();
  auto config_at = [&](double two_t) {
    return interferometer::InterferometerConfig::from_interrogation_time(species, params, two_t, n_loops);
  };
  auto sigma_at = [&](double two_t) { return projection_allan(config_at(two_t), integration_time); };

  // A cycle cannot outlast the averaging window.
  const double upper = std::min(search.upper, integration_time - params.dead_time);
  if (!(upper > search.lower)) {
    throw InfeasibleError("integration time is too short for any interrogation time in the bracket",
                          std::numeric_limits<double>::infinity());
  }
  const double floor = sigma_at(upper);
  if (floor > target_sigma) {
    throw InfeasibleError("target " + std::to_string(target_sigma) + " rad/s is below the best achievable " +
                              std::to_string(floor) + " rad/s at 2T = " + std::to_string(upper) + " s",
                          floor);
  }
  double lo = search.lower, hi = upper;
  if (sigma_at(lo) <= target_sigma) hi = lo;
  while (hi / lo - 1.0 > search.relative_tolerance) {
    const double mid = std::sqrt(lo * hi);
    if (sigma_at(mid) <= target_sigma) hi = mid;
    else lo = mid;
  }
  const auto config = config_at(hi);
  return {hi, config.guide_radius(), projection_allan(config, integration_time)};
}

FeasibilityBoundary feasibility_boundary(double target_sigma, double integration_time,
                                         std::span<const double> launch_velocities,
                                         const units::AtomSpecies& species,
                                         const interferometer::SequenceParameters& template_params, int n_loops,
                                         const InterrogationSearch& search) {
  check_grid(launch_velocities);
  FeasibilityBoundary out{{}, target_sigma, integration_time};
  for (double v : launch_velocities) {
    const auto r = required_interrogation_time(target_sigma, integration_time, v, species, template_params,
                                               n_loops, search);
    out.points.push_back({v, r.interrogation_time, r.guide_radius});
  }
  return out;
}

std::vector<PhenomenonRate> phenomenon_rates() {
  const double omega_e = units::earth_rotation_rate;
  auto entry = [omega_e](std::string name, double rate) {
    return PhenomenonRate{std::move(name), rate, rate / omega_e};
  };
  return {
      entry("earth_rotation", omega_e),
      entry("geodetic_effect", 6.6 * units::arcsecond / units::julian_year),
      entry("lense_thirring", 33.0 * units::milliarcsecond / units::julian_year),
  };
}

double geodetic_target_sigma() { return 0.05 * 6.6 * units::arcsecond / units::julian_year; }

}  // namespace gyrochip::stability
