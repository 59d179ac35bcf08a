#include "gyrochip/noise.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>

#include "gyrochip/errors.hpp"
#include "gyrochip/quadrature.hpp"

namespace gyrochip::noise {

namespace {

constexpr double infinity = std::numeric_limits<double>::infinity();
constexpr double default_f_min = 1e-4;         // Hz
constexpr std::size_t max_table_breakpoints = 200'000;

double power(double f, double exponent) {
  if (exponent == 0.0) return 1.0;
  if (exponent == -1.0) return 1.0 / f;
  if (exponent == -2.0) return 1.0 / (f * f);
  if (exponent == 2.0) return f * f;
  if (exponent == 4.0) return (f * f) * (f * f);
  if (exponent == -4.0) return 1.0 / ((f * f) * (f * f));
  return std::pow(f, exponent);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s, std::size_t line) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidInputError("PSD file line " + std::to_string(line) + ": cannot parse '" + std::string(s) + "'");
  }
  return v;
}

void check_domain(const PowerSpectralDensity& psd, NoiseDomain expected) {
  if (psd.domain() != expected) {
    throw DomainMismatchError("PSD domain is '" + std::string(domain_name(psd.domain())) + "' but '" +
                              std::string(domain_name(expected)) + "' is required");
  }
}

Band resolve_band(const interferometer::InterferometerConfig& config, const VarianceOptions& options) {
  const Band band = options.band.value_or(default_band(config));
  if (!(band.f_min >= 0.0) || !std::isfinite(band.f_max) || !(band.f_max > band.f_min)) {
    throw InvalidInputError("integration band must satisfy 0 <= f_min < f_max < infinity");
  }
  return band;
}

// Integrates weight(f) * S(f) * |H(f)|^2 where weight ~ f^kernel_exponent.
template <class Weight>
VarianceResult integrate_kernel(const PowerSpectralDensity& psd, const interferometer::InterferometerConfig& config,
                                Weight weight, double kernel_exponent, const VarianceOptions& options) {
  const Band band = resolve_band(config, options);
  // |H|^2 ~ f^2 near zero frequency.
  const double ir = 2.0 + kernel_exponent + psd.low_frequency_exponent();
  const auto breaks = integration_breakpoints(config, band, &psd);
  if (band.f_min == 0.0 && ir <= -1.0) {
    throw DivergenceError("variance integral diverges at the infrared end of the band [0, " +
                          std::to_string(breaks[1]) + "] Hz (integrand ~ f^" + std::to_string(ir) +
                          "); set a positive f_min");
  }
  const double tau = config.pulse_duration();
  const double two_t = config.interrogation_time();
  auto integrand = [&](double f) {
    const double s = psd(f);
    if (s == 0.0) return 0.0;
    return weight(f) * s * interferometer::transfer_H_squared(f, tau, two_t);
  };
  quadrature::Options q;
  q.relative_tolerance = options.relative_tolerance;
  const auto r = quadrature::integrate(integrand, breaks, q);
  return {r.value, r.error_estimate, band, std::string(psd_convention), ir, r.panels, r.converged};
}

}  // namespace

std::string_view domain_name(NoiseDomain domain) {
  switch (domain) {
    case NoiseDomain::phase: return "phase";
    case NoiseDomain::acceleration: return "acceleration";
    case NoiseDomain::rotation: return "rotation";
  }
  return "?";
}

NoiseDomain parse_domain(std::string_view name) {
  if (name == "phase") return NoiseDomain::phase;
  if (name == "acceleration") return NoiseDomain::acceleration;
  if (name == "rotation") return NoiseDomain::rotation;
  throw InvalidInputError("unknown noise domain '" + std::string(name) + "'");
}

PowerSpectralDensity::PowerSpectralDensity(NoiseDomain domain, std::vector<PowerLawTerm> terms,
                                           std::vector<double> frequencies, std::vector<double> values)
    : domain_(domain), terms_(std::move(terms)), frequencies_(std::move(frequencies)), values_(std::move(values)) {}

PowerSpectralDensity PowerSpectralDensity::analytic(NoiseDomain domain, double white, double flicker,
                                                    double random_walk) {
  return power_law(domain, {{white, 0.0}, {flicker, -1.0}, {random_walk, -2.0}});
}

PowerSpectralDensity PowerSpectralDensity::power_law(NoiseDomain domain, std::vector<PowerLawTerm> terms) {
  std::vector<PowerLawTerm> kept;
  for (const auto& t : terms) {
    if (!(t.coefficient >= 0.0) || !std::isfinite(t.coefficient) || !std::isfinite(t.exponent)) {
      throw InvalidInputError("PSD power-law coefficients must be finite and >= 0");
    }
    if (t.coefficient > 0.0) kept.push_back(t);
  }
  return PowerSpectralDensity(domain, std::move(kept), {}, {});
}

PowerSpectralDensity PowerSpectralDensity::tabulated(NoiseDomain domain, std::vector<double> frequencies,
                                                     std::vector<double> values) {
  if (frequencies.size() != values.size() || frequencies.size() < 2) {
    throw InvalidInputError("tabulated PSD needs at least two (f, S) pairs of equal length");
  }
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (!(frequencies[i] > 0.0) || !std::isfinite(frequencies[i])) {
      throw InvalidInputError("tabulated PSD frequencies must be positive and finite");
    }
    if (i > 0 && !(frequencies[i] > frequencies[i - 1])) {
      throw InvalidInputError("tabulated PSD frequencies must be strictly increasing");
    }
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
      throw InvalidInputError("tabulated PSD values must be finite and >= 0");
    }
  }
  return PowerSpectralDensity(domain, {}, std::move(frequencies), std::move(values));
}

double PowerSpectralDensity::segment_exponent(double f0, double s0, double f1, double s1) {
  return std::log(s1 / s0) / std::log(f1 / f0);
}

double PowerSpectralDensity::end_segment(std::size_t i0, std::size_t i1, double f) const {
  // i0 is the end node nearest to f.
  const double s0 = values_[i0];
  const double s1 = values_[i1];
  if (s0 > 0.0 && s1 > 0.0) {
    return s0 * std::pow(f / frequencies_[i0], segment_exponent(frequencies_[i0], s0, frequencies_[i1], s1));
  }
  return s0;
}

double PowerSpectralDensity::operator()(double f) const {
  if (!(f >= 0.0)) throw InvalidInputError("PSD evaluated at negative frequency");
  if (!is_tabulated()) {
    double s = 0.0;
    for (const auto& t : terms_) s += t.coefficient * power(f, t.exponent);
    return s;
  }
  const std::size_t n = frequencies_.size();
  const auto it = std::lower_bound(frequencies_.begin(), frequencies_.end(), f);
  if (it != frequencies_.end() && *it == f) return values_[static_cast<std::size_t>(it - frequencies_.begin())];
  if (it == frequencies_.begin()) return end_segment(0, 1, f);
  if (it == frequencies_.end()) return end_segment(n - 1, n - 2, f);
  const std::size_t i1 = static_cast<std::size_t>(it - frequencies_.begin());
  const std::size_t i0 = i1 - 1;
  const double f0 = frequencies_[i0], f1 = frequencies_[i1];
  const double s0 = values_[i0], s1 = values_[i1];
  if (s0 > 0.0 && s1 > 0.0) return s0 * std::pow(f / f0, segment_exponent(f0, s0, f1, s1));
  return s0 + (s1 - s0) * (f - f0) / (f1 - f0);
}

double PowerSpectralDensity::low_frequency_exponent() const {
  if (!is_tabulated()) {
    double e = infinity;
    for (const auto& t : terms_) e = std::min(e, t.exponent);
    return e;
  }
  const double s0 = values_[0], s1 = values_[1];
  if (s0 == 0.0) return infinity;
  if (s1 == 0.0) return 0.0;
  return segment_exponent(frequencies_[0], s0, frequencies_[1], s1);
}

double PowerSpectralDensity::high_frequency_exponent() const {
  if (!is_tabulated()) {
    if (terms_.empty()) return -infinity;
    double e = -infinity;
    for (const auto& t : terms_) e = std::max(e, t.exponent);
    return e;
  }
  const std::size_t n = values_.size();
  const double s0 = values_[n - 2], s1 = values_[n - 1];
  if (s1 == 0.0) return -infinity;
  if (s0 == 0.0) return 0.0;
  return segment_exponent(frequencies_[n - 2], s0, frequencies_[n - 1], s1);
}

PowerSpectralDensity PowerSpectralDensity::reweighted(NoiseDomain domain, double coefficient,
                                                      double exponent) const {
  if (!is_tabulated()) {
    auto terms = terms_;
    for (auto& t : terms) {
      t.coefficient *= coefficient;
      t.exponent += exponent;
    }
    return PowerSpectralDensity(domain, std::move(terms), {}, {});
  }
  auto values = values_;
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = coefficient * power(frequencies_[i], exponent) * values_[i];
  return PowerSpectralDensity(domain, {}, frequencies_, std::move(values));
}

PowerSpectralDensity read_psd_csv(std::istream& in, NoiseDomain domain) {
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<double> f, s;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view v = trim(line);
    if (v.empty() || v.front() == '#') continue;
    if (!header) {
      std::string compact;
      for (char c : v) {
        if (c != ' ' && c != '\t') compact.push_back(c);
      }
      if (compact != "f_hz,psd_value") {
        throw InvalidInputError("PSD file: expected header 'f_hz,psd_value', got '" + std::string(v) + "'");
      }
      header = true;
      continue;
    }
    const auto comma = v.find(',');
    if (comma == std::string_view::npos || v.find(',', comma + 1) != std::string_view::npos) {
      throw InvalidInputError("PSD file line " + std::to_string(line_no) + ": expected two columns");
    }
    f.push_back(parse_number(v.substr(0, comma), line_no));
    s.push_back(parse_number(v.substr(comma + 1), line_no));
  }
  if (!header) throw InvalidInputError("PSD file: missing 'f_hz,psd_value' header");
  return PowerSpectralDensity::tabulated(domain, std::move(f), std::move(s));
}

PowerSpectralDensity load_psd_csv(const std::filesystem::path& path, NoiseDomain domain) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open PSD file '" + path.string() + "'");
  return read_psd_csv(in, domain);
}

PowerSpectralDensity convert_psd(const PowerSpectralDensity& psd, NoiseDomain target, double k_eff,
                                 double radius) {
  if (!(k_eff > 0.0) || !(radius > 0.0)) throw InvalidInputError("convert_psd: k_eff and radius must be positive");
  const double two_pi = 2.0 * units::pi;
  const double w2 = two_pi * two_pi;
  // Factor (coefficient, exponent) mapping phase -> domain.
  auto from_phase = [&](NoiseDomain d) -> std::pair<double, double> {
    switch (d) {
      case NoiseDomain::phase: return {1.0, 0.0};
      case NoiseDomain::acceleration: return {w2 * w2 / (k_eff * k_eff), 4.0};
      case NoiseDomain::rotation: {
        const double g = 2.0 * k_eff * radius;
        return {w2 / (g * g), 2.0};
      }
    }
    return {1.0, 0.0};
  };
  if (psd.domain() == target) return psd;
  const auto [c_src, e_src] = from_phase(psd.domain());
  const auto [c_dst, e_dst] = from_phase(target);
  if (psd.domain() == NoiseDomain::phase) return psd.reweighted(target, c_dst, e_dst);
  if (target == NoiseDomain::phase) return psd.reweighted(target, 1.0 / c_src, -e_src);
  return psd.reweighted(target, c_dst / c_src, e_dst - e_src);
}

Band default_band(const interferometer::InterferometerConfig& config) {
  return {default_f_min, 10.0 / config.pulse_duration()};
}

std::vector<double> integration_breakpoints(const interferometer::InterferometerConfig& config, const Band& band,
                                            const PowerSpectralDensity* psd) {
  std::vector<double> pts{band.f_min, band.f_max};
  auto add_zeros = [&](double period) {
    const double first = std::max(1.0, std::ceil(band.f_min * period));
    const double last = std::floor(band.f_max * period);
    for (double n = first; n <= last; n += 1.0) pts.push_back(n / period);
  };
  add_zeros(config.pulse_duration());
  add_zeros(config.interrogation_time() - config.pulse_duration());
  if (psd != nullptr && psd->is_tabulated()) {
    const auto& f = psd->frequencies();
    const auto lo = std::upper_bound(f.begin(), f.end(), band.f_min);
    const auto hi = std::lower_bound(f.begin(), f.end(), band.f_max);
    if (hi > lo && static_cast<std::size_t>(hi - lo) <= max_table_breakpoints) pts.insert(pts.end(), lo, hi);
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  out.reserve(pts.size());
  for (double p : pts) {
    if (p < band.f_min || p > band.f_max) continue;
    if (!out.empty() && p - out.back() <= 1e-12 * p) continue;
    out.push_back(p);
  }
  if (out.back() != band.f_max) {
    if (band.f_max - out.back() <= 1e-12 * band.f_max) out.back() = band.f_max;
    else out.push_back(band.f_max);
  }
  return out;
}

VarianceResult phase_variance(const PowerSpectralDensity& psd, const interferometer::InterferometerConfig& config,
                              const VarianceOptions& options) {
  check_domain(psd, NoiseDomain::phase);
  return integrate_kernel(psd, config, [](double) { return 1.0; }, 0.0, options);
}

VarianceResult acceleration_phase_variance(const PowerSpectralDensity& psd,
                                           const interferometer::InterferometerConfig& config, double k_eff,
                                           const VarianceOptions& options) {
  check_domain(psd, NoiseDomain::acceleration);
  const double k2 = k_eff * k_eff;
  return integrate_kernel(
      psd, config,
      [k2](double f) {
        const double w = 2.0 * units::pi * f;
        const double w2 = w * w;
        return k2 / (w2 * w2);
      },
      -4.0, options);
}

VarianceResult rotation_phase_variance(const PowerSpectralDensity& psd,
                                       const interferometer::InterferometerConfig& config, double k_eff,
                                       double radius, const VarianceOptions& options) {
  check_domain(psd, NoiseDomain::rotation);
  const double g = 2.0 * k_eff * radius;
  const double g2 = g * g;
  return integrate_kernel(
      psd, config,
      [g2](double f) {
        const double w = 2.0 * units::pi * f;
        return g2 / (w * w);
      },
      -2.0, options);
}

VarianceResult output_phase_variance(const PowerSpectralDensity& psd,
                                     const interferometer::InterferometerConfig& config,
                                     const VarianceOptions& options) {
  switch (psd.domain()) {
    case NoiseDomain::phase: return phase_variance(psd, config, options);
    case NoiseDomain::acceleration:
      return acceleration_phase_variance(psd, config, config.effective_wavevector(), options);
    case NoiseDomain::rotation:
      return rotation_phase_variance(psd, config, config.effective_wavevector(), config.effective_radius(), options);
  }
  throw InvalidInputError("unknown PSD domain");
}

double phase_sigma_to_rotation_sigma(double sigma_phase, const interferometer::InterferometerConfig& config) {
  const double s = std::sin(config.latitude());
  if (std::abs(s) < 1e-15) {
    throw DegenerateOrientationError("sin(latitude) = 0: the rotation axis lies in the interferometer plane");
  }
  const auto& sp = config.species();
  const double two_t = config.interrogation_time();
  return (units::pi / 4.0) * (1.0 / sp.mass_over_hbar()) * sigma_phase /
         (sp.recoil_velocity() * config.launch_velocity() * two_t * two_t * s);
}

}  // namespace gyrochip::noise
