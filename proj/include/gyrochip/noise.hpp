#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gyrochip/interferometer.hpp"

namespace gyrochip::noise {

enum class NoiseDomain { phase, acceleration, rotation };

std::string_view domain_name(NoiseDomain domain);
NoiseDomain parse_domain(std::string_view name);

// coefficient * f^exponent
struct PowerLawTerm {
  double coefficient;
  double exponent;
};

// One-sided PSD over ordinary frequency f (Hz). Units follow the domain:
// rad^2/Hz, (m/s^2)^2/Hz or (rad/s)^2/Hz.
class PowerSpectralDensity {
 public:
  // h0 + h_-1 / f + h_-2 / f^2
  static PowerSpectralDensity analytic(NoiseDomain domain, double white, double flicker = 0.0,
                                       double random_walk = 0.0);
  static PowerSpectralDensity power_law(NoiseDomain domain, std::vector<PowerLawTerm> terms);
  // Log-log interpolation between nodes (linear on segments touching a zero);
  // outside the table, the end segment's power law continues.
  static PowerSpectralDensity tabulated(NoiseDomain domain, std::vector<double> frequencies,
                                        std::vector<double> values);

  NoiseDomain domain() const noexcept { return domain_; }
  bool is_tabulated() const noexcept { return !frequencies_.empty(); }
  const std::vector<PowerLawTerm>& terms() const noexcept { return terms_; }
  const std::vector<double>& frequencies() const noexcept { return frequencies_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double operator()(double frequency) const;

  // Power-law exponent of S as f -> 0 and f -> infinity (+inf when S
  // vanishes identically there).
  double low_frequency_exponent() const;
  double high_frequency_exponent() const;

  // New PSD in `domain`: coefficient * f^exponent * S(f).
  PowerSpectralDensity reweighted(NoiseDomain domain, double coefficient, double exponent) const;

 private:
  PowerSpectralDensity(NoiseDomain domain, std::vector<PowerLawTerm> terms, std::vector<double> frequencies,
                       std::vector<double> values);
  double end_segment(std::size_t i0, std::size_t i1, double f) const;
  static double segment_exponent(double f0, double s0, double f1, double s1);

  NoiseDomain domain_;
  std::vector<PowerLawTerm> terms_;
  std::vector<double> frequencies_;
  std::vector<double> values_;
};

// CSV with header `f_hz,psd_value`; '#' lines are comments.
PowerSpectralDensity read_psd_csv(std::istream& in, NoiseDomain domain);
PowerSpectralDensity load_psd_csv(const std::filesystem::path& path, NoiseDomain domain);

// Maps a PSD between domains with omega = 2 pi f:
//   S_a = omega^4 / k_eff^2 S_phi,  S_Omega = omega^2 / (2 k_eff R)^2 S_phi.
PowerSpectralDensity convert_psd(const PowerSpectralDensity& psd, NoiseDomain target, double k_eff, double radius);

struct Band {
  double f_min;  // Hz
  double f_max;  // Hz
};

// [1e-4 Hz, 10 / tau]
Band default_band(const interferometer::InterferometerConfig& config);

inline constexpr std::string_view psd_convention = "one-sided, ordinary frequency";

struct VarianceResult {
  double value;           // rad^2
  double error_estimate;  // rad^2
  Band band;
  std::string convention;
  // Exponent p of the integrand ~ f^p as f -> 0; the integral over [0, f1]
  // diverges when p <= -1, which is why the band has a positive floor.
  double infrared_exponent;
  std::size_t panels;
  bool converged;
};

struct VarianceOptions {
  std::optional<Band> band;
  double relative_tolerance = 1e-6;
};

// integral over the band of S_phi |H|^2 df
VarianceResult phase_variance(const PowerSpectralDensity& psd, const interferometer::InterferometerConfig& config,
                              const VarianceOptions& options = {});
// integral of k_eff^2 / omega^4 S_a |H|^2 df
VarianceResult acceleration_phase_variance(const PowerSpectralDensity& psd,
                                           const interferometer::InterferometerConfig& config, double k_eff,
                                           const VarianceOptions& options = {});
// integral of (2 k_eff R)^2 / omega^2 S_Omega |H|^2 df
VarianceResult rotation_phase_variance(const PowerSpectralDensity& psd,
                                       const interferometer::InterferometerConfig& config, double k_eff,
                                       double radius, const VarianceOptions& options = {});

// Dispatches on psd.domain() using the config's k_eff and effective radius.
VarianceResult output_phase_variance(const PowerSpectralDensity& psd,
                                     const interferometer::InterferometerConfig& config,
                                     const VarianceOptions& options = {});

// sigma_Omega = (pi/4)(hbar/M) sigma_Phi / (v_r v_launch (2T)^2 sin(latitude))
double phase_sigma_to_rotation_sigma(double sigma_phase, const interferometer::InterferometerConfig& config);

// Panel boundaries: band edges, zeros n/tau and n/(2T - tau) of H inside the
// band, plus table nodes of a tabulated PSD.
std::vector<double> integration_breakpoints(const interferometer::InterferometerConfig& config, const Band& band,
                                            const PowerSpectralDensity* psd = nullptr);

}  // namespace gyrochip::noise
