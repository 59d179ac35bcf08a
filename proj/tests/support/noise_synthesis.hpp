#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gyrochip/interferometer.hpp"
#include "gyrochip/noise.hpp"

namespace gyrochip::testing {

struct SynthesisGrid {
  double dt;           // s
  std::size_t length;  // samples, one period of the synthetic signal
  double f_lo;         // Hz, lowest populated bin
  double f_hi;         // Hz, highest populated bin
};

// Periodic phase series sum_k A_k cos(2 pi f_k t + theta_k) over the FFT bins
// in [f_lo, f_hi], with A_k^2 / 2 = S(f_k) df and seeded uniform phases.
std::vector<double> synthesize_phase_noise(const noise::PowerSpectralDensity& psd, const SynthesisGrid& grid,
                                           std::uint64_t seed);

// Variance, over every circular shift, of the interferometer output
// integral of h(t) phi(t) dt (Simpson rule over each pulse).
double time_domain_output_variance(const std::vector<double>& phi, double dt,
                                   const interferometer::InterferometerConfig& config);

// sum_k S(f_k) |H(f_k)|^2 df over the populated bins.
double bin_sum(const noise::PowerSpectralDensity& psd, const SynthesisGrid& grid,
               const interferometer::InterferometerConfig& config);

}  // namespace gyrochip::testing
