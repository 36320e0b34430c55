#pragma once

#include "sic/types.hpp"

#include <Eigen/Core>

namespace sic {

enum class Window { Hann, Hamming, Rectangular };
enum class Detrend { Mean, None };

// Welch estimator configuration. Defaults: Hann window, 50% overlap, mean
// detrending, segment length min(256, len/4). The overlap in samples is
// floor(overlap_fraction * segment_length); the hop is the remainder.
struct WelchConfig {
  int segment_length = 256;
  double overlap_fraction = 0.5;
  Window window = Window::Hann;
  Detrend detrend = Detrend::Mean;

  static WelchConfig defaults_for(Eigen::Index series_length);
};

// Discrete Fourier transform of the series sampled on the one-sided grid
// nu_k = k / (2(K-1)) over [0, 1/2]. For even length n this is the usual
// one-sided DFT with K = n/2 + 1 bins; odd lengths are zero-padded by one
// sample, which leaves the transform values unchanged and keeps the grid
// endpoint at exactly 1/2. Linear in the input.
Eigen::VectorXcd dft(const TimeSeries& x);

// Welch power spectral density on the one-sided grid, K = fft_length/2 + 1
// points with fft_length = segment_length rounded up to even.
//
// Normalization: the trapezoidal mean over the grid estimates the variance
// of the (detrended) series, i.e. values integrate to total power over
// [-1/2, 1/2]. One-sided values are not doubled; they are samples of the
// even spectral density, which makes grid averages exact stand-ins for
// integrals over the full interval.
PowerSpectrum welch_psd(const TimeSeries& x, const WelchConfig& cfg);

// <f>: average of the spectrum over [-1/2, 1/2], computed as the
// trapezoidal mean of the one-sided grid values. Exact for constants.
double freq_average(const PowerSpectrum& s);

// <num/den> with the denominator floored at floor * freq_average(den) to
// guard near-zero bins (transfer functions with zeros on the unit circle
// make the exact ratio average diverge).
double ratio_average(const PowerSpectrum& num, const PowerSpectrum& den,
                     double floor = 1e-8);

namespace detail {

// Full complex DFT of a real vector, zero-padded to fft_length.
Eigen::VectorXcd fft_real(const Eigen::VectorXd& x, Eigen::Index fft_length);

Eigen::VectorXd make_window(Window w, Eigen::Index length);

}  // namespace detail

}  // namespace sic
