#include "sic/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cassert>
#include <cmath>

namespace sic {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void validate_for_spectral(const TimeSeries& x, const char* where) {
  if (x.samples.size() < 2) {
    throw InvalidInput(std::string(where) + ": series needs at least 2 samples");
  }
  if (!x.samples.allFinite()) {
    throw InvalidInput(std::string(where) + ": series contains NaN or infinity");
  }
}

void validate(const PowerSpectrum& s, const char* where) {
  if (s.values.size() < 2) {
    throw InvalidInput(std::string(where) + ": spectrum needs at least 2 grid points");
  }
  if (!s.values.allFinite()) {
    throw InvalidInput(std::string(where) + ": spectrum contains NaN or infinity");
  }
  if ((s.values < 0.0).any()) {
    throw InvalidInput(std::string(where) + ": spectrum has negative values");
  }
}

WelchConfig WelchConfig::defaults_for(Eigen::Index series_length) {
  WelchConfig cfg;
  cfg.segment_length =
      static_cast<int>(std::min<Eigen::Index>(256, series_length / 4));
  cfg.segment_length = std::max(cfg.segment_length, 2);
  return cfg;
}

namespace detail {

Eigen::VectorXcd fft_real(const Eigen::VectorXd& x, Eigen::Index fft_length) {
  assert(fft_length >= x.size());
  std::vector<double> in(static_cast<size_t>(fft_length), 0.0);
  std::copy(x.data(), x.data() + x.size(), in.begin());
  std::vector<std::complex<double>> out;
  Eigen::FFT<double> fft;
  fft.fwd(out, in);
  return Eigen::Map<Eigen::VectorXcd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Eigen::VectorXd make_window(Window w, Eigen::Index length) {
  Eigen::VectorXd win(length);
  const double n = static_cast<double>(length);
  switch (w) {
    case Window::Hann:
      for (Eigen::Index i = 0; i < length; ++i)
        win[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) / n);
      break;
    case Window::Hamming:
      for (Eigen::Index i = 0; i < length; ++i)
        win[i] = 0.54 - 0.46 * std::cos(kTwoPi * static_cast<double>(i) / n);
      break;
    case Window::Rectangular:
      win.setOnes();
      break;
  }
  return win;
}

}  // namespace detail

Eigen::VectorXcd dft(const TimeSeries& x) {
  validate_for_spectral(x, "dft");
  const Eigen::Index n = x.samples.size();
  const Eigen::Index m = (n % 2 == 0) ? n : n + 1;  // even fft length
  Eigen::VectorXcd full = detail::fft_real(x.samples, m);
  return full.head(m / 2 + 1);
}

PowerSpectrum welch_psd(const TimeSeries& x, const WelchConfig& cfg) {
  validate_for_spectral(x, "welch_psd");
  const Eigen::Index n = x.samples.size();
  const Eigen::Index seg = cfg.segment_length;
  if (seg < 2) throw InvalidInput("welch_psd: segment_length must be >= 2");
  if (seg > n) throw InvalidInput("welch_psd: segment_length exceeds series length");
  if (cfg.overlap_fraction < 0.0 || cfg.overlap_fraction >= 1.0) {
    throw InvalidInput("welch_psd: overlap_fraction must be in [0, 1)");
  }

  const Eigen::Index overlap =
      static_cast<Eigen::Index>(cfg.overlap_fraction * static_cast<double>(seg));
  const Eigen::Index hop = std::max<Eigen::Index>(1, seg - overlap);
  const Eigen::Index fft_len = (seg % 2 == 0) ? seg : seg + 1;
  const Eigen::Index bins = fft_len / 2 + 1;

  const Eigen::VectorXd win = detail::make_window(cfg.window, seg);
  const double win_power = win.squaredNorm();

  Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(bins);
  Eigen::Index count = 0;
  Eigen::VectorXd buf(seg);
  for (Eigen::Index start = 0; start + seg <= n; start += hop) {
    buf = x.samples.segment(start, seg);
    if (cfg.detrend == Detrend::Mean) buf.array() -= buf.mean();
    buf.array() *= win.array();
    const Eigen::VectorXcd spec = detail::fft_real(buf, fft_len).head(bins);
    acc += spec.array().abs2();
    ++count;
  }
  // count >= 1 because seg <= n

  // |X_k|^2 / sum(w^2): the two-sided grid mean of these values equals the
  // windowed sample variance exactly (Parseval), and the one-sided
  // trapezoidal mean reproduces the two-sided mean for even spectra.
  PowerSpectrum out;
  out.values = acc / (static_cast<double>(count) * win_power);
  return out;
}

double freq_average(const PowerSpectrum& s) {
  validate(s, "freq_average");
  const Eigen::Index k = s.values.size();
  double sum = 0.5 * (s.values[0] + s.values[k - 1]);
  sum += s.values.segment(1, k - 2).sum();
  return sum / static_cast<double>(k - 1);
}

double ratio_average(const PowerSpectrum& num, const PowerSpectrum& den,
                     double floor) {
  validate(num, "ratio_average");
  validate(den, "ratio_average");
  if (num.values.size() != den.values.size()) {
    throw InvalidInput("ratio_average: spectra have mismatched grids");
  }
  if (floor < 0.0) throw InvalidInput("ratio_average: floor must be >= 0");
  const double den_floor = floor * freq_average(den);
  PowerSpectrum ratio;
  ratio.values = num.values / den.values.max(den_floor);
  if (!ratio.values.allFinite()) {
    throw DegenerateSpectrum("ratio_average: denominator vanishes and floor is 0");
  }
  return freq_average(ratio);
}

}  // namespace sic
