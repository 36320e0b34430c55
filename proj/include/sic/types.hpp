#pragma once

#include <Eigen/Core>

#include <optional>
#include <stdexcept>
#include <string>

namespace sic {

// Error taxonomy. Each maps to a distinct CLI exit code.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct StabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateSpectrum : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SamplingFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Direction { XtoY, YtoX, Undecided };

inline const char* to_string(Direction d) {
  switch (d) {
    case Direction::XtoY: return "x_to_y";
    case Direction::YtoX: return "y_to_x";
    default: return "undecided";
  }
}

// A finite real-valued sample vector. The sample rate is metadata only;
// all spectral math runs on normalized frequency.
struct TimeSeries {
  Eigen::VectorXd samples;
  std::optional<double> sample_rate;

  Eigen::Index length() const { return samples.size(); }
};

// Throws InvalidInput unless the series has >= 2 finite samples.
void validate_for_spectral(const TimeSeries& x, const char* where);

// One-sided power density on a uniform grid of K >= 2 points covering
// [0, 1/2] inclusive. Real signals have even spectra, so this represents
// the full interval [-1/2, 1/2]; frequency averages computed on this grid
// with trapezoidal weights are exact for even integrands.
struct PowerSpectrum {
  Eigen::ArrayXd values;

  Eigen::Index grid_size() const { return values.size(); }

  // Normalized frequency of bin k: k / (2(K-1)).
  double frequency(Eigen::Index k) const {
    return static_cast<double>(k) / (2.0 * static_cast<double>(values.size() - 1));
  }
};

// Throws InvalidInput unless values are finite, nonnegative and K >= 2.
void validate(const PowerSpectrum& s, const char* where);

}  // namespace sic
