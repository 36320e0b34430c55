#pragma once

#include "sic/spectral.hpp"
#include "sic/types.hpp"

#include <optional>

namespace sic {

enum class SdrEstimator { SpectralRatio, PowerEnergy };

inline const char* to_string(SdrEstimator e) {
  return e == SdrEstimator::SpectralRatio ? "spectral_ratio" : "power_energy";
}

// Spectral dependency ratios in both directions and the resulting decision.
// decision is XtoY iff delta > tie_eps, YtoX iff delta < -tie_eps, and
// Undecided otherwise.
struct SdrReport {
  double rho_forward = 0.0;   // rho_{X->Y}
  double rho_backward = 0.0;  // rho_{Y->X}
  double delta = 0.0;         // rho_forward - rho_backward
  Direction decision = Direction::Undecided;
  SdrEstimator estimator = SdrEstimator::SpectralRatio;
};

// rho_{X->Y} = <S_yy> / (<S_xx> <S_yy/S_xx>). The ratio average uses the
// floored denominator; see ratio_average.
double sdr_forward(const PowerSpectrum& sxx, const PowerSpectrum& syy,
                   double floor = 1e-8);

// rho_{X->Y} = P(Y) / (P(X) ||h||_2^2); the estimator of choice when the
// mechanism's filter is known (synthetic runs).
double sdr_power_energy(double px, double py, double h_energy);

// Estimates both spectra with Welch's method and fills the report with
// both directional ratios. Deterministic in (x, y, cfg).
SdrReport infer(const TimeSeries& x, const TimeSeries& y, const WelchConfig& cfg,
                double tie_eps = 1e-3, double floor = 1e-8);

Direction decide(double delta, double tie_eps);

// Forward-backward product rho_f * rho_b = 1 / (<|h|^2> <1/|h|^2>) computed
// exactly on the grid, plus the tightened bound
// [1 + alpha <((|h|^2 - E)/E)^2>]^-1 with E = <|h|^2>, valid whenever
// alpha = 2 - max|h|^2 / E is positive. alpha and bound are absent when the
// hypothesis fails; the product is below 1 regardless for non-constant
// transfer functions.
struct ViolationBound {
  double product = 0.0;
  std::optional<double> alpha;
  std::optional<double> bound;
};

ViolationBound violation_bound(const PowerSpectrum& h_mag_sq);

}  // namespace sic
