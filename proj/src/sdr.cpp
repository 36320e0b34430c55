#include "sic/sdr.hpp"

#include <cmath>
#include <limits>

namespace sic {

double sdr_forward(const PowerSpectrum& sxx, const PowerSpectrum& syy, double floor) {
  const double mean_x = freq_average(sxx);
  const double mean_y = freq_average(syy);
  if (mean_x <= 0.0 || mean_y <= 0.0) {
    throw DegenerateSpectrum("sdr_forward: spectrum has no power");
  }
  const double ratio = ratio_average(syy, sxx, floor);
  const double denom = mean_x * ratio;
  if (denom <= 0.0 || !std::isfinite(denom)) {
    throw DegenerateSpectrum("sdr_forward: degenerate denominator");
  }
  return mean_y / denom;
}

double sdr_power_energy(double px, double py, double h_energy) {
  if (!(px > 0.0) || !(py > 0.0) || !(h_energy > 0.0)) {
    throw InvalidInput("sdr_power_energy: arguments must be positive");
  }
  return py / (px * h_energy);
}

Direction decide(double delta, double tie_eps) {
  if (delta > tie_eps) return Direction::XtoY;
  if (delta < -tie_eps) return Direction::YtoX;
  return Direction::Undecided;
}

SdrReport infer(const TimeSeries& x, const TimeSeries& y, const WelchConfig& cfg,
                double tie_eps, double floor) {
  if (x.samples.size() != y.samples.size()) {
    throw InvalidInput("infer: series lengths differ");
  }
  const PowerSpectrum sxx = welch_psd(x, cfg);
  const PowerSpectrum syy = welch_psd(y, cfg);

  SdrReport report;
  report.estimator = SdrEstimator::SpectralRatio;
  report.rho_forward = sdr_forward(sxx, syy, floor);
  report.rho_backward = sdr_forward(syy, sxx, floor);
  report.delta = report.rho_forward - report.rho_backward;
  report.decision = decide(report.delta, tie_eps);
  return report;
}

ViolationBound violation_bound(const PowerSpectrum& h_mag_sq) {
  validate(h_mag_sq, "violation_bound");
  const double mean = freq_average(h_mag_sq);
  if (mean <= 0.0) throw DegenerateSpectrum("violation_bound: transfer function is zero");

  // <1/f> with the same trapezoidal weights; a zero anywhere on the grid
  // sends the inverse average to infinity and the product to 0.
  const double min_val = h_mag_sq.values.minCoeff();
  ViolationBound out;
  if (min_val <= 0.0) {
    out.product = 0.0;
  } else {
    PowerSpectrum inv;
    inv.values = h_mag_sq.values.inverse();
    out.product = 1.0 / (mean * freq_average(inv));
  }

  const double max_val = h_mag_sq.values.maxCoeff();
  const double alpha = 2.0 - max_val / mean;
  if (alpha > 0.0) {
    PowerSpectrum dev_sq;
    dev_sq.values = ((h_mag_sq.values - mean) / mean).square();
    out.alpha = alpha;
    out.bound = 1.0 / (1.0 + alpha * freq_average(dev_sq));
  }
  return out;
}

}  // namespace sic
