#include "sic/trace.hpp"

#include "sic/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

namespace sic {

TruncatedSystem build_truncated(const ImpulseResponse& h,
                                const Eigen::VectorXd& autocov, Eigen::Index order) {
  if (order < 1) throw InvalidInput("build_truncated: order must be >= 1");
  const Eigen::Index dim = 2 * order;
  if (autocov.size() < dim) {
    throw InvalidInput("build_truncated: need autocovariance lags 0.." +
                       std::to_string(dim - 1));
  }
  if (!h.taps.allFinite() || !autocov.allFinite()) {
    throw InvalidInput("build_truncated: non-finite input");
  }

  TruncatedSystem sys;
  sys.order = order;
  sys.filter = Eigen::MatrixXd::Zero(dim, dim);
  const Eigen::Index taps = h.taps.size();
  for (Eigen::Index d = 0; d < std::min(taps, dim); ++d) {
    sys.filter.diagonal(-d).setConstant(h.taps[d]);
  }
  sys.input_cov.resize(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      sys.input_cov(i, j) = autocov[std::abs(i - j)];
    }
  }
  return sys;
}

double tdr(const TruncatedSystem& sys) {
  const Eigen::Index dim = sys.filter.rows();
  if (dim < 2 || sys.filter.cols() != dim || sys.input_cov.rows() != dim ||
      sys.input_cov.cols() != dim) {
    throw InvalidInput("tdr: malformed truncated system");
  }
  const double n = static_cast<double>(dim);
  const double tau_sigma = sys.input_cov.trace() / n;
  const double tau_hht = sys.filter.squaredNorm() / n;
  if (!(tau_sigma > 0.0) || !(tau_hht > 0.0)) {
    throw DegenerateSpectrum("tdr: degenerate trace");
  }
  double acc = 0.0;
  Eigen::VectorXd tmp(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    tmp.noalias() = sys.input_cov * sys.filter.row(i).transpose();
    acc += sys.filter.row(i) * tmp;
  }
  const double tau_hsh = acc / n;
  return tau_hsh / (tau_sigma * tau_hht);
}

std::vector<double> t_n_sequence(const ImpulseResponse& h,
                                 const std::vector<Eigen::Index>& orders) {
  if (!h.taps.allFinite()) throw InvalidInput("t_n_sequence: non-finite tap");
  std::vector<double> out;
  out.reserve(orders.size());
  for (const Eigen::Index order : orders) {
    if (order < 1) throw InvalidInput("t_n_sequence: order must be >= 1");
    const double two_n = 2.0 * static_cast<double>(order);
    const Eigen::Index kmax = std::min<Eigen::Index>(h.taps.size(), 2 * order);
    double t = 0.0;
    for (Eigen::Index k = 0; k < kmax; ++k) {
      t += h.taps[k] * h.taps[k] * (two_n - static_cast<double>(k)) / two_n;
    }
    out.push_back(t);
  }
  return out;
}

Eigen::VectorXd autocovariance_from_spectrum(const ArmaFilter& input_shape,
                                             Eigen::Index lags) {
  validate(input_shape, "autocovariance_from_spectrum");
  if (lags < 1) throw InvalidInput("autocovariance_from_spectrum: lags must be >= 1");

  Eigen::Index grid = 4096;
  while (grid < 16 * lags) grid *= 2;

  // One-sided analytic spectrum, mirrored to the full circle.
  const PowerSpectrum one_sided = transfer_mag_sq(input_shape, grid / 2 + 1);
  std::vector<std::complex<double>> two_sided(static_cast<size_t>(grid));
  for (Eigen::Index j = 0; j <= grid / 2; ++j) {
    two_sided[static_cast<size_t>(j)] = one_sided.values[j];
  }
  for (Eigen::Index j = grid / 2 + 1; j < grid; ++j) {
    two_sided[static_cast<size_t>(j)] = one_sided.values[grid - j];
  }

  std::vector<std::complex<double>> time_domain;
  Eigen::FFT<double> fft;
  fft.inv(time_domain, two_sided);

  Eigen::VectorXd autocov(lags);
  for (Eigen::Index t = 0; t < lags; ++t) {
    autocov[t] = time_domain[static_cast<size_t>(t)].real();
  }
  return autocov;
}

TdrReport convergence_curve(const ArmaFilter& mechanism, const ArmaFilter& input_shape,
                            const std::vector<Eigen::Index>& orders) {
  validate(mechanism, "convergence_curve");
  validate(input_shape, "convergence_curve");
  if (orders.empty()) throw InvalidInput("convergence_curve: no orders given");

  const Eigen::Index max_order = *std::max_element(orders.begin(), orders.end());
  const ImpulseResponse h = impulse_response(mechanism);
  const Eigen::VectorXd autocov = autocovariance_from_spectrum(input_shape, 2 * max_order);

  TdrReport report;
  report.orders = orders;
  report.tdr_values.reserve(orders.size());
  report.t_n_values = t_n_sequence(h, orders);
  for (const Eigen::Index order : orders) {
    const TruncatedSystem sys = build_truncated(h, autocov.head(2 * order), order);
    report.tdr_values.push_back(tdr(sys));
  }

  // Quadrature reference: rho = <S_xx |h|^2> / (<S_xx> <|h|^2>) on a fine
  // analytic grid; S_yy/S_xx collapses to |h|^2 exactly.
  const Eigen::Index fine = 8193;
  const PowerSpectrum sxx = transfer_mag_sq(input_shape, fine);
  const PowerSpectrum hmag = transfer_mag_sq(mechanism, fine);
  PowerSpectrum syy;
  syy.values = sxx.values * hmag.values;
  report.sdr_reference =
      freq_average(syy) / (freq_average(sxx) * freq_average(hmag));
  return report;
}

}  // namespace sic
