#include "sic/filters.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <complex>
#include <limits>

namespace sic {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void validate(const ArmaFilter& f, const char* where, double margin) {
  if (f.feedforward.size() < 1) {
    throw InvalidInput(std::string(where) + ": feedforward vector is empty");
  }
  if (f.feedforward.isZero(0.0)) {
    throw InvalidInput(std::string(where) + ": feedforward coefficients are all zero");
  }
  if (!f.feedforward.allFinite() || !f.feedback.allFinite()) {
    throw InvalidInput(std::string(where) + ": non-finite filter coefficient");
  }
  if (!is_bibo_stable(f.feedback, margin)) {
    throw StabilityError(std::string(where) + ": filter is not BIBO-stable within margin");
  }
}

double max_pole_magnitude(const Eigen::VectorXd& feedback) {
  const Eigen::Index m = feedback.size();
  if (m == 0) return 0.0;
  // Companion matrix of z^m - a1 z^(m-1) - ... - am.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  companion.row(0) = feedback.transpose();
  companion.diagonal(-1).setOnes();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  return solver.eigenvalues().array().abs().maxCoeff();
}

bool is_bibo_stable(const Eigen::VectorXd& feedback, double margin) {
  if (feedback.size() == 0) return true;
  if (!feedback.allFinite()) return false;
  return max_pole_magnitude(feedback) < 1.0 - margin;
}

TimeSeries apply(const ArmaFilter& f, const TimeSeries& x, InitialState) {
  validate(f, "apply");
  if (!x.samples.allFinite()) throw InvalidInput("apply: input contains NaN or infinity");

  const Eigen::Index n = x.samples.size();
  const Eigen::Index fo = f.feedforward.size();  // taps b0..b_FO
  const Eigen::Index bo = f.feedback.size();
  TimeSeries out;
  out.sample_rate = x.sample_rate;
  out.samples.resize(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    double acc = 0.0;
    const Eigen::Index imax = std::min<Eigen::Index>(fo - 1, t);
    for (Eigen::Index i = 0; i <= imax; ++i) acc += f.feedforward[i] * x.samples[t - i];
    const Eigen::Index jmax = std::min<Eigen::Index>(bo, t);
    for (Eigen::Index j = 1; j <= jmax; ++j) acc += f.feedback[j - 1] * out.samples[t - j];
    out.samples[t] = acc;
  }
  return out;
}

ImpulseResponse impulse_response(const ArmaFilter& f, double tail_tol) {
  validate(f, "impulse_response");
  if (tail_tol <= 0.0) throw InvalidInput("impulse_response: tail_tol must be > 0");

  ImpulseResponse h;
  if (f.feedback.size() == 0) {
    h.taps = f.feedforward;
    h.truncation_tail = 0.0;
    return h;
  }

  const double r = max_pole_magnitude(f.feedback);
  const double log_r = std::log(r);
  const double log_geom = -std::log1p(-r);  // log(1/(1-r))

  const Eigen::Index fo = f.feedforward.size();
  const Eigen::Index bo = f.feedback.size();
  const Eigen::Index min_len = std::max<Eigen::Index>(fo + bo + 8, 16);
  constexpr Eigen::Index kMaxLen = 1 << 24;

  std::vector<double> taps;
  taps.reserve(256);
  double l1 = 0.0;
  // log C where |h_n| <= C r^n; grown as taps come in (conservative once the
  // transient has passed the computed prefix).
  double log_c = -std::numeric_limits<double>::infinity();

  for (Eigen::Index t = 0;; ++t) {
    double acc = (t < fo) ? f.feedforward[t] : 0.0;
    const Eigen::Index jmax = std::min<Eigen::Index>(bo, t);
    for (Eigen::Index j = 1; j <= jmax; ++j) acc += f.feedback[j - 1] * taps[t - j];
    taps.push_back(acc);
    l1 += std::abs(acc);
    if (acc != 0.0) log_c = std::max(log_c, std::log(std::abs(acc)) - static_cast<double>(t) * log_r);

    const Eigen::Index len = t + 1;
    if (len >= min_len && l1 > 0.0) {
      const double log_tail = log_c + static_cast<double>(len) * log_r + log_geom;
      if (log_tail <= std::log(tail_tol * l1)) {
        h.truncation_tail = std::exp(log_tail);
        break;
      }
    }
    if (len >= kMaxLen) {
      throw StabilityError("impulse_response: truncation did not converge");
    }
  }
  h.taps = Eigen::Map<Eigen::VectorXd>(taps.data(), static_cast<Eigen::Index>(taps.size()));
  return h;
}

PowerSpectrum transfer_mag_sq(const ArmaFilter& f, Eigen::Index grid_size) {
  validate(f, "transfer_mag_sq");
  if (grid_size < 2) throw InvalidInput("transfer_mag_sq: grid needs at least 2 points");

  const Eigen::Index fo = f.feedforward.size();
  const Eigen::Index bo = f.feedback.size();
  PowerSpectrum out;
  out.values.resize(grid_size);
  for (Eigen::Index k = 0; k < grid_size; ++k) {
    const double theta = kTwoPi * static_cast<double>(k) /
                         (2.0 * static_cast<double>(grid_size - 1));
    const std::complex<double> w = std::polar(1.0, -theta);
    std::complex<double> num = f.feedforward[fo - 1];
    for (Eigen::Index i = fo - 2; i >= 0; --i) num = num * w + f.feedforward[i];
    std::complex<double> den(1.0, 0.0);
    if (bo > 0) {
      std::complex<double> q = f.feedback[bo - 1];
      for (Eigen::Index j = bo - 2; j >= 0; --j) q = q * w + f.feedback[j];
      den -= w * q;
    }
    out.values[k] = std::norm(num) / std::norm(den);
  }
  return out;
}

Eigen::VectorXd haar_rotate(const Eigen::VectorXd& taps, Rng& rng) {
  const Eigen::Index m = taps.size();
  if (m < 1) throw InvalidInput("haar_rotate: empty tap vector");

  Eigen::MatrixXd g(m, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) g(i, j) = rng.gaussian();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& qrMat = qr.matrixQR();
  // Fold sign(diag(R)) into Q; this makes the distribution exactly Haar.
  for (Eigen::Index j = 0; j < m; ++j) {
    if (qrMat(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q * taps;
}

double energy(const ImpulseResponse& h) {
  if (!h.taps.allFinite()) throw InvalidInput("energy: non-finite tap");
  return h.taps.squaredNorm();
}

}  // namespace sic
