#include "sic/granger.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>

#include <cmath>
#include <limits>

namespace sic {

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double result = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    result *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    result *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return result;
}

// OLS with rank check; falls back to a tiny ridge when the design is
// rank-deficient (exactly collinear regressors occur in noiseless systems).
Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& design,
                                    const Eigen::VectorXd& target, bool* used_ridge) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() == design.cols()) {
    return qr.solve(target);
  }
  *used_ridge = true;
  Eigen::MatrixXd gram = design.transpose() * design;
  const double lambda = 1e-8 * gram.trace() / static_cast<double>(design.cols());
  gram.diagonal().array() += lambda;
  return gram.ldlt().solve(design.transpose() * target);
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("incomplete beta: a, b must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_tail_probability(double f_stat, int d1, int d2) {
  if (d1 <= 0 || d2 <= 0) throw InvalidInput("f_tail_probability: dof must be positive");
  if (!std::isfinite(f_stat)) return f_stat > 0.0 ? 0.0 : 1.0;
  if (f_stat <= 0.0) return 1.0;
  const double x = d2 / (d2 + d1 * f_stat);
  return regularized_incomplete_beta(0.5 * d2, 0.5 * d1, x);
}

VarFit fit_var_restricted_unrestricted(const TimeSeries& y, const TimeSeries& x,
                                       int lag_order) {
  const Eigen::Index t_len = y.samples.size();
  if (x.samples.size() != t_len) throw InvalidInput("granger fit: series lengths differ");
  if (lag_order < 1) throw InvalidInput("granger fit: lag order must be >= 1");
  if (t_len <= 3 * lag_order + 1) {
    throw InvalidInput("granger fit: series too short for lag order (need length > 3p+1)");
  }
  if (!y.samples.allFinite() || !x.samples.allFinite()) {
    throw InvalidInput("granger fit: non-finite sample");
  }
  const auto is_constant = [](const Eigen::VectorXd& v) {
    return (v.array() - v[0]).abs().maxCoeff() == 0.0;
  };
  if (is_constant(y.samples) || is_constant(x.samples)) {
    throw InvalidInput("granger fit: constant series");
  }

  const Eigen::Index p = lag_order;
  const Eigen::Index rows = t_len - p;
  Eigen::VectorXd target = y.samples.tail(rows);

  Eigen::MatrixXd design(rows, 2 * p + 1);
  design.col(0).setOnes();
  for (Eigen::Index j = 1; j <= p; ++j) {
    design.col(j) = y.samples.segment(p - j, rows);
    design.col(p + j) = x.samples.segment(p - j, rows);
  }

  VarFit fit;
  fit.dof_numerator = static_cast<int>(p);
  fit.dof_denominator = static_cast<int>(t_len - 3 * p - 1);

  const auto restricted = design.leftCols(p + 1);
  fit.coeffs_restricted = solve_least_squares(restricted, target, &fit.used_ridge);
  fit.rss_restricted = (target - restricted * fit.coeffs_restricted).squaredNorm();

  fit.coeffs_unrestricted = solve_least_squares(design, target, &fit.used_ridge);
  fit.rss_unrestricted = (target - design * fit.coeffs_unrestricted).squaredNorm();
  return fit;
}

GrangerReport granger_test(const TimeSeries& x, const TimeSeries& y, int lag_order) {
  bool used_ridge = false;
  const auto direction_p = [lag_order, &used_ridge](const TimeSeries& effect,
                                                    const TimeSeries& cause) {
    const VarFit fit = fit_var_restricted_unrestricted(effect, cause, lag_order);
    used_ridge = used_ridge || fit.used_ridge;
    const double scale = std::max(fit.rss_restricted, 1.0);
    if (fit.rss_unrestricted <= scale * 1e-14) return 0.0;  // exact fit
    const double f_stat =
        ((fit.rss_restricted - fit.rss_unrestricted) / fit.dof_numerator) /
        (fit.rss_unrestricted / fit.dof_denominator);
    return f_tail_probability(std::max(f_stat, 0.0), fit.dof_numerator,
                              fit.dof_denominator);
  };

  GrangerReport report;
  report.lag_order = lag_order;
  report.p_xy = direction_p(y, x);
  report.p_yx = direction_p(x, y);
  report.used_ridge = used_ridge;
  if (report.p_xy < report.p_yx) {
    report.decision = Direction::XtoY;
  } else if (report.p_yx < report.p_xy) {
    report.decision = Direction::YtoX;
  } else {
    report.decision = Direction::Undecided;
  }
  return report;
}

}  // namespace sic
