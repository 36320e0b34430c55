#pragma once

#include "sic/types.hpp"

#include <Eigen/Core>

namespace sic {

// Nested OLS fits for one direction of the Granger test.
// restricted:   y_t ~ 1 + y_{t-1..t-p}
// unrestricted: y_t ~ 1 + y_{t-1..t-p} + x_{t-1..t-p}
struct VarFit {
  double rss_restricted = 0.0;
  double rss_unrestricted = 0.0;
  int dof_numerator = 0;    // p
  int dof_denominator = 0;  // T - 3p - 1
  bool used_ridge = false;  // rank-deficient design, tiny-ridge fallback
  Eigen::VectorXd coeffs_restricted;
  Eigen::VectorXd coeffs_unrestricted;
};

VarFit fit_var_restricted_unrestricted(const TimeSeries& y, const TimeSeries& x,
                                       int lag_order);

struct GrangerReport {
  double p_xy = 1.0;  // null: X does not Granger-cause Y
  double p_yx = 1.0;
  int lag_order = 0;
  Direction decision = Direction::Undecided;
  bool used_ridge = false;  // some design was rank-deficient (common for
                            // noiseless deterministic couplings)
};

// F-tests in both directions with forced decision by the smaller p-value;
// Undecided only on an exact tie.
GrangerReport granger_test(const TimeSeries& x, const TimeSeries& y, int lag_order = 5);

// P(F(d1, d2) > f) via the regularized incomplete beta function.
double f_tail_probability(double f_stat, int d1, int d2);

// Regularized incomplete beta I_x(a, b), relative accuracy ~1e-10.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace sic
