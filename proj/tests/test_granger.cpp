#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sic/filters.hpp"
#include "sic/granger.hpp"
#include "sic/rng.hpp"
#include "sic/synth.hpp"

#include "oracles.hpp"

#include <cmath>

using namespace sic;

namespace {

TimeSeries from_vector(const Eigen::VectorXd& v) {
  TimeSeries s;
  s.samples = v;
  return s;
}

// VAR pair per the coupled model: x is AR(1), y regresses on its own past
// and on x's past, both with unit innovations.
std::pair<TimeSeries, TimeSeries> var_pair(double a, double b, double c, int n,
                                           std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (int t = 1; t < n; ++t) {
    x[t] = a * x[t - 1] + rng.gaussian();
    y[t] = b * y[t - 1] + c * x[t - 1] + rng.gaussian();
  }
  return {from_vector(x), from_vector(y)};
}

}  // namespace

TEST_CASE("incomplete beta against hand values") {
  CHECK(regularized_incomplete_beta(1.0, 1.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  // I_x(1, b) = 1 - (1-x)^b.
  CHECK(regularized_incomplete_beta(1.0, 3.0, 0.2) ==
        doctest::Approx(1.0 - std::pow(0.8, 3.0)).epsilon(1e-12));
  // Symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
  const double lhs = regularized_incomplete_beta(2.5, 4.0, 0.3);
  const double rhs = 1.0 - regularized_incomplete_beta(4.0, 2.5, 0.7);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("F tail probabilities against closed forms") {
  // P(F(2, d2) > f) = (1 + 2 f / d2)^(-d2/2).
  CHECK(f_tail_probability(1.0, 2, 4) == doctest::Approx(std::pow(1.5, -2.0)).epsilon(1e-10));
  CHECK(f_tail_probability(3.0, 2, 2) == doctest::Approx(1.0 / 4.0).epsilon(1e-10));
  // Symmetric point of F(1,1).
  CHECK(f_tail_probability(1.0, 1, 1) == doctest::Approx(0.5).epsilon(1e-10));
  // Large denominator dof: F(5, inf) ~ chi2_5 / 5.
  CHECK(f_tail_probability(1.0, 5, 10000000) ==
        doctest::Approx(oracle::chi2_5_tail(5.0)).epsilon(1e-3));
  // Edges.
  CHECK(f_tail_probability(0.0, 3, 7) == 1.0);
  CHECK(f_tail_probability(std::numeric_limits<double>::infinity(), 3, 7) == 0.0);
}

TEST_CASE("tiny OLS fit matches the normal-equation hand solution") {
  // p = 1, 8 points; restricted solves a 2x2 system, unrestricted a 3x3.
  Eigen::VectorXd y{{0.5, 1.0, -0.3, 0.7, 1.2, -0.1, 0.4, 0.9}};
  Eigen::VectorXd x{{1.0, -0.5, 0.8, 0.2, -1.1, 0.6, 0.3, -0.7}};
  const VarFit fit = fit_var_restricted_unrestricted(from_vector(y), from_vector(x), 1);

  const int rows = 7;
  Eigen::MatrixXd design_u(rows, 3);
  Eigen::VectorXd target(rows);
  for (int t = 0; t < rows; ++t) {
    target[t] = y[t + 1];
    design_u(t, 0) = 1.0;
    design_u(t, 1) = y[t];
    design_u(t, 2) = x[t];
  }
  // Hand oracle: solve the normal equations directly.
  const Eigen::MatrixXd design_r = design_u.leftCols(2);
  const Eigen::Vector2d beta_r =
      (design_r.transpose() * design_r).inverse() * (design_r.transpose() * target);
  const Eigen::Vector3d beta_u =
      (design_u.transpose() * design_u).inverse() * (design_u.transpose() * target);

  CHECK((fit.coeffs_restricted - beta_r).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((fit.coeffs_unrestricted - beta_u).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(fit.rss_restricted ==
        doctest::Approx((target - design_r * beta_r).squaredNorm()).epsilon(1e-10));
  CHECK(fit.rss_unrestricted ==
        doctest::Approx((target - design_u * beta_u).squaredNorm()).epsilon(1e-10));
  CHECK(fit.dof_numerator == 1);
  CHECK(fit.dof_denominator == 8 - 3 * 1 - 1);
}

TEST_CASE("coupled VAR data yields a decisive forward test") {
  const auto [x, y] = var_pair(0.5, 0.4, 0.5, 10000, 101);
  const VarFit fit = fit_var_restricted_unrestricted(y, x, 5);
  CHECK(fit.rss_unrestricted < 0.8 * fit.rss_restricted);

  const GrangerReport report = granger_test(x, y, 5);
  CHECK(report.decision == Direction::XtoY);
  CHECK(report.p_xy < 1e-3);
  CHECK(report.p_yx > 1e-3);
}

TEST_CASE("independent series produce a near-null F statistic") {
  Rng rng(102);
  Eigen::VectorXd x(4000), y(4000);
  y[0] = 0.0;
  x[0] = rng.gaussian();
  for (int t = 1; t < 4000; ++t) {
    x[t] = rng.gaussian();
    y[t] = 0.6 * y[t - 1] + rng.gaussian();
  }
  const VarFit fit = fit_var_restricted_unrestricted(from_vector(y), from_vector(x), 5);
  CHECK(fit.rss_unrestricted > 0.99 * fit.rss_restricted);
}

TEST_CASE("false-positive rate is calibrated under the null") {
  // Uncoupled model (c = 0): the 0.05-level test should reject ~5% of the time.
  int rejections = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    const auto [x, y] = var_pair(0.5, 0.4, 0.0, 1000, 5000 + trial);
    const VarFit fit = fit_var_restricted_unrestricted(y, x, 5);
    const double f_stat =
        ((fit.rss_restricted - fit.rss_unrestricted) / fit.dof_numerator) /
        (fit.rss_unrestricted / fit.dof_denominator);
    if (f_tail_probability(f_stat, fit.dof_numerator, fit.dof_denominator) < 0.05) {
      ++rejections;
    }
  }
  const double rate = static_cast<double>(rejections) / trials;
  CHECK(rate > 0.03);
  CHECK(rate < 0.07);
}

TEST_CASE("lag construction: aligned coupling is detected, advance flips it") {
  // y_t = 0.5 y_{t-1} + x_{t-1} with white-noise x.
  ArmaFilter mech{Eigen::VectorXd{{0.0, 1.0}}, Eigen::VectorXd::Constant(1, 0.5)};
  Rng rng(103);
  TimeSeries x;
  x.samples.resize(8000);
  for (int t = 0; t < 8000; ++t) x.samples[t] = rng.gaussian();
  TimeSeries y = apply(mech, x);

  SUBCASE("no lag: cause precedes effect") {
    const GrangerReport report = granger_test(x, y, 5);
    CHECK(report.decision == Direction::XtoY);
  }
  SUBCASE("effect leading by two flips the forced decision") {
    TimeSeries xs = x, ys = y;
    apply_measurement_lag(xs, ys, 2);
    const GrangerReport report = granger_test(xs, ys, 5);
    CHECK(report.decision == Direction::YtoX);
  }
}

TEST_CASE("exchange symmetry of the report") {
  const auto [x, y] = var_pair(0.3, 0.5, 0.4, 3000, 104);
  const GrangerReport fwd = granger_test(x, y, 4);
  const GrangerReport rev = granger_test(y, x, 4);
  CHECK(fwd.p_xy == rev.p_yx);  // bitwise
  CHECK(fwd.p_yx == rev.p_xy);
  CHECK(fwd.p_xy >= 0.0);
  CHECK(fwd.p_xy <= 1.0);
  CHECK(fwd.p_yx >= 0.0);
  CHECK(fwd.p_yx <= 1.0);
}

TEST_CASE("input validation") {
  const auto [x, y] = var_pair(0.5, 0.4, 0.5, 12, 105);
  CHECK_THROWS_AS(fit_var_restricted_unrestricted(y, x, 4), InvalidInput);
  const auto [x2, y2] = var_pair(0.5, 0.4, 0.5, 100, 106);
  TimeSeries constant;
  constant.samples = Eigen::VectorXd::Ones(100);
  CHECK_THROWS_AS(granger_test(constant, x2, 2), InvalidInput);
}
