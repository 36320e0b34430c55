#pragma once

#include "sic/filters.hpp"
#include "sic/types.hpp"

#include <Eigen/Core>

#include <vector>

namespace sic {

// Truncated linear system of order N: the 2N x 2N filter matrix
// [H]_ij = h_{i-j} (causal taps, zeros elsewhere) together with the
// symmetric Toeplitz input covariance [Sigma]_ij = C_xx(|i-j|).
struct TruncatedSystem {
  Eigen::Index order = 0;        // N; matrices are 2N x 2N
  Eigen::MatrixXd filter;        // H
  Eigen::MatrixXd input_cov;     // Sigma_X
};

// Materializes H and Sigma_X from the causal taps and the one-sided
// autocovariance prefix C_xx(0 .. 2N-1). Throws InvalidInput when fewer
// than 2N lags are supplied.
TruncatedSystem build_truncated(const ImpulseResponse& h,
                                const Eigen::VectorXd& autocov, Eigen::Index order);

// Tracial dependency ratio tau(H Sigma H^T) / (tau(Sigma) tau(H H^T)) with
// tau the normalized trace. The numerator trace is accumulated row by row
// so the triple product is never materialized beyond one row.
double tdr(const TruncatedSystem& sys);

// T_N = tau_2N(H H^T) = sum_k h_k^2 (2N - k) / (2N), evaluated in closed
// form from the taps for each requested order.
std::vector<double> t_n_sequence(const ImpulseResponse& h,
                                 const std::vector<Eigen::Index>& orders);

struct TdrReport {
  std::vector<Eigen::Index> orders;
  std::vector<double> tdr_values;   // r_N per order
  std::vector<double> t_n_values;   // T_N per order
  double sdr_reference = 0.0;       // quadrature rho the ladder converges to
};

// Convergence ladder: analytic input spectrum from `input_shape` (driven by
// unit-variance noise), autocovariance by inverse FFT of that spectrum on a
// fine grid, truncated systems at each order. tdr_values approach
// sdr_reference as the order grows.
TdrReport convergence_curve(const ArmaFilter& mechanism, const ArmaFilter& input_shape,
                            const std::vector<Eigen::Index>& orders);

// C_xx(0 .. lags-1) for the ARMA process defined by `input_shape` driven by
// unit-variance white noise; inverse transform of the analytic spectrum on
// a grid at least 16x the requested lags.
Eigen::VectorXd autocovariance_from_spectrum(const ArmaFilter& input_shape,
                                             Eigen::Index lags);

}  // namespace sic
