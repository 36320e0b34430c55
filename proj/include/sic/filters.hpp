#pragma once

#include "sic/rng.hpp"
#include "sic/types.hpp"

#include <Eigen/Core>

namespace sic {

// Default BIBO stability margin: all feedback poles must satisfy
// |z| < 1 - margin. A strictly positive margin keeps impulse-response
// truncation lengths bounded.
inline constexpr double kStabilityMargin = 1e-3;

// ARMA filter in the difference-equation form
//
//   y[n] = sum_i b[i] x[n-i] + sum_{j>=1} a[j] y[n-j],
//
// with a0 = 1 implicit. Note the positive feedback sign: the feedback
// coefficients are accumulated with +a[j], so the transfer function is
// B(z) / (1 - sum_j a[j] z^-j).
struct ArmaFilter {
  Eigen::VectorXd feedforward;  // b0..b_FO
  Eigen::VectorXd feedback;     // a1..a_BO

  Eigen::Index feedforward_order() const { return feedforward.size() - 1; }
  Eigen::Index feedback_order() const { return feedback.size(); }

  static ArmaFilter identity() {
    return ArmaFilter{Eigen::VectorXd::Ones(1), Eigen::VectorXd()};
  }
};

// Throws InvalidInput for an empty/all-zero feedforward vector and
// StabilityError when a feedback pole violates the margin.
void validate(const ArmaFilter& f, const char* where,
              double margin = kStabilityMargin);

// Causal truncation of an impulse response. truncation_tail is an upper
// bound on the l1 mass beyond the stored taps.
struct ImpulseResponse {
  Eigen::VectorXd taps;
  double truncation_tail = 0.0;
};

enum class InitialState { Zero };

// Runs the difference equation over the input with zero initial conditions;
// output has the same length as the input.
TimeSeries apply(const ArmaFilter& f, const TimeSeries& x,
                 InitialState initial = InitialState::Zero);

// Truncated impulse response. The truncation point is chosen from the
// largest pole magnitude r so that the geometric tail bound C r^L / (1-r)
// drops below tail_tol times the accumulated l1 mass. FIR filters are exact
// with zero tail.
ImpulseResponse impulse_response(const ArmaFilter& f, double tail_tol = 1e-9);

// |B(e^{-i 2 pi nu})|^2 / |A(e^{-i 2 pi nu})|^2 on a grid of `grid_size`
// one-sided frequencies covering [0, 1/2].
PowerSpectrum transfer_mag_sq(const ArmaFilter& f, Eigen::Index grid_size);

// True iff every root of z^m - a1 z^(m-1) - ... - am has magnitude
// < 1 - margin (companion-matrix eigenvalues). Empty feedback is stable.
bool is_bibo_stable(const Eigen::VectorXd& feedback, double margin = kStabilityMargin);

// Largest pole magnitude of the feedback polynomial (0 for FIR).
double max_pole_magnitude(const Eigen::VectorXd& feedback);

// Multiplies the tap vector by a Haar-distributed orthogonal matrix, drawn
// by QR orthogonalization of an iid Gaussian matrix with the sign of the
// triangular factor's diagonal folded into Q. Preserves the Euclidean norm.
Eigen::VectorXd haar_rotate(const Eigen::VectorXd& taps, Rng& rng);

// Squared l2 norm of the stored taps (the truncation tail is reported by
// ImpulseResponse, not added here).
double energy(const ImpulseResponse& h);

}  // namespace sic
