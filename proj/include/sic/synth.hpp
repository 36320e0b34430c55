#pragma once

#include "sic/filters.hpp"
#include "sic/rng.hpp"
#include "sic/types.hpp"

#include <cstdint>

namespace sic {

// Configuration for one synthetic cause-effect pair. The cause is an ARMA
// process (white noise through the input filter), the effect is the cause
// through the mechanism filter. Coefficients other than the fixed b0 = 1
// are iid normal with standard deviation coeff_sigma.
//
// lag_k injects a measurement misalignment between the channels: positive
// lag_k means the cause channel is recorded k samples late, so the observed
// effect series leads the observed cause (y'_t = y_{t+k}). Negative lag_k
// delays the effect channel instead. Either way k samples are trimmed so
// the series stay aligned and equal-length.
struct PairSpec {
  int fo_input = 5;
  int bo_input = 5;
  int fo_mech = 5;
  int bo_mech = 5;
  double coeff_sigma = 0.1;  // the sampled coefficients have variance 0.01
  int length = 10000;
  std::uint64_t seed = 0;
  int lag_k = 0;
  double coeff_decay = 1.0;  // geometric decay of sigma with coefficient index; 1 = isotropic
};

// b0 = 1, remaining coefficients iid normal(0, coeff_sigma^2); the feedback
// vector is rejection-sampled until BIBO-stable. fo = bo = 0 yields the
// identity filter. Throws SamplingFailure past max_rejects.
ArmaFilter sample_stable_filter(int fo, int bo, double coeff_sigma, Rng& rng,
                                int max_rejects = 100000, double coeff_decay = 1.0);

struct CauseEffectPair {
  TimeSeries x;
  TimeSeries y;
  ArmaFilter mechanism;  // kept for power/energy cross-checks
};

CauseEffectPair generate_pair(const PairSpec& spec);

// Trims and shifts per the lag_k convention above.
void apply_measurement_lag(TimeSeries& x, TimeSeries& y, int lag_k);

// Wilson score interval for a binomial proportion.
struct WilsonInterval {
  double p_hat = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int n = 0;
  double z = 1.96;
};

WilsonInterval wilson_interval(int successes, int n, double z = 1.96);

}  // namespace sic
