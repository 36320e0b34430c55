#include "sic/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sic {

ArmaFilter sample_stable_filter(int fo, int bo, double coeff_sigma, Rng& rng,
                                int max_rejects, double coeff_decay) {
  if (fo < 0 || bo < 0) throw InvalidInput("sample_stable_filter: negative order");
  if (!(coeff_sigma > 0.0)) throw InvalidInput("sample_stable_filter: sigma must be > 0");
  if (!(coeff_decay > 0.0) || coeff_decay > 1.0) {
    throw InvalidInput("sample_stable_filter: decay must be in (0, 1]");
  }

  ArmaFilter f;
  f.feedforward.resize(fo + 1);
  f.feedforward[0] = 1.0;
  double sigma = coeff_sigma;
  for (int i = 1; i <= fo; ++i) {
    f.feedforward[i] = sigma * rng.gaussian();
    sigma *= coeff_decay;
  }

  f.feedback.resize(bo);
  int rejects = 0;
  for (;;) {
    sigma = coeff_sigma;
    for (int j = 0; j < bo; ++j) {
      f.feedback[j] = sigma * rng.gaussian();
      sigma *= coeff_decay;
    }
    if (is_bibo_stable(f.feedback)) break;
    if (++rejects > max_rejects) {
      throw SamplingFailure("sample_stable_filter: no stable filter after " +
                            std::to_string(max_rejects) + " rejections (rate 1.0)");
    }
  }
  return f;
}

void apply_measurement_lag(TimeSeries& x, TimeSeries& y, int lag_k) {
  if (lag_k == 0) return;
  const Eigen::Index n = x.samples.size();
  const Eigen::Index k = std::abs(lag_k);
  if (k >= n) throw InvalidInput("apply_measurement_lag: |lag| >= length");
  const Eigen::Index kept = n - k;
  if (lag_k > 0) {
    // Cause channel recorded late: observed effect leads, y'_t = y_{t+k}.
    x.samples = Eigen::VectorXd(x.samples.head(kept));
    y.samples = Eigen::VectorXd(y.samples.tail(kept));
  } else {
    x.samples = Eigen::VectorXd(x.samples.tail(kept));
    y.samples = Eigen::VectorXd(y.samples.head(kept));
  }
}

CauseEffectPair generate_pair(const PairSpec& spec) {
  if (spec.length < 64) throw InvalidInput("generate_pair: length must be >= 64");
  if (std::abs(spec.lag_k) >= spec.length) {
    throw InvalidInput("generate_pair: |lag_k| must be < length");
  }
  const bool input_trivial = spec.fo_input == 0 && spec.bo_input == 0;
  const bool mech_trivial = spec.fo_mech == 0 && spec.bo_mech == 0;
  if (input_trivial && mech_trivial) {
    throw InvalidInput("generate_pair: both filters degenerate (fo + bo = 0)");
  }

  Rng master(spec.seed);
  Rng input_rng = master.stream(0);
  Rng mech_rng = master.stream(1);
  Rng noise_rng = master.stream(2);

  const ArmaFilter input_filter =
      input_trivial ? ArmaFilter::identity()
                    : sample_stable_filter(spec.fo_input, spec.bo_input,
                                           spec.coeff_sigma, input_rng, 100000,
                                           spec.coeff_decay);
  CauseEffectPair pair;
  pair.mechanism =
      mech_trivial ? ArmaFilter::identity()
                   : sample_stable_filter(spec.fo_mech, spec.bo_mech, spec.coeff_sigma,
                                          mech_rng, 100000, spec.coeff_decay);

  TimeSeries noise;
  noise.samples.resize(spec.length);
  for (Eigen::Index t = 0; t < spec.length; ++t) noise.samples[t] = noise_rng.gaussian();

  pair.x = apply(input_filter, noise);
  pair.y = apply(pair.mechanism, pair.x);
  apply_measurement_lag(pair.x, pair.y, spec.lag_k);
  return pair;
}

WilsonInterval wilson_interval(int successes, int n, double z) {
  if (n < 1) throw InvalidInput("wilson_interval: n must be >= 1");
  if (successes < 0 || successes > n) {
    throw InvalidInput("wilson_interval: successes out of range");
  }
  WilsonInterval w;
  w.n = n;
  w.z = z;
  w.p_hat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (w.p_hat + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(w.p_hat * (1.0 - w.p_hat) / n + z2 / (4.0 * n * n)) / denom;
  w.lower = std::max(0.0, center - half);
  w.upper = std::min(1.0, center + half);
  // The score interval hits the boundary exactly at the extremes; keep it
  // free of rounding residue there.
  if (successes == n) w.upper = 1.0;
  if (successes == 0) w.lower = 0.0;
  return w;
}

}  // namespace sic
