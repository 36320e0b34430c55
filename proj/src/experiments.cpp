#include "sic/experiments.hpp"

#include "sic/granger.hpp"
#include "sic/parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace sic {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

const char* to_string(SweepVariant v) {
  switch (v) {
    case SweepVariant::Both: return "both";
    case SweepVariant::FfOnly: return "ff_only";
    default: return "fb_only";
  }
}

Histogram freedman_diaconis_histogram(std::vector<double> samples) {
  Histogram h;
  if (samples.empty()) return h;
  std::sort(samples.begin(), samples.end());
  const double lo = samples.front();
  const double hi = samples.back();
  const double iqr = quantile_sorted(samples, 0.75) - quantile_sorted(samples, 0.25);
  const double width =
      2.0 * iqr / std::cbrt(static_cast<double>(samples.size()));
  int bins = 1;
  if (width > 0.0 && hi > lo) {
    bins = std::clamp(static_cast<int>(std::ceil((hi - lo) / width)), 1, 200);
  }
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  const double span = (hi > lo) ? hi - lo : 1.0;
  for (int b = 0; b <= bins; ++b) {
    h.edges[static_cast<std::size_t>(b)] = lo + span * b / bins;
  }
  for (const double v : samples) {
    int b = static_cast<int>((v - lo) / span * bins);
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

std::vector<BenchResult> order_sweep(const BenchConfig& cfg) {
  if (cfg.trials < 1) throw InvalidInput("order_sweep: trials must be >= 1");
  if (cfg.orders.empty()) throw InvalidInput("order_sweep: no orders given");

  std::vector<BenchResult> results;
  results.reserve(cfg.orders.size());
  const Rng master(cfg.seed);

  for (std::size_t io = 0; io < cfg.orders.size(); ++io) {
    const int order = cfg.orders[io];
    if (order < 1) throw InvalidInput("order_sweep: order must be >= 1");

    int fo = order, bo = order;
    if (cfg.variant == SweepVariant::FfOnly) bo = 0;
    if (cfg.variant == SweepVariant::FbOnly) fo = 0;

    std::vector<std::uint8_t> success(static_cast<std::size_t>(cfg.trials), 0);
    std::vector<double> deltas(static_cast<std::size_t>(cfg.trials), 0.0);
    const WelchConfig welch = WelchConfig::defaults_for(cfg.length);

    parallel_for(static_cast<std::size_t>(cfg.trials), [&](std::size_t trial) {
      PairSpec spec;
      spec.fo_input = fo;
      spec.bo_input = bo;
      spec.fo_mech = fo;
      spec.bo_mech = bo;
      spec.coeff_sigma = cfg.coeff_sigma;
      spec.length = cfg.length;
      spec.seed = master.stream(io * static_cast<std::size_t>(cfg.trials) + trial).next_u64();
      const CauseEffectPair pair = generate_pair(spec);
      const SdrReport report = infer(pair.x, pair.y, welch, cfg.tie_eps);
      success[trial] = report.decision == Direction::XtoY ? 1 : 0;
      deltas[trial] = report.delta;
    });

    BenchResult res;
    res.order = order;
    res.variant = cfg.variant;
    res.trials = cfg.trials;
    res.length = cfg.length;
    res.estimator = SdrEstimator::SpectralRatio;
    int hits = 0;
    for (const auto s : success) hits += s;
    res.accuracy = static_cast<double>(hits) / cfg.trials;
    res.wilson = wilson_interval(hits, cfg.trials);
    res.delta_histogram = freedman_diaconis_histogram(deltas);
    if (cfg.keep_per_trial) res.deltas = deltas;
    results.push_back(std::move(res));
  }
  return results;
}

std::vector<LagPoint> lag_experiment(double c, const std::vector<int>& lags, int trials,
                                     int length, std::uint64_t seed,
                                     int granger_lag_order, double tie_eps) {
  if (c == 0.0) {
    throw InvalidInput("lag_experiment: c must be nonzero (time structure is spoiled)");
  }
  if (trials < 1) throw InvalidInput("lag_experiment: trials must be >= 1");

  ArmaFilter mechanism;  // y_t = c y_{t-1} + x_{t-1}
  mechanism.feedforward = Eigen::VectorXd::Zero(2);
  mechanism.feedforward[1] = 1.0;
  mechanism.feedback = Eigen::VectorXd::Constant(1, c);
  validate(mechanism, "lag_experiment");

  const Rng master(seed);
  std::vector<LagPoint> table;
  table.reserve(lags.size());

  for (std::size_t il = 0; il < lags.size(); ++il) {
    const int k = lags[il];
    std::vector<std::uint8_t> sic_ok(static_cast<std::size_t>(trials), 0);
    std::vector<std::uint8_t> granger_ok(static_cast<std::size_t>(trials), 0);
    const WelchConfig welch = WelchConfig::defaults_for(length - std::abs(k));

    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t trial) {
      Rng rng = master.stream(il * static_cast<std::size_t>(trials) + trial);
      TimeSeries noise;
      noise.samples.resize(length);
      for (int t = 0; t < length; ++t) noise.samples[t] = rng.gaussian();

      TimeSeries x = noise;
      TimeSeries y = apply(mechanism, x);
      apply_measurement_lag(x, y, k);

      const SdrReport sic_report = infer(x, y, welch, tie_eps);
      sic_ok[trial] = sic_report.decision == Direction::XtoY ? 1 : 0;
      const GrangerReport g = granger_test(x, y, granger_lag_order);
      granger_ok[trial] = g.decision == Direction::XtoY ? 1 : 0;
    });

    LagPoint point;
    point.lag = k;
    int sic_hits = 0, granger_hits = 0;
    for (const auto s : sic_ok) sic_hits += s;
    for (const auto s : granger_ok) granger_hits += s;
    point.sic_accuracy = static_cast<double>(sic_hits) / trials;
    point.granger_accuracy = static_cast<double>(granger_hits) / trials;
    point.sic_wilson = wilson_interval(sic_hits, trials);
    point.granger_wilson = wilson_interval(granger_hits, trials);
    table.push_back(point);
  }
  return table;
}

std::vector<ComRow> com_experiment(const ComConfig& cfg) {
  if (cfg.m_values.empty()) throw InvalidInput("com_experiment: no m values");
  if (!std::is_sorted(cfg.m_values.begin(), cfg.m_values.end())) {
    throw InvalidInput("com_experiment: m values must be ascending");
  }
  if (cfg.rotations < 1) throw InvalidInput("com_experiment: rotations must be >= 1");
  if (!(cfg.base_energy > 0.0)) throw InvalidInput("com_experiment: base energy must be > 0");

  const PowerSpectrum sxx = transfer_mag_sq(cfg.input_shape, cfg.grid_size);
  const double px = freq_average(sxx);
  const Rng master(cfg.seed);

  std::vector<ComRow> rows;
  rows.reserve(cfg.m_values.size());
  for (std::size_t im = 0; im < cfg.m_values.size(); ++im) {
    const int m = cfg.m_values[im];
    if (m < 1) throw InvalidInput("com_experiment: m must be >= 1");

    Eigen::VectorXd base = Eigen::VectorXd::Zero(m);
    base[0] = std::sqrt(cfg.base_energy);

    std::vector<double> rho(static_cast<std::size_t>(cfg.rotations), 0.0);
    parallel_for(static_cast<std::size_t>(cfg.rotations), [&](std::size_t j) {
      Rng rng = master.stream(im * static_cast<std::size_t>(cfg.rotations) + j);
      const Eigen::VectorXd taps = haar_rotate(base, rng);
      ArmaFilter fir;
      fir.feedforward = taps;
      const PowerSpectrum hmag = transfer_mag_sq(fir, cfg.grid_size);
      PowerSpectrum syy;
      syy.values = sxx.values * hmag.values;
      rho[j] = sdr_power_energy(px, freq_average(syy), taps.squaredNorm());
    });

    ComRow row;
    row.m = m;
    row.rotations = cfg.rotations;
    row.fractions.reserve(cfg.eps_ladder.size());
    for (const double eps : cfg.eps_ladder) {
      int hits = 0;
      for (const double r : rho) {
        if (std::abs(r - 1.0) <= eps) ++hits;
      }
      row.fractions.push_back(static_cast<double>(hits) / cfg.rotations);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

TdrReport trace_convergence_experiment(const ArmaFilter& mechanism,
                                       const ArmaFilter& input_shape,
                                       const std::vector<Eigen::Index>& orders) {
  return convergence_curve(mechanism, input_shape, orders);
}

// --- emission ----------------------------------------------------------------

namespace {

void csv_header(std::ostream& os, const std::string& timestamp) {
  if (!timestamp.empty()) os << "# generated " << timestamp << "\n";
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<BenchResult>& results,
               const std::string& timestamp) {
  csv_header(os, timestamp);
  os << "order,variant,trials,length,estimator,accuracy,wilson_lower,wilson_upper\n";
  for (const auto& r : results) {
    os << r.order << ',' << to_string(r.variant) << ',' << r.trials << ',' << r.length
       << ',' << to_string(r.estimator) << ',' << fmt(r.accuracy) << ','
       << fmt(r.wilson.lower) << ',' << fmt(r.wilson.upper) << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<LagPoint>& results,
               const std::string& timestamp) {
  csv_header(os, timestamp);
  os << "lag,sic_accuracy,sic_lower,sic_upper,granger_accuracy,granger_lower,granger_upper\n";
  for (const auto& p : results) {
    os << p.lag << ',' << fmt(p.sic_accuracy) << ',' << fmt(p.sic_wilson.lower) << ','
       << fmt(p.sic_wilson.upper) << ',' << fmt(p.granger_accuracy) << ','
       << fmt(p.granger_wilson.lower) << ',' << fmt(p.granger_wilson.upper) << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<ComRow>& results,
               const std::vector<double>& eps_ladder, const std::string& timestamp) {
  csv_header(os, timestamp);
  os << "m,rotations";
  for (const double eps : eps_ladder) os << ",frac_within_" << fmt(eps);
  os << '\n';
  for (const auto& row : results) {
    os << row.m << ',' << row.rotations;
    for (const double f : row.fractions) os << ',' << fmt(f);
    os << '\n';
  }
}

void write_csv(std::ostream& os, const TdrReport& report, const std::string& timestamp) {
  csv_header(os, timestamp);
  os << "order,tdr,t_n,sdr_reference\n";
  for (std::size_t i = 0; i < report.orders.size(); ++i) {
    os << report.orders[i] << ',' << fmt(report.tdr_values[i]) << ','
       << fmt(report.t_n_values[i]) << ',' << fmt(report.sdr_reference) << '\n';
  }
}

namespace {

nlohmann::json wilson_json(const WilsonInterval& w) {
  return {{"p_hat", w.p_hat}, {"lower", w.lower}, {"upper", w.upper}, {"n", w.n}, {"z", w.z}};
}

nlohmann::json histogram_json(const Histogram& h) {
  return {{"edges", h.edges}, {"counts", h.counts}};
}

}  // namespace

std::string to_json(const std::vector<BenchResult>& results, const std::string& timestamp) {
  nlohmann::json j;
  if (!timestamp.empty()) j["timestamp"] = timestamp;
  j["results"] = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json item = {{"order", r.order},
                           {"variant", to_string(r.variant)},
                           {"trials", r.trials},
                           {"length", r.length},
                           {"estimator", to_string(r.estimator)},
                           {"accuracy", r.accuracy},
                           {"wilson", wilson_json(r.wilson)},
                           {"delta_histogram", histogram_json(r.delta_histogram)}};
    if (!r.deltas.empty()) item["deltas"] = r.deltas;
    j["results"].push_back(std::move(item));
  }
  return j.dump(2);
}

std::string to_json(const std::vector<LagPoint>& results, const std::string& timestamp) {
  nlohmann::json j;
  if (!timestamp.empty()) j["timestamp"] = timestamp;
  j["results"] = nlohmann::json::array();
  for (const auto& p : results) {
    j["results"].push_back({{"lag", p.lag},
                            {"sic_accuracy", p.sic_accuracy},
                            {"sic_wilson", wilson_json(p.sic_wilson)},
                            {"granger_accuracy", p.granger_accuracy},
                            {"granger_wilson", wilson_json(p.granger_wilson)}});
  }
  return j.dump(2);
}

std::string to_json(const std::vector<ComRow>& results, const std::vector<double>& eps_ladder,
                    const std::string& timestamp) {
  nlohmann::json j;
  if (!timestamp.empty()) j["timestamp"] = timestamp;
  j["eps_ladder"] = eps_ladder;
  j["results"] = nlohmann::json::array();
  for (const auto& row : results) {
    j["results"].push_back(
        {{"m", row.m}, {"rotations", row.rotations}, {"fractions", row.fractions}});
  }
  return j.dump(2);
}

std::string to_json(const TdrReport& report, const std::string& timestamp) {
  nlohmann::json j;
  if (!timestamp.empty()) j["timestamp"] = timestamp;
  j["orders"] = report.orders;
  j["tdr_values"] = report.tdr_values;
  j["t_n_values"] = report.t_n_values;
  j["sdr_reference"] = report.sdr_reference;
  return j.dump(2);
}

std::string to_json(const SdrReport& report, const WelchConfig& cfg, double tie_eps) {
  const char* window = cfg.window == Window::Hann      ? "hann"
                       : cfg.window == Window::Hamming ? "hamming"
                                                       : "rectangular";
  nlohmann::json j = {
      {"estimator", to_string(report.estimator)},
      {"rho_forward", report.rho_forward},
      {"rho_backward", report.rho_backward},
      {"delta", report.delta},
      {"decision", to_string(report.decision)},
      {"tie_eps", tie_eps},
      {"welch",
       {{"segment_length", cfg.segment_length},
        {"overlap_fraction", cfg.overlap_fraction},
        {"window", window},
        {"detrend", cfg.detrend == Detrend::Mean ? "mean" : "none"}}}};
  return j.dump(2);
}

std::string to_json(const GrangerReport& report) {
  nlohmann::json j = {{"p_xy", report.p_xy},
                      {"p_yx", report.p_yx},
                      {"lag_order", report.lag_order},
                      {"decision", to_string(report.decision)}};
  return j.dump(2);
}

}  // namespace sic
