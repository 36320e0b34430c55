#pragma once

#include "sic/granger.hpp"
#include "sic/sdr.hpp"
#include "sic/synth.hpp"
#include "sic/trace.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sic {

// Which orders of the sampled filters are swept.
//   Both:   FO = BO = order for input and mechanism
//   FfOnly: feedforward only (BO = 0)
//   FbOnly: feedback only (FO = 0), a purely autoregressive mechanism
enum class SweepVariant { Both, FfOnly, FbOnly };

const char* to_string(SweepVariant v);

struct Histogram {
  std::vector<double> edges;  // size counts.size() + 1
  std::vector<int> counts;
};

// Freedman-Diaconis binning over the sample range.
Histogram freedman_diaconis_histogram(std::vector<double> samples);

struct BenchConfig {
  std::vector<int> orders;
  SweepVariant variant = SweepVariant::Both;
  int trials = 200;
  int length = 10000;
  double coeff_sigma = 0.1;
  std::uint64_t seed = 0;
  double tie_eps = 1e-3;
  bool keep_per_trial = false;
};

struct BenchResult {
  int order = 0;
  SweepVariant variant = SweepVariant::Both;
  int trials = 0;
  int length = 0;
  SdrEstimator estimator = SdrEstimator::SpectralRatio;
  double accuracy = 0.0;
  WilsonInterval wilson;
  Histogram delta_histogram;
  std::vector<double> deltas;  // populated when keep_per_trial is set
};

// One decision experiment per (order, trial): sample input/mechanism at the
// variant's orders, generate a pair and run the spectral-ratio inference.
// Accuracy counts decision == XtoY. Trial-parallel with per-trial seed
// streams; results do not depend on the schedule.
std::vector<BenchResult> order_sweep(const BenchConfig& cfg);

struct LagPoint {
  int lag = 0;
  double sic_accuracy = 0.0;
  double granger_accuracy = 0.0;
  WilsonInterval sic_wilson;
  WilsonInterval granger_wilson;
};

// Time-lag robustness table: white-noise cause, mechanism
// y_t = c y_{t-1} + x_{t-1}, measurement lag applied per PairSpec::lag_k
// convention, decided both by spectral inference and by the Granger F-test.
std::vector<LagPoint> lag_experiment(double c, const std::vector<int>& lags, int trials,
                                     int length, std::uint64_t seed,
                                     int granger_lag_order = 5, double tie_eps = 1e-3);

struct ComConfig {
  std::vector<int> m_values;
  double base_energy = 1.0;
  ArmaFilter input_shape;  // analytic input spectrum, unit-variance drive
  int rotations = 2000;
  std::uint64_t seed = 0;
  std::vector<double> eps_ladder = {0.02, 0.05, 0.1, 0.2};
  Eigen::Index grid_size = 2049;
};

struct ComRow {
  int m = 0;
  int rotations = 0;
  std::vector<double> fractions;  // P(|rho - 1| <= eps) per ladder entry
};

// Concentration experiment: for each support size m, rotate a fixed-energy
// tap vector by Haar-random orthogonal matrices and measure how often the
// power/energy dependency ratio lands near 1 under the analytic input
// spectrum. Haar invariance makes the base direction immaterial; only its
// energy matters.
std::vector<ComRow> com_experiment(const ComConfig& cfg);

// Thin wrapper over convergence_curve, kept for symmetric CLI emission.
TdrReport trace_convergence_experiment(const ArmaFilter& mechanism,
                                       const ArmaFilter& input_shape,
                                       const std::vector<Eigen::Index>& orders);

// --- result emission -------------------------------------------------------
// CSV gets a "# generated <timestamp>" header line when a timestamp is
// given; JSON carries it as a top-level field. Everything else is a pure
// function of the results, so reruns with the same seed are byte-identical
// apart from that line.

void write_csv(std::ostream& os, const std::vector<BenchResult>& results,
               const std::string& timestamp = "");
void write_csv(std::ostream& os, const std::vector<LagPoint>& results,
               const std::string& timestamp = "");
void write_csv(std::ostream& os, const std::vector<ComRow>& results,
               const std::vector<double>& eps_ladder, const std::string& timestamp = "");
void write_csv(std::ostream& os, const TdrReport& report, const std::string& timestamp = "");

std::string to_json(const std::vector<BenchResult>& results, const std::string& timestamp = "");
std::string to_json(const std::vector<LagPoint>& results, const std::string& timestamp = "");
std::string to_json(const std::vector<ComRow>& results, const std::vector<double>& eps_ladder,
                    const std::string& timestamp = "");
std::string to_json(const TdrReport& report, const std::string& timestamp = "");
std::string to_json(const SdrReport& report, const WelchConfig& cfg, double tie_eps);
std::string to_json(const GrangerReport& report);

}  // namespace sic
