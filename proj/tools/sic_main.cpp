// Command-line front end: causal direction inference on user data plus the
// synthetic experiment drivers. See README for subcommands and exit codes.

#include "sic/experiments.hpp"
#include "sic/granger.hpp"
#include "sic/io.hpp"
#include "sic/sdr.hpp"
#include "sic/synth.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum ExitCode {
  kOk = 0,
  kGenericError = 1,
  kParseError = 2,
  kLengthMismatch = 3,
  kDegenerateSpectrum = 4,
  kConfigError = 5,
  kSamplingFailure = 6,
  kStabilityError = 7,
};

std::string now_iso8601() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&now));
  return buf;
}

// "a:b" inclusive ranges and comma lists; both may be mixed ("2,5,10:12").
std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos) {
      out.push_back(std::stoi(item));
    } else {
      const int lo = std::stoi(item.substr(0, colon));
      const int hi = std::stoi(item.substr(colon + 1));
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  if (out.empty()) throw sic::InvalidInput("empty integer list: " + text);
  return out;
}

Eigen::VectorXd parse_coeffs(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) vals.push_back(std::stod(item));
  }
  return Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw sic::ParseError(out_path + ": cannot open for writing");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

sic::Window parse_window_fn(const std::string& name) {
  if (name == "hann") return sic::Window::Hann;
  if (name == "hamming") return sic::Window::Hamming;
  if (name == "rect" || name == "rectangular") return sic::Window::Rectangular;
  throw sic::InvalidInput("unknown window function: " + name);
}

// Loads the (x, y) pair from one two-column file or two one-column files.
std::pair<sic::TimeSeries, sic::TimeSeries> load_pair(const std::string& x_path,
                                                      const std::string& y_path,
                                                      bool truncate) {
  std::vector<sic::TimeSeries> series;
  if (y_path.empty()) {
    series = sic::ingest(x_path);
    if (series.size() != 2) {
      throw sic::ParseError(x_path + ": expected 2 columns when no second file is given");
    }
  } else {
    series.push_back(sic::ingest(x_path)[0]);
    series.push_back(sic::ingest(y_path)[0]);
  }
  if (series[0].length() != series[1].length()) {
    if (!truncate) {
      throw std::length_error("series lengths differ (" +
                              std::to_string(series[0].length()) + " vs " +
                              std::to_string(series[1].length()) +
                              "); pass --truncate to clip to the shorter");
    }
    const Eigen::Index n = std::min(series[0].length(), series[1].length());
    std::cerr << "warning: truncating both series to " << n << " samples\n";
    series[0].samples.conservativeResize(n);
    series[1].samples.conservativeResize(n);
  }
  return {std::move(series[0]), std::move(series[1])};
}

struct WelchFlags {
  std::string window;  // single value or range
  double overlap = 0.5;
  std::string window_fn = "hann";
  std::string detrend = "mean";

  sic::WelchConfig config(Eigen::Index length, int segment) const {
    sic::WelchConfig cfg = sic::WelchConfig::defaults_for(length);
    if (segment > 0) cfg.segment_length = segment;
    cfg.overlap_fraction = overlap;
    cfg.window = parse_window_fn(window_fn);
    cfg.detrend = detrend == "none" ? sic::Detrend::None : sic::Detrend::Mean;
    return cfg;
  }
};

void add_welch_flags(CLI::App* cmd, WelchFlags* flags) {
  cmd->add_option("--window", flags->window,
                  "Welch segment length; a range like 50:150 sweeps the window");
  cmd->add_option("--overlap", flags->overlap, "segment overlap fraction in [0,1)");
  cmd->add_option("--window-fn", flags->window_fn, "hann|hamming|rect");
  cmd->add_option("--detrend", flags->detrend, "mean|none");
}

int run(int argc, char** argv) {
  CLI::App app{"Causal direction inference for time series from spectral independence"};
  app.require_subcommand(1);

  // infer ---------------------------------------------------------------
  auto* c_infer = app.add_subcommand("infer", "infer causal direction between two series");
  std::string in_x, in_y, out_path, format = "json";
  bool truncate = false;
  double tie_eps = 1e-3, floor = 1e-8;
  WelchFlags welch;
  c_infer->add_option("x", in_x, "CSV/WAV with series X (or both columns)")->required();
  c_infer->add_option("y", in_y, "CSV/WAV with series Y");
  add_welch_flags(c_infer, &welch);
  c_infer->add_option("--tie-eps", tie_eps, "undecided band on the SDR difference");
  c_infer->add_option("--floor", floor, "relative denominator floor for the ratio average");
  c_infer->add_flag("--truncate", truncate, "clip both series to the shorter length");
  c_infer->add_option("--format", format, "json|csv (csv for window sweeps)");
  c_infer->add_option("--out", out_path, "output file (default stdout)");

  // synth ---------------------------------------------------------------
  auto* c_synth = app.add_subcommand("synth", "generate a synthetic cause-effect pair");
  sic::PairSpec pair_spec;
  std::string synth_out;
  c_synth->add_option("--fo", pair_spec.fo_input, "feedforward order of the input filter");
  c_synth->add_option("--bo", pair_spec.bo_input, "feedback order of the input filter");
  int fo_mech = -1, bo_mech = -1;
  c_synth->add_option("--fo-mech", fo_mech, "mechanism feedforward order (default --fo)");
  c_synth->add_option("--bo-mech", bo_mech, "mechanism feedback order (default --bo)");
  c_synth->add_option("--length", pair_spec.length, "series length");
  c_synth->add_option("--coeff-sigma", pair_spec.coeff_sigma,
                      "stddev of sampled coefficients");
  c_synth->add_option("--decay", pair_spec.coeff_decay,
                      "geometric decay of sigma across coefficients (1 = isotropic)");
  c_synth->add_option("--lag", pair_spec.lag_k, "measurement lag applied to the pair");
  std::uint64_t seed = 0;
  c_synth->add_option("--seed", seed, "rng seed");
  c_synth->add_option("--out", synth_out, "output CSV (two columns: x,y)")->required();

  // bench ---------------------------------------------------------------
  auto* c_bench = app.add_subcommand("bench", "accuracy against filter order");
  sic::BenchConfig bench_cfg;
  std::string orders_text = "2:21", variant_text = "both", bench_out, bench_format = "csv";
  c_bench->add_option("--orders", orders_text, "orders, e.g. 2:21 or 2,5,10,20");
  c_bench->add_option("--variant", variant_text, "both|ff|fb");
  c_bench->add_option("--trials", bench_cfg.trials, "trials per order");
  c_bench->add_option("--length", bench_cfg.length, "series length per trial");
  c_bench->add_option("--coeff-sigma", bench_cfg.coeff_sigma, "coefficient stddev");
  c_bench->add_option("--seed", bench_cfg.seed, "master seed");
  c_bench->add_option("--tie-eps", bench_cfg.tie_eps, "undecided band");
  c_bench->add_flag("--per-trial", bench_cfg.keep_per_trial, "emit per-trial deltas (json)");
  c_bench->add_option("--format", bench_format, "csv|json");
  c_bench->add_option("--out", bench_out, "output file (default stdout)");

  // lag -----------------------------------------------------------------
  auto* c_lag = app.add_subcommand("lag", "lag robustness table (spectral vs Granger)");
  double lag_c = 0.5;
  std::string lags_text = "-2:5", lag_out, lag_format = "csv";
  int lag_trials = 100, lag_length = 10000, lag_order = 5;
  std::uint64_t lag_seed = 0;
  c_lag->add_option("--c", lag_c, "feedback coefficient of the mechanism")->required();
  c_lag->add_option("--lags", lags_text, "lags, e.g. -2:5 or -2,0,2");
  c_lag->add_option("--trials", lag_trials, "trials per lag");
  c_lag->add_option("--length", lag_length, "series length per trial");
  c_lag->add_option("--lag-order", lag_order, "Granger lag order");
  c_lag->add_option("--seed", lag_seed, "master seed");
  c_lag->add_option("--format", lag_format, "csv|json");
  c_lag->add_option("--out", lag_out, "output file (default stdout)");

  // com -----------------------------------------------------------------
  auto* c_com = app.add_subcommand("com", "concentration of the ratio under Haar rotations");
  sic::ComConfig com_cfg;
  std::string m_text = "8,16,32,64", input_a = "0.5", input_b = "1", com_out, com_format = "csv";
  c_com->add_option("--m", m_text, "tap support sizes, e.g. 8,16,32,64");
  c_com->add_option("--rotations", com_cfg.rotations, "rotations per m");
  c_com->add_option("--input-a", input_a, "input filter feedback coefficients");
  c_com->add_option("--input-b", input_b, "input filter feedforward coefficients");
  c_com->add_option("--energy", com_cfg.base_energy, "energy of the rotated tap vector");
  c_com->add_option("--seed", com_cfg.seed, "master seed");
  c_com->add_option("--format", com_format, "csv|json");
  c_com->add_option("--out", com_out, "output file (default stdout)");

  // trace ---------------------------------------------------------------
  auto* c_trace = app.add_subcommand("trace", "truncated-system tracial ratio ladder");
  std::string trace_b = "1,0.5", trace_a = "", trace_in_a = "0.5", trace_in_b = "1";
  std::string trace_orders = "32,64,128,256,512", trace_out, trace_format = "csv";
  c_trace->add_option("--b", trace_b, "mechanism feedforward coefficients");
  c_trace->add_option("--a", trace_a, "mechanism feedback coefficients");
  c_trace->add_option("--input-a", trace_in_a, "input filter feedback coefficients");
  c_trace->add_option("--input-b", trace_in_b, "input filter feedforward coefficients");
  c_trace->add_option("--orders", trace_orders, "truncation orders");
  c_trace->add_option("--format", trace_format, "csv|json");
  c_trace->add_option("--out", trace_out, "output file (default stdout)");

  // granger ---------------------------------------------------------------
  auto* c_granger = app.add_subcommand("granger", "Granger F-test with forced decision");
  std::string g_x, g_y, g_out;
  int g_lag_order = 5;
  bool g_truncate = false;
  c_granger->add_option("x", g_x, "CSV/WAV with series X (or both columns)")->required();
  c_granger->add_option("y", g_y, "CSV/WAV with series Y");
  c_granger->add_option("--lag-order", g_lag_order, "lag order of the VAR fits");
  c_granger->add_flag("--truncate", g_truncate, "clip both series to the shorter length");
  c_granger->add_option("--out", g_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;  // 0 covers --help and --version
  }

  if (c_infer->parsed()) {
    auto [x, y] = load_pair(in_x, in_y, truncate);
    if (welch.window.find(':') != std::string::npos) {
      const std::vector<int> windows = parse_int_list(welch.window);
      std::ostringstream os;
      os << "# generated " << now_iso8601() << "\n";
      os << "window,rho_forward,rho_backward,delta,decision\n";
      for (const int w : windows) {
        const sic::SdrReport r = sic::infer(x, y, welch.config(x.length(), w), tie_eps, floor);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%s\n", w, r.rho_forward,
                      r.rho_backward, r.delta, sic::to_string(r.decision));
        os << buf;
      }
      emit(out_path, os.str());
      return kOk;
    }
    const int w = welch.window.empty() ? 0 : std::stoi(welch.window);
    const sic::WelchConfig cfg = welch.config(x.length(), w);
    const sic::SdrReport report = sic::infer(x, y, cfg, tie_eps, floor);
    if (x.length() < 4 * cfg.segment_length) {
      std::cerr << "warning: series shorter than 4 segments; estimates are noisy\n";
    }
    emit(out_path, sic::to_json(report, cfg, tie_eps));
    return kOk;
  }

  if (c_synth->parsed()) {
    pair_spec.fo_mech = fo_mech >= 0 ? fo_mech : pair_spec.fo_input;
    pair_spec.bo_mech = bo_mech >= 0 ? bo_mech : pair_spec.bo_input;
    pair_spec.seed = seed;
    const sic::CauseEffectPair pair = sic::generate_pair(pair_spec);
    sic::write_csv_series(synth_out, {pair.x, pair.y});
    return kOk;
  }

  if (c_bench->parsed()) {
    bench_cfg.orders = parse_int_list(orders_text);
    if (variant_text == "both") bench_cfg.variant = sic::SweepVariant::Both;
    else if (variant_text == "ff") bench_cfg.variant = sic::SweepVariant::FfOnly;
    else if (variant_text == "fb") bench_cfg.variant = sic::SweepVariant::FbOnly;
    else throw sic::InvalidInput("unknown variant: " + variant_text);
    const auto results = sic::order_sweep(bench_cfg);
    if (bench_format == "json") {
      emit(bench_out, sic::to_json(results, now_iso8601()));
    } else {
      std::ostringstream os;
      sic::write_csv(os, results, now_iso8601());
      emit(bench_out, os.str());
    }
    return kOk;
  }

  if (c_lag->parsed()) {
    const auto table =
        sic::lag_experiment(lag_c, parse_int_list(lags_text), lag_trials, lag_length,
                            lag_seed, lag_order);
    if (lag_format == "json") {
      emit(lag_out, sic::to_json(table, now_iso8601()));
    } else {
      std::ostringstream os;
      sic::write_csv(os, table, now_iso8601());
      emit(lag_out, os.str());
    }
    return kOk;
  }

  if (c_com->parsed()) {
    com_cfg.m_values = parse_int_list(m_text);
    com_cfg.input_shape.feedforward = parse_coeffs(input_b);
    com_cfg.input_shape.feedback = parse_coeffs(input_a);
    const auto rows = sic::com_experiment(com_cfg);
    if (com_format == "json") {
      emit(com_out, sic::to_json(rows, com_cfg.eps_ladder, now_iso8601()));
    } else {
      std::ostringstream os;
      sic::write_csv(os, rows, com_cfg.eps_ladder, now_iso8601());
      emit(com_out, os.str());
    }
    return kOk;
  }

  if (c_trace->parsed()) {
    sic::ArmaFilter mechanism{parse_coeffs(trace_b), parse_coeffs(trace_a)};
    sic::ArmaFilter input_shape{parse_coeffs(trace_in_b), parse_coeffs(trace_in_a)};
    std::vector<Eigen::Index> orders;
    for (const int n : parse_int_list(trace_orders)) orders.push_back(n);
    const sic::TdrReport report =
        sic::trace_convergence_experiment(mechanism, input_shape, orders);
    if (trace_format == "json") {
      emit(trace_out, sic::to_json(report, now_iso8601()));
    } else {
      std::ostringstream os;
      sic::write_csv(os, report, now_iso8601());
      emit(trace_out, os.str());
    }
    return kOk;
  }

  if (c_granger->parsed()) {
    auto [x, y] = load_pair(g_x, g_y, g_truncate);
    const sic::GrangerReport report = sic::granger_test(x, y, g_lag_order);
    if (report.used_ridge) {
      std::cerr << "warning: rank-deficient lag design, used a tiny-ridge fallback\n";
    }
    emit(g_out, sic::to_json(report));
    return kOk;
  }

  return kGenericError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const sic::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kLengthMismatch;
  } catch (const sic::DegenerateSpectrum& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDegenerateSpectrum;
  } catch (const sic::SamplingFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSamplingFailure;
  } catch (const sic::StabilityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kStabilityError;
  } catch (const sic::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kGenericError;
  }
}
