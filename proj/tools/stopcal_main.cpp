// stopcal: calibrated trailing-stop backtests over minute-bar data.
//
// Subcommands:
//   backtest   batch (asset x mode) runs, result bundles + comparison table
//   calibrate  one-off threshold calibration with histogram export
//   report     aggregates and trades-vs-delta correlation from a table
//   synth      synthetic minute-bar CSV generation
//
// Exit codes: 0 success, 1 total failure, 2 partial failure, 64 usage error.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stopcal/analytics.hpp"
#include "stopcal/backtester.hpp"
#include "stopcal/drawdown_stats.hpp"
#include "stopcal/errors.hpp"
#include "stopcal/io_util.hpp"
#include "stopcal/market_data.hpp"
#include "stopcal/rolling_calibrator.hpp"
#include "stopcal/signal_engine.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Synthetic data specs: "gbm:p0=100,mu=0.05,sigma=0.2,minutes=50000" or
// "planted:dstar=0.02,gain=0.05,loss=-0.05,trades=100". Anything else is a
// CSV path.

std::map<std::string, double> parse_kv(const std::string& body,
                                       const std::string& context) {
  std::map<std::string, double> out;
  if (body.empty()) return out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    std::size_t comma = body.find(',', pos);
    if (comma == std::string::npos) comma = body.size();
    const std::string item = body.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw UsageError(context + ": expected key=value, got '" + item + "'");
    }
    const auto value = stopcal::parse_double(item.substr(eq + 1));
    if (!value) {
      throw UsageError(context + ": bad numeric value in '" + item + "'");
    }
    out[item.substr(0, eq)] = *value;
  }
  return out;
}

double take_kv(std::map<std::string, double>& kv, const std::string& key,
               double fallback) {
  const auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const double v = it->second;
  kv.erase(it);
  return v;
}

void reject_leftover(const std::map<std::string, double>& kv,
                     const std::string& context) {
  if (kv.empty()) return;
  throw UsageError(context + ": unknown key '" + kv.begin()->first + "'");
}

struct GbmSpec {
  double p0 = 100.0;
  double mu = 0.05;
  double sigma = 0.2;
  std::size_t minutes = 50000;
};

using DataSpec = std::variant<std::string /*csv path*/, GbmSpec,
                              stopcal::PlantedSpec>;

DataSpec parse_data_spec(const std::string& text, std::size_t sma_period) {
  if (text.rfind("gbm:", 0) == 0) {
    auto kv = parse_kv(text.substr(4), text);
    GbmSpec spec;
    spec.p0 = take_kv(kv, "p0", spec.p0);
    spec.mu = take_kv(kv, "mu", spec.mu);
    spec.sigma = take_kv(kv, "sigma", spec.sigma);
    spec.minutes =
        static_cast<std::size_t>(take_kv(kv, "minutes", 50000.0));
    reject_leftover(kv, text);
    return spec;
  }
  if (text.rfind("planted:", 0) == 0) {
    auto kv = parse_kv(text.substr(8), text);
    stopcal::PlantedSpec spec;
    spec.sma_period = sma_period;
    spec.d_star = take_kv(kv, "dstar", spec.d_star);
    spec.gain = take_kv(kv, "gain", spec.gain);
    spec.loss = take_kv(kv, "loss", spec.loss);
    spec.n_trades =
        static_cast<std::size_t>(take_kv(kv, "trades", 100.0));
    spec.win_fraction = take_kv(kv, "winfrac", spec.win_fraction);
    spec.p0 = take_kv(kv, "p0", spec.p0);
    reject_leftover(kv, text);
    return spec;
  }
  return text;
}

stopcal::BarSeries realize_series(const DataSpec& spec,
                                  const std::string& asset_id,
                                  std::uint64_t seed) {
  if (const auto* path = std::get_if<std::string>(&spec)) {
    return stopcal::load_csv(*path, asset_id);
  }
  if (const auto* gbm = std::get_if<GbmSpec>(&spec)) {
    return stopcal::generate_gbm(seed, gbm->p0, gbm->mu, gbm->sigma,
                                 gbm->minutes, asset_id);
  }
  return stopcal::generate_planted(seed, std::get<stopcal::PlantedSpec>(spec),
                                   asset_id)
      .series;
}

// ---------------------------------------------------------------------------
// Shared strategy flags

struct StrategyFlags {
  std::size_t sma_period = 20;
  std::string n_policy = "sqrt";
  std::size_t n_bins = 0;
  std::size_t horizon_l = 20;
  std::size_t window_m = 250;
  std::string recalibrate = "per-entry";
  std::size_t min_corpus = 30;
  double initial_cash = 100000.0;
  bool exclude_forced = false;
  double threshold_override = 0.0;  // 0 means unset

  void add_options(CLI::App& cmd, bool with_backtest_knobs) {
    cmd.add_option("--sma-period", sma_period, "Hourly SMA period")
        ->capture_default_str();
    cmd.add_option("--n-policy", n_policy,
                   "Bin-count policy: sqrt or fixed")
        ->check(CLI::IsMember({"sqrt", "fixed"}))
        ->capture_default_str();
    cmd.add_option("--n-bins", n_bins, "Bin count when --n-policy=fixed");
    cmd.add_option("--horizon-l", horizon_l,
                   "Artificial-trade horizon in hourly points")
        ->capture_default_str();
    cmd.add_option("--window-m", window_m,
                   "Rolling window of artificial trades")
        ->capture_default_str();
    cmd.add_flag("--exclude-forced", exclude_forced,
                 "Drop the forced final trade from calibration corpora");
    if (with_backtest_knobs) {
      cmd.add_option("--recalibrate", recalibrate,
                     "per-entry, or an interval in hours")
          ->capture_default_str();
      cmd.add_option("--min-corpus", min_corpus,
                     "Calibration trades required before stops arm")
          ->capture_default_str();
      cmd.add_option("--initial-cash", initial_cash, "Starting cash")
          ->capture_default_str();
      cmd.add_option("--threshold-override", threshold_override,
                     "Fixed stop threshold; skips calibration");
    }
  }

  std::optional<std::size_t> fixed_bins() const {
    if (n_policy == "fixed") {
      if (n_bins < 1) {
        throw UsageError("--n-policy=fixed requires --n-bins >= 1");
      }
      return n_bins;
    }
    if (n_bins > 0) return n_bins;  // a bare --n-bins implies fixed
    return std::nullopt;
  }

  stopcal::BacktestConfig to_config() const {
    stopcal::BacktestConfig config;
    config.sma_period = sma_period;
    config.fixed_bins = fixed_bins();
    config.rolling.horizon_l = horizon_l;
    config.rolling.window_m = window_m;
    config.min_corpus = min_corpus;
    config.initial_cash = initial_cash;
    config.include_forced_final_trade = !exclude_forced;
    if (threshold_override > 0.0) {
      config.threshold_override = threshold_override;
    }
    if (recalibrate == "per-entry") {
      config.recalibration = stopcal::RecalibrationPolicy::PerEntry;
    } else {
      const auto hours = stopcal::parse_int(recalibrate);
      if (!hours || *hours < 1) {
        throw UsageError("--recalibrate expects 'per-entry' or hours >= 1");
      }
      config.recalibration = stopcal::RecalibrationPolicy::FixedInterval;
      config.recalibration_interval_hours = static_cast<std::size_t>(*hours);
    }
    return config;
  }
};

// ---------------------------------------------------------------------------
// backtest

struct BacktestArgs {
  std::vector<std::string> assets;
  std::vector<std::string> data;
  std::vector<std::string> modes;
  std::string out_dir;
  std::uint64_t seed = 1;
  std::size_t jobs = 0;
  StrategyFlags strategy;
};

struct JobResult {
  bool ok = false;
  std::string error;
  stopcal::BacktestResult result;
};

void write_bundle(const fs::path& dir, const stopcal::BacktestResult& result,
                  const std::string& asset_id, double initial_cash) {
  fs::create_directories(dir);
  stopcal::write_trades_csv(result.trades, (dir / "trades.csv").string());
  stopcal::write_equity_csv(result.curve, (dir / "equity.csv").string());
  stopcal::write_text_file((dir / "thresholds.csv").string(),
                           stopcal::thresholds_to_csv(result.thresholds_used));
  std::size_t stop_exits = 0;
  bool forced_final = false;
  for (const auto& t : result.trades) {
    if (t.exit_reason == stopcal::ExitReason::Stop) ++stop_exits;
    if (t.forced()) forced_final = true;
  }
  ordered_json j;
  j["asset"] = asset_id;
  j["mode"] = stopcal::mode_name(result.mode);
  j["initial_cash"] = initial_cash;
  j["final_nlv"] = result.final_nlv;
  j["n_trades"] = result.trades.size();
  j["n_stop_exits"] = stop_exits;
  j["n_calibrations"] = result.thresholds_used.size();
  j["forced_final_trade"] = forced_final;
  j["calibration_unavailable"] = result.calibration_unavailable;
  stopcal::write_text_file((dir / "summary.json").string(), j.dump(2) + "\n");
}

int run_backtest_cmd(const BacktestArgs& args) {
  if (args.data.empty()) throw UsageError("backtest needs at least one --data");
  if (!args.assets.empty() && args.assets.size() != args.data.size()) {
    throw UsageError("--asset count must match --data count");
  }

  std::vector<std::string> asset_ids;
  for (std::size_t i = 0; i < args.data.size(); ++i) {
    if (i < args.assets.size()) {
      asset_ids.push_back(args.assets[i]);
    } else if (args.data[i].rfind("gbm:", 0) == 0 ||
               args.data[i].rfind("planted:", 0) == 0) {
      asset_ids.push_back("SYN" + std::to_string(i));
    } else {
      asset_ids.push_back(fs::path(args.data[i]).stem().string());
    }
  }

  std::vector<stopcal::Mode> modes;
  if (args.modes.empty()) {
    modes = {stopcal::Mode::SignalOnly, stopcal::Mode::TMethod,
             stopcal::Mode::RMethod, stopcal::Mode::BuyAndHold};
  } else {
    for (const auto& m : args.modes) {
      const auto mode = stopcal::parse_mode(m);
      if (!mode) throw UsageError("unknown mode '" + m + "'");
      modes.push_back(*mode);
    }
  }

  const stopcal::BacktestConfig base_config = args.strategy.to_config();

  // Load or generate every asset up front; a bad asset fails all its jobs
  // but never touches its neighbours.
  std::vector<std::variant<stopcal::BarSeries, std::string>> series_by_asset;
  for (std::size_t i = 0; i < args.data.size(); ++i) {
    try {
      const DataSpec spec =
          parse_data_spec(args.data[i], args.strategy.sma_period);
      series_by_asset.emplace_back(
          realize_series(spec, asset_ids[i], args.seed + i));
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      series_by_asset.emplace_back(std::string(e.what()));
    }
  }

  struct Job {
    std::size_t asset;
    stopcal::Mode mode;
  };
  std::vector<Job> job_list;
  for (std::size_t a = 0; a < asset_ids.size(); ++a) {
    for (const auto mode : modes) job_list.push_back({a, mode});
  }

  std::vector<JobResult> outcomes(job_list.size());
  std::atomic<std::size_t> next{0};
  const std::size_t hw = std::max<std::size_t>(
      1, std::thread::hardware_concurrency());
  const std::size_t workers = std::max<std::size_t>(
      1, std::min(args.jobs == 0 ? hw : args.jobs, job_list.size()));

  const auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= job_list.size()) return;
      const Job& job = job_list[idx];
      JobResult& out = outcomes[idx];
      const auto* series =
          std::get_if<stopcal::BarSeries>(&series_by_asset[job.asset]);
      if (series == nullptr) {
        out.error = std::get<std::string>(series_by_asset[job.asset]);
        continue;
      }
      try {
        stopcal::BacktestConfig config = base_config;
        config.mode = job.mode;
        out.result = stopcal::run_backtest(*series, config);
        out.ok = true;
      } catch (const std::exception& e) {
        out.error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  // Single-threaded collection keeps the output tree byte-deterministic.
  const fs::path out_root(args.out_dir);
  fs::create_directories(out_root);
  std::size_t failed = 0;
  std::string run_log;
  std::map<std::size_t, std::map<stopcal::Mode, const stopcal::BacktestResult*>>
      by_asset;
  for (std::size_t idx = 0; idx < job_list.size(); ++idx) {
    const Job& job = job_list[idx];
    const JobResult& out = outcomes[idx];
    if (!out.ok) {
      ++failed;
      run_log += asset_ids[job.asset];
      run_log += '/';
      run_log += stopcal::mode_name(job.mode);
      run_log += ": ";
      run_log += out.error;
      run_log += '\n';
      continue;
    }
    write_bundle(out_root / asset_ids[job.asset] /
                     stopcal::mode_name(job.mode),
                 out.result, asset_ids[job.asset], base_config.initial_cash);
    by_asset[job.asset][job.mode] = &out.result;
  }

  std::vector<stopcal::AssetComparison> comparisons;
  for (std::size_t a = 0; a < asset_ids.size(); ++a) {
    const auto it = by_asset.find(a);
    if (it == by_asset.end()) continue;
    const auto& runs = it->second;
    stopcal::AssetComparison row;
    row.asset_id = asset_ids[a];
    const auto signal = runs.find(stopcal::Mode::SignalOnly);
    if (signal != runs.end()) {
      row.signal_only_trades =
          static_cast<long long>(signal->second->trades.size());
      const auto t_run = runs.find(stopcal::Mode::TMethod);
      if (t_run != runs.end()) {
        row.delta_nlv_ts = stopcal::delta_nlv(t_run->second->final_nlv,
                                              signal->second->final_nlv);
      }
      const auto r_run = runs.find(stopcal::Mode::RMethod);
      if (r_run != runs.end()) {
        row.delta_nlv_rs = stopcal::delta_nlv(r_run->second->final_nlv,
                                              signal->second->final_nlv);
      }
    }
    comparisons.push_back(std::move(row));
  }
  stopcal::write_text_file((out_root / "comparison.csv").string(),
                           stopcal::comparison_table_to_csv(comparisons));
  if (!run_log.empty()) {
    stopcal::write_text_file((out_root / "run_log.txt").string(), run_log);
    std::cerr << run_log;
  }

  if (failed == job_list.size()) return 1;
  if (failed > 0) return 2;
  return 0;
}

// ---------------------------------------------------------------------------
// calibrate

struct CalibrateArgs {
  std::string asset = "ASSET";
  std::string data;
  std::string method = "t";
  std::string as_of;
  std::string out_dir;
  std::uint64_t seed = 1;
  StrategyFlags strategy;
};

int run_calibrate_cmd(const CalibrateArgs& args) {
  if (args.data.empty()) throw UsageError("calibrate needs --data");
  if (args.method != "t" && args.method != "r") {
    throw UsageError("--method must be t or r");
  }
  const DataSpec spec = parse_data_spec(args.data, args.strategy.sma_period);
  stopcal::BarSeries series = realize_series(spec, args.asset, args.seed);

  stopcal::Timestamp as_of = series.last_time();
  if (!args.as_of.empty()) {
    const auto parsed = stopcal::parse_timestamp(args.as_of);
    if (!parsed) throw UsageError("--as-of expects ISO-8601 Z time");
    as_of = *parsed;
  }
  // Calibration sees exactly the data available at as_of.
  while (!series.bars.empty() && series.bars.back().timestamp > as_of) {
    series.bars.pop_back();
  }

  const fs::path out_root(args.out_dir.empty() ? "." : args.out_dir);
  fs::create_directories(out_root);

  const auto emit_error = [&](const stopcal::Error& e) {
    ordered_json j;
    j["error"] = stopcal::errc_name(e.code());
    j["message"] = e.what();
    const std::string text = j.dump(2) + "\n";
    stopcal::write_text_file((out_root / "threshold.json").string(), text);
    std::cout << text;
    return 1;
  };

  try {
    if (series.bars.empty()) {
      stopcal::raise(stopcal::Errc::EmptyCorpus, "no bars at or before as-of");
    }
    const stopcal::HourlyGrid grid = stopcal::to_hourly_grid(series);
    const stopcal::SmaSeries sma =
        stopcal::compute_sma(grid, args.strategy.sma_period);

    stopcal::ThresholdReport report;
    stopcal::DrawdownBins bins;
    if (args.method == "t") {
      const auto run = stopcal::run_signal_only(series, sma, grid);
      std::vector<stopcal::TradeRecord> corpus;
      for (const auto& t : run.trades) {
        if (t.forced() && args.strategy.exclude_forced) continue;
        if (t.exit_time <= as_of) corpus.push_back(t);
      }
      if (corpus.empty()) {
        stopcal::raise(stopcal::Errc::EmptyCorpus,
                       "no completed trades at or before as-of");
      }
      const std::size_t n = args.strategy.fixed_bins().value_or(
          stopcal::default_bin_count(corpus.size()));
      bins = stopcal::bin_trades(corpus, n);
      report = stopcal::calibrate_threshold(bins);
    } else {
      const auto artificial = stopcal::generate_artificial_trades(
          series, grid, sma, args.strategy.horizon_l, as_of);
      if (artificial.empty()) {
        stopcal::raise(stopcal::Errc::EmptyCorpus,
                       "no artificial trades at or before as-of");
      }
      stopcal::RollingParams rolling{args.strategy.horizon_l,
                                     args.strategy.window_m};
      const std::size_t take =
          std::min<std::size_t>(rolling.window_m, artificial.size());
      const std::size_t n =
          args.strategy.fixed_bins().value_or(stopcal::default_bin_count(take));
      report = stopcal::calibrate_rolling(artificial, rolling, n);
      std::vector<stopcal::TradeRecord> window(
          artificial.end() - static_cast<std::ptrdiff_t>(take),
          artificial.end());
      bins = stopcal::bin_trades(window, n);
    }

    ordered_json j = ordered_json::parse(
        stopcal::threshold_report_to_json(report));
    j["asset"] = args.asset;
    j["method"] = args.method;
    j["as_of"] = stopcal::format_timestamp(as_of);
    stopcal::write_text_file((out_root / "threshold.json").string(),
                             j.dump(2) + "\n");
    stopcal::write_text_file((out_root / "histogram.csv").string(),
                             stopcal::histogram_to_csv(bins));
    std::cout << "threshold " << stopcal::format_double(report.threshold)
              << " (bin " << report.k_star + 1 << " of " << report.n
              << ", corpus " << report.corpus_size << ")\n";
    return 0;
  } catch (const stopcal::Error& e) {
    return emit_error(e);
  }
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::string table;
  std::string out_dir;
};

int run_report_cmd(const ReportArgs& args) {
  if (args.table.empty()) throw UsageError("report needs --table");
  const auto rows = stopcal::load_comparison_csv(args.table);

  const fs::path out_root(args.out_dir.empty() ? "." : args.out_dir);
  fs::create_directories(out_root);

  const auto emit = [&](stopcal::DeltaColumn column, const std::string& tag) {
    try {
      const auto summary = stopcal::aggregate(rows, column);
      stopcal::write_text_file(
          (out_root / ("aggregate_" + tag + ".json")).string(),
          stopcal::aggregate_to_json(summary));
    } catch (const stopcal::Error& e) {
      ordered_json j;
      j["error"] = stopcal::errc_name(e.code());
      j["message"] = e.what();
      stopcal::write_text_file(
          (out_root / ("aggregate_" + tag + ".json")).string(),
          j.dump(2) + "\n");
    }
    try {
      const auto corr = stopcal::error_analysis(rows, column);
      stopcal::write_text_file(
          (out_root / ("correlation_" + tag + ".json")).string(),
          stopcal::correlation_to_json(corr));
    } catch (const stopcal::Error& e) {
      ordered_json j;
      j["error"] = stopcal::errc_name(e.code());
      j["message"] = e.what();
      stopcal::write_text_file(
          (out_root / ("correlation_" + tag + ".json")).string(),
          j.dump(2) + "\n");
    }
    stopcal::write_text_file((out_root / ("scatter_" + tag + ".csv")).string(),
                             stopcal::scatter_to_csv(rows, column));
  };
  emit(stopcal::DeltaColumn::TS, "ts");
  emit(stopcal::DeltaColumn::RS, "rs");
  std::cout << "report written to " << out_root.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string spec;
  std::string out_path;
  std::string asset = "SYN";
  std::uint64_t seed = 1;
  std::size_t sma_period = 20;
};

int run_synth_cmd(const SynthArgs& args) {
  if (args.spec.empty()) throw UsageError("synth needs --spec");
  if (args.out_path.empty()) throw UsageError("synth needs --out");
  const DataSpec spec = parse_data_spec(args.spec, args.sma_period);
  if (std::holds_alternative<std::string>(spec)) {
    throw UsageError("--spec must be gbm:... or planted:...");
  }

  if (const auto* planted = std::get_if<stopcal::PlantedSpec>(&spec)) {
    const auto result =
        stopcal::generate_planted(args.seed, *planted, args.asset);
    stopcal::save_csv(result.series, args.out_path);
    ordered_json meta;
    meta["asset"] = args.asset;
    meta["seed"] = args.seed;
    meta["spec"] = args.spec;
    meta["known_threshold"] = result.known_threshold;
    meta["all_winners"] = result.all_winners;
    stopcal::write_text_file(args.out_path + ".meta.json",
                             meta.dump(2) + "\n");
  } else {
    const auto& gbm = std::get<GbmSpec>(spec);
    stopcal::save_csv(stopcal::generate_gbm(args.seed, gbm.p0, gbm.mu,
                                            gbm.sigma, gbm.minutes,
                                            args.asset),
                      args.out_path);
  }
  std::cout << "wrote " << args.out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Systematic trailing-stop calibration and backtesting"};
  app.require_subcommand(1);
  app.set_config("--config")->configurable(false);

  BacktestArgs backtest;
  CLI::App* backtest_cmd =
      app.add_subcommand("backtest", "Run (asset x mode) backtests");
  backtest_cmd->add_option("--asset", backtest.assets,
                           "Asset id (repeatable, pairs with --data)");
  backtest_cmd->add_option("--data", backtest.data,
                           "CSV path or synthetic spec (repeatable)");
  backtest_cmd->add_option("--mode", backtest.modes,
                           "signal-only, t-method, r-method, buy-and-hold "
                           "(repeatable; default all)");
  backtest_cmd->add_option("--out", backtest.out_dir, "Output directory")
      ->required();
  backtest_cmd->add_option("--seed", backtest.seed,
                           "Base seed for synthetic data")
      ->capture_default_str();
  backtest_cmd->add_option("--jobs", backtest.jobs,
                           "Worker threads (default: cores)");
  backtest.strategy.add_options(*backtest_cmd, true);

  CalibrateArgs calibrate;
  CLI::App* calibrate_cmd =
      app.add_subcommand("calibrate", "Calibrate one stop threshold");
  calibrate_cmd->add_option("--asset", calibrate.asset, "Asset id")
      ->capture_default_str();
  calibrate_cmd->add_option("--data", calibrate.data,
                            "CSV path or synthetic spec");
  calibrate_cmd->add_option("--method", calibrate.method, "t or r")
      ->capture_default_str();
  calibrate_cmd->add_option("--as-of", calibrate.as_of,
                            "Calibration instant (ISO-8601 Z; default end)");
  calibrate_cmd->add_option("--out", calibrate.out_dir, "Output directory");
  calibrate_cmd->add_option("--seed", calibrate.seed,
                            "Seed for synthetic data")
      ->capture_default_str();
  calibrate.strategy.add_options(*calibrate_cmd, false);

  ReportArgs report;
  CLI::App* report_cmd =
      app.add_subcommand("report", "Aggregate a comparison table");
  report_cmd->add_option("--table", report.table, "comparison.csv path");
  report_cmd->add_option("--out", report.out_dir, "Output directory");

  SynthArgs synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Write a synthetic minute-bar CSV");
  synth_cmd->add_option("--spec", synth.spec, "gbm:... or planted:...");
  synth_cmd->add_option("--asset", synth.asset, "Asset id")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out_path, "Output CSV path");
  synth_cmd->add_option("--sma-period", synth.sma_period,
                        "SMA period baked into planted fixtures")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    if (backtest_cmd->parsed()) return run_backtest_cmd(backtest);
    if (calibrate_cmd->parsed()) return run_calibrate_cmd(calibrate);
    if (report_cmd->parsed()) return run_report_cmd(report);
    if (synth_cmd->parsed()) return run_synth_cmd(synth);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 64;
}
