// Acceptance suite: prints one pass/fail line per criterion and exits
// nonzero if any fail. Criterion 10 drives the CLI binary named by the
// STOPCAL_CLI environment variable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "stopcal/analytics.hpp"
#include "stopcal/backtester.hpp"
#include "stopcal/drawdown_stats.hpp"
#include "stopcal/io_util.hpp"
#include "stopcal/market_data.hpp"
#include "stopcal/rolling_calibrator.hpp"
#include "stopcal/signal_engine.hpp"

namespace fs = std::filesystem;
using namespace stopcal;

namespace {

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<bool(std::string&)> body;
};

bool g_all_ok = true;

void run_criterion(const Criterion& c) {
  std::string detail;
  bool ok = false;
  const auto start = std::chrono::steady_clock::now();
  try {
    ok = c.body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (elapsed > c.budget_seconds) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
  }
  g_all_ok = g_all_ok && ok;
  std::printf("[%s] %s (%.2fs%s%s)\n", ok ? "PASS" : "FAIL", c.name.c_str(),
              elapsed, detail.empty() ? "" : "; ", detail.c_str());
  std::fflush(stdout);
}

// shared random-corpus results reused by criteria 1 and 6
struct CorpusCheck {
  bool oracle_match = true;
  bool identities = true;
  std::string detail;
};

CorpusCheck check_random_corpora() {
  CorpusCheck out;
  std::mt19937_64 rng(123456);
  for (int rep = 0; rep < 200; ++rep) {
    const auto trades = oracle::random_corpus(rng, 300);
    const std::size_t n =
        1 + static_cast<std::size_t>(oracle::u01(rng) * 14.0);
    std::vector<double> dd, ret;
    for (const auto& t : trades) {
      dd.push_back(t.max_drawdown);
      ret.push_back(t.trade_return);
    }
    const auto expected = oracle::calibrate_bruteforce(dd, ret, n);
    if (!expected) {
      out.oracle_match = false;
      out.detail = "oracle refused corpus " + std::to_string(rep);
      break;
    }
    const ThresholdReport got = calibrate_threshold(bin_trades(trades, n));
    if (got.k_star != expected->k_star || got.threshold != expected->threshold) {
      out.oracle_match = false;
      out.detail = "argmax mismatch at corpus " + std::to_string(rep);
      break;
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (std::fabs(got.v[k] - expected->v[k]) > 1e-12) {
        out.oracle_match = false;
        out.detail = "v mismatch at corpus " + std::to_string(rep);
        break;
      }
    }

    double p_sum = 0.0;
    for (double p : got.p) p_sum += p;
    double mean_return = 0.0;
    for (const auto& t : trades) mean_return += t.trade_return;
    mean_return /= static_cast<double>(trades.size());
    if (std::fabs(p_sum - 1.0) > 1e-12 ||
        std::fabs(got.v.back() - mean_return) > 1e-12) {
      out.identities = false;
      out.detail = "identity failure at corpus " + std::to_string(rep);
    }
    if (!out.oracle_match || !out.identities) break;
  }
  return out;
}

// Replays every trade of a stop-mode run against its thresholds_used
// events: stopped trades must trigger exactly at their exit minute and
// never before; other trades must never trigger while armed.
bool replay_stop_tightness(const BarSeries& series,
                           const BacktestResult& result, std::size_t& stops,
                           std::string& detail) {
  std::map<Timestamp, double> events;
  for (const auto& e : result.thresholds_used) {
    events[e.timestamp] = e.threshold;
  }
  const auto active_threshold = [&](Timestamp at) -> std::optional<double> {
    auto it = events.upper_bound(at);
    if (it == events.begin()) return std::nullopt;
    --it;
    return it->second;
  };

  for (const TradeRecord& t : result.trades) {
    double peak = 0.0;
    for (const PriceBar& bar : series.bars) {
      if (bar.timestamp < t.entry_time || bar.timestamp > t.exit_time) {
        continue;
      }
      if (bar.price > peak) peak = bar.price;
      const auto threshold = active_threshold(bar.timestamp);
      const bool trigger =
          threshold && bar.price <= (1.0 - *threshold) * peak;
      const bool is_exit_bar = bar.timestamp == t.exit_time;
      if (t.exit_reason == ExitReason::Stop) {
        if (is_exit_bar && !trigger) {
          detail = "stop exit bar did not satisfy the trigger";
          return false;
        }
        if (!is_exit_bar && trigger) {
          detail = "stop trigger satisfied before the exit bar";
          return false;
        }
      } else if (trigger && !is_exit_bar) {
        detail = "armed non-stop trade passed a triggering bar";
        return false;
      }
    }
    if (t.exit_reason == ExitReason::Stop) ++stops;
  }
  return true;
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
  return std::system(cmd.c_str());
}

bool tree_equal(const fs::path& a, const fs::path& b, std::string& detail) {
  std::vector<fs::path> rel_a, rel_b;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (entry.is_regular_file()) {
      rel_a.push_back(fs::relative(entry.path(), a));
    }
  }
  for (const auto& entry : fs::recursive_directory_iterator(b)) {
    if (entry.is_regular_file()) {
      rel_b.push_back(fs::relative(entry.path(), b));
    }
  }
  std::sort(rel_a.begin(), rel_a.end());
  std::sort(rel_b.begin(), rel_b.end());
  if (rel_a != rel_b) {
    detail = "output trees list different files";
    return false;
  }
  for (const auto& rel : rel_a) {
    if (read_text_file((a / rel).string()) !=
        read_text_file((b / rel).string())) {
      detail = "file differs: " + rel.string();
      return false;
    }
  }
  return true;
}

}  // namespace

int main() {
  const CorpusCheck corpora = check_random_corpora();

  std::vector<Criterion> criteria;

  criteria.push_back({"1 threshold pipeline equals exhaustive enumeration "
                      "(200 corpora)",
                      5.0, [&](std::string& detail) {
                        detail = corpora.detail;
                        return corpora.oracle_match;
                      }});

  criteria.push_back({"2 max drawdown equals O(n^2) brute force (500 windows)",
                      5.0, [](std::string& detail) {
                        std::mt19937_64 rng(777);
                        for (int rep = 0; rep < 500; ++rep) {
                          std::vector<double> prices;
                          prices.reserve(1000);
                          double p = 100.0;
                          for (int i = 0; i < 1000; ++i) {
                            p *= 1.0 + (oracle::u01(rng) - 0.5) * 0.012;
                            prices.push_back(p);
                          }
                          const BarSeries s =
                              oracle::lattice_series(std::move(prices));
                          const double got = measure_max_drawdown(
                              s, s.first_time(), s.last_time());
                          const double want =
                              oracle::drawdown_bruteforce(s.bars);
                          if (std::fabs(got - want) > 1e-12) {
                            detail =
                                "window " + std::to_string(rep) + " differs";
                            return false;
                          }
                        }
                        return true;
                      }});

  criteria.push_back(
      {"3 unbindable stop reproduces Signal-Only (20 GBM fixtures)", 10.0,
       [](std::string& detail) {
         for (std::uint64_t seed = 1; seed <= 20; ++seed) {
           const BarSeries series = generate_gbm(
               seed, 100.0, 0.05 * static_cast<double>(seed % 5), 0.35,
               30 * 390, "GBM");
           BacktestConfig base;
           base.mode = Mode::SignalOnly;
           const BacktestResult signal = run_backtest(series, base);
           for (const Mode mode : {Mode::TMethod, Mode::RMethod}) {
             BacktestConfig config;
             config.mode = mode;
             config.min_corpus = 5;
             config.threshold_override = 1.0;
             const BacktestResult stopped = run_backtest(series, config);
             if (stopped.trades.size() != signal.trades.size()) {
               detail = "trade count differs on seed " + std::to_string(seed);
               return false;
             }
             for (std::size_t i = 0; i < signal.trades.size(); ++i) {
               const auto& a = stopped.trades[i];
               const auto& b = signal.trades[i];
               if (a.entry_time != b.entry_time ||
                   a.exit_time != b.exit_time ||
                   a.entry_price != b.entry_price ||
                   a.exit_price != b.exit_price) {
                 detail = "trade " + std::to_string(i) + " differs on seed " +
                          std::to_string(seed);
                 return false;
               }
             }
             if (std::fabs(stopped.final_nlv - signal.final_nlv) >
                 1e-9 * signal.final_nlv) {
               detail = "final NLV differs on seed " + std::to_string(seed);
               return false;
             }
           }
         }
         return true;
       }});

  criteria.push_back(
      {"4 planted threshold recovered within one bin width (>=9/10)", 20.0,
       [](std::string& detail) {
         int hits = 0;
         for (std::uint64_t seed = 1; seed <= 10; ++seed) {
           PlantedSpec spec;  // d*=0.02, +-5% outcomes, 100 trades
           const PlantedResult planted = generate_planted(seed, spec, "PLT");
           const HourlyGrid grid = to_hourly_grid(planted.series);
           const SmaSeries sma = compute_sma(grid, spec.sma_period);
           const SignalRunResult run =
               run_signal_only(planted.series, sma, grid);
           if (run.trades.size() < 100) {
             detail = "fixture " + std::to_string(seed) +
                      " produced too few trades";
             return false;
           }
           const std::size_t n = default_bin_count(run.trades.size());
           const ThresholdReport report =
               calibrate_threshold(bin_trades(run.trades, n));
           if (std::fabs(report.threshold - planted.known_threshold) <=
               report.width) {
             ++hits;
           }
         }
         detail = std::to_string(hits) + "/10 within one bin width";
         return hits >= 9;
       }});

  criteria.push_back(
      {"5 stop-tightness replay over all fixture backtests", 10.0,
       [](std::string& detail) {
         std::size_t stops = 0;
         for (std::uint64_t seed = 101; seed <= 106; ++seed) {
           const BarSeries series =
               generate_gbm(seed, 100.0, 0.0, 0.5, 40 * 390, "GBM");
           for (const Mode mode : {Mode::TMethod, Mode::RMethod}) {
             BacktestConfig config;
             config.mode = mode;
             config.min_corpus = 8;
             const BacktestResult result = run_backtest(series, config);
             if (!replay_stop_tightness(series, result, stops, detail)) {
               return false;
             }
           }
           // one fixed-interval variant
           BacktestConfig interval;
           interval.mode = Mode::TMethod;
           interval.min_corpus = 8;
           interval.recalibration = RecalibrationPolicy::FixedInterval;
           interval.recalibration_interval_hours = 24;
           const BacktestResult result = run_backtest(series, interval);
           if (!replay_stop_tightness(series, result, stops, detail)) {
             return false;
           }
         }
         PlantedSpec spec;
         const PlantedResult planted = generate_planted(42, spec, "PLT");
         BacktestConfig config;
         config.mode = Mode::TMethod;
         config.min_corpus = 10;
         const BacktestResult result = run_backtest(planted.series, config);
         if (!replay_stop_tightness(planted.series, result, stops, detail)) {
           return false;
         }
         detail = std::to_string(stops) + " stopped trades replayed";
         return stops > 0;
       }});

  criteria.push_back({"6 conservation and pooled-mean identities", 5.0,
                      [&](std::string& detail) {
                        detail = corpora.identities ? "" : corpora.detail;
                        return corpora.identities;
                      }});

  criteria.push_back(
      {"7 no-lookahead audit over 5 fixtures", 30.0,
       [](std::string& detail) {
         std::size_t audited = 0;
         const auto audit_t = [&](const BarSeries& series,
                                  const BacktestConfig& config,
                                  const BacktestResult& result) {
           for (const ThresholdEvent& event : result.thresholds_used) {
             BarSeries truncated;
             truncated.asset_id = series.asset_id;
             for (const PriceBar& bar : series.bars) {
               if (bar.timestamp < event.timestamp) {
                 truncated.bars.push_back(bar);
               }
             }
             const HourlyGrid grid = to_hourly_grid(truncated);
             const SmaSeries sma = compute_sma(grid, config.sma_period);
             const SignalRunResult shadow =
                 run_signal_only(truncated, sma, grid);
             std::vector<TradeRecord> corpus;
             for (const TradeRecord& t : shadow.trades) {
               if (!t.forced() && t.exit_time < event.timestamp) {
                 corpus.push_back(t);
               }
             }
             const ThresholdReport report = calibrate_threshold(
                 bin_trades(corpus, default_bin_count(corpus.size())));
             if (report.threshold != event.threshold) return false;
             ++audited;
           }
           return true;
         };
         const auto audit_r = [&](const BarSeries& series,
                                  const BacktestConfig& config,
                                  const BacktestResult& result) {
           for (const ThresholdEvent& event : result.thresholds_used) {
             BarSeries truncated;
             truncated.asset_id = series.asset_id;
             for (const PriceBar& bar : series.bars) {
               if (bar.timestamp < event.timestamp) {
                 truncated.bars.push_back(bar);
               }
             }
             const HourlyGrid grid = to_hourly_grid(truncated);
             const SmaSeries sma = compute_sma(grid, config.sma_period);
             const auto artificial = generate_artificial_trades(
                 truncated, grid, sma, config.rolling.horizon_l,
                 truncated.last_time());
             const std::size_t take = std::min<std::size_t>(
                 config.rolling.window_m, artificial.size());
             const ThresholdReport report = calibrate_rolling(
                 artificial, config.rolling, default_bin_count(take));
             if (report.threshold != event.threshold) return false;
             ++audited;
           }
           return true;
         };

         for (std::uint64_t seed = 201; seed <= 203; ++seed) {
           const BarSeries series =
               generate_gbm(seed, 100.0, 0.02, 0.45, 35 * 390, "GBM");
           BacktestConfig config;
           config.mode = Mode::TMethod;
           config.min_corpus = 8;
           const BacktestResult result = run_backtest(series, config);
           if (!audit_t(series, config, result)) {
             detail = "t-method audit failed on seed " + std::to_string(seed);
             return false;
           }
         }
         {
           const BarSeries series =
               generate_gbm(204, 100.0, 0.0, 0.45, 35 * 390, "GBM");
           BacktestConfig config;
           config.mode = Mode::RMethod;
           config.min_corpus = 8;
           config.rolling.window_m = 150;
           const BacktestResult result = run_backtest(series, config);
           if (!audit_r(series, config, result)) {
             detail = "r-method audit failed";
             return false;
           }
         }
         {
           PlantedSpec spec;
           const PlantedResult planted = generate_planted(7, spec, "PLT");
           BacktestConfig config;
           config.mode = Mode::TMethod;
           config.min_corpus = 10;
           const BacktestResult result =
               run_backtest(planted.series, config);
           if (!audit_t(planted.series, config, result)) {
             detail = "planted audit failed";
             return false;
           }
         }
         detail = std::to_string(audited) + " thresholds audited";
         return audited > 0;
       }});

  criteria.push_back(
      {"8 statistics: exact linearity, quadrature p, spreadsheet oracle", 5.0,
       [](std::string& detail) {
         std::vector<double> x, y;
         for (int i = 0; i < 30; ++i) {
           x.push_back(static_cast<double>(i));
           y.push_back(2.0 * static_cast<double>(i) + 1.0);
         }
         const CorrelationResult lin = pearson(x, y);
         if (std::fabs(lin.rho - 1.0) > 1e-12 || lin.p_value > 1e-12) {
           detail = "linear case failed";
           return false;
         }

         std::mt19937_64 rng(50);
         std::vector<double> a(50), b(50);
         for (std::size_t i = 0; i < 50; ++i) {
           a[i] = oracle::uniform(rng, -1.0, 1.0);
           b[i] = 0.5 * a[i] + oracle::uniform(rng, -0.7, 0.7);
         }
         const CorrelationResult seeded = pearson(a, b);
         const double t =
             seeded.rho * std::sqrt(48.0 / (1.0 - seeded.rho * seeded.rho));
         const double p_numeric = oracle::t_two_sided_p_numeric(t, 48.0);
         if (std::fabs(seeded.p_value - p_numeric) > 1e-6) {
           detail = "quadrature p mismatch";
           return false;
         }

         const std::string fixture =
             "asset,delta_nlv_ts,delta_nlv_rs,trades\n"
             "AAPL,-0.099310,-0.057711,219\nADSK,-0.161878,-0.170516,235\n"
             "AEP,0.024071,0.043622,282\nAMT,0.105779,0.014302,234\n"
             "AXP,0.044818,0.074721,239\nBA,-0.001810,0.046409,234\n"
             "BDX,0.033300,0.035577,285\nBIG,0.097061,0.037862,265\n"
             "BRK_B,0.100421,0.090277,272\nCAH,0.063538,0.054561,263\n";
         const auto rows = parse_comparison_csv(fixture);
         const AggregateSummary ts = aggregate(rows, DeltaColumn::TS);
         if (std::fabs(ts.win_fraction - 0.7) > 1e-12 ||
             std::fabs(ts.mean_gain_winners - 0.066998285714285714) > 1e-12 ||
             std::fabs(ts.mean_loss_losers - -0.087666) > 1e-12 ||
             std::fabs(ts.expected_change - 0.020599) > 1e-12) {
           detail = "spreadsheet oracle mismatch (ts)";
           return false;
         }
         const AggregateSummary rs = aggregate(rows, DeltaColumn::RS);
         const double identity =
             rs.win_fraction * rs.mean_gain_winners +
             (1.0 - rs.win_fraction) * rs.mean_loss_losers;
         if (std::fabs(rs.expected_change - identity) > 1e-12) {
           detail = "decomposition identity failed";
           return false;
         }
         return true;
       }});

  criteria.push_back(
      {"9 comparison schema round-trips published rows bit-exactly", 5.0,
       [](std::string& detail) {
         const std::string fixture =
             "asset,delta_nlv_ts,delta_nlv_rs,trades\n"
             "AAPL,-0.099310,-0.057711,219\n"
             "IWM,-0.062709,-0.028134,259\n"
             "SPY,0.024745,0.074618,256\n"
             "EDC,-0.574054,-0.095637,189\n"
             "BRK_B,0.100421,0.090277,272\n"
             "SSO,0.131903,0.274300,248\n";
         const auto rows = parse_comparison_csv(fixture);
         const std::string rendered = comparison_table_to_csv(rows);
         if (rendered != fixture) {
           detail = "bytes differ after parse -> format";
           return false;
         }
         return true;
       }});

  criteria.push_back(
      {"10 identical manifests produce byte-identical output trees", 60.0,
       [](std::string& detail) {
         const char* cli = std::getenv("STOPCAL_CLI");
         if (cli == nullptr) {
           detail = "STOPCAL_CLI not set";
           return false;
         }
         const fs::path root =
             fs::temp_directory_path() / "stopcal_acceptance_determinism";
         fs::remove_all(root);
         fs::create_directories(root);
         const std::string manifest =
             "--asset GBMA --data gbm:p0=100,mu=0.05,sigma=0.4,minutes=9000 "
             "--asset GBMB --data gbm:p0=80,mu=-0.02,sigma=0.3,minutes=9000 "
             "--asset PLT --data "
             "planted:dstar=0.02,gain=0.05,loss=-0.05,trades=40 "
             "--seed 11 --min-corpus 8 --jobs 4 --out ";
         const int rc1 =
             run_cli(cli, "backtest " + manifest + (root / "a").string());
         const int rc2 =
             run_cli(cli, "backtest " + manifest + (root / "b").string());
         if (rc1 != 0 || rc2 != 0) {
           detail = "cli exited nonzero";
           return false;
         }
         if (!tree_equal(root / "a", root / "b", detail)) return false;

         // synth determinism as well
         const int s1 = run_cli(
             cli, "synth --spec gbm:p0=50,mu=0.1,sigma=0.25,minutes=2000 "
                  "--seed 5 --out " +
                      (root / "s1.csv").string());
         const int s2 = run_cli(
             cli, "synth --spec gbm:p0=50,mu=0.1,sigma=0.25,minutes=2000 "
                  "--seed 5 --out " +
                      (root / "s2.csv").string());
         if (s1 != 0 || s2 != 0) {
           detail = "synth exited nonzero";
           return false;
         }
         if (read_text_file((root / "s1.csv").string()) !=
             read_text_file((root / "s2.csv").string())) {
           detail = "synth output differs between runs";
           return false;
         }
         return true;
       }});

  std::printf("stopcal acceptance suite\n");
  for (const auto& criterion : criteria) run_criterion(criterion);
  std::printf("%s\n", g_all_ok ? "ALL CRITERIA PASSED" : "CRITERIA FAILED");
  return g_all_ok ? 0 : 1;
}
