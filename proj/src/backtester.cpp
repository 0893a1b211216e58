#include "stopcal/backtester.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stopcal/errors.hpp"
#include "stopcal/io_util.hpp"
#include "trade_loop.hpp"

namespace stopcal {

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::SignalOnly: return "signal_only";
    case Mode::TMethod: return "t_method";
    case Mode::RMethod: return "r_method";
    case Mode::BuyAndHold: return "buy_and_hold";
  }
  return "unknown";
}

std::optional<Mode> parse_mode(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), '-', '_');
  if (t == "signal_only") return Mode::SignalOnly;
  if (t == "t_method") return Mode::TMethod;
  if (t == "r_method") return Mode::RMethod;
  if (t == "buy_and_hold") return Mode::BuyAndHold;
  return std::nullopt;
}

namespace {

// Shared scheduling shell for the two calibrating stop policies. Until the
// first successful calibration no stop is armed; afterwards the most
// recent armed threshold stays active. PerEntry recalibrates at each entry
// instant, FixedInterval at the first decision point on or after each due
// time (retrying every decision point until first armed).
class CalibratingPolicyBase {
 public:
  CalibratingPolicyBase(const BacktestConfig& config)
      : config_(config),
        interval_secs_(static_cast<Timestamp>(
                           config.recalibration_interval_hours) *
                       kSecondsPerHour) {}

  void decision_point(std::size_t /*grid_index*/, Timestamp ts) {
    if (config_.threshold_override) {
      if (!ever_armed_) arm(ts, *config_.threshold_override);
      return;
    }
    if (config_.recalibration != RecalibrationPolicy::FixedInterval) return;
    if (!ever_armed_) {
      if (try_calibrate(ts)) next_due_ = ts + interval_secs_;
    } else if (ts >= next_due_) {
      try_calibrate(ts);
      while (next_due_ <= ts) next_due_ += interval_secs_;
    }
  }

  void on_entry(Timestamp ts) {
    if (config_.threshold_override) return;
    if (config_.recalibration == RecalibrationPolicy::PerEntry) {
      try_calibrate(ts);
    }
  }

  double threshold() const {
    return ever_armed_ ? current_
                       : std::numeric_limits<double>::quiet_NaN();
  }

  bool ever_armed() const { return ever_armed_; }
  std::vector<ThresholdEvent> take_events() { return std::move(events_); }

 protected:
  // Threshold from data strictly before `at`, or nullopt while the corpus
  // is too small or degenerate.
  virtual std::optional<double> compute_threshold(Timestamp at) = 0;
  virtual ~CalibratingPolicyBase() = default;

  const BacktestConfig& config_;

  std::size_t bins_for(std::size_t corpus_size) const {
    return config_.fixed_bins ? *config_.fixed_bins
                              : default_bin_count(corpus_size);
  }

 private:
  bool try_calibrate(Timestamp ts) {
    const auto t = compute_threshold(ts);
    if (!t) return false;
    arm(ts, *t);
    return true;
  }

  void arm(Timestamp ts, double threshold) {
    current_ = threshold;
    ever_armed_ = true;
    events_.push_back({ts, threshold});
  }

  Timestamp interval_secs_ = 0;
  Timestamp next_due_ = 0;
  double current_ = 0.0;
  bool ever_armed_ = false;
  std::vector<ThresholdEvent> events_;
};

// T method: the corpus is the shadow Signal-Only run's trades completed
// strictly before the calibration instant.
class TMethodPolicy : public CalibratingPolicyBase {
 public:
  TMethodPolicy(const BacktestConfig& config,
                const std::vector<TradeRecord>& shadow_trades)
      : CalibratingPolicyBase(config), shadow_(shadow_trades) {}

 protected:
  std::optional<double> compute_threshold(Timestamp at) override {
    // Shadow trades close in order, so the corpus is a prefix.
    while (completed_ < shadow_.size() &&
           shadow_[completed_].exit_time < at) {
      ++completed_;
    }
    std::span<const TradeRecord> corpus(shadow_.data(), completed_);
    std::vector<TradeRecord> filtered;
    if (!config_.include_forced_final_trade) {
      filtered.reserve(corpus.size());
      for (const TradeRecord& t : corpus) {
        if (!t.forced()) filtered.push_back(t);
      }
      corpus = filtered;
    }
    if (corpus.size() < config_.min_corpus) return std::nullopt;
    try {
      return calibrate_threshold(bin_trades(corpus, bins_for(corpus.size())))
          .threshold;
    } catch (const Error&) {
      return std::nullopt;  // empty or all-zero-drawdown corpus
    }
  }

 private:
  const std::vector<TradeRecord>& shadow_;
  std::size_t completed_ = 0;
};

// R method: the corpus is the trailing window of artificial trades with
// exits strictly before the calibration instant.
class RMethodPolicy : public CalibratingPolicyBase {
 public:
  RMethodPolicy(const BacktestConfig& config,
                const std::vector<TradeRecord>& artificial)
      : CalibratingPolicyBase(config), artificial_(artificial) {}

 protected:
  std::optional<double> compute_threshold(Timestamp at) override {
    while (completed_ < artificial_.size() &&
           artificial_[completed_].exit_time < at) {
      ++completed_;
    }
    if (completed_ < config_.min_corpus) return std::nullopt;
    const std::size_t take =
        std::min<std::size_t>(config_.rolling.window_m, completed_);
    try {
      return calibrate_rolling(
                 std::span<const TradeRecord>(artificial_.data(), completed_),
                 config_.rolling, bins_for(take))
          .threshold;
    } catch (const Error&) {
      return std::nullopt;
    }
  }

 private:
  const std::vector<TradeRecord>& artificial_;
  std::size_t completed_ = 0;
};

BacktestResult run_buy_and_hold(const BarSeries& series, const SmaSeries& sma,
                                const HourlyGrid& grid,
                                const BacktestConfig& config) {
  BacktestResult result;
  result.mode = Mode::BuyAndHold;
  const auto& bars = series.bars;
  result.curve.samples.reserve(bars.size());

  const HourlyGridPoint& entry_point = grid.points[sma.first_index];
  const Timestamp entry_ts = entry_point.timestamp;
  const double fill = entry_point.price;
  const bool tradable = bars.back().timestamp > entry_ts;

  double cash = config.initial_cash;
  double shares = 0.0;
  bool in_position = false;
  double running_max = 0.0;
  double max_drawdown = 0.0;

  for (const PriceBar& bar : bars) {
    if (!in_position && tradable && bar.timestamp >= entry_ts) {
      shares = cash / fill;
      cash = 0.0;
      in_position = true;
      running_max = bar.timestamp == entry_ts ? fill : 0.0;
    }
    if (in_position) {
      if (bar.price > running_max) running_max = bar.price;
      const double dd = (running_max - bar.price) / running_max;
      if (dd > max_drawdown) max_drawdown = dd;
    }
    result.curve.samples.push_back(
        {bar.timestamp, in_position ? shares * bar.price : cash});
  }

  if (in_position) {
    const PriceBar& last = bars.back();
    TradeRecord trade;
    trade.entry_time = entry_ts;
    trade.exit_time = last.timestamp;
    trade.entry_price = fill;
    trade.exit_price = last.price;
    trade.max_drawdown = max_drawdown;
    trade.trade_return = last.price / fill - 1.0;
    trade.outcome = trade.trade_return > 0.0 ? Outcome::Win : Outcome::Loss;
    trade.kind = TradeKind::Real;
    trade.exit_reason = ExitReason::Forced;
    result.trades.push_back(trade);
    result.curve.samples.back().nlv = shares * last.price;
  }
  result.final_nlv = result.curve.samples.back().nlv;
  return result;
}

}  // namespace

BacktestResult run_backtest(const BarSeries& series,
                            const BacktestConfig& config) {
  if (series.bars.empty()) raise(Errc::InvalidParameter, "empty bar series");
  if (!(config.initial_cash > 0.0)) {
    raise(Errc::InvalidParameter, "initial_cash must be positive");
  }
  if (config.min_corpus < 1) {
    raise(Errc::InvalidParameter, "min_corpus must be >= 1");
  }
  if (config.recalibration == RecalibrationPolicy::FixedInterval &&
      config.recalibration_interval_hours < 1) {
    raise(Errc::InvalidParameter, "recalibration interval must be >= 1 hour");
  }
  if (config.threshold_override && !(*config.threshold_override > 0.0)) {
    raise(Errc::InvalidParameter, "threshold override must be positive");
  }

  const HourlyGrid grid = to_hourly_grid(series);
  const SmaSeries sma = compute_sma(grid, config.sma_period);

  BacktestResult result;
  result.mode = config.mode;

  switch (config.mode) {
    case Mode::SignalOnly: {
      SignalRunResult run =
          run_signal_only(series, sma, grid, config.initial_cash);
      result.trades = std::move(run.trades);
      result.curve = std::move(run.curve);
      result.final_nlv = run.final_nlv;
      return result;
    }
    case Mode::BuyAndHold:
      return run_buy_and_hold(series, sma, grid, config);
    case Mode::TMethod: {
      const SignalRunResult shadow =
          run_signal_only(series, sma, grid, config.initial_cash);
      TMethodPolicy policy(config, shadow.trades);
      SignalRunResult run = detail::run_trade_loop(series, sma, grid,
                                                   config.initial_cash, policy);
      result.trades = std::move(run.trades);
      result.curve = std::move(run.curve);
      result.final_nlv = run.final_nlv;
      result.thresholds_used = policy.take_events();
      result.calibration_unavailable = !policy.ever_armed();
      return result;
    }
    case Mode::RMethod: {
      const std::vector<TradeRecord> artificial = generate_artificial_trades(
          series, grid, sma, config.rolling.horizon_l, series.last_time());
      RMethodPolicy policy(config, artificial);
      SignalRunResult run = detail::run_trade_loop(series, sma, grid,
                                                   config.initial_cash, policy);
      result.trades = std::move(run.trades);
      result.curve = std::move(run.curve);
      result.final_nlv = run.final_nlv;
      result.thresholds_used = policy.take_events();
      result.calibration_unavailable = !policy.ever_armed();
      return result;
    }
  }
  raise(Errc::InvalidParameter, "unknown mode");
}

BacktestResult run_t_method_calibrated(const BarSeries& series,
                                       BacktestConfig config) {
  config.mode = Mode::TMethod;
  return run_backtest(series, config);
}

BacktestResult run_r_method_calibrated(const BarSeries& series,
                                       BacktestConfig config) {
  config.mode = Mode::RMethod;
  return run_backtest(series, config);
}

std::string thresholds_to_csv(const std::vector<ThresholdEvent>& events) {
  std::string out = "timestamp,T\n";
  for (const ThresholdEvent& e : events) {
    out += format_timestamp(e.timestamp);
    out += ',';
    out += format_double(e.threshold);
    out += '\n';
  }
  return out;
}

}  // namespace stopcal
