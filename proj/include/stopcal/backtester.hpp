#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "stopcal/drawdown_stats.hpp"
#include "stopcal/rolling_calibrator.hpp"
#include "stopcal/signal_engine.hpp"

namespace stopcal {

enum class Mode { SignalOnly, TMethod, RMethod, BuyAndHold };

const char* mode_name(Mode mode);
std::optional<Mode> parse_mode(const std::string& text);

enum class RecalibrationPolicy { PerEntry, FixedInterval };

struct BacktestConfig {
  Mode mode = Mode::SignalOnly;
  double initial_cash = 100000.0;
  std::size_t sma_period = 20;
  // nullopt selects the square-root rule on the corpus in hand.
  std::optional<std::size_t> fixed_bins;
  RollingParams rolling;
  RecalibrationPolicy recalibration = RecalibrationPolicy::PerEntry;
  std::size_t recalibration_interval_hours = 24;  // FixedInterval only
  // Stops stay disarmed until this many calibration trades have completed.
  std::size_t min_corpus = 30;
  bool include_forced_final_trade = true;
  // Fixed stop threshold; skips calibration entirely when set.
  std::optional<double> threshold_override;
};

struct ThresholdEvent {
  Timestamp timestamp = 0;
  double threshold = 0.0;
};

struct BacktestResult {
  Mode mode = Mode::SignalOnly;
  std::vector<TradeRecord> trades;
  EquityCurve curve;
  double final_nlv = 0.0;
  // Every armed calibration, in order. Each threshold is a function of
  // data strictly before its timestamp.
  std::vector<ThresholdEvent> thresholds_used;
  // A stop mode never accumulated min_corpus calibration trades, so the
  // whole run behaved as Signal-Only.
  bool calibration_unavailable = false;
};

/// Runs one asset under one mode. SignalOnly delegates to the baseline
/// engine; BuyAndHold buys at the first SMA-defined grid point and holds;
/// TMethod/RMethod trade the baseline signals plus a trailing stop that
/// exits at the first minute bar at or below (1 - T) times the running
/// peak since entry. Stop exits are checked before signal exits within a
/// minute.
BacktestResult run_backtest(const BarSeries& series,
                            const BacktestConfig& config);

/// run_backtest with the shadow Signal-Only corpus calibrator (mode forced
/// to TMethod).
BacktestResult run_t_method_calibrated(const BarSeries& series,
                                       BacktestConfig config);

/// run_backtest with the rolling artificial-trade calibrator (mode forced
/// to RMethod).
BacktestResult run_r_method_calibrated(const BarSeries& series,
                                       BacktestConfig config);

/// `timestamp,T` rows for the thresholds a run actually used.
std::string thresholds_to_csv(const std::vector<ThresholdEvent>& events);

}  // namespace stopcal
