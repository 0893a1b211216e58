#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "stopcal/market_data.hpp"

namespace stopcal {

/// Hourly SMA values aligned to grid points. Defined from grid index
/// period-1 onward; values[i] belongs to grid point first_index + i and is
/// the mean of the trailing `period` grid prices (current point included).
struct SmaSeries {
  std::size_t period = 0;
  std::size_t first_index = 0;
  std::vector<double> values;

  bool defined_at(std::size_t grid_index) const noexcept {
    return grid_index >= first_index &&
           grid_index - first_index < values.size();
  }
  double at(std::size_t grid_index) const {
    return values[grid_index - first_index];
  }
};

enum class TradeKind { Real, Artificial };
enum class Outcome { Win, Loss };
enum class ExitReason { Signal, Stop, Forced, Horizon };

/// One round trip, real or artificial.
struct TradeRecord {
  Timestamp entry_time = 0;
  Timestamp exit_time = 0;
  double entry_price = 0.0;
  double exit_price = 0.0;
  double max_drawdown = 0.0;  // fraction in [0, 1)
  double trade_return = 0.0;  // exit/entry - 1
  Outcome outcome = Outcome::Loss;
  TradeKind kind = TradeKind::Real;
  ExitReason exit_reason = ExitReason::Signal;
  // Stop threshold active when this trade closed; NaN when no stop was armed.
  double stop_threshold = std::numeric_limits<double>::quiet_NaN();

  bool forced() const noexcept { return exit_reason == ExitReason::Forced; }
};

struct EquitySample {
  Timestamp timestamp = 0;
  double nlv = 0.0;
};

struct EquityCurve {
  std::vector<EquitySample> samples;
};

struct SignalRunResult {
  std::vector<TradeRecord> trades;
  EquityCurve curve;
  double final_nlv = 0.0;
};

/// Trailing mean over `period` grid points. InsufficientHistory when the
/// grid is shorter than the period.
SmaSeries compute_sma(const HourlyGrid& grid, std::size_t period);

/// The stopless baseline strategy. While flat, enter long at any hourly
/// grid point whose price is strictly above the SMA there. While long,
/// exit at the first minute bar strictly below the last computed SMA (the
/// SMA refreshes at every hourly point). The final open position is
/// force-closed at the last bar.
///
/// Each trade's max_drawdown is measured at minute resolution against the
/// running peak since entry; the equity curve carries one all-in NLV
/// sample per minute bar.
SignalRunResult run_signal_only(const BarSeries& series, const SmaSeries& sma,
                                const HourlyGrid& grid,
                                double initial_cash = 100000.0);

/// Max over minute bars in [from, to] of (peak - price)/peak, with the
/// peak running from `from`. Zero for nondecreasing segments. EmptyWindow
/// when the range contains no bars.
double measure_max_drawdown(const BarSeries& series, Timestamp from,
                            Timestamp to);

char outcome_label(Outcome outcome);

/// `entry_time,exit_time,entry_price,exit_price,return,max_drawdown,outcome,kind`
std::string trades_to_csv(std::span<const TradeRecord> trades);
void write_trades_csv(std::span<const TradeRecord> trades,
                      const std::string& path);

/// `timestamp,nlv`
std::string equity_to_csv(const EquityCurve& curve);
void write_equity_csv(const EquityCurve& curve, const std::string& path);

}  // namespace stopcal
