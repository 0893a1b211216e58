#pragma once

// Internal minute-resolution trade loop shared by the stopless baseline and
// the stop-managed backtests. Event order within one timestamp:
//   1. hourly SMA refresh (and any recalibration hook)
//   2. long-position checks: stop first, then signal exit
//   3. entry check while flat (skipped if an exit just happened this bar)
// Entries fire only at hourly grid points; exits fire only at minute bars.

#include <cmath>
#include <cstddef>
#include <limits>

#include "stopcal/market_data.hpp"
#include "stopcal/signal_engine.hpp"

namespace stopcal::detail {

// No-op policy: no stops, nothing recalibrates. Models the Signal-Only run.
struct NoStopPolicy {
  void decision_point(std::size_t /*grid_index*/, Timestamp /*ts*/) {}
  void on_entry(Timestamp /*ts*/) {}
  double threshold() const {
    return std::numeric_limits<double>::quiet_NaN();
  }
};

template <class StopPolicy>
SignalRunResult run_trade_loop(const BarSeries& series, const SmaSeries& sma,
                               const HourlyGrid& grid, double initial_cash,
                               StopPolicy& policy) {
  SignalRunResult result;
  const auto& bars = series.bars;
  result.curve.samples.reserve(bars.size());

  double cash = initial_cash;
  double shares = 0.0;
  bool in_position = false;

  Timestamp entry_time = 0;
  double entry_price = 0.0;
  double running_max = 0.0;
  double max_drawdown = 0.0;

  double current_sma = 0.0;
  bool sma_ready = false;

  const auto open_position = [&](Timestamp ts, double fill, double seed_max) {
    policy.on_entry(ts);
    shares = cash / fill;
    cash = 0.0;
    in_position = true;
    entry_time = ts;
    entry_price = fill;
    running_max = seed_max;
    max_drawdown = 0.0;
  };

  const auto close_position = [&](Timestamp ts, double fill,
                                  ExitReason reason) {
    cash = shares * fill;
    shares = 0.0;
    in_position = false;
    TradeRecord trade;
    trade.entry_time = entry_time;
    trade.exit_time = ts;
    trade.entry_price = entry_price;
    trade.exit_price = fill;
    trade.max_drawdown = max_drawdown;
    trade.trade_return = fill / entry_price - 1.0;
    trade.outcome = trade.trade_return > 0.0 ? Outcome::Win : Outcome::Loss;
    trade.kind = TradeKind::Real;
    trade.exit_reason = reason;
    trade.stop_threshold = policy.threshold();
    result.trades.push_back(trade);
  };

  std::size_t g = 0;
  const std::size_t n_grid = grid.points.size();
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const Timestamp ts = bars[i].timestamp;
    const double price = bars[i].price;

    // Hourly points that fall in data gaps strictly before this bar: they
    // refresh the SMA and may open a position at the stale grid price, but
    // exits wait for actual bars.
    while (g < n_grid && grid.points[g].timestamp < ts) {
      if (sma.defined_at(g)) {
        current_sma = sma.at(g);
        sma_ready = true;
        policy.decision_point(g, grid.points[g].timestamp);
        if (!in_position && grid.points[g].price > current_sma) {
          open_position(grid.points[g].timestamp, grid.points[g].price, 0.0);
        }
      }
      ++g;
    }

    const bool at_decision_point =
        g < n_grid && grid.points[g].timestamp == ts && sma.defined_at(g);
    if (at_decision_point) {
      current_sma = sma.at(g);
      sma_ready = true;
      policy.decision_point(g, ts);
    }
    if (g < n_grid && grid.points[g].timestamp == ts) ++g;

    bool exited_this_bar = false;
    if (in_position) {
      if (price > running_max) running_max = price;
      const double drawdown = (running_max - price) / running_max;
      if (drawdown > max_drawdown) max_drawdown = drawdown;

      const double stop = policy.threshold();
      if (!std::isnan(stop) && price <= (1.0 - stop) * running_max) {
        close_position(ts, price, ExitReason::Stop);
        exited_this_bar = true;
      } else if (sma_ready && price < current_sma) {
        close_position(ts, price, ExitReason::Signal);
        exited_this_bar = true;
      }
    }

    if (at_decision_point && !in_position && !exited_this_bar &&
        i + 1 < bars.size() && price > current_sma) {
      open_position(ts, price, price);
    }

    result.curve.samples.push_back({ts, in_position ? shares * price : cash});
  }

  if (in_position) {
    const PriceBar& last = bars.back();
    close_position(last.timestamp, last.price, ExitReason::Forced);
    result.curve.samples.back().nlv = cash;
  }
  result.final_nlv = result.curve.samples.empty()
                         ? initial_cash
                         : result.curve.samples.back().nlv;
  return result;
}

}  // namespace stopcal::detail
