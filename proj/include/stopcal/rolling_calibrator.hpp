#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "stopcal/drawdown_stats.hpp"
#include "stopcal/signal_engine.hpp"

namespace stopcal {

/// Rolling-window calibration knobs: artificial trades hold for
/// `horizon_l` hourly points and the trailing `window_m` of them form the
/// calibration corpus.
struct RollingParams {
  std::size_t horizon_l = 20;
  std::size_t window_m = 250;
};

/// Fixed-horizon artificial trades: every hourly grid point with a defined
/// SMA and price strictly above it opens a pseudo-trade that exits at the
/// grid price `horizon_l` points later. Trades overlap freely, ignore exit
/// signals and stops, and are emitted only when the exit lands at or
/// before `as_of`. Drawdowns are measured at minute resolution.
std::vector<TradeRecord> generate_artificial_trades(const BarSeries& series,
                                                    const HourlyGrid& grid,
                                                    const SmaSeries& sma,
                                                    std::size_t horizon_l,
                                                    Timestamp as_of);

/// Calibrates on the most recent min(window_m, available) artificial
/// trades by exit time (ties broken by entry time), reusing the histogram
/// pipeline unchanged. Sets underfull_window when fewer than window_m
/// trades were available.
ThresholdReport calibrate_rolling(std::span<const TradeRecord> artificial,
                                  const RollingParams& params,
                                  std::size_t n_bins);

}  // namespace stopcal
