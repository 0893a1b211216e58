#include "stopcal/rolling_calibrator.hpp"

#include <algorithm>

#include "stopcal/errors.hpp"

namespace stopcal {

std::vector<TradeRecord> generate_artificial_trades(const BarSeries& series,
                                                    const HourlyGrid& grid,
                                                    const SmaSeries& sma,
                                                    std::size_t horizon_l,
                                                    Timestamp as_of) {
  if (horizon_l < 1) raise(Errc::InvalidParameter, "horizon must be >= 1");
  if (grid.size() < sma.period) {
    raise(Errc::InsufficientHistory, "grid shorter than the SMA period");
  }
  std::vector<TradeRecord> trades;
  for (std::size_t g = 0; g + horizon_l < grid.size(); ++g) {
    if (!sma.defined_at(g)) continue;
    const HourlyGridPoint& entry = grid.points[g];
    if (!(entry.price > sma.at(g))) continue;
    const HourlyGridPoint& exit = grid.points[g + horizon_l];
    if (exit.timestamp > as_of) continue;

    TradeRecord t;
    t.entry_time = entry.timestamp;
    t.exit_time = exit.timestamp;
    t.entry_price = entry.price;
    t.exit_price = exit.price;
    t.max_drawdown =
        measure_max_drawdown(series, entry.timestamp, exit.timestamp);
    t.trade_return = exit.price / entry.price - 1.0;
    t.outcome = t.trade_return > 0.0 ? Outcome::Win : Outcome::Loss;
    t.kind = TradeKind::Artificial;
    t.exit_reason = ExitReason::Horizon;
    trades.push_back(t);
  }
  return trades;
}

ThresholdReport calibrate_rolling(std::span<const TradeRecord> artificial,
                                  const RollingParams& params,
                                  std::size_t n_bins) {
  if (params.window_m < 1) raise(Errc::InvalidParameter, "window must be >= 1");
  if (artificial.empty()) {
    raise(Errc::EmptyCorpus, "no artificial trades available");
  }
  std::vector<TradeRecord> window(artificial.begin(), artificial.end());
  std::sort(window.begin(), window.end(),
            [](const TradeRecord& a, const TradeRecord& b) {
              if (a.exit_time != b.exit_time) return a.exit_time < b.exit_time;
              return a.entry_time < b.entry_time;
            });
  const std::size_t take = std::min<std::size_t>(params.window_m, window.size());
  std::vector<TradeRecord> corpus(window.end() - static_cast<std::ptrdiff_t>(take),
                                  window.end());

  ThresholdReport report = calibrate_threshold(bin_trades(corpus, n_bins));
  report.underfull_window = take < params.window_m;
  return report;
}

}  // namespace stopcal
