#include "stopcal/signal_engine.hpp"

#include <algorithm>
#include <cmath>

#include "stopcal/errors.hpp"
#include "stopcal/io_util.hpp"
#include "trade_loop.hpp"

namespace stopcal {

SmaSeries compute_sma(const HourlyGrid& grid, std::size_t period) {
  if (period < 1) raise(Errc::InvalidParameter, "SMA period must be >= 1");
  if (grid.size() < period) {
    raise(Errc::InsufficientHistory,
          "grid has " + std::to_string(grid.size()) + " points, need " +
              std::to_string(period));
  }
  SmaSeries sma;
  sma.period = period;
  sma.first_index = period - 1;
  sma.values.reserve(grid.size() - period + 1);

  // Prefix sums keep SMA values identical between a series and any prefix
  // of it, which the no-lookahead audits rely on.
  std::vector<double> prefix(grid.size() + 1, 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    prefix[i + 1] = prefix[i] + grid.points[i].price;
  }
  for (std::size_t k = period - 1; k < grid.size(); ++k) {
    sma.values.push_back((prefix[k + 1] - prefix[k + 1 - period]) /
                         static_cast<double>(period));
  }
  return sma;
}

SignalRunResult run_signal_only(const BarSeries& series, const SmaSeries& sma,
                                const HourlyGrid& grid, double initial_cash) {
  if (series.bars.empty()) raise(Errc::InvalidParameter, "empty bar series");
  if (!(initial_cash > 0.0)) {
    raise(Errc::InvalidParameter, "initial_cash must be positive");
  }
  detail::NoStopPolicy policy;
  return detail::run_trade_loop(series, sma, grid, initial_cash, policy);
}

double measure_max_drawdown(const BarSeries& series, Timestamp from,
                            Timestamp to) {
  if (from >= to) raise(Errc::EmptyWindow, "window start must precede end");
  const auto& bars = series.bars;
  auto begin = std::lower_bound(
      bars.begin(), bars.end(), from,
      [](const PriceBar& bar, Timestamp t) { return bar.timestamp < t; });
  auto end = std::upper_bound(
      bars.begin(), bars.end(), to,
      [](Timestamp t, const PriceBar& bar) { return t < bar.timestamp; });
  if (begin == end) raise(Errc::EmptyWindow, "no bars in window");

  double peak = 0.0;
  double worst = 0.0;
  for (auto it = begin; it != end; ++it) {
    if (it->price > peak) peak = it->price;
    const double drawdown = (peak - it->price) / peak;
    if (drawdown > worst) worst = drawdown;
  }
  return worst;
}

char outcome_label(Outcome outcome) {
  return outcome == Outcome::Win ? 'W' : 'L';
}

std::string trades_to_csv(std::span<const TradeRecord> trades) {
  std::string out =
      "entry_time,exit_time,entry_price,exit_price,return,max_drawdown,"
      "outcome,kind\n";
  for (const TradeRecord& t : trades) {
    out += format_timestamp(t.entry_time);
    out += ',';
    out += format_timestamp(t.exit_time);
    out += ',';
    out += format_double(t.entry_price);
    out += ',';
    out += format_double(t.exit_price);
    out += ',';
    out += format_double(t.trade_return);
    out += ',';
    out += format_double(t.max_drawdown);
    out += ',';
    out += outcome_label(t.outcome);
    out += ',';
    out += t.kind == TradeKind::Artificial ? "artificial" : "real";
    out += '\n';
  }
  return out;
}

void write_trades_csv(std::span<const TradeRecord> trades,
                      const std::string& path) {
  write_text_file(path, trades_to_csv(trades));
}

std::string equity_to_csv(const EquityCurve& curve) {
  std::string out = "timestamp,nlv\n";
  for (const EquitySample& s : curve.samples) {
    out += format_timestamp(s.timestamp);
    out += ',';
    out += format_double(s.nlv);
    out += '\n';
  }
  return out;
}

void write_equity_csv(const EquityCurve& curve, const std::string& path) {
  write_text_file(path, equity_to_csv(curve));
}

}  // namespace stopcal
