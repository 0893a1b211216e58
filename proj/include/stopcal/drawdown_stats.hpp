#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stopcal/signal_engine.hpp"

namespace stopcal {

struct BinTally {
  std::size_t count_total = 0;
  std::size_t count_win = 0;
  std::size_t count_loss = 0;
  double sum_return_win = 0.0;
  double sum_return_loss = 0.0;
};

/// Equal-width drawdown histogram over [0, max observed drawdown].
/// Assignment is half-open [left, right) with the last bin closed on the
/// right; a zero drawdown lands in the first bin.
struct DrawdownBins {
  std::size_t n = 0;
  double width = 0.0;
  double max_drawdown = 0.0;
  std::size_t corpus_size = 0;
  std::vector<double> upper_edges;
  std::vector<BinTally> bins;
};

/// Per-bin conditional expectation e = E(return | drawdown in bin) and
/// occupancy probability p = P(drawdown in bin). Empty bins are (0, 0).
struct BinExpectation {
  double e = 0.0;
  double p = 0.0;
};

/// Output of the threshold calibration: the cumulative expected-return
/// vector and the edge that maximizes it.
struct ThresholdReport {
  std::size_t n = 0;
  double width = 0.0;
  std::vector<double> upper_edges;
  std::vector<double> e;
  std::vector<double> p;
  std::vector<double> v;        // v[k] = sum_{i<=k} e[i]*p[i]
  std::size_t k_star = 0;       // smallest index attaining max v
  double threshold = 0.0;       // upper_edges[k_star]
  std::size_t corpus_size = 0;
  // The best cumulative expectation is still negative; callers may prefer
  // to run stopless.
  bool expected_return_negative = false;
  // Rolling calibration had fewer than the requested window of trades.
  bool underfull_window = false;
};

/// Histogram of trade drawdowns. EmptyCorpus for no trades, InvalidParameter
/// for n < 1, AllZeroDrawdowns when no trade drew down at all (threshold
/// calibration would be meaningless).
DrawdownBins bin_trades(std::span<const TradeRecord> trades, std::size_t n);

std::vector<BinExpectation> conditional_expectations(const DrawdownBins& bins);

std::vector<double> cumulative_expectation(
    std::span<const BinExpectation> expectations);

/// Composes the two steps above and picks the smallest argmax edge.
ThresholdReport calibrate_threshold(const DrawdownBins& bins);

/// ceil(sqrt(corpus_size)), minimum 1 (the square-root binning rule).
std::size_t default_bin_count(std::size_t corpus_size);

/// JSON rendering of a report (edges, e, p, v, k_star, threshold, flags).
std::string threshold_report_to_json(const ThresholdReport& report);

/// Plot-ready histogram: `bin_edge,win_count,loss_count`.
std::string histogram_to_csv(const DrawdownBins& bins);

}  // namespace stopcal
