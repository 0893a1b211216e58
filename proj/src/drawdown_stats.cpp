#include "stopcal/drawdown_stats.hpp"

#include <cmath>

#include <json.hpp>

#include "stopcal/errors.hpp"
#include "stopcal/io_util.hpp"

namespace stopcal {

DrawdownBins bin_trades(std::span<const TradeRecord> trades, std::size_t n) {
  if (trades.empty()) raise(Errc::EmptyCorpus, "no trades to bin");
  if (n < 1) raise(Errc::InvalidParameter, "bin count must be >= 1");

  double max_dd = 0.0;
  for (const TradeRecord& t : trades) {
    if (t.max_drawdown > max_dd) max_dd = t.max_drawdown;
  }
  if (!(max_dd > 0.0)) {
    raise(Errc::AllZeroDrawdowns,
          "every trade has zero drawdown; no threshold to calibrate");
  }

  DrawdownBins bins;
  bins.n = n;
  bins.max_drawdown = max_dd;
  bins.width = max_dd / static_cast<double>(n);
  bins.corpus_size = trades.size();
  bins.upper_edges.resize(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    bins.upper_edges[i] = static_cast<double>(i + 1) * bins.width;
  }
  bins.upper_edges[n - 1] = max_dd;  // exact, so the top trade is contained
  bins.bins.resize(n);

  for (const TradeRecord& t : trades) {
    std::size_t idx = static_cast<std::size_t>(t.max_drawdown / bins.width);
    if (idx >= n) idx = n - 1;
    BinTally& tally = bins.bins[idx];
    ++tally.count_total;
    if (t.outcome == Outcome::Win) {
      ++tally.count_win;
      tally.sum_return_win += t.trade_return;
    } else {
      ++tally.count_loss;
      tally.sum_return_loss += t.trade_return;
    }
  }
  return bins;
}

std::vector<BinExpectation> conditional_expectations(const DrawdownBins& bins) {
  std::vector<BinExpectation> out(bins.n);
  const double corpus = static_cast<double>(bins.corpus_size);
  for (std::size_t i = 0; i < bins.n; ++i) {
    const BinTally& tally = bins.bins[i];
    if (tally.count_total == 0) continue;  // convention: (0, 0)
    const double total = static_cast<double>(tally.count_total);
    double e = 0.0;
    // E(r|L)P(L) + E(r|W)P(W), both measured within the bin.
    if (tally.count_loss > 0) {
      e += (tally.sum_return_loss / static_cast<double>(tally.count_loss)) *
           (static_cast<double>(tally.count_loss) / total);
    }
    if (tally.count_win > 0) {
      e += (tally.sum_return_win / static_cast<double>(tally.count_win)) *
           (static_cast<double>(tally.count_win) / total);
    }
    out[i].e = e;
    out[i].p = total / corpus;
  }
  return out;
}

std::vector<double> cumulative_expectation(
    std::span<const BinExpectation> expectations) {
  if (expectations.empty()) {
    raise(Errc::EmptyInput, "no expectations to accumulate");
  }
  std::vector<double> v;
  v.reserve(expectations.size());
  double running = 0.0;
  for (const BinExpectation& ep : expectations) {
    running += ep.e * ep.p;
    v.push_back(running);
  }
  return v;
}

ThresholdReport calibrate_threshold(const DrawdownBins& bins) {
  ThresholdReport report;
  report.n = bins.n;
  report.width = bins.width;
  report.upper_edges = bins.upper_edges;
  report.corpus_size = bins.corpus_size;

  const auto expectations = conditional_expectations(bins);
  report.e.reserve(bins.n);
  report.p.reserve(bins.n);
  for (const BinExpectation& ep : expectations) {
    report.e.push_back(ep.e);
    report.p.push_back(ep.p);
  }
  report.v = cumulative_expectation(expectations);

  std::size_t best = 0;
  for (std::size_t k = 1; k < report.v.size(); ++k) {
    if (report.v[k] > report.v[best]) best = k;  // ties keep the tighter stop
  }
  report.k_star = best;
  report.threshold = report.upper_edges[best];
  report.expected_return_negative = report.v[best] < 0.0;
  return report;
}

std::size_t default_bin_count(std::size_t corpus_size) {
  if (corpus_size <= 1) return 1;
  auto r = static_cast<std::size_t>(
      std::ceil(std::sqrt(static_cast<double>(corpus_size))));
  while (r > 1 && (r - 1) * (r - 1) >= corpus_size) --r;
  while (r * r < corpus_size) ++r;
  return r;
}

std::string threshold_report_to_json(const ThresholdReport& report) {
  nlohmann::ordered_json j;
  j["corpus_size"] = report.corpus_size;
  j["n_bins"] = report.n;
  j["bin_width"] = report.width;
  j["upper_edges"] = report.upper_edges;
  j["e"] = report.e;
  j["p"] = report.p;
  j["v"] = report.v;
  j["k_star"] = report.k_star;
  j["threshold"] = report.threshold;
  j["flags"]["expected_return_negative"] = report.expected_return_negative;
  j["flags"]["underfull_window"] = report.underfull_window;
  return j.dump(2) + "\n";
}

std::string histogram_to_csv(const DrawdownBins& bins) {
  std::string out = "bin_edge,win_count,loss_count\n";
  for (std::size_t i = 0; i < bins.n; ++i) {
    out += format_double(bins.upper_edges[i]);
    out += ',';
    out += std::to_string(bins.bins[i].count_win);
    out += ',';
    out += std::to_string(bins.bins[i].count_loss);
    out += '\n';
  }
  return out;
}

}  // namespace stopcal
