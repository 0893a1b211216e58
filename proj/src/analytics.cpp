#include "stopcal/analytics.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "stopcal/errors.hpp"
#include "stopcal/io_util.hpp"

namespace stopcal {

double delta_nlv(double nlv_variant, double nlv_signal) {
  if (!(nlv_signal > 0.0)) {
    raise(Errc::NonPositiveBaseline,
          "baseline NLV " + format_double(nlv_signal));
  }
  return (nlv_variant - nlv_signal) / nlv_signal;
}

namespace {

std::optional<double> column_value(const AssetComparison& row,
                                   DeltaColumn column) {
  return column == DeltaColumn::TS ? row.delta_nlv_ts : row.delta_nlv_rs;
}

}  // namespace

AggregateSummary aggregate(std::span<const AssetComparison> comparisons,
                           DeltaColumn column) {
  std::vector<double> deltas;
  deltas.reserve(comparisons.size());
  for (const AssetComparison& row : comparisons) {
    if (const auto value = column_value(row, column)) {
      deltas.push_back(*value);
    }
  }
  if (deltas.empty()) raise(Errc::EmptyInput, "no delta values to aggregate");

  std::size_t wins = 0;
  double gain_sum = 0.0;
  double loss_sum = 0.0;
  for (double d : deltas) {
    if (d > 0.0) {
      ++wins;
      gain_sum += d;
    } else {
      loss_sum += d;
    }
  }
  const std::size_t losses = deltas.size() - wins;

  AggregateSummary summary;
  summary.n_assets = deltas.size();
  summary.win_fraction =
      static_cast<double>(wins) / static_cast<double>(deltas.size());
  summary.mean_gain_winners =
      wins > 0 ? gain_sum / static_cast<double>(wins) : 0.0;
  summary.mean_loss_losers =
      losses > 0 ? loss_sum / static_cast<double>(losses) : 0.0;
  summary.expected_change =
      summary.win_fraction * summary.mean_gain_winners +
      (1.0 - summary.win_fraction) * summary.mean_loss_losers;
  return summary;
}

// Continued-fraction evaluation of the regularized incomplete beta
// (modified Lentz), the standard route to Student-t tail probabilities.
namespace {

double incomplete_beta_cf(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  constexpr int kMaxIter = 500;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || std::isnan(x)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * incomplete_beta_cf(a, b, x) / a;
  }
  return 1.0 - front * incomplete_beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
  if (dof <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(t)) return 0.0;
  // P(|T| >= t) = I_{dof/(dof+t^2)}(dof/2, 1/2)
  const double x = dof / (dof + t * t);
  return regularized_incomplete_beta(dof / 2.0, 0.5, x);
}

CorrelationResult pearson(std::span<const double> x,
                          std::span<const double> y) {
  if (x.size() != y.size()) {
    raise(Errc::LengthMismatch, std::to_string(x.size()) + " vs " +
                                    std::to_string(y.size()) + " samples");
  }
  const std::size_t n = x.size();
  if (n < 3) raise(Errc::TooFewSamples, "need at least 3 samples");

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    raise(Errc::ZeroVariance, "correlation undefined for constant input");
  }

  double rho = sxy / std::sqrt(sxx * syy);
  if (rho > 1.0) rho = 1.0;
  if (rho < -1.0) rho = -1.0;

  const double dof = static_cast<double>(n - 2);
  double p = 0.0;
  const double denom = 1.0 - rho * rho;
  if (denom <= 0.0) {
    p = 0.0;  // exactly collinear
  } else {
    const double t = rho * std::sqrt(dof / denom);
    p = student_t_two_sided_p(t, dof);
  }
  return {rho, p, n};
}

CorrelationResult error_analysis(std::span<const AssetComparison> comparisons,
                                 DeltaColumn column) {
  std::vector<double> trades;
  std::vector<double> deltas;
  for (const AssetComparison& row : comparisons) {
    const auto value = column_value(row, column);
    if (value && row.signal_only_trades) {
      trades.push_back(static_cast<double>(*row.signal_only_trades));
      deltas.push_back(*value);
    }
  }
  if (trades.size() < 3) {
    raise(Errc::TooFewSamples,
          "need at least 3 complete rows, have " +
              std::to_string(trades.size()));
  }
  return pearson(trades, deltas);
}

std::string comparison_table_to_csv(
    std::span<const AssetComparison> comparisons) {
  std::string out = "asset,delta_nlv_ts,delta_nlv_rs,trades\n";
  for (const AssetComparison& row : comparisons) {
    out += row.asset_id;
    out += ',';
    if (row.delta_nlv_ts) out += format_fixed6(*row.delta_nlv_ts);
    out += ',';
    if (row.delta_nlv_rs) out += format_fixed6(*row.delta_nlv_rs);
    out += ',';
    if (row.signal_only_trades) out += std::to_string(*row.signal_only_trades);
    out += '\n';
  }
  return out;
}

std::vector<AssetComparison> parse_comparison_csv(const std::string& text) {
  std::vector<AssetComparison> rows;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (pos > text.size()) break;
      continue;
    }
    if (!saw_header) {
      if (line != "asset,delta_nlv_ts,delta_nlv_rs,trades") {
        raise(Errc::ParseError, "line 1: unexpected comparison header");
      }
      saw_header = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    const std::string where = "line " + std::to_string(line_no);
    if (fields.size() != 4) {
      raise(Errc::ParseError, where + ": expected 4 fields");
    }
    AssetComparison row;
    row.asset_id = std::string(fields[0]);
    if (row.asset_id.empty()) raise(Errc::ParseError, where + ": empty asset");
    if (!fields[1].empty()) {
      const auto v = parse_double(fields[1]);
      if (!v) raise(Errc::ParseError, where + ": bad delta_nlv_ts");
      row.delta_nlv_ts = *v;
    }
    if (!fields[2].empty()) {
      const auto v = parse_double(fields[2]);
      if (!v) raise(Errc::ParseError, where + ": bad delta_nlv_rs");
      row.delta_nlv_rs = *v;
    }
    if (!fields[3].empty()) {
      const auto v = parse_int(fields[3]);
      if (!v || *v < 0) raise(Errc::ParseError, where + ": bad trade count");
      row.signal_only_trades = *v;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) raise(Errc::EmptyInput, "comparison table has no rows");
  return rows;
}

std::vector<AssetComparison> load_comparison_csv(const std::string& path) {
  return parse_comparison_csv(read_text_file(path));
}

std::string scatter_to_csv(std::span<const AssetComparison> comparisons,
                           DeltaColumn column) {
  std::string out = "trades,delta_nlv\n";
  for (const AssetComparison& row : comparisons) {
    const auto value = column_value(row, column);
    if (!value || !row.signal_only_trades) continue;
    out += std::to_string(*row.signal_only_trades);
    out += ',';
    out += format_fixed6(*value);
    out += '\n';
  }
  return out;
}

std::string aggregate_to_json(const AggregateSummary& summary) {
  nlohmann::ordered_json j;
  j["n_assets"] = summary.n_assets;
  j["win_fraction"] = summary.win_fraction;
  j["mean_gain_winners"] = summary.mean_gain_winners;
  j["mean_loss_losers"] = summary.mean_loss_losers;
  j["expected_change"] = summary.expected_change;
  return j.dump(2) + "\n";
}

std::string correlation_to_json(const CorrelationResult& result) {
  nlohmann::ordered_json j;
  j["rho"] = result.rho;
  j["p_value"] = result.p_value;
  j["n"] = result.n;
  return j.dump(2) + "\n";
}

}  // namespace stopcal
