#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace stopcal {

enum class DeltaColumn { TS, RS };

/// One row of the cross-asset comparison table. Delta columns are absent
/// when the corresponding variant was not run.
struct AssetComparison {
  std::string asset_id;
  std::optional<double> delta_nlv_ts;
  std::optional<double> delta_nlv_rs;
  std::optional<long long> signal_only_trades;
};

struct AggregateSummary {
  std::size_t n_assets = 0;
  double win_fraction = 0.0;
  double mean_gain_winners = 0.0;  // 0 when there are no winners
  double mean_loss_losers = 0.0;   // 0 when there are no losers
  double expected_change = 0.0;
};

struct CorrelationResult {
  double rho = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

/// (variant - baseline) / baseline. NonPositiveBaseline when baseline <= 0.
double delta_nlv(double nlv_variant, double nlv_signal);

/// Win/loss split of one delta column: a win is strictly positive, ties
/// count as losses. Rows without the column are skipped; EmptyInput when
/// none remain.
AggregateSummary aggregate(std::span<const AssetComparison> comparisons,
                           DeltaColumn column);

/// Sample Pearson correlation with a two-sided p-value from the exact
/// t distribution on n-2 degrees of freedom.
CorrelationResult pearson(std::span<const double> x,
                          std::span<const double> y);

/// Correlation between Signal-Only trade counts and a delta column.
CorrelationResult error_analysis(std::span<const AssetComparison> comparisons,
                                 DeltaColumn column);

// t-statistic machinery, exposed for direct verification.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_two_sided_p(double t, double dof);

/// `asset,delta_nlv_ts,delta_nlv_rs,trades`; deltas fixed at 6 decimals,
/// absent values empty.
std::string comparison_table_to_csv(
    std::span<const AssetComparison> comparisons);
std::vector<AssetComparison> parse_comparison_csv(const std::string& text);
std::vector<AssetComparison> load_comparison_csv(const std::string& path);

/// Scatter rows behind the trades-vs-delta regression: `trades,delta_nlv`.
std::string scatter_to_csv(std::span<const AssetComparison> comparisons,
                           DeltaColumn column);

std::string aggregate_to_json(const AggregateSummary& summary);
std::string correlation_to_json(const CorrelationResult& result);

}  // namespace stopcal
