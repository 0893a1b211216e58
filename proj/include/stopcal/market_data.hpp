#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stopcal/time_utils.hpp"

namespace stopcal {

/// One minute bar: a single traded price at an exact-minute UTC timestamp.
struct PriceBar {
  Timestamp timestamp = 0;
  double price = 0.0;
};

/// Time-ordered minute bars for one asset. Timestamps strictly increase;
/// gaps are allowed (market closures), duplicates are not.
struct BarSeries {
  std::string asset_id;
  std::vector<PriceBar> bars;

  bool empty() const noexcept { return bars.empty(); }
  std::size_t size() const noexcept { return bars.size(); }
  Timestamp first_time() const { return bars.front().timestamp; }
  Timestamp last_time() const { return bars.back().timestamp; }
};

/// Hourly decision point: the price is the latest minute bar at or before
/// the hour boundary, and bar_index locates that source bar.
struct HourlyGridPoint {
  Timestamp timestamp = 0;
  double price = 0.0;
  std::size_t bar_index = 0;
};

struct HourlyGrid {
  std::vector<HourlyGridPoint> points;

  bool empty() const noexcept { return points.empty(); }
  std::size_t size() const noexcept { return points.size(); }
};

/// Throws if the series violates its invariants (positive prices,
/// strictly increasing minute-aligned timestamps, non-empty).
void validate_series(const BarSeries& series);

/// Loads `timestamp,price` CSV rows (header required). Rows are sorted by
/// timestamp; duplicate timestamps, non-positive prices, empty files and
/// timestamps with nonzero seconds are rejected.
BarSeries load_csv(const std::string& path, const std::string& asset_id);

/// Inverse of load_csv: header plus one row per bar, LF line endings,
/// prices in shortest round-trip decimal form.
void save_csv(const BarSeries& series, const std::string& path);
std::string series_to_csv(const BarSeries& series);
BarSeries series_from_csv(const std::string& text, const std::string& asset_id);

/// Hourly decision grid over [first bar, last bar]. A boundary yields a
/// point only when some bar falls inside (boundary - 1h, boundary].
HourlyGrid to_hourly_grid(const BarSeries& series);

/// Timestamp of the first bar in generated synthetic series. Hour-aligned
/// so the hourly grid starts at bar 0.
Timestamp synthetic_epoch();

/// Geometric Brownian motion sampled every minute. Log increments are
/// i.i.d. normal with mean mu/(252*390) and variance sigma^2/(252*390)
/// per minute (390-minute trading day, 252-day year). Deterministic for a
/// fixed seed.
BarSeries generate_gbm(std::uint64_t seed, double p0, double mu_annual,
                       double sigma_annual, std::size_t n_minutes,
                       std::string asset_id = "GBM");

/// Parameters for the planted-regime generator. The emitted series drives
/// the hourly SMA strategy into exactly n_trades round trips: winners dip
/// by less than d_star and close near `gain`; losers draw down past d_star
/// and close near `loss`.
struct PlantedSpec {
  double d_star = 0.02;        // the known-good stop threshold neighborhood
  double gain = 0.05;          // winner round-trip return (> 0)
  double loss = -0.05;         // loser round-trip return (< 0)
  std::size_t n_trades = 100;
  double win_fraction = 0.5;   // probability a trade is planted as a winner
  double p0 = 100.0;
  std::size_t sma_period = 20; // must match the strategy that consumes it
};

struct PlantedResult {
  BarSeries series;
  double known_threshold = 0.0;  // d_star
  bool all_winners = false;      // degenerate: any threshold >= Dmax is optimal
};

PlantedResult generate_planted(std::uint64_t seed, const PlantedSpec& spec,
                               std::string asset_id = "PLANTED");

}  // namespace stopcal
