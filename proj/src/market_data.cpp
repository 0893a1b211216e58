#include "stopcal/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "stopcal/errors.hpp"
#include "stopcal/io_util.hpp"

namespace stopcal {

void validate_series(const BarSeries& series) {
  if (series.bars.empty()) raise(Errc::InvalidParameter, "empty bar series");
  Timestamp prev = series.bars.front().timestamp - 1;
  for (const PriceBar& bar : series.bars) {
    if (!(bar.price > 0.0)) {
      raise(Errc::NonPositivePrice,
            "price " + format_double(bar.price) + " at " +
                format_timestamp(bar.timestamp));
    }
    if (bar.timestamp % kSecondsPerMinute != 0) {
      raise(Errc::InvalidParameter,
            "timestamp not minute-aligned: " + format_timestamp(bar.timestamp));
    }
    if (bar.timestamp <= prev) {
      raise(Errc::DuplicateTimestamp,
            "timestamps not strictly increasing at " +
                format_timestamp(bar.timestamp));
    }
    prev = bar.timestamp;
  }
}

namespace {

BarSeries parse_series_csv(const std::string& text, const std::string& asset_id,
                           const std::string& origin) {
  BarSeries series;
  series.asset_id = asset_id;
  std::size_t line_no = 0;
  std::size_t pos = 0;
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
      if (line != "timestamp,price") {
        raise(Errc::MalformedRow,
              origin + " line 1: expected header 'timestamp,price'");
      }
      saw_header = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    const std::string where = origin + " line " + std::to_string(line_no);
    if (fields.size() != 2) {
      raise(Errc::MalformedRow, where + ": expected 2 fields");
    }
    const auto ts = parse_timestamp(fields[0]);
    if (!ts) raise(Errc::MalformedRow, where + ": bad timestamp");
    if (*ts % kSecondsPerMinute != 0) {
      raise(Errc::MalformedRow, where + ": timestamp has nonzero seconds");
    }
    const auto price = parse_double(fields[1]);
    if (!price || !std::isfinite(*price)) {
      raise(Errc::MalformedRow, where + ": bad price");
    }
    if (!(*price > 0.0)) {
      raise(Errc::NonPositivePrice,
            where + ": price " + std::string(fields[1]));
    }
    series.bars.push_back({*ts, *price});
  }
  if (series.bars.empty()) raise(Errc::EmptyFile, origin + ": no data rows");
  std::stable_sort(series.bars.begin(), series.bars.end(),
                   [](const PriceBar& a, const PriceBar& b) {
                     return a.timestamp < b.timestamp;
                   });
  for (std::size_t i = 1; i < series.bars.size(); ++i) {
    if (series.bars[i].timestamp == series.bars[i - 1].timestamp) {
      raise(Errc::DuplicateTimestamp,
            origin + ": duplicate timestamp " +
                format_timestamp(series.bars[i].timestamp));
    }
  }
  return series;
}

}  // namespace

BarSeries load_csv(const std::string& path, const std::string& asset_id) {
  return parse_series_csv(read_text_file(path), asset_id, path);
}

BarSeries series_from_csv(const std::string& text,
                          const std::string& asset_id) {
  return parse_series_csv(text, asset_id, "<string>");
}

std::string series_to_csv(const BarSeries& series) {
  std::string out = "timestamp,price\n";
  for (const PriceBar& bar : series.bars) {
    out += format_timestamp(bar.timestamp);
    out += ',';
    out += format_double(bar.price);
    out += '\n';
  }
  return out;
}

void save_csv(const BarSeries& series, const std::string& path) {
  write_text_file(path, series_to_csv(series));
}

HourlyGrid to_hourly_grid(const BarSeries& series) {
  if (series.bars.empty()) raise(Errc::InvalidParameter, "empty bar series");
  HourlyGrid grid;
  const auto& bars = series.bars;
  const Timestamp first = bars.front().timestamp;
  const Timestamp last = bars.back().timestamp;
  Timestamp boundary =
      ((first + kSecondsPerHour - 1) / kSecondsPerHour) * kSecondsPerHour;
  std::size_t j = 0;
  for (; boundary <= last; boundary += kSecondsPerHour) {
    while (j + 1 < bars.size() && bars[j + 1].timestamp <= boundary) ++j;
    // bars[j] is the latest bar at or before `boundary`
    if (bars[j].timestamp > boundary - kSecondsPerHour) {
      grid.points.push_back({boundary, bars[j].price, j});
    }
  }
  return grid;
}

Timestamp synthetic_epoch() {
  // 2016-01-04T14:00:00Z, an exact hour so grids align from the first bar.
  return days_from_civil(2016, 1, 4) * 86400 + 14 * kSecondsPerHour;
}

namespace {

// Deterministic uniform in [0,1) from the top 53 bits; avoids the
// implementation-defined std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

constexpr double kMinutesPerYear = 252.0 * 390.0;

}  // namespace

BarSeries generate_gbm(std::uint64_t seed, double p0, double mu_annual,
                       double sigma_annual, std::size_t n_minutes,
                       std::string asset_id) {
  if (!(p0 > 0.0)) raise(Errc::InvalidParameter, "p0 must be positive");
  if (sigma_annual < 0.0) raise(Errc::InvalidParameter, "sigma must be >= 0");
  if (n_minutes < 1) raise(Errc::InvalidParameter, "n_minutes must be >= 1");

  const double drift = mu_annual / kMinutesPerYear;
  const double step_sd = sigma_annual / std::sqrt(kMinutesPerYear);

  std::mt19937_64 rng(seed);
  BarSeries series;
  series.asset_id = std::move(asset_id);
  series.bars.reserve(n_minutes);
  const Timestamp t0 = synthetic_epoch();
  double log_price = std::log(p0);
  series.bars.push_back({t0, p0});
  for (std::size_t i = 1; i < n_minutes; ++i) {
    log_price += drift + step_sd * standard_normal(rng);
    series.bars.push_back(
        {t0 + static_cast<Timestamp>(i) * kSecondsPerMinute,
         std::exp(log_price)});
  }
  return series;
}

namespace {

// Builds the planted series bar by bar while mirroring the hourly SMA the
// strategy will compute, so entries and exits land where the plan says.
class PlantedBuilder {
 public:
  PlantedBuilder(const PlantedSpec& spec, Timestamp t0)
      : spec_(spec), t0_(t0), period_(spec.sma_period) {}

  void push(double price) {
    const std::size_t index = bars_.size();
    bars_.push_back({t0_ + static_cast<Timestamp>(index) * kSecondsPerMinute,
                     price});
    if (index % 60 == 0) grid_prices_.push_back(price);
    last_price_ = price;
  }

  std::size_t next_index() const { return bars_.size(); }
  double last_price() const { return last_price_; }

  double grid_tail_sum(std::size_t count) const {
    double sum = 0.0;
    for (std::size_t i = grid_prices_.size() - count; i < grid_prices_.size();
         ++i) {
      sum += grid_prices_[i];
    }
    return sum;
  }

  // Mean of the trailing `period` grid prices, as the strategy sees it.
  double current_sma() const {
    return grid_tail_sum(period_) / static_cast<double>(period_);
  }

  // Decays gently until the next hourly index that leaves at least
  // period+1 settle points in the SMA window, then ramps up so the hourly
  // point after that enters with (entry - sma)/entry == gap.
  double settle_and_enter(double gap) {
    const std::size_t settle_points = period_ + 1;
    const std::size_t start = next_index();
    const std::size_t grid_settle_end =
        ((start + settle_points * 60 + 59) / 60) * 60;
    while (next_index() <= grid_settle_end) {
      push(last_price_ * (1.0 - 2e-6));
    }
    const double w = static_cast<double>(period_);
    const double tail = grid_tail_sum(period_ - 1);
    const double entry = tail / (w - 1.0 - w * gap);
    const double base = last_price_;
    for (std::size_t j = 1; j < 60; ++j) {
      push(base * std::pow(entry / base, static_cast<double>(j) / 60.0));
    }
    push(entry);  // hourly point: price > SMA, strategy enters here
    return entry;
  }

  // Dip below entry by `dip`, recover, plateau long enough for the SMA to
  // catch up, then break one step below it. Exit lands near entry*(1+gain).
  void winner_leg(double entry, double dip, double gain, double exit_dip) {
    const double floor_price = entry * (1.0 - dip);
    double p = entry;
    while (p * (1.0 - 0.002) > floor_price) {
      p *= 1.0 - 0.002;
      push(p);
    }
    push(floor_price);
    const double plateau = entry * (1.0 + gain) / (1.0 - exit_dip);
    p = floor_price;
    while (p * (1.0 + 0.001) < plateau) {
      p *= 1.0 + 0.001;
      push(p);
    }
    push(plateau);
    const std::size_t plateau_bars = (period_ + 1) * 60 + 30;
    p = plateau;
    for (std::size_t j = 0; j < plateau_bars; ++j) {
      p *= 1.0 + 1e-7;
      push(p);
    }
    push(p * (1.0 - exit_dip));  // breaks the SMA: signal exit
  }

  // Brief pop above entry (controls how deep the drawdown ends up), then a
  // steady slide through the SMA. Exit lands near entry*(1+loss).
  void loser_leg(double entry, double pop) {
    const double peak = entry * (1.0 + pop);
    double p = entry;
    while (p * (1.0 + 0.002) < peak) {
      p *= 1.0 + 0.002;
      push(p);
    }
    push(peak);
    p = peak;
    while (true) {
      p *= 1.0 - 0.003;
      push(p);
      if (p < current_sma()) break;
    }
  }

  void tail() {
    for (int j = 0; j < 10; ++j) push(last_price_ * (1.0 - 2e-6));
  }

  std::vector<PriceBar> take_bars() { return std::move(bars_); }

 private:
  PlantedSpec spec_;
  Timestamp t0_;
  std::size_t period_;
  std::vector<PriceBar> bars_;
  std::vector<double> grid_prices_;
  double last_price_ = 0.0;
};

}  // namespace

PlantedResult generate_planted(std::uint64_t seed, const PlantedSpec& spec,
                               std::string asset_id) {
  if (!(spec.p0 > 0.0)) raise(Errc::InvalidParameter, "p0 must be positive");
  if (spec.n_trades < 1) raise(Errc::InvalidParameter, "n_trades must be >= 1");
  if (!(spec.d_star > 0.0) || spec.d_star > 0.08) {
    raise(Errc::InvalidParameter, "d_star must lie in (0, 0.08]");
  }
  if (spec.gain < 0.005 || spec.gain > 0.5) {
    raise(Errc::InvalidParameter, "gain must lie in [0.005, 0.5]");
  }
  if (spec.loss > -0.015 || spec.loss < -0.10) {
    raise(Errc::InvalidParameter, "loss must lie in [-0.10, -0.015]");
  }
  if (-spec.loss <= spec.d_star + 0.008) {
    raise(Errc::InvalidParameter,
          "|loss| must exceed d_star by at least 0.008 so losing trades draw "
          "down past the planted threshold");
  }
  if (spec.win_fraction < 0.0 || spec.win_fraction > 1.0) {
    raise(Errc::InvalidParameter, "win_fraction must lie in [0, 1]");
  }
  if (spec.sma_period < 2 || spec.sma_period > 100) {
    raise(Errc::InvalidParameter, "sma_period must lie in [2, 100]");
  }

  // Entry gaps: how far the SMA sits below the entry fill. Winners need
  // headroom for their dip; losers slide down to the SMA, so their gap
  // fixes the realized loss.
  const double winner_gap = std::max(0.03, 1.3 * 0.9 * spec.d_star);
  const double loser_gap = -spec.loss - 0.003;
  const double exit_dip = std::min(0.004, 0.3 * spec.d_star);
  const double pop_lo = std::max(0.006, spec.d_star + 0.010 - (-spec.loss));
  const double pop_hi = pop_lo + 0.020;

  std::mt19937_64 rng(seed);
  PlantedBuilder builder(spec, synthetic_epoch());
  builder.push(spec.p0);

  bool any_loser = false;
  for (std::size_t trade = 0; trade < spec.n_trades; ++trade) {
    const bool winner = uniform01(rng) < spec.win_fraction;
    if (winner) {
      const double dip = spec.d_star * (0.35 + 0.55 * uniform01(rng));
      const double entry = builder.settle_and_enter(winner_gap);
      builder.winner_leg(entry, dip, spec.gain, exit_dip);
    } else {
      any_loser = true;
      const double pop = pop_lo + (pop_hi - pop_lo) * uniform01(rng);
      const double entry = builder.settle_and_enter(loser_gap);
      builder.loser_leg(entry, pop);
    }
  }
  builder.tail();

  PlantedResult result;
  result.series.asset_id = std::move(asset_id);
  result.series.bars = builder.take_bars();
  result.known_threshold = spec.d_star;
  result.all_winners = !any_loser;
  return result;
}

}  // namespace stopcal
