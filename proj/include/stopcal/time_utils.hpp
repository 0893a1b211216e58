#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace stopcal {

/// Seconds since the Unix epoch, UTC. Bars are minute-aligned (ts % 60 == 0).
using Timestamp = std::int64_t;

inline constexpr std::int64_t kSecondsPerMinute = 60;
inline constexpr std::int64_t kSecondsPerHour = 3600;

/// Days since 1970-01-01 for a proleptic Gregorian civil date.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

/// Parses strict ISO-8601 UTC, e.g. "2016-01-04T14:30:00Z".
/// Returns nullopt if the text does not match the format exactly.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp ts);

}  // namespace stopcal
