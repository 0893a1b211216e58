#include "stopcal/time_utils.hpp"

#include <array>
#include <cstdio>

namespace stopcal {

namespace {

bool parse_fixed_uint(std::string_view s, std::size_t pos, std::size_t len,
                      int& out) {
  int value = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (i >= s.size()) return false;
    const char c = s[i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  return true;
}

struct CivilDate {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  return {y + (m <= 2), m, d};
}

bool days_in_month_ok(int year, int month, int day) {
  static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                  31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12 || day < 1) return false;
  int max_day = lengths[static_cast<std::size_t>(month - 1)];
  const bool leap =
      (year % 4 == 0 && year % 100 != 0) || (year % 400 == 0);
  if (month == 2 && leap) max_day = 29;
  return day <= max_day;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SSZ is exactly 20 characters.
  if (text.size() != 20) return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':' || text[19] != 'Z') {
    return std::nullopt;
  }
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (!parse_fixed_uint(text, 0, 4, year) ||
      !parse_fixed_uint(text, 5, 2, month) ||
      !parse_fixed_uint(text, 8, 2, day) ||
      !parse_fixed_uint(text, 11, 2, hour) ||
      !parse_fixed_uint(text, 14, 2, minute) ||
      !parse_fixed_uint(text, 17, 2, second)) {
    return std::nullopt;
  }
  if (!days_in_month_ok(year, month, day)) return std::nullopt;
  if (hour > 23 || minute > 59 || second > 59) return std::nullopt;
  const std::int64_t days =
      days_from_civil(year, static_cast<unsigned>(month),
                      static_cast<unsigned>(day));
  return days * 86400 + hour * 3600 + minute * 60 + second;
}

std::string format_timestamp(Timestamp ts) {
  std::int64_t days = ts / 86400;
  std::int64_t sod = ts % 86400;
  if (sod < 0) {
    sod += 86400;
    days -= 1;
  }
  const CivilDate date = civil_from_days(days);
  char buf[56];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(date.year), date.month, date.day,
                static_cast<long long>(sod / 3600),
                static_cast<long long>((sod % 3600) / 60),
                static_cast<long long>(sod % 60));
  return std::string(buf);
}

}  // namespace stopcal
