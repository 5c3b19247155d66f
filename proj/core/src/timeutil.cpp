#include "gridrisk/timeutil.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "gridrisk/error.hpp"

namespace gridrisk {

std::int64_t days_from_civil(std::int64_t y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& year, int& month, int& day) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  year = y + (month <= 2);
}

namespace {

bool parse_uint(std::string_view text, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > text.size()) return false;
  const char* first = text.data() + pos;
  const auto [ptr, ec] = std::from_chars(first, first + len, out);
  return ec == std::errc() && ptr == first + len;
}

}  // namespace

std::int64_t parse_iso8601_utc(std::string_view text) {
  // YYYY-MM-DDTHH:MM[:SS][Z]
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  const bool shape_ok = text.size() >= 16 && text[4] == '-' && text[7] == '-' &&
                        (text[10] == 'T' || text[10] == ' ') && text[13] == ':';
  if (!shape_ok || !parse_uint(text, 0, 4, year) || !parse_uint(text, 5, 2, month) ||
      !parse_uint(text, 8, 2, day) || !parse_uint(text, 11, 2, hour) ||
      !parse_uint(text, 14, 2, minute)) {
    throw DataError("malformed timestamp '" + std::string(text) + "'");
  }
  std::size_t pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    if (!parse_uint(text, pos + 1, 2, second)) {
      throw DataError("malformed timestamp '" + std::string(text) + "'");
    }
    pos += 3;
  }
  if (pos < text.size() && text[pos] == 'Z') ++pos;
  if (pos != text.size()) {
    throw DataError("malformed timestamp '" + std::string(text) + "'");
  }
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 ||
      second > 60) {
    throw DataError("out-of-range timestamp '" + std::string(text) + "'");
  }
  return days_from_civil(year, month, day) * 86400 + hour * 3600 + minute * 60 + second;
}

std::string format_iso8601_minutes(std::int64_t epoch_seconds) {
  const std::int64_t days = floor_div(epoch_seconds, 86400);
  const std::int64_t rem = epoch_seconds - days * 86400;
  std::int64_t year = 0;
  int month = 0, day = 0;
  civil_from_days(days, year, month, day);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04lld-%02d-%02dT%02lld:%02lld",
                static_cast<long long>(year), month, day,
                static_cast<long long>(rem / 3600), static_cast<long long>((rem % 3600) / 60));
  return buf;
}

}  // namespace gridrisk
