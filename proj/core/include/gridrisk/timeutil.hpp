#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gridrisk {

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t year, int month, int day);
void civil_from_days(std::int64_t days, std::int64_t& year, int& month, int& day);

// Parses "YYYY-MM-DDTHH:MM", optionally with ":SS" and a trailing "Z",
// interpreted as UTC. Returns seconds since the Unix epoch.
// Throws DataError on malformed input.
std::int64_t parse_iso8601_utc(std::string_view text);

// "YYYY-MM-DDTHH:MM" in UTC (seconds truncated).
std::string format_iso8601_minutes(std::int64_t epoch_seconds);

inline std::int64_t hour_of(std::int64_t epoch_seconds) {
  return floor_div(epoch_seconds, 3600);
}

}  // namespace gridrisk
