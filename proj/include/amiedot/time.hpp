#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace amiedot {

/// Seconds since the Unix epoch, UTC.
struct Timestamp {
  std::int64_t seconds = 0;

  auto operator<=>(const Timestamp&) const = default;
};

/// Calendar date without time of day.
struct Date {
  int year = 1970;
  unsigned month = 1;
  unsigned day = 1;

  auto operator<=>(const Date&) const = default;
};

// RFC 3339 with second precision. Parsing accepts "Z" or a numeric offset and
// normalizes to UTC; fractional seconds are rejected. Formatting always emits
// "YYYY-MM-DDTHH:MM:SSZ".
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

/// True when the year falls in 0000..9999 and so has an RFC 3339 rendering.
bool timestamp_representable(Timestamp ts);

std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& date);

Timestamp now_utc();

/// Floor of ts to a multiple of width (width > 0), correct for negative times.
std::int64_t floor_to_multiple(std::int64_t value, std::int64_t width);

}  // namespace amiedot
