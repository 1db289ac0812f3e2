#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace trendnet {

using Date = std::chrono::sys_days;

// Strict YYYY-MM-DD.
std::optional<Date> parse_iso_date(std::string_view text);
std::string format_iso_date(Date d);

// US-style M/D/YY (or M/D/YYYY) as used in Trends window headers.
std::optional<Date> parse_us_short_date(std::string_view text);

inline Date make_date(int y, unsigned m, unsigned d) {
  return Date{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
}

}  // namespace trendnet
