#include "trendnet/date.hpp"

#include <charconv>

#include <fmt/format.h>

namespace trendnet {

namespace {

std::optional<int> parse_digits(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<Date> checked(int y, int m, int d) {
  if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

}  // namespace

std::optional<Date> parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto y = parse_digits(text.substr(0, 4));
  auto m = parse_digits(text.substr(5, 2));
  auto d = parse_digits(text.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  return checked(*y, *m, *d);
}

std::string format_iso_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  return fmt::format("{:04d}-{:02d}-{:02d}", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
}

std::optional<Date> parse_us_short_date(std::string_view text) {
  const auto a = text.find('/');
  if (a == std::string_view::npos) return std::nullopt;
  const auto b = text.find('/', a + 1);
  if (b == std::string_view::npos) return std::nullopt;
  auto m = parse_digits(text.substr(0, a));
  auto d = parse_digits(text.substr(a + 1, b - a - 1));
  auto y_text = text.substr(b + 1);
  auto y = parse_digits(y_text);
  if (!m || !d || !y) return std::nullopt;
  if (y_text.size() == 2) *y += 2000;
  else if (y_text.size() != 4) return std::nullopt;
  return checked(*y, *m, *d);
}

}  // namespace trendnet
