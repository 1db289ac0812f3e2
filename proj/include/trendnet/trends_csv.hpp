#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trendnet/timeseries.hpp"

namespace trendnet {

// Value substituted for the export's "<1" token.
inline constexpr double kBelowOneValue = 0.5;

// One cell of an export: an integer 0..100 or the censored "<1".
struct TrendsCell {
  bool below_one = false;
  int value = 0;

  double rsv() const { return below_one ? kBelowOneValue : static_cast<double>(value); }
  bool operator==(const TrendsCell&) const = default;
};

// Interest-over-time export for one keyword and geography.
struct TrendsTimeCsv {
  std::optional<std::string> category;  // preamble, e.g. "All categories"
  std::string keyword;
  std::string geo;  // ISO alpha-2 or "WORLD"
  DateGrid grid;
  std::vector<TrendsCell> cells;

  std::vector<double> values() const;
  // Values as-is (no renormalization).
  LocationSeries to_series() const;

  bool operator==(const TrendsTimeCsv&) const = default;
};

// Accepts an optional "Category: ..." preamble, then "Day,<kw>: (<geo>)"
// or "Week,<kw>: (<geo>)" and one "YYYY-MM-DD,<int|<1>" row per date.
TrendsTimeCsv parse_interest_over_time_csv(std::string_view text);

// Export-compatible output: "<1" cells are written back as "<1".
std::string serialize_interest_over_time_csv(const TrendsTimeCsv& doc);

struct RegionSnapshot {
  std::string keyword;
  Date window_start;
  Date window_end;
  std::map<std::string, double> values;  // geo -> RSV, renormalized to max 100
  std::vector<std::string> warnings;     // rows that could not be resolved
};

RegionSnapshot parse_interest_by_region_csv(std::string_view text, Date window_start,
                                            Date window_end);

// Region display name (or alpha-2 code) -> ISO alpha-2 via the bundled table.
struct RegionLookup {
  std::optional<std::string> code;
  bool ambiguous = false;
};
RegionLookup resolve_region(std::string_view name);

}  // namespace trendnet
