#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trendnet/date.hpp"

namespace trendnet {

enum class Step { Daily = 1, Weekly = 7 };

inline int step_days(Step s) { return static_cast<int>(s); }

// Uniform calendar grid: start, start + step, ..., start + (size-1)*step.
class DateGrid {
 public:
  DateGrid(Date start, Step step, std::size_t length);

  Date start() const { return start_; }
  Step step() const { return step_; }
  std::size_t size() const { return length_; }
  Date at(std::size_t i) const;
  Date back() const { return at(length_ - 1); }

  // Index of d on this grid, if d is one of its dates.
  std::optional<std::size_t> index_of(Date d) const;
  DateGrid slice(std::size_t first, std::size_t count) const;

  bool operator==(const DateGrid&) const = default;

 private:
  Date start_;
  Step step_;
  std::size_t length_;
};

// Geo code used for the worldwide reference series.
inline constexpr std::string_view kWorldGeo = "WORLD";

// One geography's relative search volume for one keyword. Values lie in
// [0, 100]; the constructor rejects anything else.
class LocationSeries {
 public:
  LocationSeries(std::string geo, std::string keyword, DateGrid grid, std::vector<double> values);

  const std::string& geo() const { return geo_; }
  const std::string& keyword() const { return keyword_; }
  const DateGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  // Restrict to a sub-grid (same step and phase, contained in this grid).
  LocationSeries crop(const DateGrid& sub) const;

 private:
  std::string geo_;
  std::string keyword_;
  DateGrid grid_;
  std::vector<double> values_;
};

// Date-aligned set of series sharing one grid, ordered by geo code.
class Panel {
 public:
  Panel(std::string keyword, DateGrid grid, std::vector<LocationSeries> series,
        std::optional<Date> onset = std::nullopt);

  const std::string& keyword() const { return keyword_; }
  const DateGrid& grid() const { return grid_; }
  std::size_t size() const { return series_.size(); }
  const std::vector<LocationSeries>& series() const { return series_; }
  const LocationSeries& operator[](std::size_t i) const { return series_[i]; }
  std::vector<std::string> labels() const;
  const LocationSeries* find(std::string_view geo) const;

  // First date of the panel after onset trimming, if it was trimmed.
  const std::optional<Date>& onset() const { return onset_; }

 private:
  std::string keyword_;
  DateGrid grid_;
  std::vector<LocationSeries> series_;
  std::optional<Date> onset_;
};

// Scale so the maximum maps to 100; an all-zero series stays all-zero.
std::vector<double> normalize_rsv(std::span<const double> raw);

// Intersect the date ranges of all inputs and crop each to it.
Panel align_panel(std::vector<LocationSeries> series);

// Crop the panel to start at the first date where the reference reaches
// threshold. The reference grid must cover the panel grid.
Panel trim_to_onset(const Panel& panel, const LocationSeries& reference, double threshold);

inline constexpr double kDefaultOnsetThreshold = 1.0;

}  // namespace trendnet
