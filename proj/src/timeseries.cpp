#include "trendnet/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "trendnet/error.hpp"

namespace trendnet {

DateGrid::DateGrid(Date start, Step step, std::size_t length)
    : start_(start), step_(step), length_(length) {
  if (length == 0) throw Error(ErrorKind::EmptySeries, "date grid must have at least one date");
}

Date DateGrid::at(std::size_t i) const {
  return start_ + std::chrono::days{static_cast<long>(i) * step_days(step_)};
}

std::optional<std::size_t> DateGrid::index_of(Date d) const {
  const auto offset = (d - start_).count();
  if (offset < 0 || offset % step_days(step_) != 0) return std::nullopt;
  const auto i = static_cast<std::size_t>(offset / step_days(step_));
  if (i >= length_) return std::nullopt;
  return i;
}

DateGrid DateGrid::slice(std::size_t first, std::size_t count) const {
  if (count == 0 || first + count > length_)
    throw Error(ErrorKind::GridMismatch, "grid slice out of range");
  return DateGrid(at(first), step_, count);
}

LocationSeries::LocationSeries(std::string geo, std::string keyword, DateGrid grid,
                               std::vector<double> values)
    : geo_(std::move(geo)), keyword_(std::move(keyword)), grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error(ErrorKind::GridMismatch,
                fmt::format("{}: {} values for a grid of {} dates", geo_, values_.size(),
                            grid_.size()));
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v) || v < 0.0 || v > 100.0)
      throw Error(ErrorKind::InvalidValue,
                  fmt::format("{}: value {} at {} outside [0,100]", geo_, v,
                              format_iso_date(grid_.at(i))));
  }
}

LocationSeries LocationSeries::crop(const DateGrid& sub) const {
  if (sub.step() != grid_.step())
    throw Error(ErrorKind::GridMismatch, fmt::format("{}: crop with a different step", geo_));
  const auto first = grid_.index_of(sub.start());
  const auto last = grid_.index_of(sub.back());
  if (!first || !last)
    throw Error(ErrorKind::GridMismatch,
                fmt::format("{}: crop range {}..{} not on the series grid", geo_,
                            format_iso_date(sub.start()), format_iso_date(sub.back())));
  std::vector<double> v(values_.begin() + static_cast<long>(*first),
                        values_.begin() + static_cast<long>(*last) + 1);
  return LocationSeries(geo_, keyword_, sub, std::move(v));
}

Panel::Panel(std::string keyword, DateGrid grid, std::vector<LocationSeries> series,
             std::optional<Date> onset)
    : keyword_(std::move(keyword)), grid_(grid), series_(std::move(series)), onset_(onset) {
  if (series_.empty()) throw Error(ErrorKind::InsufficientData, "panel has no series");
  std::sort(series_.begin(), series_.end(),
            [](const LocationSeries& a, const LocationSeries& b) { return a.geo() < b.geo(); });
  for (std::size_t i = 0; i < series_.size(); ++i) {
    if (i > 0 && series_[i].geo() == series_[i - 1].geo())
      throw Error(ErrorKind::DuplicateLocation, series_[i].geo());
    if (!(series_[i].grid() == grid_))
      throw Error(ErrorKind::GridMismatch,
                  fmt::format("{} does not share the panel grid", series_[i].geo()));
  }
}

std::vector<std::string> Panel::labels() const {
  std::vector<std::string> out;
  out.reserve(series_.size());
  for (const auto& s : series_) out.push_back(s.geo());
  return out;
}

const LocationSeries* Panel::find(std::string_view geo) const {
  auto it = std::lower_bound(series_.begin(), series_.end(), geo,
                             [](const LocationSeries& s, std::string_view g) { return s.geo() < g; });
  if (it == series_.end() || it->geo() != geo) return nullptr;
  return &*it;
}

std::vector<double> normalize_rsv(std::span<const double> raw) {
  if (raw.empty()) throw Error(ErrorKind::EmptySeries, "cannot normalize an empty series");
  double peak = 0.0;
  for (double v : raw) {
    if (!std::isfinite(v) || v < 0.0)
      throw Error(ErrorKind::InvalidValue, fmt::format("raw value {} is negative or non-finite", v));
    peak = std::max(peak, v);
  }
  std::vector<double> out(raw.size(), 0.0);
  if (peak == 0.0) return out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    // The maximum maps to exactly 100 regardless of rounding in the division.
    out[i] = raw[i] == peak ? 100.0 : 100.0 * (raw[i] / peak);
  }
  return out;
}

Panel align_panel(std::vector<LocationSeries> series) {
  if (series.size() < 2)
    throw Error(ErrorKind::InsufficientData,
                fmt::format("a panel needs at least 2 series, got {}", series.size()));
  const auto& first = series.front();
  std::set<std::string> seen;
  Date lo = first.grid().start();
  Date hi = first.grid().back();
  for (const auto& s : series) {
    if (s.keyword() != first.keyword())
      throw Error(ErrorKind::KeywordMismatch,
                  fmt::format("{} has keyword '{}', expected '{}'", s.geo(), s.keyword(),
                              first.keyword()));
    if (s.grid().step() != first.grid().step())
      throw Error(ErrorKind::GridMismatch, fmt::format("{} uses a different step", s.geo()));
    if (!seen.insert(s.geo()).second) throw Error(ErrorKind::DuplicateLocation, s.geo());
    lo = std::max(lo, s.grid().start());
    hi = std::min(hi, s.grid().back());
  }
  if (lo > hi)
    throw Error(ErrorKind::NoOverlap, "input series have no dates in common");

  const int step = step_days(first.grid().step());
  const auto count = static_cast<std::size_t>((hi - lo).count() / step) + 1;
  const DateGrid common(lo, first.grid().step(), count);
  std::vector<LocationSeries> cropped;
  cropped.reserve(series.size());
  for (const auto& s : series) {
    // Weekly grids starting on different weekdays never line up.
    if (!s.grid().index_of(lo))
      throw Error(ErrorKind::GridMismatch,
                  fmt::format("{} is not aligned with the common grid", s.geo()));
    cropped.push_back(s.crop(common));
  }
  return Panel(first.keyword(), common, std::move(cropped));
}

Panel trim_to_onset(const Panel& panel, const LocationSeries& reference, double threshold) {
  if (!(threshold > 0.0 && threshold <= 100.0))
    throw Error(ErrorKind::InvalidValue,
                fmt::format("onset threshold {} outside (0,100]", threshold));
  const auto ref = reference.crop(panel.grid());
  const auto values = ref.values();
  const auto hit = std::find_if(values.begin(), values.end(),
                                [threshold](double v) { return v >= threshold; });
  if (hit == values.end())
    throw Error(ErrorKind::OnsetNotFound,
                fmt::format("{} never reaches {} within {}..{}", reference.geo(), threshold,
                            format_iso_date(panel.grid().start()),
                            format_iso_date(panel.grid().back())));
  const auto first = static_cast<std::size_t>(hit - values.begin());
  const auto grid = panel.grid().slice(first, panel.grid().size() - first);
  std::vector<LocationSeries> cropped;
  cropped.reserve(panel.size());
  for (const auto& s : panel.series()) cropped.push_back(s.crop(grid));
  return Panel(panel.keyword(), grid, std::move(cropped), grid.start());
}

}  // namespace trendnet
