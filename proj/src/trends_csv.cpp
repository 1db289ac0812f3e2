#include "trendnet/trends_csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>

#include <fmt/format.h>

#include "trendnet/error.hpp"
#include "trendnet/text.hpp"

namespace trendnet {

namespace {

struct RegionEntry {
  const char* name;
  const char* code;
};

constexpr RegionEntry kRegionTable[] = {
#include "region_table.inc"
};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

struct RegionIndex {
  std::unordered_map<std::string, std::string> by_name;  // lowercased name -> code ("" = ambiguous)
  std::unordered_map<std::string, bool> codes;
};

const RegionIndex& region_index() {
  static const RegionIndex index = [] {
    RegionIndex idx;
    for (const auto& e : kRegionTable) {
      idx.by_name.emplace(lower(e.name), e.code);
      if (*e.code) idx.codes[e.code] = true;
    }
    return idx;
  }();
  return index;
}

bool is_upper_code(std::string_view s) {
  return s.size() == 2 && std::isupper(static_cast<unsigned char>(s[0])) &&
         std::isupper(static_cast<unsigned char>(s[1]));
}

[[noreturn]] void parse_fail(std::size_t line, std::string_view what) {
  throw Error(ErrorKind::ParseError, fmt::format("line {}: {}", line, what));
}

// Skips blank lines and an optional "Category: ..." preamble. Returns the
// index of the header line.
std::size_t skip_preamble(const std::vector<std::string_view>& lines,
                          std::optional<std::string>* category) {
  std::size_t i = 0;
  while (i < lines.size() && trim(lines[i]).empty()) ++i;
  if (i < lines.size() && lines[i].rfind("Category:", 0) == 0) {
    if (category) *category = std::string(trim(lines[i].substr(9)));
    ++i;
    while (i < lines.size() && trim(lines[i]).empty()) ++i;
  }
  return i;
}

// "<keyword>: (<inner>)" -> {keyword, inner}.
std::optional<std::pair<std::string, std::string>> split_series_label(std::string_view label) {
  const auto open = label.rfind(": (");
  if (open == std::string_view::npos || label.empty() || label.back() != ')') return std::nullopt;
  return std::pair{std::string(label.substr(0, open)),
                   std::string(label.substr(open + 3, label.size() - open - 4))};
}

std::string geo_from_header(std::string_view text) {
  if (text == "Worldwide" || text == kWorldGeo) return std::string(kWorldGeo);
  if (is_upper_code(text)) return std::string(text);
  auto r = resolve_region(text);
  return r.code ? *r.code : std::string(text);
}

std::string geo_to_header(std::string_view geo) {
  return geo == kWorldGeo ? std::string("Worldwide") : std::string(geo);
}

// Integer 0..100 or "<1". Empty cells are rejected here; region exports
// handle them before calling.
TrendsCell parse_cell(std::string_view raw, std::size_t line) {
  const auto s = trim(raw);
  if (s == "<1") return {true, 0};
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    parse_fail(line, fmt::format("'{}' is not an integer or '<1'", s));
  if (v < 0 || v > 100)
    throw Error(ErrorKind::InvalidValue, fmt::format("line {}: value {} outside [0,100]", line, v));
  return {false, v};
}

}  // namespace

RegionLookup resolve_region(std::string_view name) {
  const auto& idx = region_index();
  const auto key = trim(name);
  if (is_upper_code(key) && idx.codes.count(std::string(key))) return {std::string(key), false};
  auto it = idx.by_name.find(lower(key));
  if (it == idx.by_name.end()) return {};
  if (it->second.empty()) return {std::nullopt, true};
  return {it->second, false};
}

std::vector<double> TrendsTimeCsv::values() const {
  std::vector<double> out;
  out.reserve(cells.size());
  for (const auto& c : cells) out.push_back(c.rsv());
  return out;
}

LocationSeries TrendsTimeCsv::to_series() const { return LocationSeries(geo, keyword, grid, values()); }

TrendsTimeCsv parse_interest_over_time_csv(std::string_view text) {
  const auto lines = split_lines(text);
  std::optional<std::string> category;
  std::size_t i = skip_preamble(lines, &category);
  if (i >= lines.size()) parse_fail(i + 1, "missing header");

  const auto header_line = i + 1;
  const auto header = split_csv_row(lines[i]);
  if (header.size() != 2) parse_fail(header_line, "header must have exactly two columns");
  Step step;
  if (header[0] == "Day") step = Step::Daily;
  else if (header[0] == "Week") step = Step::Weekly;
  else parse_fail(header_line, fmt::format("date column '{}' is not Day or Week", header[0]));
  auto label = split_series_label(header[1]);
  if (!label) parse_fail(header_line, fmt::format("series label '{}' is not '<keyword>: (<geo>)'", header[1]));

  std::vector<Date> dates;
  std::vector<TrendsCell> cells;
  for (++i; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto row = split_csv_row(lines[i]);
    if (row.size() != 2) parse_fail(i + 1, "row must have exactly two columns");
    auto d = parse_iso_date(trim(row[0]));
    if (!d) parse_fail(i + 1, fmt::format("bad date '{}'", row[0]));
    dates.push_back(*d);
    cells.push_back(parse_cell(row[1], i + 1));
  }
  if (dates.empty()) parse_fail(header_line, "no data rows");

  for (std::size_t k = 1; k < dates.size(); ++k) {
    if ((dates[k] - dates[k - 1]).count() != step_days(step))
      throw Error(ErrorKind::GridMismatch,
                  fmt::format("{} follows {}; expected a {}-day step", format_iso_date(dates[k]),
                              format_iso_date(dates[k - 1]), step_days(step)));
  }
  return TrendsTimeCsv{std::move(category), label->first, geo_from_header(label->second),
                       DateGrid(dates.front(), step, dates.size()), std::move(cells)};
}

std::string serialize_interest_over_time_csv(const TrendsTimeCsv& doc) {
  if (doc.cells.size() != doc.grid.size())
    throw Error(ErrorKind::GridMismatch, "cell count differs from grid length");
  std::string out;
  if (doc.category) out += fmt::format("Category: {}\n\n", *doc.category);
  out += doc.grid.step() == Step::Daily ? "Day," : "Week,";
  out += csv_quote(fmt::format("{}: ({})", doc.keyword, geo_to_header(doc.geo)));
  out += '\n';
  for (std::size_t i = 0; i < doc.cells.size(); ++i) {
    const auto& c = doc.cells[i];
    out += format_iso_date(doc.grid.at(i));
    out += c.below_one ? std::string(",<1") : fmt::format(",{}", c.value);
    out += '\n';
  }
  return out;
}

RegionSnapshot parse_interest_by_region_csv(std::string_view text, Date window_start,
                                            Date window_end) {
  if (window_start > window_end)
    throw Error(ErrorKind::InvalidValue,
                fmt::format("window {} .. {} is reversed", format_iso_date(window_start),
                            format_iso_date(window_end)));
  const auto lines = split_lines(text);
  std::size_t i = skip_preamble(lines, nullptr);
  if (i >= lines.size()) parse_fail(i + 1, "missing header");
  const auto header = split_csv_row(lines[i]);
  if (header.size() != 2 || trim(header[0]).empty())
    parse_fail(i + 1, "header must be '<Region>,<keyword>: (<window>)'");
  auto label = split_series_label(header[1]);
  if (!label) parse_fail(i + 1, fmt::format("series label '{}' not recognised", header[1]));

  RegionSnapshot snap{label->first, window_start, window_end, {}, {}};
  std::size_t rows = 0;
  for (++i; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const auto row = split_csv_row(lines[i]);
    if (row.size() != 2) parse_fail(i + 1, "row must have exactly two columns");
    const auto value_text = trim(row[1]);
    // Blank cells mean "too little data" in region exports.
    const double v = value_text.empty() ? 0.0 : parse_cell(value_text, i + 1).rsv();
    ++rows;
    const auto name = trim(row[0]);
    auto r = resolve_region(name);
    if (!r.code) {
      snap.warnings.push_back(fmt::format("line {}: {} region name '{}'", i + 1,
                                          r.ambiguous ? "ambiguous" : "unknown", name));
      continue;
    }
    if (!snap.values.emplace(*r.code, v).second)
      snap.warnings.push_back(fmt::format("line {}: duplicate region {} ('{}')", i + 1, *r.code, name));
  }
  if (rows == 0) parse_fail(lines.size(), "no data rows");

  if (!snap.values.empty()) {
    std::vector<double> raw;
    for (const auto& [geo, v] : snap.values) raw.push_back(v);
    const auto scaled = normalize_rsv(raw);
    std::size_t k = 0;
    for (auto& [geo, v] : snap.values) v = scaled[k++];
  }
  return snap;
}

}  // namespace trendnet
