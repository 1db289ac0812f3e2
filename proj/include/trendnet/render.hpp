#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trendnet/correlation.hpp"
#include "trendnet/graph.hpp"
#include "trendnet/timeseries.hpp"
#include "trendnet/trends_csv.hpp"

namespace trendnet {

struct RenderSpec {
  int width = 900;
  int height = 600;
  // Empty selects the figure's default ("rdbu" for the heatmap, "oranges"
  // for choropleths, "blues" for the line chart and tree).
  std::string color_map;
  std::uint32_t seed = 42;
  int layout_iterations = 500;
  std::string title;

  void validate() const;
};

// Piecewise-linear colour scale over [0, 1] through fixed stops.
class ColorScale {
 public:
  // Known names: rdbu, puor (diverging); blues, oranges, greys (sequential).
  static ColorScale named(std::string_view name);

  std::array<int, 3> rgb(double t) const;
  std::string hex(double t) const;
  bool diverging() const { return diverging_; }

 private:
  ColorScale(std::vector<std::array<int, 3>> stops, bool diverging)
      : stops_(std::move(stops)), diverging_(diverging) {}
  std::vector<std::array<int, 3>> stops_;
  bool diverging_;
};

// Fill used for countries with no value in a snapshot.
inline constexpr std::string_view kNeutralFill = "#e0e0e0";

using Point = std::pair<double, double>;

// Simplified country outlines (lon/lat rings) keyed by ISO alpha-2.
class WorldGeometry {
 public:
  struct Country {
    std::string name;
    std::vector<std::vector<Point>> rings;
  };

  static WorldGeometry from_json(std::string_view text);
  static WorldGeometry load(const std::filesystem::path& path);

  const std::map<std::string, Country>& countries() const { return countries_; }
  bool contains(const std::string& code) const { return countries_.count(code) != 0; }

 private:
  std::map<std::string, Country> countries_;
};

// TRENDNET_GEOMETRY if set, otherwise the data/world.json of the source tree.
std::filesystem::path default_geometry_path();

std::string render_line_chart(const LocationSeries& series, const RenderSpec& spec);
std::string render_heatmap(const CorrelationMatrix& m, const RenderSpec& spec);
std::string render_tree(const SpanningTree& t, const CentralityReport& c, const RenderSpec& spec);

struct ChoroplethFrame {
  std::string svg;
  std::vector<std::string> warnings;  // snapshot geos without geometry
};

// One frame per snapshot, same projection and legend for all frames.
std::vector<ChoroplethFrame> render_choropleth_frames(const std::vector<RegionSnapshot>& snapshots,
                                                      const WorldGeometry& world,
                                                      const RenderSpec& spec);

// Seeded Fruchterman-Reingold positions in the unit square, one per node.
std::vector<Point> force_layout(const SpanningTree& t, std::uint32_t seed, int iterations);

}  // namespace trendnet
