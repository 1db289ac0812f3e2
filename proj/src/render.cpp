#include "trendnet/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "trendnet/error.hpp"
#include "trendnet/text.hpp"

#ifndef TRENDNET_DEFAULT_GEOMETRY
#define TRENDNET_DEFAULT_GEOMETRY "data/world.json"
#endif

namespace trendnet {

namespace {

constexpr std::string_view kFont = "font-family=\"Helvetica,Arial,sans-serif\"";

// Fixed two-decimal coordinates keep the output byte-stable.
std::string num(double v) {
  if (std::abs(v) < 0.005) v = 0.0;
  return fmt::format("{:.2f}", v);
}

std::string svg_open(const RenderSpec& spec, std::string_view kind) {
  return fmt::format(
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" data-figure=\"{2}\">\n"
      "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"#ffffff\"/>\n",
      spec.width, spec.height, kind);
}

std::string svg_title(const RenderSpec& spec, double y) {
  if (spec.title.empty()) return {};
  return fmt::format("<text class=\"title\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" {} "
                     "font-size=\"16\">{}</text>\n",
                     num(spec.width / 2.0), num(y), kFont, xml_escape(spec.title));
}

std::string gradient_def(const ColorScale& scale, std::string_view id, bool vertical) {
  std::string out = fmt::format(
      "<defs><linearGradient id=\"{}\" x1=\"0\" y1=\"{}\" x2=\"{}\" y2=\"0\">\n", id,
      vertical ? 1 : 0, vertical ? 0 : 1);
  for (int k = 0; k <= 10; ++k)
    out += fmt::format("<stop offset=\"{}%\" stop-color=\"{}\"/>\n", k * 10, scale.hex(k / 10.0));
  out += "</linearGradient></defs>\n";
  return out;
}

std::string scale_name(const RenderSpec& spec, std::string_view fallback) {
  return spec.color_map.empty() ? std::string(fallback) : spec.color_map;
}

}  // namespace

void RenderSpec::validate() const {
  if (width <= 0 || height <= 0)
    throw Error(ErrorKind::InvalidValue, fmt::format("render size {}x{} must be positive", width, height));
  if (layout_iterations < 0)
    throw Error(ErrorKind::InvalidValue, "layout iterations must be non-negative");
  if (!color_map.empty()) ColorScale::named(color_map);
}

ColorScale ColorScale::named(std::string_view name) {
  if (name == "rdbu")  // -1 dark blue, 0 near white, +1 dark red
    return ColorScale({{5, 48, 97}, {33, 102, 172}, {67, 147, 195}, {146, 197, 222}, {209, 229, 240},
                       {247, 247, 247}, {253, 219, 199}, {244, 165, 130}, {214, 96, 77},
                       {178, 24, 43}, {103, 0, 31}},
                      true);
  if (name == "puor")
    return ColorScale({{45, 0, 75}, {128, 115, 172}, {247, 247, 247}, {224, 130, 20}, {127, 59, 8}},
                      true);
  if (name == "blues")
    return ColorScale({{247, 251, 255}, {198, 219, 239}, {107, 174, 214}, {33, 113, 181}, {8, 48, 107}},
                      false);
  if (name == "oranges")
    return ColorScale({{255, 245, 235}, {253, 208, 162}, {253, 141, 60}, {217, 72, 1}, {127, 39, 4}},
                      false);
  if (name == "greys")
    return ColorScale({{255, 255, 255}, {189, 189, 189}, {82, 82, 82}, {0, 0, 0}}, false);
  throw Error(ErrorKind::InvalidValue, fmt::format("unknown colour map '{}'", name));
}

std::array<int, 3> ColorScale::rgb(double t) const {
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const double pos = t * static_cast<double>(stops_.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(pos), stops_.size() - 2);
  const double f = pos - static_cast<double>(i);
  std::array<int, 3> out{};
  for (int c = 0; c < 3; ++c)
    out[c] = static_cast<int>(std::lround(stops_[i][c] + f * (stops_[i + 1][c] - stops_[i][c])));
  return out;
}

std::string ColorScale::hex(double t) const {
  const auto c = rgb(t);
  return fmt::format("#{:02x}{:02x}{:02x}", c[0], c[1], c[2]);
}

WorldGeometry WorldGeometry::from_json(std::string_view text) {
  WorldGeometry world;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& [code, entry] : doc.at("countries").items()) {
      Country c;
      c.name = entry.value("name", code);
      for (const auto& ring : entry.at("rings")) {
        std::vector<Point> pts;
        for (const auto& p : ring) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
        if (pts.size() >= 3) c.rings.push_back(std::move(pts));
      }
      world.countries_.emplace(code, std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, fmt::format("world geometry: {}", e.what()));
  }
  return world;
}

WorldGeometry WorldGeometry::load(const std::filesystem::path& path) {
  try {
    return from_json(read_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::filesystem::path default_geometry_path() {
  if (const char* env = std::getenv("TRENDNET_GEOMETRY"); env && *env) return env;
  return TRENDNET_DEFAULT_GEOMETRY;
}

std::string render_line_chart(const LocationSeries& series, const RenderSpec& spec) {
  spec.validate();
  const auto values = series.values();
  if (values.empty()) throw Error(ErrorKind::EmptySeries, "nothing to plot");
  const auto scale = ColorScale::named(scale_name(spec, "blues"));

  const double left = 64, right = 40, top = spec.title.empty() ? 20 : 44, bottom = 64;
  const double plot_w = std::max(1.0, spec.width - left - right);
  const double plot_h = std::max(1.0, spec.height - top - bottom);
  const std::size_t n = values.size();
  auto x_of = [&](std::size_t i) {
    return n == 1 ? left + plot_w / 2 : left + plot_w * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  auto y_of = [&](double v) { return top + plot_h * (1.0 - v / 100.0); };

  std::string out = svg_open(spec, "line");
  out += svg_title(spec, 28);
  for (int v = 0; v <= 100; v += 25) {
    const double y = y_of(v);
    out += fmt::format("<line class=\"grid\" data-value=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" "
                       "stroke=\"#d0d0d0\" stroke-width=\"1\"/>\n",
                       v, num(left), num(y), num(left + plot_w), num(y));
    out += fmt::format("<text class=\"ylabel\" x=\"{}\" y=\"{}\" text-anchor=\"end\" {} "
                       "font-size=\"11\">{}</text>\n",
                       num(left - 6), num(y + 4), kFont, v);
  }
  const std::size_t ticks = std::min<std::size_t>(n, 6);
  for (std::size_t k = 0; k < ticks; ++k) {
    const std::size_t i = ticks == 1 ? 0 : (k * (n - 1) + (ticks - 1) / 2) / (ticks - 1);
    const double x = x_of(i);
    out += fmt::format("<line class=\"xtick\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" "
                       "stroke=\"#808080\"/>\n",
                       num(x), num(top + plot_h), num(top + plot_h + 5));
    out += fmt::format("<text class=\"xlabel\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" {} "
                       "font-size=\"11\">{}</text>\n",
                       num(x), num(top + plot_h + 18), kFont, format_iso_date(series.grid().at(i)));
  }
  out += fmt::format("<text class=\"axis-title\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" {} "
                     "font-size=\"12\" transform=\"rotate(-90 {} {})\">Relative search volume</text>\n",
                     num(16), num(top + plot_h / 2), kFont, num(16), num(top + plot_h / 2));
  out += fmt::format("<text class=\"axis-title\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" {} "
                     "font-size=\"12\">Date ({})</text>\n",
                     num(left + plot_w / 2), num(spec.height - 12.0), kFont,
                     xml_escape(series.geo()));

  std::string points;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) points += ' ';
    points += num(x_of(i)) + "," + num(y_of(values[i]));
  }
  out += fmt::format("<polyline class=\"series\" data-geo=\"{}\" fill=\"none\" stroke=\"{}\" "
                     "stroke-width=\"2\" points=\"{}\"/>\n",
                     xml_escape(series.geo()), scale.hex(0.85), points);
  out += "</svg>\n";
  return out;
}

std::string render_heatmap(const CorrelationMatrix& m, const RenderSpec& spec) {
  spec.validate();
  m.validate();
  const auto scale = ColorScale::named(scale_name(spec, "rdbu"));
  const std::size_t n = m.size();

  const double top = (spec.title.empty() ? 12 : 40) + 36;
  const double left = 40, legend_w = 70;
  const double cell = std::max(
      1.0, std::min((spec.width - left - legend_w - 10) / static_cast<double>(n),
                    (spec.height - top - 10) / static_cast<double>(n)));
  const double font = std::clamp(cell * 0.7, 4.0, 11.0);

  std::string out = svg_open(spec, "heatmap");
  out += gradient_def(scale, "rho-scale", true);
  out += svg_title(spec, 26);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = top + cell * static_cast<double>(i);
    const double x = left + cell * static_cast<double>(i);
    out += fmt::format("<text class=\"rowlabel\" x=\"{}\" y=\"{}\" text-anchor=\"end\" {} "
                       "font-size=\"{}\">{}</text>\n",
                       num(left - 4), num(y + cell / 2 + font / 3), kFont, num(font),
                       xml_escape(m.labels()[i]));
    out += fmt::format("<text class=\"collabel\" x=\"{0}\" y=\"{1}\" {2} font-size=\"{3}\" "
                       "transform=\"rotate(-90 {0} {1})\">{4}</text>\n",
                       num(x + cell / 2 + font / 3), num(top - 4), kFont, num(font),
                       xml_escape(m.labels()[i]));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out += fmt::format("<rect class=\"cell\" data-row=\"{}\" data-col=\"{}\" x=\"{}\" y=\"{}\" "
                         "width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
                         i, j, num(left + cell * static_cast<double>(j)),
                         num(top + cell * static_cast<double>(i)), num(cell), num(cell),
                         scale.hex((m(i, j) + 1.0) / 2.0));
    }
  }
  const double lx = left + cell * static_cast<double>(n) + 20;
  const double lh = std::min(200.0, cell * static_cast<double>(n));
  out += fmt::format("<rect class=\"legend\" x=\"{}\" y=\"{}\" width=\"16\" height=\"{}\" "
                     "fill=\"url(#rho-scale)\" stroke=\"#808080\"/>\n",
                     num(lx), num(top), num(lh));
  const std::array<std::pair<double, const char*>, 3> marks{{{1.0, "1"}, {0.0, "0"}, {-1.0, "-1"}}};
  for (const auto& [v, label] : marks)
    out += fmt::format("<text class=\"legend-label\" x=\"{}\" y=\"{}\" {} font-size=\"11\">{}</text>\n",
                       num(lx + 22), num(top + lh * (1.0 - (v + 1.0) / 2.0) + 4), kFont, label);
  out += "</svg>\n";
  return out;
}

std::vector<Point> force_layout(const SpanningTree& t, std::uint32_t seed, int iterations) {
  const std::size_t n = t.node_count();
  std::mt19937 gen(seed);
  // Raw engine output only: distributions are implementation-defined.
  auto unit = [&gen] { return static_cast<double>(gen()) / 4294967296.0; };
  std::vector<Point> pos(n);
  for (auto& p : pos) {
    p.first = unit();
    p.second = unit();
  }
  if (n == 1) return {{0.5, 0.5}};

  const double k = std::sqrt(1.0 / static_cast<double>(n));
  const double t0 = 0.1;
  std::vector<Point> disp(n);
  for (int it = 0; it < iterations; ++it) {
    std::fill(disp.begin(), disp.end(), Point{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double dx = pos[i].first - pos[j].first;
        double dy = pos[i].second - pos[j].second;
        double d = std::hypot(dx, dy);
        if (d < 1e-9) {
          dx = 1e-3 * static_cast<double>(j - i);
          dy = 0.0;
          d = std::abs(dx);
        }
        const double f = k * k / d;
        disp[i].first += dx / d * f;
        disp[i].second += dy / d * f;
        disp[j].first -= dx / d * f;
        disp[j].second -= dy / d * f;
      }
    }
    for (const auto& e : t.edges()) {
      const double dx = pos[e.u].first - pos[e.v].first;
      const double dy = pos[e.u].second - pos[e.v].second;
      const double d = std::max(std::hypot(dx, dy), 1e-9);
      const double f = d * d / k;
      disp[e.u].first -= dx / d * f;
      disp[e.u].second -= dy / d * f;
      disp[e.v].first += dx / d * f;
      disp[e.v].second += dy / d * f;
    }
    const double temp = t0 * (1.0 - static_cast<double>(it) / static_cast<double>(iterations));
    for (std::size_t i = 0; i < n; ++i) {
      const double d = std::hypot(disp[i].first, disp[i].second);
      if (d > 0) {
        const double step = std::min(d, temp);
        pos[i].first += disp[i].first / d * step;
        pos[i].second += disp[i].second / d * step;
      }
    }
  }

  double min_x = pos[0].first, max_x = min_x, min_y = pos[0].second, max_y = min_y;
  for (const auto& [x, y] : pos) {
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-12});
  for (auto& [x, y] : pos) {
    x = std::clamp(0.5 + (x - (min_x + max_x) / 2) / span, 0.0, 1.0);
    y = std::clamp(0.5 + (y - (min_y + max_y) / 2) / span, 0.0, 1.0);
  }
  return pos;
}

std::string render_tree(const SpanningTree& t, const CentralityReport& c, const RenderSpec& spec) {
  spec.validate();
  const std::size_t n = t.node_count();
  if (c.nodes != t.nodes() || c.degree.size() != n)
    throw Error(ErrorKind::LabelMismatch, "centrality report does not describe this tree");
  const auto scale = ColorScale::named(scale_name(spec, "blues"));

  const auto pos = force_layout(t, spec.seed, spec.layout_iterations);
  const int max_degree = std::max(1, *std::max_element(c.degree.begin(), c.degree.end()));
  const double r_min = 4.0, r_span = 14.0;
  const double top = spec.title.empty() ? 10 : 40;
  const double margin = r_min + r_span + 12;
  const double w = std::max(1.0, spec.width - 2 * margin);
  const double h = std::max(1.0, spec.height - top - 2 * margin);
  auto screen = [&](std::size_t i) {
    return Point{margin + pos[i].first * w, top + margin + pos[i].second * h};
  };
  auto radius = [&](std::size_t i) {
    return r_min + r_span * static_cast<double>(c.degree[i]) / static_cast<double>(max_degree);
  };

  std::string out = svg_open(spec, "tree");
  out += svg_title(spec, 26);
  for (const auto& e : t.edges()) {
    const auto [x1, y1] = screen(e.u);
    const auto [x2, y2] = screen(e.v);
    out += fmt::format("<line class=\"edge\" data-source=\"{}\" data-target=\"{}\" x1=\"{}\" y1=\"{}\" "
                       "x2=\"{}\" y2=\"{}\" stroke=\"#7f7f7f\" stroke-width=\"1.5\"/>\n",
                       xml_escape(t.nodes()[e.u]), xml_escape(t.nodes()[e.v]), num(x1), num(y1),
                       num(x2), num(y2));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto [x, y] = screen(i);
    const double r = radius(i);
    out += fmt::format("<circle class=\"node\" data-geo=\"{}\" data-degree=\"{}\" cx=\"{}\" cy=\"{}\" "
                       "r=\"{}\" fill=\"{}\" stroke=\"#ffffff\" stroke-width=\"1\"/>\n",
                       xml_escape(t.nodes()[i]), c.degree[i], num(x), num(y), num(r),
                       scale.hex(0.35 + 0.6 * c.normalized[i]));
    out += fmt::format("<text class=\"nodelabel\" x=\"{}\" y=\"{}\" text-anchor=\"middle\" {} "
                       "font-size=\"10\">{}</text>\n",
                       num(x), num(y - r - 3), kFont, xml_escape(t.nodes()[i]));
  }
  out += "</svg>\n";
  return out;
}

std::vector<ChoroplethFrame> render_choropleth_frames(const std::vector<RegionSnapshot>& snapshots,
                                                      const WorldGeometry& world,
                                                      const RenderSpec& spec) {
  spec.validate();
  if (snapshots.empty()) throw Error(ErrorKind::InsufficientData, "no snapshots to render");
  const auto scale = ColorScale::named(scale_name(spec, "oranges"));

  // Equirectangular, fixed for every frame.
  const double top = 44, legend_h = 50, margin = 10;
  double map_w = spec.width - 2 * margin;
  double map_h = map_w / 2;
  if (map_h > spec.height - top - legend_h) {
    map_h = std::max(1.0, spec.height - top - legend_h);
    map_w = map_h * 2;
  }
  const double left = (spec.width - map_w) / 2;
  auto project = [&](const Point& p) {
    return Point{left + (p.first + 180.0) / 360.0 * map_w, top + (90.0 - p.second) / 180.0 * map_h};
  };

  // Country outlines do not change between frames.
  std::vector<std::pair<std::string, std::string>> paths;
  for (const auto& [code, country] : world.countries()) {
    std::string d;
    for (const auto& ring : country.rings) {
      for (std::size_t k = 0; k < ring.size(); ++k) {
        const auto [x, y] = project(ring[k]);
        d += fmt::format("{}{},{}", k == 0 ? (d.empty() ? "M" : " M") : " L", num(x), num(y));
      }
      d += " Z";
    }
    paths.emplace_back(code, std::move(d));
  }
  const std::string defs = gradient_def(scale, "rsv-scale", false);
  const double ly = top + map_h + 14;
  const std::string legend = fmt::format(
      "<rect class=\"legend\" x=\"{0}\" y=\"{1}\" width=\"200\" height=\"12\" fill=\"url(#rsv-scale)\" "
      "stroke=\"#808080\"/>\n"
      "<text class=\"legend-label\" x=\"{0}\" y=\"{2}\" {4} font-size=\"11\">0</text>\n"
      "<text class=\"legend-label\" x=\"{3}\" y=\"{2}\" text-anchor=\"end\" {4} font-size=\"11\">100</text>\n"
      "<rect class=\"legend-neutral\" x=\"{5}\" y=\"{1}\" width=\"12\" height=\"12\" fill=\"{6}\" "
      "stroke=\"#808080\"/>\n"
      "<text class=\"legend-label\" x=\"{7}\" y=\"{8}\" {4} font-size=\"11\">no data</text>\n",
      num(left), num(ly), num(ly + 26), num(left + 200), kFont, num(left + 230), kNeutralFill,
      num(left + 248), num(ly + 10));

  std::vector<ChoroplethFrame> frames(snapshots.size());
  const auto count = static_cast<long>(snapshots.size());
#pragma omp parallel for schedule(dynamic)
  for (long f = 0; f < count; ++f) {
    const auto& snap = snapshots[f];
    RenderSpec frame_spec = spec;
    if (frame_spec.title.empty())
      frame_spec.title = fmt::format("{}: {} to {}", snap.keyword, format_iso_date(snap.window_start),
                                     format_iso_date(snap.window_end));
    std::string out = svg_open(frame_spec, "choropleth");
    out += defs;
    out += svg_title(frame_spec, 28);
    for (const auto& [code, d] : paths) {
      auto it = snap.values.find(code);
      const std::string fill = it == snap.values.end() ? std::string(kNeutralFill)
                                                       : scale.hex(it->second / 100.0);
      out += fmt::format("<path class=\"country\" data-geo=\"{}\"{} fill=\"{}\" stroke=\"#ffffff\" "
                         "stroke-width=\"0.4\" d=\"{}\"/>\n",
                         code,
                         it == snap.values.end() ? std::string()
                                                 : fmt::format(" data-rsv=\"{}\"", num(it->second)),
                         fill, d);
    }
    out += legend;
    out += "</svg>\n";
    frames[f].svg = std::move(out);
    for (const auto& [geo, v] : snap.values)
      if (!world.contains(geo)) frames[f].warnings.push_back(fmt::format("{}: no geometry", geo));
  }
  return frames;
}

}  // namespace trendnet
