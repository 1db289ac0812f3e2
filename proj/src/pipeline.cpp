#include "trendnet/pipeline.hpp"

#include <algorithm>
#include <ctime>
#include <map>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include "trendnet/error.hpp"
#include "trendnet/text.hpp"

#ifndef TRENDNET_VERSION
#define TRENDNET_VERSION "0.0.0"
#endif

namespace trendnet {

using nlohmann::json;

std::string_view tool_version() { return TRENDNET_VERSION; }

namespace {

std::string step_name(Step s) { return s == Step::Daily ? "day" : "week"; }

Date json_date(const json& j, const char* field) {
  auto d = parse_iso_date(j.at(field).get<std::string>());
  if (!d) throw Error(ErrorKind::ParseError, fmt::format("bad date in '{}'", field));
  return *d;
}

// Stable text for json documents written by the stages.
std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <typename F>
auto parse_json_doc(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, fmt::format("{}: {}", what, e.what()));
  }
}

std::string utc_now() { return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::time(nullptr))); }

}  // namespace

std::string panel_to_csv(const Panel& panel) {
  std::string out = "date";
  for (const auto& s : panel.series()) out += "," + csv_quote(s.geo());
  out += "\n";
  for (std::size_t i = 0; i < panel.grid().size(); ++i) {
    out += format_iso_date(panel.grid().at(i));
    for (const auto& s : panel.series()) out += "," + format_real(s.values()[i]);
    out += "\n";
  }
  return out;
}

Panel panel_from_csv(std::string_view text, const std::string& keyword) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorKind::ParseError, "panel CSV is empty");
  const auto header = split_csv_row(lines[0]);
  if (header.size() < 2 || header[0] != "date")
    throw Error(ErrorKind::ParseError, "panel CSV header must be 'date,<geo>...'");
  const std::size_t cols = header.size() - 1;
  std::vector<Date> dates;
  std::vector<std::vector<double>> columns(cols);
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    const auto row = split_csv_row(lines[ln]);
    if (row.size() != header.size())
      throw Error(ErrorKind::ParseError, fmt::format("panel CSV line {}: expected {} fields", ln + 1,
                                                     header.size()));
    auto d = parse_iso_date(row[0]);
    if (!d) throw Error(ErrorKind::ParseError, fmt::format("panel CSV line {}: bad date", ln + 1));
    dates.push_back(*d);
    for (std::size_t c = 0; c < cols; ++c) {
      auto v = parse_real(row[c + 1]);
      if (!v) throw Error(ErrorKind::ParseError, fmt::format("panel CSV line {}: bad value", ln + 1));
      columns[c].push_back(*v);
    }
  }
  if (dates.empty()) throw Error(ErrorKind::ParseError, "panel CSV has no rows");
  Step step = Step::Daily;
  if (dates.size() > 1) {
    const auto gap = (dates[1] - dates[0]).count();
    if (gap == 7) step = Step::Weekly;
    else if (gap != 1) throw Error(ErrorKind::GridMismatch, "panel CSV step is neither 1 nor 7 days");
  }
  for (std::size_t k = 1; k < dates.size(); ++k)
    if ((dates[k] - dates[k - 1]).count() != step_days(step))
      throw Error(ErrorKind::GridMismatch, "panel CSV dates are not uniformly spaced");
  const DateGrid grid(dates.front(), step, dates.size());
  std::vector<LocationSeries> series;
  for (std::size_t c = 0; c < cols; ++c)
    series.emplace_back(header[c + 1], keyword, grid, std::move(columns[c]));
  return Panel(keyword, grid, std::move(series));
}

std::string snapshots_to_json(const std::vector<RegionSnapshot>& snapshots) {
  json windows = json::array();
  for (const auto& s : snapshots) {
    json values = json::object();
    for (const auto& [geo, v] : s.values) values[geo] = v;
    windows.push_back({{"keyword", s.keyword},
                       {"start", format_iso_date(s.window_start)},
                       {"end", format_iso_date(s.window_end)},
                       {"values", values},
                       {"warnings", s.warnings}});
  }
  return dump({{"snapshots", windows}});
}

std::vector<RegionSnapshot> snapshots_from_json(std::string_view text) {
  return parse_json_doc("snapshots JSON", [&] {
    std::vector<RegionSnapshot> out;
    const auto doc = json::parse(text);
    for (const auto& w : doc.at("snapshots")) {
      RegionSnapshot s{w.at("keyword").get<std::string>(), json_date(w, "start"), json_date(w, "end"),
                       {}, w.value("warnings", std::vector<std::string>{})};
      for (const auto& [geo, v] : w.at("values").items()) s.values[geo] = v.get<double>();
      out.push_back(std::move(s));
    }
    return out;
  });
}

std::string centrality_to_json(const CentralityReport& c) {
  json nodes = json::array();
  for (std::size_t i = 0; i < c.nodes.size(); ++i)
    nodes.push_back({{"geo", c.nodes[i]}, {"degree", c.degree[i]}, {"normalized", c.normalized[i]}});
  return dump({{"measure", "degree"}, {"nodes", nodes}});
}

std::string branches_to_json(const BranchPartition& b, const CentralityReport& c) {
  json branches = json::array();
  for (const auto& members : b.branches)
    branches.push_back({{"size", members.size()}, {"members", members}});
  return dump({{"hub", b.hub}, {"hub_degree", c.degree_of(b.hub)}, {"branches", branches}});
}

// --- stages -----------------------------------------------------------------

IngestResult ingest_stage(const fs::path& manifest_path, std::optional<double> threshold,
                          const fs::path& out_dir) {
  const auto manifest = load_manifest(manifest_path);
  auto data = load_dataset(manifest);
  const double t = threshold.value_or(manifest.onset_threshold);

  const auto untrimmed = data.panel.grid();
  Panel panel = data.reference ? trim_to_onset(data.panel, *data.reference, t) : data.panel;

  json summary = {{"keyword", panel.keyword()},
                  {"step", step_name(panel.grid().step())},
                  {"start", format_iso_date(panel.grid().start())},
                  {"end", format_iso_date(panel.grid().back())},
                  {"length", panel.grid().size()},
                  {"locations", panel.labels()},
                  {"location_count", panel.size()},
                  {"onset_threshold", t},
                  {"onset", panel.onset() ? json(format_iso_date(*panel.onset())) : json(nullptr)},
                  {"reference", data.reference ? json(data.reference->geo()) : json(nullptr)},
                  {"aligned", {{"start", format_iso_date(untrimmed.start())},
                               {"end", format_iso_date(untrimmed.back())},
                               {"length", untrimmed.size()}}},
                  {"region_windows", data.snapshots.size()}};
  write_file(out_dir / artifacts::kPanelSummary, dump(summary));
  write_file(out_dir / artifacts::kPanelCsv, panel_to_csv(panel));
  if (data.reference)
    write_file(out_dir / artifacts::kReferenceCsv,
               panel_to_csv(Panel(panel.keyword(), data.reference->grid(), {*data.reference})));
  write_file(out_dir / artifacts::kSnapshots, snapshots_to_json(data.snapshots));

  std::vector<fs::path> inputs{manifest_path};
  for (const auto& f : manifest.time_files) inputs.push_back(manifest.resolve(f.path));
  for (const auto& f : manifest.region_files) inputs.push_back(manifest.resolve(f.path));
  return {std::move(panel), std::move(data.reference), std::move(data.snapshots), t, std::move(inputs)};
}

CorrelationMatrix correlate_stage(const fs::path& panel_csv, ConstantPolicy policy,
                                  const fs::path& out_dir) {
  const auto panel = panel_from_csv(read_file(panel_csv));
  auto m = correlation_matrix(panel, policy);
  write_file(out_dir / artifacts::kMatrixCsv, matrix_to_csv(m));
  write_file(out_dir / artifacts::kMatrixJson, matrix_to_json(m));
  return m;
}

SpanningTree tree_stage(const fs::path& matrix_json, const std::vector<GraphFormat>& formats,
                        const fs::path& out_dir) {
  const auto m = matrix_from_json(read_file(matrix_json));
  const auto g = graph_from_matrix(m);
  auto t = maximum_spanning_tree(g);
  // tree.json is what the downstream stages read, so it is always written.
  write_file(out_dir / fmt::format("{}.json", artifacts::kTreeStem), export_graph(t, GraphFormat::Json));
  for (const auto f : formats) {
    write_file(out_dir / fmt::format("{}.{}", artifacts::kGraphStem, extension(f)), export_graph(g, f));
    if (f != GraphFormat::Json)
      write_file(out_dir / fmt::format("{}.{}", artifacts::kTreeStem, extension(f)), export_graph(t, f));
  }
  return t;
}

CentralityReport centrality_stage(const fs::path& tree_json, const fs::path& out_dir) {
  const auto t = tree_from_json(read_file(tree_json));
  auto c = degree_centrality(t);
  write_file(out_dir / artifacts::kCentrality, centrality_to_json(c));
  return c;
}

BranchPartition branches_stage(const fs::path& tree_json, const fs::path& out_dir) {
  const auto t = tree_from_json(read_file(tree_json));
  auto b = extract_branches(t);
  write_file(out_dir / artifacts::kBranches, branches_to_json(b, degree_centrality(t)));
  return b;
}

void render_line_stage(const fs::path& series_csv, const RenderSpec& spec, const fs::path& out_file) {
  const auto panel = panel_from_csv(read_file(series_csv));
  auto s = spec;
  if (s.title.empty()) s.title = fmt::format("Search activity ({})", panel[0].geo());
  write_file(out_file, render_line_chart(panel[0], s));
}

void render_heatmap_stage(const fs::path& matrix_json, const RenderSpec& spec, const fs::path& out_file) {
  const auto m = matrix_from_json(read_file(matrix_json));
  auto s = spec;
  if (s.title.empty()) s.title = fmt::format("Spearman correlations between {} locations", m.size());
  write_file(out_file, render_heatmap(m, s));
}

void render_tree_stage(const fs::path& tree_json, const RenderSpec& spec, const fs::path& out_file) {
  const auto t = tree_from_json(read_file(tree_json));
  auto s = spec;
  if (s.title.empty()) s.title = fmt::format("Maximum spanning tree over {} locations", t.node_count());
  write_file(out_file, render_tree(t, degree_centrality(t), s));
}

std::vector<std::string> render_choropleth_stage(const fs::path& snapshots_json,
                                                 const fs::path& geometry, const RenderSpec& spec,
                                                 const fs::path& out_dir) {
  const auto snapshots = snapshots_from_json(read_file(snapshots_json));
  const auto world = WorldGeometry::load(geometry);
  const auto frames = render_choropleth_frames(snapshots, world, spec);
  if (fs::exists(out_dir))
    for (const auto& entry : fs::directory_iterator(out_dir))
      if (entry.path().filename().string().rfind("frame_", 0) == 0) fs::remove(entry.path());
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    write_file(out_dir / fmt::format("frame_{:03d}.svg", i), frames[i].svg);
    for (const auto& w : frames[i].warnings) ++seen[w];
  }
  std::vector<std::string> warnings;
  for (const auto& [w, n] : seen) warnings.push_back(fmt::format("{} ({} of {} frames)", w, n, frames.size()));
  return warnings;
}

// --- full run -----------------------------------------------------------------

PipelineResult run_pipeline(const PipelineConfig& config) {
  PipelineResult result;
  const auto& out = config.out_dir;
  const std::string started = utc_now();
  std::string stage = "setup";
  json inputs = json::array();

  try {
    fs::create_directories(out);
    fs::remove(out / artifacts::kFailureMarker);
    if (config.onset_threshold && !(*config.onset_threshold > 0.0 && *config.onset_threshold <= 100.0))
      throw Error(ErrorKind::InvalidValue,
                  fmt::format("onset threshold {} outside (0,100]", *config.onset_threshold));

    stage = "ingest";
    const auto ingest = ingest_stage(config.manifest, config.onset_threshold, out);
    const auto base = config.manifest.parent_path();
    for (const auto& p : ingest.inputs)
      inputs.push_back({{"path", fs::relative(p, base).generic_string()}, {"sha256", sha256_hex(read_file(p))}});

    stage = "correlate";
    correlate_stage(out / artifacts::kPanelCsv, config.constant_policy, out);

    stage = "tree";
    tree_stage(out / artifacts::kMatrixJson, config.formats, out);
    const auto tree_json = out / fmt::format("{}.json", artifacts::kTreeStem);

    stage = "centrality";
    centrality_stage(tree_json, out);

    stage = "branches";
    branches_stage(tree_json, out);

    if (config.render) {
      stage = "render";
      RenderSpec spec;
      spec.seed = config.seed;
      if (ingest.reference) render_line_stage(out / artifacts::kReferenceCsv, spec, out / artifacts::kLineChart);
      else result.warnings.push_back("no WORLD reference in manifest; line chart skipped");
      render_heatmap_stage(out / artifacts::kMatrixJson, spec, out / artifacts::kHeatmap);
      render_tree_stage(tree_json, spec, out / artifacts::kTreeFigure);
      if (!ingest.snapshots.empty()) {
        auto w = render_choropleth_stage(out / artifacts::kSnapshots, config.geometry, spec,
                                         out / artifacts::kChoropleth);
        result.warnings.insert(result.warnings.end(), w.begin(), w.end());
      }
    }

    stage = "metadata";
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(out)) {
      if (!entry.is_regular_file()) continue;
      auto rel = fs::relative(entry.path(), out);
      if (rel == artifacts::kRunMetadata || rel == artifacts::kFailureMarker) continue;
      files.push_back(rel);
    }
    std::sort(files.begin(), files.end());
    json artifact_list = json::array();
    for (const auto& f : files)
      artifact_list.push_back({{"path", f.generic_string()}, {"sha256", sha256_hex(read_file(out / f))}});

    json formats = json::array();
    for (const auto f : config.formats) formats.push_back(std::string(extension(f)));
    json geometry = nullptr;
    if (config.render && fs::exists(config.geometry)) geometry = sha256_hex(read_file(config.geometry));
    const json meta = {
        {"tool", "trendnet"},
        {"version", std::string(tool_version())},
        {"config", {{"manifest", config.manifest.generic_string()},
                    {"onset_threshold", ingest.threshold},
                    {"constant_policy", std::string(to_string(config.constant_policy))},
                    {"seed", config.seed},
                    {"formats", formats},
                    {"render", config.render}}},
        {"inputs", inputs},
        {"geometry_sha256", geometry},
        {"artifacts", artifact_list},
        {"warnings", result.warnings},
        {"started_at", started},
        {"finished_at", utc_now()},
    };
    write_file(out / artifacts::kRunMetadata, dump(meta));
    result.artifacts = std::move(files);
    result.artifacts.emplace_back(artifacts::kRunMetadata);
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.failed_stage = stage;
    result.message = e.what();
    try {
      write_file(out / artifacts::kFailureMarker,
                 fmt::format("stage: {}\nerror: {}\nat: {}\n", stage, e.what(), utc_now()));
    } catch (const std::exception&) {
      // The output directory itself may be the problem.
    }
  }
  return result;
}

}  // namespace trendnet
