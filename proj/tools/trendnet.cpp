#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "trendnet/error.hpp"
#include "trendnet/fetch.hpp"
#include "trendnet/pipeline.hpp"
#include "trendnet/text.hpp"

using namespace trendnet;

namespace {

struct Options {
  std::string manifest;
  std::string out = "out";
  std::optional<double> onset_threshold;
  std::string constant_policy = "error";
  std::uint32_t seed = 42;
  std::string geometry;
  std::vector<std::string> formats{"dot", "graphml", "json"};
  bool no_render = false;

  std::string input;
  std::string output;
  std::string figure;
  std::string format;
  std::string what = "tree";
  std::string color_map;
  std::string title;
  int width = 900;
  int height = 600;

  std::string keyword, geo, start, end, step = "day", replay_dir, cache_dir;
};

fs::path or_default(const std::string& given, const fs::path& fallback) {
  return given.empty() ? fallback : fs::path(given);
}

std::vector<GraphFormat> graph_formats(const std::vector<std::string>& names) {
  std::vector<GraphFormat> out;
  for (const auto& n : names) out.push_back(parse_graph_format(n));
  return out;
}

Date date_arg(const std::string& s, const char* flag) {
  auto d = parse_iso_date(s);
  if (!d) throw Error(ErrorKind::InvalidValue, fmt::format("{} expects YYYY-MM-DD, got '{}'", flag, s));
  return *d;
}

RenderSpec render_spec(const Options& o) {
  RenderSpec s;
  s.seed = o.seed;
  s.width = o.width;
  s.height = o.height;
  s.color_map = o.color_map;
  s.title = o.title;
  s.validate();
  return s;
}

void emit(const std::string& output, const std::string& text) {
  if (output.empty() || output == "-") std::fwrite(text.data(), 1, text.size(), stdout);
  else write_file(output, text);
}

void add_threshold(CLI::App* cmd, Options& o) {
  cmd->add_option("--onset-threshold", o.onset_threshold,
                  "Reference RSV that marks the onset (overrides the manifest)")
      ->check(CLI::Range(0.0, 100.0));
}

int run_render(const Options& o) {
  const fs::path out = o.out;
  const auto spec = render_spec(o);
  if (!o.format.empty() && o.format != "svg")
    throw Error(ErrorKind::UnsupportedFormat, fmt::format("render writes svg, not '{}'", o.format));
  const auto figure = [&](const std::string& name) {
    if (name == "line") {
      render_line_stage(or_default(o.input, out / artifacts::kReferenceCsv), spec,
                        or_default(o.output, out / artifacts::kLineChart));
    } else if (name == "heatmap") {
      render_heatmap_stage(or_default(o.input, out / artifacts::kMatrixJson), spec,
                           or_default(o.output, out / artifacts::kHeatmap));
    } else if (name == "tree") {
      render_tree_stage(or_default(o.input, out / fmt::format("{}.json", artifacts::kTreeStem)), spec,
                        or_default(o.output, out / artifacts::kTreeFigure));
    } else {
      const auto geometry = o.geometry.empty() ? default_geometry_path() : fs::path(o.geometry);
      for (const auto& w : render_choropleth_stage(or_default(o.input, out / artifacts::kSnapshots),
                                                   geometry, spec,
                                                   or_default(o.output, out / artifacts::kChoropleth)))
        fmt::print(stderr, "warning: {}\n", w);
    }
  };
  if (o.figure == "all") {
    if (!o.input.empty() || !o.output.empty())
      throw Error(ErrorKind::InvalidValue, "--input/--output need a single --figure");
    if (fs::exists(out / artifacts::kReferenceCsv)) figure("line");
    for (const char* f : {"heatmap", "tree", "choropleth"}) figure(f);
  } else {
    figure(o.figure);
  }
  return 0;
}

int run_export(const Options& o) {
  const fs::path out = o.out;
  const auto format = o.format.empty() ? std::string("json") : o.format;
  if (o.what == "matrix") {
    const auto m = matrix_from_json(read_file(or_default(o.input, out / artifacts::kMatrixJson)));
    if (format == "csv") emit(o.output, matrix_to_csv(m));
    else if (format == "json") emit(o.output, matrix_to_json(m));
    else throw Error(ErrorKind::UnsupportedFormat, fmt::format("matrix exports as csv or json, not '{}'", format));
    return 0;
  }
  const auto f = parse_graph_format(format);
  if (o.what == "graph") {
    const auto m = matrix_from_json(read_file(or_default(o.input, out / artifacts::kMatrixJson)));
    emit(o.output, export_graph(graph_from_matrix(m), f));
  } else {
    const auto t = tree_from_json(read_file(or_default(o.input, out / fmt::format("{}.json", artifacts::kTreeStem))));
    emit(o.output, export_graph(t, f));
  }
  return 0;
}

int run_fetch(const Options& o) {
  FetchRequest r{o.keyword, o.geo, date_arg(o.start, "--start"), date_arg(o.end, "--end"),
                 o.step == "week" ? Step::Weekly : Step::Daily};
  ReplayTransport transport(o.replay_dir);
  CachedFetcher fetcher(transport, o.cache_dir.empty() ? default_cache_dir() : fs::path(o.cache_dir));
  const auto doc = fetcher.fetch(r);
  emit(o.output, serialize_interest_over_time_csv(doc));
  const auto st = fetcher.stats();
  fmt::print(stderr, "cache: {} hit(s), {} miss(es), {} quarantined\n", st.hits, st.misses, st.quarantined);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search-interest correlation networks"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);
  Options o;

  auto* pipeline = app.add_subcommand("pipeline", "Run every stage and write the full artifact set");
  pipeline->add_option("--manifest", o.manifest, "Dataset manifest (JSON)")->required()->check(CLI::ExistingFile);
  pipeline->add_option("--out", o.out, "Output directory")->required();
  add_threshold(pipeline, o);
  pipeline->add_option("--constant-policy", o.constant_policy, "Constant series: error or drop")
      ->check(CLI::IsMember({"error", "drop"}));
  pipeline->add_option("--seed", o.seed, "Tree layout seed");
  pipeline->add_option("--geometry", o.geometry, "Country outlines for choropleth frames");
  pipeline->add_option("--formats", o.formats, "Graph export formats")->delimiter(',');
  pipeline->add_flag("--no-render", o.no_render, "Skip the figures");

  auto* ingest = app.add_subcommand("ingest", "Load, normalize, align and trim the manifest's exports");
  ingest->add_option("--manifest", o.manifest)->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", o.out)->required();
  add_threshold(ingest, o);

  auto* correlate = app.add_subcommand("correlate", "Spearman matrix over panel.csv");
  correlate->add_option("--out", o.out)->required();
  correlate->add_option("--input", o.input, "Panel CSV (default <out>/panel.csv)");
  correlate->add_option("--constant-policy", o.constant_policy)->check(CLI::IsMember({"error", "drop"}));

  auto* tree = app.add_subcommand("tree", "Maximum spanning tree of correlation.json");
  tree->add_option("--out", o.out)->required();
  tree->add_option("--input", o.input, "Matrix JSON (default <out>/correlation.json)");
  tree->add_option("--formats", o.formats, "Graph export formats")->delimiter(',');

  auto* centrality = app.add_subcommand("centrality", "Degree centrality of tree.json");
  centrality->add_option("--out", o.out)->required();
  centrality->add_option("--input", o.input, "Tree JSON (default <out>/tree.json)");

  auto* branches = app.add_subcommand("branches", "Hub and branches of tree.json");
  branches->add_option("--out", o.out)->required();
  branches->add_option("--input", o.input, "Tree JSON (default <out>/tree.json)");

  auto* render = app.add_subcommand("render", "Draw one figure family as SVG");
  render->add_option("--out", o.out)->required();
  render->add_option("--figure", o.figure)->required()
      ->check(CLI::IsMember({"line", "heatmap", "tree", "choropleth", "all"}));
  render->add_option("--format", o.format, "Only svg");
  render->add_option("--input", o.input);
  render->add_option("--output", o.output, "File, or directory for choropleth frames");
  render->add_option("--seed", o.seed);
  render->add_option("--geometry", o.geometry);
  render->add_option("--color-map", o.color_map, "rdbu, puor, blues, oranges or greys");
  render->add_option("--title", o.title);
  render->add_option("--width", o.width);
  render->add_option("--height", o.height);

  auto* exp = app.add_subcommand("export", "Write the matrix, graph or tree in another format");
  exp->add_option("--out", o.out)->required();
  exp->add_option("--what", o.what)->check(CLI::IsMember({"matrix", "graph", "tree"}));
  exp->add_option("--format", o.format, "dot, graphml, json or csv (matrix only)");
  exp->add_option("--input", o.input);
  exp->add_option("--output", o.output, "Destination file (default stdout)");

  auto* fetch = app.add_subcommand("fetch", "Fetch one export through the local cache");
  fetch->add_option("--keyword", o.keyword)->required();
  fetch->add_option("--geo", o.geo)->required();
  fetch->add_option("--start", o.start)->required();
  fetch->add_option("--end", o.end)->required();
  fetch->add_option("--step", o.step)->check(CLI::IsMember({"day", "week"}));
  fetch->add_option("--replay-dir", o.replay_dir, "Directory of captured exports")->required();
  fetch->add_option("--cache-dir", o.cache_dir, "Default: $TRENDNET_CACHE_DIR or .trendnet-cache");
  fetch->add_option("--output", o.output, "Destination file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (pipeline->parsed()) {
    PipelineConfig config;
    config.manifest = o.manifest;
    config.out_dir = o.out;
    config.onset_threshold = o.onset_threshold;
    try {
      config.constant_policy = parse_constant_policy(o.constant_policy);
      config.formats = graph_formats(o.formats);
    } catch (const std::exception& e) {
      fmt::print(stderr, "trendnet pipeline: {}\n", e.what());
      return 2;
    }
    config.seed = o.seed;
    config.render = !o.no_render;
    if (!o.geometry.empty()) config.geometry = o.geometry;
    const auto result = run_pipeline(config);
    for (const auto& w : result.warnings) fmt::print(stderr, "warning: {}\n", w);
    if (result.exit_code != 0) {
      fmt::print(stderr, "trendnet pipeline: stage '{}' failed: {}\n", result.failed_stage, result.message);
      return result.exit_code;
    }
    fmt::print("{} artifacts written to {}\n", result.artifacts.size(), o.out);
    return 0;
  }

  const fs::path out = o.out;
  const auto* cmd = app.get_subcommands().front();
  try {
    if (cmd == ingest) {
      const auto r = ingest_stage(o.manifest, o.onset_threshold, out);
      fmt::print("{} locations, {} dates from {}\n", r.panel.size(), r.panel.grid().size(),
                 format_iso_date(r.panel.grid().start()));
    } else if (cmd == correlate) {
      const auto m = correlate_stage(or_default(o.input, out / artifacts::kPanelCsv),
                                     parse_constant_policy(o.constant_policy), out);
      fmt::print("{0}x{0} matrix\n", m.size());
    } else if (cmd == tree) {
      const auto t = tree_stage(or_default(o.input, out / artifacts::kMatrixJson), graph_formats(o.formats), out);
      fmt::print("{} edges, total weight {}\n", t.edges().size(), format_real(t.total_weight()));
    } else if (cmd == centrality) {
      centrality_stage(or_default(o.input, out / fmt::format("{}.json", artifacts::kTreeStem)), out);
    } else if (cmd == branches) {
      const auto b = branches_stage(or_default(o.input, out / fmt::format("{}.json", artifacts::kTreeStem)), out);
      fmt::print("hub {} with {} branches\n", b.hub, b.branches.size());
    } else if (cmd == render) {
      return run_render(o);
    } else if (cmd == exp) {
      return run_export(o);
    } else if (cmd == fetch) {
      return run_fetch(o);
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "trendnet {}: {}\n", cmd->get_name(), e.what());
    return 1;
  }
  return 0;
}
