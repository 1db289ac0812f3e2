#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trendnet/correlation.hpp"
#include "trendnet/dataset.hpp"
#include "trendnet/export.hpp"
#include "trendnet/graph.hpp"
#include "trendnet/render.hpp"

namespace trendnet {

namespace fs = std::filesystem;

// Artifact names inside an output directory. Every stage reads and writes
// these, so running the stage subcommands one after another over the same
// directory reproduces a full pipeline run.
namespace artifacts {
inline constexpr const char* kPanelSummary = "panel.json";
inline constexpr const char* kPanelCsv = "panel.csv";
inline constexpr const char* kReferenceCsv = "reference.csv";
inline constexpr const char* kSnapshots = "snapshots.json";
inline constexpr const char* kMatrixCsv = "correlation.csv";
inline constexpr const char* kMatrixJson = "correlation.json";
inline constexpr const char* kGraphStem = "graph";
inline constexpr const char* kTreeStem = "tree";
inline constexpr const char* kCentrality = "centrality.json";
inline constexpr const char* kBranches = "branches.json";
inline constexpr const char* kFigures = "figures";
inline constexpr const char* kLineChart = "figures/line_chart.svg";
inline constexpr const char* kHeatmap = "figures/heatmap.svg";
inline constexpr const char* kTreeFigure = "figures/tree.svg";
inline constexpr const char* kChoropleth = "figures/choropleth";
inline constexpr const char* kRunMetadata = "run.json";
inline constexpr const char* kFailureMarker = "FAILED";
}  // namespace artifacts

// Wide CSV: "date,<geo...>" then one row per date, 17 significant digits.
std::string panel_to_csv(const Panel& panel);
Panel panel_from_csv(std::string_view text, const std::string& keyword = {});

std::string snapshots_to_json(const std::vector<RegionSnapshot>& snapshots);
std::vector<RegionSnapshot> snapshots_from_json(std::string_view text);

std::string centrality_to_json(const CentralityReport& c);
std::string branches_to_json(const BranchPartition& b, const CentralityReport& c);

// --- stages -----------------------------------------------------------------

struct IngestResult {
  Panel panel;  // trimmed when the manifest has a WORLD reference
  std::optional<LocationSeries> reference;
  std::vector<RegionSnapshot> snapshots;
  double threshold;
  std::vector<fs::path> inputs;  // manifest plus every referenced file
};

IngestResult ingest_stage(const fs::path& manifest_path, std::optional<double> threshold,
                          const fs::path& out_dir);
CorrelationMatrix correlate_stage(const fs::path& panel_csv, ConstantPolicy policy,
                                  const fs::path& out_dir);
SpanningTree tree_stage(const fs::path& matrix_json, const std::vector<GraphFormat>& formats,
                        const fs::path& out_dir);
CentralityReport centrality_stage(const fs::path& tree_json, const fs::path& out_dir);
BranchPartition branches_stage(const fs::path& tree_json, const fs::path& out_dir);

void render_line_stage(const fs::path& series_csv, const RenderSpec& spec, const fs::path& out_file);
void render_heatmap_stage(const fs::path& matrix_json, const RenderSpec& spec, const fs::path& out_file);
void render_tree_stage(const fs::path& tree_json, const RenderSpec& spec, const fs::path& out_file);
// Returns each distinct frame warning once, with the number of frames it hit.
std::vector<std::string> render_choropleth_stage(const fs::path& snapshots_json,
                                                 const fs::path& geometry, const RenderSpec& spec,
                                                 const fs::path& out_dir);

// --- full run -----------------------------------------------------------------

struct PipelineConfig {
  fs::path manifest;
  fs::path out_dir;
  std::optional<double> onset_threshold;  // overrides the manifest value
  ConstantPolicy constant_policy = ConstantPolicy::Error;
  std::uint32_t seed = 42;
  std::vector<GraphFormat> formats{GraphFormat::Dot, GraphFormat::GraphML, GraphFormat::Json};
  bool render = true;
  fs::path geometry = default_geometry_path();
};

struct PipelineResult {
  int exit_code = 0;
  std::string failed_stage;  // empty on success
  std::string message;
  std::vector<fs::path> artifacts;  // relative to out_dir, in write order
  std::vector<std::string> warnings;
};

// Runs every stage in order. On failure the partial artifacts stay and a
// FAILED marker names the stage.
PipelineResult run_pipeline(const PipelineConfig& config);

std::string_view tool_version();

}  // namespace trendnet
