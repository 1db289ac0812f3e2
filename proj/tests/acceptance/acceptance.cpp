// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include <json.hpp>

#include "../generators.hpp"
#include "../oracles.hpp"
#include "../test_util.hpp"
#include "trendnet/pipeline.hpp"
#include "trendnet/text.hpp"

using namespace trendnet;

namespace {

// Tolerances.
constexpr double kOracleTol = 1e-10;
constexpr double kInvarianceTol = 1e-12;
constexpr double kTreeWeightTol = 1e-12;
constexpr int kSpearmanPairs = 1200;
constexpr int kMstGraphs = 300;
constexpr int kRoundTrips = 600;
constexpr double kBudgetSeconds = 60.0;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  std::fflush(stdout);
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

PipelineConfig fixture_config(const fs::path& out) {
  PipelineConfig c;
  c.manifest = testutil::fixture_manifest();
  c.out_dir = out;
  c.geometry = testutil::geometry_path();
  return c;
}

std::map<std::string, std::string> artifact_bytes(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).generic_string()] = read_file(e.path());
  auto meta = nlohmann::json::parse(out.at(artifacts::kRunMetadata));
  meta.erase("started_at");
  meta.erase("finished_at");
  out[artifacts::kRunMetadata] = meta.dump();
  return out;
}

WeightedGraph complete(const oracle::Weights& w) {
  std::vector<std::string> labels;
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < w.size(); ++i) {
    labels.push_back(fmt::format("N{}", i));
    for (std::size_t j = i + 1; j < w.size(); ++j) edges.push_back({i, j, w[i][j]});
  }
  return WeightedGraph(labels, edges);
}

oracle::EdgeSet edge_set(const SpanningTree& t) {
  oracle::EdgeSet s;
  for (const auto& e : t.edges()) s.insert({int(e.u), int(e.v)});
  return s;
}

}  // namespace

int main() {
  const auto started = std::chrono::steady_clock::now();
  const testutil::TempDir run_a, run_b;
  const auto first = run_pipeline(fixture_config(run_a.path()));

  report("structural-reproduction", [&]() -> Outcome {
    if (first.exit_code != 0) return {false, "pipeline failed: " + first.message};
    const auto m = matrix_from_json(read_file(run_a / artifacts::kMatrixJson));
    m.validate();
    const auto t = tree_from_json(read_file(run_a / "tree.json"));
    UnionFind uf(t.node_count());
    for (const auto& e : t.edges()) uf.unite(e.u, e.v);
    const bool ok = m.size() == 54 && t.node_count() == 54 && t.edges().size() == 53 && uf.components() == 1;
    return {ok, fmt::format("matrix {}x{} (unit diagonal, symmetric), tree {} nodes / {} edges / {} component(s)",
                            m.size(), m.size(), t.node_count(), t.edges().size(), uf.components())};
  });

  report("onset-reproduction", [&]() -> Outcome {
    const auto data = load_dataset(load_manifest(testutil::fixture_manifest()));
    const auto trimmed = trim_to_onset(data.panel, *data.reference, kDefaultOnsetThreshold);
    const auto summary = nlohmann::json::parse(read_file(run_a / artifacts::kPanelSummary));
    const auto start = format_iso_date(trimmed.grid().start());
    const bool ok = start == "2020-01-20" && summary.at("onset") == "2020-01-20";
    return {ok, fmt::format("trimmed panel starts {} (threshold {}), pipeline onset {}", start,
                            kDefaultOnsetThreshold, summary.at("onset").dump())};
  });

  report("spearman-oracle", [&]() -> Outcome {
    std::mt19937 rng(20200120);
    std::uniform_int_distribution<int> len(3, 200), levels(1, 15);
    int tied = 0, distinct = 0;
    double worst = 0, worst_closed = 0;
    while (tied + distinct < kSpearmanPairs) {
      const std::size_t n = len(rng);
      const bool ties = (tied + distinct) % 2 == 0;
      const auto x = ties ? oracle::tied_series(rng, n, levels(rng)) : oracle::distinct_series(rng, n);
      const auto y = ties ? oracle::tied_series(rng, n, levels(rng)) : oracle::distinct_series(rng, n);
      if (std::set<double>(x.begin(), x.end()).size() < 2 || std::set<double>(y.begin(), y.end()).size() < 2)
        continue;
      const double r = spearman_rho(x, y);
      worst = std::max(worst, std::abs(r - oracle::spearman(x, y)));
      if (oracle::has_ties(x) || oracle::has_ties(y)) {
        ++tied;
      } else {
        ++distinct;
        worst_closed = std::max(worst_closed, std::abs(r - oracle::spearman_closed_form(x, y)));
      }
    }
    const bool ok = worst <= kOracleTol && worst_closed <= kOracleTol && tied > 0 && distinct > 0;
    return {ok, fmt::format("{} pairs ({} with ties, {} tie-free), max |diff| {:.3g} vs oracle, {:.3g} vs closed form (tol {:g})",
                            tied + distinct, tied, distinct, worst, worst_closed, kOracleTol)};
  });

  report("mst-oracle", [&]() -> Outcome {
    std::mt19937 rng(54);
    std::uniform_int_distribution<int> size(2, 7);
    int weight_mismatch = 0, edge_mismatch = 0;
    std::size_t trees = 0;
    for (int g = 0; g < kMstGraphs; ++g) {
      const auto w = oracle::distinct_weights(rng, size(rng));
      const auto t = maximum_spanning_tree(complete(w));
      const auto best = oracle::exhaustive_max_tree(w);
      trees += oracle::all_spanning_trees(int(w.size())).size();
      if (std::abs(t.total_weight() - best.weight) > kTreeWeightTol) ++weight_mismatch;
      if (edge_set(t) != best.edges) ++edge_mismatch;
    }
    return {weight_mismatch == 0 && edge_mismatch == 0,
            fmt::format("{} graphs (N 2..7), {} spanning trees enumerated, {} weight / {} edge-set mismatches",
                        kMstGraphs, trees, weight_mismatch, edge_mismatch)};
  });

  report("monotone-invariance", [&]() -> Outcome {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> len(3, 200), levels(2, 40), size(2, 30);
    const std::vector<std::function<double(double)>> transforms{
        [](double v) { return std::exp(v / 40.0); }, [](double v) { return v * v * v; },
        [](double v) { return std::cbrt(v); }, [](double v) { return 5.0 * v - 3.0; }};
    double drift = 0;
    int pairs = 0;
    while (pairs < 1000) {
      const std::size_t n = len(rng);
      const auto x = pairs % 2 ? oracle::tied_series(rng, n, levels(rng)) : oracle::distinct_series(rng, n);
      const auto y = oracle::tied_series(rng, n, levels(rng));
      if (std::set<double>(x.begin(), x.end()).size() < 2 || std::set<double>(y.begin(), y.end()).size() < 2)
        continue;
      auto fx = x;
      for (auto& v : fx) v = transforms[pairs % transforms.size()](v);
      drift = std::max(drift, std::abs(spearman_rho(fx, y) - spearman_rho(x, y)));
      ++pairs;
    }
    int changed = 0;
    for (int g = 0; g < 300; ++g) {
      const auto w = oracle::distinct_weights(rng, size(rng));
      auto f = w;
      for (auto& row : f)
        for (auto& v : row) v = transforms[g % transforms.size()](v);
      if (edge_set(maximum_spanning_tree(complete(w))) != edge_set(maximum_spanning_tree(complete(f)))) ++changed;
    }
    return {drift <= kInvarianceTol && changed == 0,
            fmt::format("rho drift {:.3g} over {} pairs (tol {:g}); {} of 300 trees changed", drift, pairs,
                        kInvarianceTol, changed)};
  });

  report("determinism", [&]() -> Outcome {
    const auto second = run_pipeline(fixture_config(run_b.path()));
    if (first.exit_code != 0 || second.exit_code != 0) return {false, "pipeline failed"};
    const auto a = artifact_bytes(run_a.path());
    const auto b = artifact_bytes(run_b.path());
    std::size_t differing = 0;
    for (const auto& [path, bytes] : a)
      if (!b.count(path) || b.at(path) != bytes) ++differing;
    return {a == b, fmt::format("{} files compared, {} differ (run.json timestamps excluded)", a.size(), differing)};
  });

  report("ingestion-round-trip", [&]() -> Outcome {
    std::mt19937 rng(500);
    int mismatches = 0, with_below_one = 0;
    for (int k = 0; k < kRoundTrips; ++k) {
      const auto doc = gen::time_csv(rng);
      const auto text = serialize_interest_over_time_csv(doc);
      if (text.find(",<1\n") != std::string::npos) ++with_below_one;
      const auto back = parse_interest_over_time_csv(text);
      if (!(back == doc) || serialize_interest_over_time_csv(back) != text) ++mismatches;
    }
    return {mismatches == 0 && with_below_one > 0,
            fmt::format("{} documents ({} with \"<1\" cells), {} mismatches", kRoundTrips, with_below_one, mismatches)};
  });

  report("render-structure", [&]() -> Outcome {
    const auto m = matrix_from_json(read_file(run_a / artifacts::kMatrixJson));
    const auto t = tree_from_json(read_file(run_a / "tree.json"));
    const auto reference = panel_from_csv(read_file(run_a / artifacts::kReferenceCsv));
    const auto snapshots = snapshots_from_json(read_file(run_a / artifacts::kSnapshots));
    const auto heat = count(read_file(run_a / artifacts::kHeatmap), "<rect class=\"cell\"");
    const auto segs = count(read_file(run_a / artifacts::kTreeFigure), "<line class=\"edge\"");
    const auto line = read_file(run_a / artifacts::kLineChart);
    const auto pts_at = line.find("points=\"");
    const auto pts = line.substr(pts_at + 8, line.find('"', pts_at + 8) - pts_at - 8);
    const auto vertices = count(pts, " ") + 1;
    std::size_t frames = 0;
    for (const auto& e : fs::directory_iterator(run_a / artifacts::kChoropleth))
      if (e.path().extension() == ".svg") ++frames;
    const std::size_t n = m.size();
    const bool ok = heat == n * n && segs == t.node_count() - 1 && vertices == reference.grid().size() &&
                    frames == snapshots.size();
    return {ok, fmt::format("heatmap cells {} (N^2 = {}), tree segments {} (N-1 = {}), line vertices {} "
                            "(grid {}), frames {} (snapshots {})",
                            heat, n * n, segs, t.node_count() - 1, vertices, reference.grid().size(), frames,
                            snapshots.size())};
  });

  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  report("time-budget", [&]() -> Outcome {
    return {elapsed < kBudgetSeconds, fmt::format("{:.2f} s (budget {:g} s)", elapsed, kBudgetSeconds)};
  });

  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
