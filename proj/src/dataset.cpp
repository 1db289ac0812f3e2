#include "trendnet/dataset.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "trendnet/error.hpp"
#include "trendnet/text.hpp"

namespace trendnet {

namespace fs = std::filesystem;

namespace {

Date manifest_date(const nlohmann::json& j, const char* field) {
  const auto text = j.at(field).get<std::string>();
  auto d = parse_iso_date(text);
  if (!d) throw Error(ErrorKind::ParseError, fmt::format("manifest: bad {} date '{}'", field, text));
  return *d;
}

// Re-throws a library error with the offending file in front.
template <typename F>
auto with_path(const fs::path& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace

fs::path DatasetManifest::resolve(const fs::path& p) const {
  return p.is_absolute() ? p : base_dir / p;
}

DatasetManifest parse_manifest(std::string_view json, const fs::path& base_dir) {
  DatasetManifest m;
  m.base_dir = base_dir;
  try {
    const auto doc = nlohmann::json::parse(json);
    m.keyword = doc.at("keyword").get<std::string>();
    for (const auto& t : doc.at("time_files"))
      m.time_files.push_back({t.at("geo").get<std::string>(), t.at("path").get<std::string>()});
    if (doc.contains("region_files"))
      for (const auto& r : doc.at("region_files"))
        m.region_files.push_back(
            {manifest_date(r, "start"), manifest_date(r, "end"), r.at("path").get<std::string>()});
    m.onset_threshold = doc.value("onset_threshold", kDefaultOnsetThreshold);
    m.notes = doc.value("notes", std::string());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, fmt::format("manifest: {}", e.what()));
  }

  std::set<std::string> seen;
  for (const auto& t : m.time_files)
    if (!seen.insert(t.geo).second)
      throw Error(ErrorKind::DuplicateLocation, fmt::format("manifest lists {} twice", t.geo));
  if (!(m.onset_threshold > 0.0 && m.onset_threshold <= 100.0))
    throw Error(ErrorKind::InvalidValue,
                fmt::format("manifest onset_threshold {} outside (0,100]", m.onset_threshold));
  return m;
}

DatasetManifest load_manifest(const fs::path& path) {
  return parse_manifest(read_file(path), path.parent_path());
}

Dataset load_dataset(const DatasetManifest& manifest) {
  for (const auto& t : manifest.time_files)
    if (!fs::exists(manifest.resolve(t.path)))
      throw Error(ErrorKind::IoError, fmt::format("missing time file {}", t.path.string()));
  for (const auto& r : manifest.region_files)
    if (!fs::exists(manifest.resolve(r.path)))
      throw Error(ErrorKind::IoError, fmt::format("missing region file {}", r.path.string()));

  // Listing order must not matter.
  auto time_files = manifest.time_files;
  std::sort(time_files.begin(), time_files.end(),
            [](const auto& a, const auto& b) { return a.geo < b.geo; });

  std::vector<LocationSeries> members;
  std::optional<LocationSeries> reference;
  for (const auto& t : time_files) {
    const auto path = manifest.resolve(t.path);
    auto series = with_path(path, [&] {
      const auto doc = parse_interest_over_time_csv(read_file(path));
      if (doc.geo != t.geo)
        throw Error(ErrorKind::ParseError,
                    fmt::format("header geography {} does not match manifest geo {}", doc.geo, t.geo));
      if (doc.keyword != manifest.keyword)
        throw Error(ErrorKind::KeywordMismatch,
                    fmt::format("keyword '{}' differs from manifest '{}'", doc.keyword,
                                manifest.keyword));
      return LocationSeries(doc.geo, doc.keyword, doc.grid, normalize_rsv(doc.values()));
    });
    if (t.geo == kWorldGeo) reference = std::move(series);
    else members.push_back(std::move(series));
  }

  auto region_files = manifest.region_files;
  std::sort(region_files.begin(), region_files.end(), [](const auto& a, const auto& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end < b.end;
    return a.path < b.path;
  });
  std::vector<RegionSnapshot> snapshots;
  for (const auto& r : region_files) {
    const auto path = manifest.resolve(r.path);
    snapshots.push_back(with_path(path, [&] {
      auto snap = parse_interest_by_region_csv(read_file(path), r.start, r.end);
      if (snap.keyword != manifest.keyword)
        throw Error(ErrorKind::KeywordMismatch,
                    fmt::format("keyword '{}' differs from manifest '{}'", snap.keyword,
                                manifest.keyword));
      return snap;
    }));
  }

  return Dataset{align_panel(std::move(members)), std::move(reference), std::move(snapshots)};
}

}  // namespace trendnet
