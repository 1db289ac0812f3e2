#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "trendnet/timeseries.hpp"
#include "trendnet/trends_csv.hpp"

namespace trendnet {

struct TimeFileRef {
  std::string geo;
  std::filesystem::path path;
};

struct RegionFileRef {
  Date start;
  Date end;
  std::filesystem::path path;
};

// JSON manifest describing one keyword's exports. A time file whose geo is
// "WORLD" is the onset reference and is kept out of the panel. Relative
// paths resolve against base_dir (the manifest's directory).
struct DatasetManifest {
  std::string keyword;
  std::vector<TimeFileRef> time_files;
  std::vector<RegionFileRef> region_files;
  double onset_threshold = kDefaultOnsetThreshold;
  std::string notes;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

DatasetManifest parse_manifest(std::string_view json, const std::filesystem::path& base_dir);
DatasetManifest load_manifest(const std::filesystem::path& path);

struct Dataset {
  Panel panel;                              // normalized, aligned, untrimmed
  std::optional<LocationSeries> reference;  // normalized WORLD series, if listed
  std::vector<RegionSnapshot> snapshots;    // ordered by window start
};

Dataset load_dataset(const DatasetManifest& manifest);

}  // namespace trendnet
