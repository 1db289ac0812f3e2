#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "trendnet/trends_csv.hpp"

namespace trendnet {

struct FetchRequest {
  std::string keyword;
  std::string geo;
  Date start;
  Date end;
  Step step = Step::Daily;

  // SHA-256 over keyword, geo, range and step.
  std::string cache_key() const;
};

// Source of raw export documents. Implementations throw on failure; the
// cache wrapper owns retries and rate limiting.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string fetch(const FetchRequest& request) = 0;
};

// Serves previously captured exports from a directory. File names are
// "<keyword>.<geo>.<start>.<end>.<day|week>.csv" with spaces in the keyword
// replaced by '+'.
class ReplayTransport : public Transport {
 public:
  explicit ReplayTransport(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::string fetch(const FetchRequest& request) override;
  static std::string file_name(const FetchRequest& request);

 private:
  std::filesystem::path dir_;
};

struct FetchPolicy {
  std::chrono::milliseconds min_interval{1000};
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{8000};
  int max_attempts = 4;
};

struct FetchStats {
  std::size_t hits = 0;
  std::size_t misses = 0;
  std::size_t transport_calls = 0;
  std::size_t quarantined = 0;
  std::vector<std::chrono::milliseconds> backoff_delays;
  std::vector<std::chrono::milliseconds> rate_limit_delays;
};

// Disk-backed cache in front of a Transport.
//
// Layout: <cache_dir>/<key[0:2]>/<key>.csv holds the response bytes exactly
// as received; <key>.json beside it records the request, fetch time and the
// SHA-256 of the bytes. An entry whose sidecar is missing or disagrees with
// the bytes is renamed to *.quarantined and fetched again.
//
// Transport calls are serialized across all fetchers in the process.
class CachedFetcher {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  CachedFetcher(Transport& transport, std::filesystem::path cache_dir, FetchPolicy policy = {},
                Sleeper sleeper = {}, Clock clock = {});

  TrendsTimeCsv fetch(const FetchRequest& request);

  FetchStats stats() const;
  std::filesystem::path entry_path(const FetchRequest& request) const;
  std::filesystem::path sidecar_path(const FetchRequest& request) const;

 private:
  enum class Lookup { Hit, Miss, Corrupt };
  Lookup read_cache(const FetchRequest& request, TrendsTimeCsv* out);
  void quarantine(const FetchRequest& request);
  std::string call_transport(const FetchRequest& request);
  void store(const FetchRequest& request, const std::string& body);

  Transport& transport_;
  std::filesystem::path cache_dir_;
  FetchPolicy policy_;
  Sleeper sleeper_;
  Clock clock_;
  std::optional<std::chrono::steady_clock::time_point> last_call_;
  mutable std::mutex stats_mutex_;
  FetchStats stats_;
};

// TRENDNET_CACHE_DIR if set, otherwise ".trendnet-cache".
std::filesystem::path default_cache_dir();

TrendsTimeCsv cached_fetch(const FetchRequest& request, Transport& transport,
                           const std::filesystem::path& cache_dir);

}  // namespace trendnet
