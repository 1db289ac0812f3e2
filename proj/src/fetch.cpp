#include "trendnet/fetch.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <optional>
#include <thread>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include "trendnet/error.hpp"
#include "trendnet/text.hpp"

namespace trendnet {

namespace fs = std::filesystem;

namespace {

// One transport call at a time, process-wide.
std::mutex& transport_mutex() {
  static std::mutex m;
  return m;
}

std::string step_name(Step s) { return s == Step::Daily ? "day" : "week"; }

nlohmann::json request_json(const FetchRequest& r) {
  return {{"keyword", r.keyword},
          {"geo", r.geo},
          {"start", format_iso_date(r.start)},
          {"end", format_iso_date(r.end)},
          {"step", step_name(r.step)}};
}

std::string utc_timestamp() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::time(nullptr)));
}

}  // namespace

std::string FetchRequest::cache_key() const {
  // Unit separator keeps field boundaries unambiguous.
  return sha256_hex(fmt::format("{}\x1f{}\x1f{}\x1f{}\x1f{}", keyword, geo, format_iso_date(start),
                                format_iso_date(end), step_name(step)));
}

std::string ReplayTransport::file_name(const FetchRequest& r) {
  std::string kw = r.keyword;
  std::replace(kw.begin(), kw.end(), ' ', '+');
  return fmt::format("{}.{}.{}.{}.{}.csv", kw, r.geo, format_iso_date(r.start),
                     format_iso_date(r.end), step_name(r.step));
}

std::string ReplayTransport::fetch(const FetchRequest& request) {
  const auto path = dir_ / file_name(request);
  if (!fs::exists(path))
    throw Error(ErrorKind::FetchFailed, fmt::format("no replay file {}", path.string()));
  return read_file(path);
}

CachedFetcher::CachedFetcher(Transport& transport, fs::path cache_dir, FetchPolicy policy,
                             Sleeper sleeper, Clock clock)
    : transport_(transport),
      cache_dir_(std::move(cache_dir)),
      policy_(policy),
      sleeper_(sleeper ? std::move(sleeper)
                       : Sleeper([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); })),
      clock_(clock ? std::move(clock) : Clock([] { return std::chrono::steady_clock::now(); })) {
  if (policy_.max_attempts < 1) policy_.max_attempts = 1;
}

fs::path CachedFetcher::entry_path(const FetchRequest& r) const {
  const auto key = r.cache_key();
  return cache_dir_ / key.substr(0, 2) / (key + ".csv");
}

fs::path CachedFetcher::sidecar_path(const FetchRequest& r) const {
  const auto key = r.cache_key();
  return cache_dir_ / key.substr(0, 2) / (key + ".json");
}

FetchStats CachedFetcher::stats() const {
  std::lock_guard lock(stats_mutex_);
  return stats_;
}

CachedFetcher::Lookup CachedFetcher::read_cache(const FetchRequest& r, TrendsTimeCsv* out) {
  const auto body_path = entry_path(r);
  const auto meta_path = sidecar_path(r);
  const bool has_body = fs::exists(body_path);
  const bool has_meta = fs::exists(meta_path);
  if (!has_body && !has_meta) return Lookup::Miss;
  if (!has_body || !has_meta) return Lookup::Corrupt;
  try {
    const auto body = read_file(body_path);
    const auto meta = nlohmann::json::parse(read_file(meta_path));
    if (meta.at("sha256").get<std::string>() != sha256_hex(body)) return Lookup::Corrupt;
    if (meta.at("request") != request_json(r)) return Lookup::Corrupt;
    *out = parse_interest_over_time_csv(body);
    return Lookup::Hit;
  } catch (const std::exception&) {
    return Lookup::Corrupt;
  }
}

void CachedFetcher::quarantine(const FetchRequest& r) {
  for (const auto& p : {entry_path(r), sidecar_path(r)}) {
    if (!fs::exists(p)) continue;
    auto target = p;
    target += ".quarantined";
    std::error_code ec;
    fs::rename(p, target, ec);
    if (ec) fs::remove(p, ec);
  }
  std::lock_guard lock(stats_mutex_);
  ++stats_.quarantined;
}

std::string CachedFetcher::call_transport(const FetchRequest& r) {
  std::string last_error;
  for (int attempt = 1; attempt <= policy_.max_attempts; ++attempt) {
    if (last_call_) {
      const auto since = std::chrono::duration_cast<std::chrono::milliseconds>(clock_() - *last_call_);
      if (since < policy_.min_interval) {
        const auto wait = policy_.min_interval - since;
        sleeper_(wait);
        std::lock_guard lock(stats_mutex_);
        stats_.rate_limit_delays.push_back(wait);
      }
    }
    last_call_ = clock_();
    {
      std::lock_guard lock(stats_mutex_);
      ++stats_.transport_calls;
    }
    try {
      return transport_.fetch(r);
    } catch (const std::exception& e) {
      last_error = e.what();
    }
    if (attempt == policy_.max_attempts) break;
    std::chrono::milliseconds delay{policy_.initial_backoff.count() << std::min(attempt - 1, 20)};
    delay = std::min(delay, policy_.max_backoff);
    sleeper_(delay);
    std::lock_guard lock(stats_mutex_);
    stats_.backoff_delays.push_back(delay);
  }
  throw Error(ErrorKind::FetchFailed,
              fmt::format("{} / {}: {} attempts failed, last error: {}", r.keyword, r.geo,
                          policy_.max_attempts, last_error));
}

void CachedFetcher::store(const FetchRequest& r, const std::string& body) {
  write_file(entry_path(r), body);
  const nlohmann::json meta = {{"request", request_json(r)},
                               {"fetched_at", utc_timestamp()},
                               {"sha256", sha256_hex(body)},
                               {"bytes", body.size()}};
  write_file(sidecar_path(r), meta.dump(2) + "\n");
}

TrendsTimeCsv CachedFetcher::fetch(const FetchRequest& request) {
  auto hit = [&](TrendsTimeCsv doc) {
    std::lock_guard lock(stats_mutex_);
    ++stats_.hits;
    return doc;
  };

  TrendsTimeCsv doc{std::nullopt, {}, {}, DateGrid(request.start, request.step, 1), {}};
  if (read_cache(request, &doc) == Lookup::Hit) return hit(std::move(doc));

  std::lock_guard transport_lock(transport_mutex());
  // Another caller may have filled the entry while we waited.
  const auto state = read_cache(request, &doc);
  if (state == Lookup::Hit) return hit(std::move(doc));
  if (state == Lookup::Corrupt) quarantine(request);
  {
    std::lock_guard lock(stats_mutex_);
    ++stats_.misses;
  }

  std::string body;
  try {
    body = call_transport(request);
  } catch (const Error& e) {
    if (state == Lookup::Corrupt)
      throw Error(ErrorKind::CacheError,
                  fmt::format("corrupt cache entry for {} quarantined; refetch failed: {}",
                              request.geo, e.what()));
    throw;
  }
  // Parse before storing so an unreadable response never lands in the cache.
  auto parsed = parse_interest_over_time_csv(body);
  store(request, body);
  return parsed;
}

fs::path default_cache_dir() {
  if (const char* env = std::getenv("TRENDNET_CACHE_DIR"); env && *env) return env;
  return ".trendnet-cache";
}

TrendsTimeCsv cached_fetch(const FetchRequest& request, Transport& transport,
                           const fs::path& cache_dir) {
  CachedFetcher fetcher(transport, cache_dir);
  return fetcher.fetch(request);
}

}  // namespace trendnet
