#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <thread>

#include <json.hpp>

#include "generators.hpp"
#include "test_util.hpp"
#include "trendnet/dataset.hpp"
#include "trendnet/error.hpp"
#include "trendnet/fetch.hpp"
#include "trendnet/text.hpp"
#include "trendnet/trends_csv.hpp"

using namespace trendnet;
using testutil::TempDir;

namespace {

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::IoError;
}

const char* kMinimal =
    "Category: All categories\n"
    "\n"
    "Day,coronavirus: (Worldwide)\n"
    "2020-01-01,0\n"
    "2020-01-02,45\n"
    "2020-01-03,100\n";

}  // namespace

TEST(TimeCsv, MinimalDocument) {
  const auto doc = parse_interest_over_time_csv(kMinimal);
  EXPECT_EQ(doc.category, "All categories");
  EXPECT_EQ(doc.keyword, "coronavirus");
  EXPECT_EQ(doc.geo, "WORLD");
  EXPECT_EQ(doc.grid, DateGrid(make_date(2020, 1, 1), Step::Daily, 3));
  EXPECT_EQ(doc.values(), (std::vector<double>{0, 45, 100}));
  EXPECT_EQ(serialize_interest_over_time_csv(doc), kMinimal);
}

TEST(TimeCsv, BelowOneCell) {
  const std::string text = "Day,flu: (IT)\r\n2020-03-01,<1\r\n2020-03-02,3\r\n";
  const auto doc = parse_interest_over_time_csv(text);
  EXPECT_FALSE(doc.category);
  EXPECT_EQ(doc.values()[0], 0.5);
  EXPECT_TRUE(doc.cells[0].below_one);
  const auto out = serialize_interest_over_time_csv(doc);
  EXPECT_NE(out.find("2020-03-01,<1\n"), std::string::npos);
  EXPECT_EQ(parse_interest_over_time_csv(out), doc);
}

TEST(TimeCsv, WeeklyAndNamedGeo) {
  const auto doc = parse_interest_over_time_csv(
      "Week,masks: (United States)\n2020-01-05,10\n2020-01-12,20\n2020-01-19,15\n");
  EXPECT_EQ(doc.grid.step(), Step::Weekly);
  EXPECT_EQ(doc.geo, "US");
}

TEST(TimeCsv, Errors) {
  EXPECT_EQ(kind_of([] { parse_interest_over_time_csv("Month,x: (US)\n2020-01-01,1\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_interest_over_time_csv("Day,x (US)\n2020-01-01,1\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_interest_over_time_csv("Day,x: (US)\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_interest_over_time_csv("Day,x: (US)\n2020-01-01,abc\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_interest_over_time_csv("Day,x: (US)\n2020-01-01,101\n"); }), ErrorKind::InvalidValue);
  EXPECT_EQ(kind_of([] { parse_interest_over_time_csv("Day,x: (US)\n2020-01-01,1\n2020-01-03,1\n"); }),
            ErrorKind::GridMismatch);
  try {
    parse_interest_over_time_csv("Day,x: (US)\n2020-01-01,1\n2020-01-02,zz\n");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(TimeCsv, GeneratedRoundTrip) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 600; ++trial) {
    const auto doc = gen::time_csv(rng);
    const auto text = serialize_interest_over_time_csv(doc);
    const auto back = parse_interest_over_time_csv(text);
    ASSERT_EQ(back, doc) << text;
    EXPECT_EQ(serialize_interest_over_time_csv(back), text);
    for (const auto& c : back.cells)
      if (c.below_one) EXPECT_TRUE(c.rsv() > 0.0 && c.rsv() < 1.0);
  }
}

TEST(RegionCsv, ThreeRows) {
  const auto snap = parse_interest_by_region_csv(
      "Country,coronavirus: (1/1/20 - 1/7/20)\nUnited States,100\nItaly,85\nSingapore,40\n",
      make_date(2020, 1, 1), make_date(2020, 1, 7));
  EXPECT_EQ(snap.values.size(), 3u);
  EXPECT_EQ(snap.values.at("US"), 100.0);
  EXPECT_EQ(snap.values.at("IT"), 85.0);
  EXPECT_EQ(snap.values.at("SG"), 40.0);
  EXPECT_TRUE(snap.warnings.empty());
  EXPECT_EQ(snap.keyword, "coronavirus");
}

TEST(RegionCsv, UnknownAmbiguousBlankAndRenormalized) {
  const auto snap = parse_interest_by_region_csv(
      "Country,flu: (1/1/20 - 1/7/20)\nItaly,50\nAtlantis,90\nCongo,10\nSpain,\n\"Korea, Republic of\",25\n",
      make_date(2020, 1, 1), make_date(2020, 1, 7));
  EXPECT_EQ(snap.values.size(), 3u);
  EXPECT_EQ(snap.values.at("IT"), 100.0);
  EXPECT_EQ(snap.values.at("KR"), 50.0);
  EXPECT_EQ(snap.values.at("ES"), 0.0);
  ASSERT_EQ(snap.warnings.size(), 2u);
  EXPECT_NE(snap.warnings[0].find("Atlantis"), std::string::npos);
  EXPECT_NE(snap.warnings[1].find("ambiguous"), std::string::npos);
  EXPECT_EQ(kind_of([] {
              parse_interest_by_region_csv("Country,x: (w)\nItaly,1\n", make_date(2020, 1, 7),
                                           make_date(2020, 1, 1));
            }),
            ErrorKind::InvalidValue);
}

TEST(RegionLookup, NamesAndCodes) {
  EXPECT_EQ(resolve_region("United Kingdom").code, "GB");
  EXPECT_EQ(resolve_region("south korea").code, "KR");
  EXPECT_EQ(resolve_region("Iran").code, "IR");
  EXPECT_EQ(resolve_region("Hong Kong").code, "HK");
  EXPECT_EQ(resolve_region("DE").code, "DE");
  EXPECT_TRUE(resolve_region("Congo").ambiguous);
  EXPECT_FALSE(resolve_region("Narnia").code);
}

TEST(Dataset, FixtureLoads) {
  const auto data = load_dataset(load_manifest(testutil::fixture_manifest()));
  EXPECT_EQ(data.panel.size(), 54u);
  ASSERT_TRUE(data.reference);
  EXPECT_EQ(data.reference->geo(), "WORLD");
  EXPECT_FALSE(data.panel.find("WORLD"));
  EXPECT_EQ(data.snapshots.size(), 15u);
  for (const auto& s : data.snapshots) EXPECT_EQ(s.values.size(), 54u);
  for (std::size_t k = 1; k < data.snapshots.size(); ++k)
    EXPECT_LT(data.snapshots[k - 1].window_start, data.snapshots[k].window_start);
  for (const auto& s : data.panel.series())
    EXPECT_EQ(*std::max_element(s.values().begin(), s.values().end()), 100.0);
  const auto trimmed = trim_to_onset(data.panel, *data.reference, kDefaultOnsetThreshold);
  EXPECT_EQ(trimmed.grid().start(), make_date(2020, 1, 20));
}

TEST(Dataset, ListingOrderIrrelevant) {
  const auto path = testutil::fixture_manifest();
  auto doc = nlohmann::json::parse(read_file(path));
  std::mt19937 rng(3);
  auto files = doc["time_files"];
  std::shuffle(files.begin(), files.end(), rng);
  doc["time_files"] = files;
  auto regions = doc["region_files"];
  std::reverse(regions.begin(), regions.end());
  doc["region_files"] = regions;
  const auto shuffled = parse_manifest(doc.dump(), path.parent_path());
  const auto a = load_dataset(load_manifest(path));
  const auto b = load_dataset(shuffled);
  EXPECT_EQ(a.panel.labels(), b.panel.labels());
  for (std::size_t i = 0; i < a.panel.size(); ++i)
    EXPECT_TRUE(std::equal(a.panel[i].values().begin(), a.panel[i].values().end(), b.panel[i].values().begin()));
  ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) EXPECT_EQ(a.snapshots[i].values, b.snapshots[i].values);
}

TEST(Dataset, ManifestErrors) {
  const TempDir dir;
  write_file(dir / "time/US.csv", "Day,kw: (US)\n2020-01-01,1\n2020-01-02,5\n2020-01-03,3\n");
  write_file(dir / "time/IT.csv", "Day,kw: (IT)\n2020-01-01,4\n2020-01-02,5\n2020-01-03,3\n");
  write_file(dir / "time/FR.csv", "Day,other: (FR)\n2020-01-01,4\n2020-01-02,5\n2020-01-03,3\n");
  auto load = [&](const std::string& manifest) { return load_dataset(parse_manifest(manifest, dir.path())); };
  EXPECT_EQ(kind_of([&] { load(R"({"keyword":"kw","time_files":[{"geo":"US","path":"time/US.csv"}]})"); }),
            ErrorKind::InsufficientData);
  EXPECT_EQ(kind_of([&] {
              load(R"({"keyword":"kw","time_files":[{"geo":"US","path":"time/US.csv"},{"geo":"IT","path":"nope.csv"}]})");
            }),
            ErrorKind::IoError);
  EXPECT_EQ(kind_of([&] {
              load(R"({"keyword":"kw","time_files":[{"geo":"US","path":"time/US.csv"},{"geo":"US","path":"time/IT.csv"}]})");
            }),
            ErrorKind::DuplicateLocation);
  EXPECT_EQ(kind_of([&] {
              load(R"({"keyword":"kw","time_files":[{"geo":"US","path":"time/US.csv"},{"geo":"FR","path":"time/FR.csv"}]})");
            }),
            ErrorKind::KeywordMismatch);
  EXPECT_EQ(kind_of([&] { parse_manifest("{\"keyword\": ", dir.path()); }), ErrorKind::ParseError);
  const auto ok = load(R"({"keyword":"kw","time_files":[{"geo":"US","path":"time/US.csv"},{"geo":"IT","path":"time/IT.csv"}]})");
  EXPECT_EQ(ok.panel.size(), 2u);
  EXPECT_FALSE(ok.reference);
}

TEST(Dataset, OverlappingWindowsKeepStartOrder) {
  const TempDir dir;
  write_file(dir / "time/US.csv", "Day,kw: (US)\n2020-01-01,1\n2020-01-02,5\n2020-01-03,3\n");
  write_file(dir / "time/IT.csv", "Day,kw: (IT)\n2020-01-01,4\n2020-01-02,5\n2020-01-03,3\n");
  write_file(dir / "r/a.csv", "Country,kw: (a)\nItaly,10\n");
  write_file(dir / "r/b.csv", "Country,kw: (b)\nSpain,10\n");
  write_file(dir / "r/c.csv", "Country,kw: (c)\nChile,10\n");
  const auto data = load_dataset(parse_manifest(R"({"keyword":"kw",
    "time_files":[{"geo":"US","path":"time/US.csv"},{"geo":"IT","path":"time/IT.csv"}],
    "region_files":[{"start":"2020-01-05","end":"2020-01-11","path":"r/c.csv"},
                    {"start":"2020-01-01","end":"2020-01-07","path":"r/a.csv"},
                    {"start":"2020-01-03","end":"2020-01-09","path":"r/b.csv"}]})",
                                                dir.path()));
  ASSERT_EQ(data.snapshots.size(), 3u);
  EXPECT_TRUE(data.snapshots[0].values.count("IT"));
  EXPECT_TRUE(data.snapshots[1].values.count("ES"));
  EXPECT_TRUE(data.snapshots[2].values.count("CL"));
}

namespace {

class FakeTransport : public Transport {
 public:
  int failures_left = 0;
  int calls = 0;
  std::string body = kMinimal;

  std::string fetch(const FetchRequest&) override {
    ++calls;
    if (failures_left > 0) {
      --failures_left;
      throw Error(ErrorKind::FetchFailed, "simulated outage");
    }
    return body;
  }
};

struct FakeTime {
  std::chrono::steady_clock::time_point now{};
  std::vector<std::chrono::milliseconds> sleeps;

  CachedFetcher::Sleeper sleeper() {
    return [this](std::chrono::milliseconds d) {
      sleeps.push_back(d);
      now += d;
    };
  }
  CachedFetcher::Clock clock() {
    return [this] { return now; };
  }
};

const FetchRequest kRequest{"coronavirus", "WORLD", make_date(2020, 1, 1), make_date(2020, 1, 3), Step::Daily};

}  // namespace

TEST(Fetch, SecondRequestIsAHit) {
  const TempDir dir;
  FakeTransport t;
  FakeTime time;
  CachedFetcher f(t, dir.path(), {}, time.sleeper(), time.clock());
  const auto a = f.fetch(kRequest);
  const auto b = f.fetch(kRequest);
  EXPECT_EQ(a, b);
  EXPECT_EQ(t.calls, 1);
  EXPECT_EQ(f.stats().hits, 1u);
  EXPECT_EQ(f.stats().misses, 1u);
  EXPECT_EQ(read_file(f.entry_path(kRequest)), kMinimal);
  const auto meta = nlohmann::json::parse(read_file(f.sidecar_path(kRequest)));
  EXPECT_EQ(meta["sha256"], sha256_hex(kMinimal));
  EXPECT_EQ(meta["request"]["geo"], "WORLD");
  EXPECT_EQ(f.entry_path(kRequest).parent_path().filename(), kRequest.cache_key().substr(0, 2));

  // A fresh fetcher over the same directory still hits.
  CachedFetcher g(t, dir.path(), {}, time.sleeper(), time.clock());
  g.fetch(kRequest);
  EXPECT_EQ(t.calls, 1);
}

TEST(Fetch, RetriesWithBackoff) {
  const TempDir dir;
  FakeTransport t;
  t.failures_left = 2;
  FakeTime time;
  CachedFetcher f(t, dir.path(), {}, time.sleeper(), time.clock());
  const auto doc = f.fetch(kRequest);
  EXPECT_EQ(doc.cells.size(), 3u);
  EXPECT_EQ(t.calls, 3);
  const auto st = f.stats();
  EXPECT_EQ(st.backoff_delays,
            (std::vector<std::chrono::milliseconds>{std::chrono::milliseconds(500), std::chrono::milliseconds(1000)}));
}

TEST(Fetch, GivesUpAfterMaxAttempts) {
  const TempDir dir;
  FakeTransport t;
  t.failures_left = 100;
  FakeTime time;
  FetchPolicy policy;
  policy.max_attempts = 6;
  CachedFetcher f(t, dir.path(), policy, time.sleeper(), time.clock());
  EXPECT_EQ(kind_of([&] { f.fetch(kRequest); }), ErrorKind::FetchFailed);
  EXPECT_EQ(t.calls, 6);
  const auto delays = f.stats().backoff_delays;
  ASSERT_EQ(delays.size(), 5u);
  EXPECT_EQ(delays.back(), policy.max_backoff);
  EXPECT_FALSE(std::filesystem::exists(f.entry_path(kRequest)));
}

TEST(Fetch, RateLimitsDistinctRequests) {
  const TempDir dir;
  FakeTransport t;
  FakeTime time;
  CachedFetcher f(t, dir.path(), {}, time.sleeper(), time.clock());
  auto other = kRequest;
  other.geo = "US";
  f.fetch(kRequest);
  time.now += std::chrono::milliseconds(200);
  f.fetch(other);
  ASSERT_EQ(f.stats().rate_limit_delays.size(), 1u);
  EXPECT_EQ(f.stats().rate_limit_delays[0], std::chrono::milliseconds(800));
}

TEST(Fetch, CorruptEntryQuarantinedAndRefetched) {
  const TempDir dir;
  FakeTransport t;
  FakeTime time;
  CachedFetcher f(t, dir.path(), {}, time.sleeper(), time.clock());
  f.fetch(kRequest);
  write_file(f.entry_path(kRequest), "garbage");
  const auto doc = f.fetch(kRequest);
  EXPECT_EQ(doc.cells.size(), 3u);
  EXPECT_EQ(t.calls, 2);
  EXPECT_EQ(f.stats().quarantined, 1u);
  auto q = f.entry_path(kRequest);
  q += ".quarantined";
  EXPECT_EQ(read_file(q), "garbage");
  EXPECT_EQ(read_file(f.entry_path(kRequest)), kMinimal);

  std::filesystem::remove(f.sidecar_path(kRequest));
  t.failures_left = 100;
  EXPECT_EQ(kind_of([&] { f.fetch(kRequest); }), ErrorKind::CacheError);
}

TEST(Fetch, UnparseableResponseNotCached) {
  const TempDir dir;
  FakeTransport t;
  t.body = "<html>rate limited</html>";
  FakeTime time;
  CachedFetcher f(t, dir.path(), {}, time.sleeper(), time.clock());
  EXPECT_EQ(kind_of([&] { f.fetch(kRequest); }), ErrorKind::ParseError);
  EXPECT_FALSE(std::filesystem::exists(f.entry_path(kRequest)));
}

TEST(Fetch, ConcurrentCallersShareOneTransportCall) {
  const TempDir dir;
  FakeTransport t;
  std::vector<std::thread> threads;
  for (int k = 0; k < 8; ++k)
    threads.emplace_back([&] {
      CachedFetcher f(t, dir.path(), {}, [](std::chrono::milliseconds) {});
      f.fetch(kRequest);
    });
  for (auto& th : threads) th.join();
  EXPECT_EQ(t.calls, 1);
}

TEST(Fetch, CacheKeysDistinguishFields) {
  auto a = kRequest, b = kRequest;
  b.step = Step::Weekly;
  EXPECT_NE(a.cache_key(), b.cache_key());
  a.keyword = "a b";
  a.geo = "c";
  b = kRequest;
  b.keyword = "a";
  b.geo = "b c";
  EXPECT_NE(a.cache_key(), b.cache_key());
}

TEST(Fetch, ReplayFixtureOnset) {
  const TempDir dir;
  ReplayTransport replay(testutil::replay_dir());
  const FetchRequest r{"coronavirus", "WORLD", make_date(2020, 1, 1), make_date(2020, 3, 31), Step::Daily};
  const auto doc = cached_fetch(r, replay, dir.path());
  const auto world = LocationSeries("WORLD", doc.keyword, doc.grid, normalize_rsv(doc.values()));
  const auto us = LocationSeries("US", doc.keyword, doc.grid, normalize_rsv(doc.values()));
  const auto it = LocationSeries("IT", doc.keyword, doc.grid, normalize_rsv(doc.values()));
  const auto p = trim_to_onset(align_panel({us, it}), world, kDefaultOnsetThreshold);
  EXPECT_EQ(p.grid().start(), make_date(2020, 1, 20));

  auto missing = r;
  missing.geo = "ZZ";
  EXPECT_EQ(kind_of([&] { cached_fetch(missing, replay, dir.path()); }), ErrorKind::FetchFailed);
}
