#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_util.hpp"
#include "trendnet/error.hpp"
#include "trendnet/timeseries.hpp"

using namespace trendnet;
using testutil::series;

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

const Date kJan1 = make_date(2020, 1, 1);

}  // namespace

TEST(Date, IsoRoundTrip) {
  auto d = parse_iso_date("2020-02-29");
  ASSERT_TRUE(d);
  EXPECT_EQ(format_iso_date(*d), "2020-02-29");
  EXPECT_FALSE(parse_iso_date("2019-02-29"));
  EXPECT_FALSE(parse_iso_date("2020-1-5"));
  EXPECT_FALSE(parse_iso_date("2020-01-05x"));
}

TEST(Date, UsShortDates) {
  EXPECT_EQ(parse_us_short_date("1/7/20"), make_date(2020, 1, 7));
  EXPECT_EQ(parse_us_short_date("12/31/2019"), make_date(2019, 12, 31));
  EXPECT_FALSE(parse_us_short_date("13/1/20"));
}

TEST(DateGrid, IndexAndSlice) {
  DateGrid g(kJan1, Step::Weekly, 5);
  EXPECT_EQ(g.back(), make_date(2020, 1, 29));
  EXPECT_EQ(g.index_of(make_date(2020, 1, 15)), 2u);
  EXPECT_FALSE(g.index_of(make_date(2020, 1, 16)));
  EXPECT_FALSE(g.index_of(make_date(2020, 2, 5)));
  EXPECT_EQ(g.slice(1, 3), DateGrid(make_date(2020, 1, 8), Step::Weekly, 3));
  EXPECT_EQ(kind_of([] { DateGrid(kJan1, Step::Daily, 0); }), ErrorKind::EmptySeries);
}

TEST(LocationSeries, RejectsOutOfRangeValues) {
  EXPECT_EQ(kind_of([] { series("US", kJan1, {0, 101}); }), ErrorKind::InvalidValue);
  EXPECT_EQ(kind_of([] { series("US", kJan1, {0, -1}); }), ErrorKind::InvalidValue);
}

TEST(NormalizeRsv, Examples) {
  EXPECT_EQ(normalize_rsv(std::vector<double>{0, 5, 10}), (std::vector<double>{0, 50, 100}));
  EXPECT_EQ(normalize_rsv(std::vector<double>{7, 7, 7}), (std::vector<double>{100, 100, 100}));
  EXPECT_EQ(normalize_rsv(std::vector<double>{0, 0, 0}), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(kind_of([] { normalize_rsv(std::vector<double>{}); }), ErrorKind::EmptySeries);
  EXPECT_EQ(kind_of([] { normalize_rsv(std::vector<double>{1, -2}); }), ErrorKind::InvalidValue);
}

TEST(NormalizeRsv, IdempotentAndRankPreserving) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> val(0.0, 5000.0);
  std::uniform_int_distribution<int> len(1, 80);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> raw(len(rng));
    for (auto& v : raw) v = trial % 3 == 0 ? std::floor(val(rng) / 500.0) : val(rng);
    const auto once = normalize_rsv(raw);
    const auto twice = normalize_rsv(once);
    EXPECT_EQ(*std::max_element(once.begin(), once.end()),
              *std::max_element(raw.begin(), raw.end()) > 0 ? 100.0 : 0.0);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      EXPECT_NEAR(once[i], twice[i], 1e-12);
      for (std::size_t j = 0; j < raw.size(); ++j) EXPECT_EQ(raw[i] < raw[j], once[i] < once[j]);
    }
  }
}

TEST(AlignPanel, IntersectsRanges) {
  std::vector<double> a(91, 1.0), b(84, 2.0);
  auto p = align_panel({series("US", kJan1, a), series("IT", make_date(2020, 1, 20), b)});
  EXPECT_EQ(p.grid(), DateGrid(make_date(2020, 1, 20), Step::Daily, 72));
  EXPECT_EQ(p.labels(), (std::vector<std::string>{"IT", "US"}));
  EXPECT_EQ(p.find("US")->size(), 72u);
}

TEST(AlignPanel, IdenticalGridsSortedByGeo) {
  auto p = align_panel({series("US", kJan1, {1, 2, 3}), series("AR", kJan1, {3, 2, 1})});
  EXPECT_EQ(p.grid(), DateGrid(kJan1, Step::Daily, 3));
  EXPECT_EQ(p[0].geo(), "AR");
}

TEST(AlignPanel, Errors) {
  EXPECT_EQ(kind_of([] {
              align_panel({series("US", kJan1, std::vector<double>(31, 1)),
                           series("IT", make_date(2020, 3, 1), std::vector<double>(31, 1))});
            }),
            ErrorKind::NoOverlap);
  EXPECT_EQ(kind_of([] { align_panel({series("US", kJan1, {1, 2})}); }), ErrorKind::InsufficientData);
  EXPECT_EQ(kind_of([] { align_panel({series("US", kJan1, {1, 2}), series("US", kJan1, {1, 2})}); }),
            ErrorKind::DuplicateLocation);
  EXPECT_EQ(kind_of([] {
              align_panel({series("US", kJan1, {1, 2}), series("IT", kJan1, {1, 2}, "other")});
            }),
            ErrorKind::KeywordMismatch);
  EXPECT_EQ(kind_of([] {
              align_panel({series("US", kJan1, {1, 2}),
                           series("IT", kJan1, {1, 2}, "kw", Step::Weekly)});
            }),
            ErrorKind::GridMismatch);
  EXPECT_EQ(kind_of([] {
              align_panel({series("US", kJan1, {1, 2, 3}, "kw", Step::Weekly),
                           series("IT", make_date(2020, 1, 2), {1, 2, 3}, "kw", Step::Weekly)});
            }),
            ErrorKind::GridMismatch);
}

TEST(AlignPanel, OrderIndependentAndNoLonger) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> off(0, 20), len(25, 60), v(0, 100);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<LocationSeries> in;
    std::size_t shortest = 1000;
    for (int k = 0; k < 5; ++k) {
      std::vector<double> vals(len(rng));
      for (auto& x : vals) x = v(rng);
      shortest = std::min(shortest, vals.size());
      in.push_back(series(std::string(1, char('A' + k)) + "X", kJan1 + std::chrono::days(off(rng)), vals));
    }
    auto shuffled = in;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto p = align_panel(in);
    const auto q = align_panel(shuffled);
    EXPECT_LE(p.grid().size(), shortest);
    EXPECT_EQ(p.grid(), q.grid());
    for (std::size_t i = 0; i < p.size(); ++i) {
      EXPECT_EQ(p[i].geo(), q[i].geo());
      EXPECT_TRUE(std::equal(p[i].values().begin(), p[i].values().end(), q[i].values().begin()));
    }
  }
}

TEST(TrimToOnset, StartsAtFirstCrossing) {
  auto p = align_panel({series("US", kJan1, {1, 2, 3, 4, 5}), series("IT", kJan1, {5, 4, 3, 2, 1})});
  auto ref = series("WORLD", kJan1, {0, 0.5, 1, 0, 40});
  auto t = trim_to_onset(p, ref, 1.0);
  EXPECT_EQ(t.grid(), DateGrid(make_date(2020, 1, 3), Step::Daily, 3));
  EXPECT_EQ(t.onset(), make_date(2020, 1, 3));
  EXPECT_EQ(t.find("US")->values()[0], 3.0);
}

TEST(TrimToOnset, ReferenceAtMaxLeavesPanel) {
  auto p = align_panel({series("US", kJan1, {1, 2, 3}), series("IT", kJan1, {3, 2, 1})});
  auto t = trim_to_onset(p, series("WORLD", kJan1, {100, 50, 20}), 1.0);
  EXPECT_EQ(t.grid(), p.grid());
}

TEST(TrimToOnset, Errors) {
  auto p = align_panel({series("US", kJan1, {1, 2, 3}), series("IT", kJan1, {3, 2, 1})});
  EXPECT_EQ(kind_of([&] { trim_to_onset(p, series("WORLD", kJan1, {0, 0.5, 0.9}), 1.0); }),
            ErrorKind::OnsetNotFound);
  EXPECT_EQ(kind_of([&] { trim_to_onset(p, series("WORLD", kJan1, {1, 2, 3}), 0.0); }),
            ErrorKind::InvalidValue);
  EXPECT_EQ(kind_of([&] { trim_to_onset(p, series("WORLD", kJan1, {1, 2, 3}), 100.5); }),
            ErrorKind::InvalidValue);
  EXPECT_EQ(kind_of([&] { trim_to_onset(p, series("WORLD", make_date(2020, 1, 2), {1, 2, 3}), 1.0); }),
            ErrorKind::GridMismatch);
}

TEST(TrimToOnset, SuffixAndIdempotent) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> v(0.0, 100.0);
  std::uniform_int_distribution<int> len(3, 60);
  std::uniform_real_distribution<double> th(0.5, 60.0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = len(rng);
    std::vector<double> a(n), b(n), r(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = v(rng), b[i] = v(rng), r[i] = v(rng);
    r[n - 1] = 100;
    const auto p = align_panel({series("AA", kJan1, a), series("BB", kJan1, b)});
    const auto ref = series("WORLD", kJan1, r);
    const double t = th(rng);
    const auto once = trim_to_onset(p, ref, t);
    const auto twice = trim_to_onset(once, ref, t);
    EXPECT_EQ(once.grid().back(), p.grid().back());
    EXPECT_TRUE(p.grid().index_of(once.grid().start()));
    EXPECT_EQ(once.grid(), twice.grid());
    EXPECT_EQ(once.onset(), twice.onset());
  }
}
