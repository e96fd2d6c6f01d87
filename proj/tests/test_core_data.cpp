#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adlift/core_data.hpp"
#include "adlift/errors.hpp"
#include "adlift/rng.hpp"
#include "test_util.hpp"

using namespace adlift;

namespace {

VisitSeries tiny_series(std::vector<std::int64_t> counts) {
    VisitSeries s;
    s.start = parse_rfc3339("2019-01-01T00:00:00Z");
    s.counts = std::move(counts);
    return s;
}

} // namespace

TEST_CASE("load_visits parses a well-formed file") {
    testutil::TempDir dir("visits_ok");
    testutil::write_file(dir.file("v.csv"), "timestamp,visits\n"
                                            "2019-01-01T00:00:00Z,5\n"
                                            "2019-01-01T00:01:00Z,0\n"
                                            "2019-01-01T00:02:00Z,7\n");
    const VisitSeries s = load_visits(dir.file("v.csv"));
    CHECK(s.n() == 3);
    CHECK(s.counts == std::vector<std::int64_t>{5, 0, 7});
    CHECK(format_rfc3339(s.start) == "2019-01-01T00:00:00Z");
}

TEST_CASE("load_visits reports the first missing minute") {
    testutil::TempDir dir("visits_gap");
    testutil::write_file(dir.file("v.csv"), "timestamp,visits\n"
                                            "2019-01-01T00:00:00Z,5\n"
                                            "2019-01-01T00:02:00Z,7\n");
    try {
        load_visits(dir.file("v.csv"));
        FAIL("expected GapError");
    } catch (const GapError& e) {
        CHECK(e.first_missing() == "2019-01-01T00:01:00Z");
    }
}

TEST_CASE("load_visits rejects a negative count with its row number") {
    testutil::TempDir dir("visits_neg");
    testutil::write_file(dir.file("v.csv"), "timestamp,visits\n"
                                            "2019-01-01T00:00:00Z,5\n"
                                            "2019-01-01T00:01:00Z,-1\n");
    try {
        load_visits(dir.file("v.csv"));
        FAIL("expected ValueError");
    } catch (const ValueError& e) {
        CHECK(e.row() == 2);
    }
}

TEST_CASE("visit series round-trips through CSV exactly") {
    Rng rng(7);
    VisitSeries s;
    s.start = parse_rfc3339("2019-03-05T10:00:00+01:00");
    for (int i = 0; i < 500; ++i)
        s.counts.push_back(static_cast<std::int64_t>(rng.below(1000)));

    testutil::TempDir dir("visits_rt");
    write_visits(s, dir.file("v.csv"));
    const VisitSeries back = load_visits(dir.file("v.csv"));
    CHECK(back == s);
}

TEST_CASE("load_ads converts second-precision stamps to minute offsets") {
    testutil::TempDir dir("ads_ok");
    const VisitSeries series = tiny_series(std::vector<std::int64_t>(10, 1));
    testutil::write_file(dir.file("a.csv"),
                         "end_time,motive,position,channel\n"
                         "2019-01-01T00:01:30Z,spot4,first,channel2\n");
    const AdSchedule ads = load_ads(dir.file("a.csv"), series);
    REQUIRE(ads.m() == 1);
    CHECK(ads.ads[0].end_time == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(ads.ads[0].motive == motive_index("spot4"));
    CHECK(ads.ads[0].position == position_index("first"));
    CHECK(ads.ads[0].channel == channel_index("channel2"));
}

TEST_CASE("load_ads sorts unsorted input") {
    testutil::TempDir dir("ads_sort");
    const VisitSeries series = tiny_series(std::vector<std::int64_t>(10, 1));
    testutil::write_file(dir.file("a.csv"), "end_time,motive,position,channel\n"
                                            "2019-01-01T00:05:00Z,spot1,last,channel1\n"
                                            "2019-01-01T00:01:00Z,spot2,first,channel2\n"
                                            "2019-01-01T00:03:00Z,spot3,other,channel3\n");
    const AdSchedule ads = load_ads(dir.file("a.csv"), series);
    REQUIRE(ads.m() == 3);
    CHECK(ads.ads[0].end_time <= ads.ads[1].end_time);
    CHECK(ads.ads[1].end_time <= ads.ads[2].end_time);
    CHECK(ads.ads[0].motive == motive_index("spot2"));
}

TEST_CASE("load_ads rejects unknown levels and out-of-span ads") {
    testutil::TempDir dir("ads_bad");
    const VisitSeries series = tiny_series(std::vector<std::int64_t>(10, 1));
    testutil::write_file(dir.file("pos.csv"), "end_time,motive,position,channel\n"
                                              "2019-01-01T00:01:00Z,spot1,middle,channel1\n");
    CHECK_THROWS_AS(load_ads(dir.file("pos.csv"), series), ValueError);

    testutil::write_file(dir.file("range.csv"), "end_time,motive,position,channel\n"
                                                "2019-01-02T00:00:00Z,spot1,first,channel1\n");
    CHECK_THROWS_AS(load_ads(dir.file("range.csv"), series), RangeError);
}

TEST_CASE("ads round-trip through CSV") {
    const VisitSeries series = tiny_series(std::vector<std::int64_t>(1440, 1));
    AdSchedule ads;
    Rng rng(11);
    for (int j = 0; j < 25; ++j) {
        AdRecord ad;
        const std::int64_t sec = static_cast<std::int64_t>(rng.below(1440 * 60));
        ad.end_stamp = Timestamp{series.start.epoch_sec + sec, series.start.offset_min};
        ad.end_time = static_cast<double>(sec) / 60.0;
        ad.motive = static_cast<int>(rng.below(kMotiveLevels.size()));
        ad.position = static_cast<int>(rng.below(kPositionLevels.size()));
        ad.channel = static_cast<int>(rng.below(kChannelLevels.size()));
        ads.ads.push_back(ad);
    }
    std::stable_sort(ads.ads.begin(), ads.ads.end(),
                     [](const AdRecord& a, const AdRecord& b) { return a.end_time < b.end_time; });

    testutil::TempDir dir("ads_rt");
    write_ads(ads, dir.file("a.csv"));
    const AdSchedule back = load_ads(dir.file("a.csv"), series);
    REQUIRE(back.m() == ads.m());
    for (std::size_t j = 0; j < ads.m(); ++j) {
        CHECK(back.ads[j].end_time == ads.ads[j].end_time);
        CHECK(back.ads[j].motive == ads.ads[j].motive);
        CHECK(back.ads[j].position == ads.ads[j].position);
        CHECK(back.ads[j].channel == ads.ads[j].channel);
    }
}

TEST_CASE("exclusion mask covers (s, s+window]") {
    VisitSeries series = tiny_series(std::vector<std::int64_t>(60, 1));
    AdSchedule ads;
    AdRecord ad;
    ad.end_time = 10.5;
    ads.ads.push_back(ad);

    const Mask mask = exclusion_mask(series, ads, 30);
    CHECK(mask[9] == 0);  // minute 10
    CHECK(mask[10] == 1); // minute 11
    CHECK(mask[39] == 1); // minute 40
    CHECK(mask[40] == 0); // minute 41
}

TEST_CASE("zero window excludes nothing") {
    VisitSeries series = tiny_series(std::vector<std::int64_t>(20, 1));
    AdSchedule ads;
    AdRecord ad;
    ad.end_time = 5.0;
    ads.ads.push_back(ad);
    const Mask mask = exclusion_mask(series, ads, 0);
    for (auto b : mask)
        CHECK(b == 0);
}

TEST_CASE("two ads exclude the union of their windows") {
    VisitSeries series = tiny_series(std::vector<std::int64_t>(60, 1));
    AdSchedule ads;
    AdRecord a1, a2;
    a1.end_time = 5.0;
    a2.end_time = 8.0;
    ads.ads = {a1, a2};
    const Mask mask = exclusion_mask(series, ads, 30);
    for (long t = 6; t <= 38; ++t)
        CHECK(mask[static_cast<std::size_t>(t - 1)] == 1);
    CHECK(mask[4] == 0);  // minute 5
    CHECK(mask[38] == 0); // minute 39
}

TEST_CASE("exclusion mask is monotone in the window") {
    VisitSeries series = tiny_series(std::vector<std::int64_t>(200, 1));
    AdSchedule ads;
    Rng rng(3);
    for (int j = 0; j < 8; ++j) {
        AdRecord ad;
        ad.end_time = rng.uniform(0.0, 200.0);
        ads.ads.push_back(ad);
    }
    std::stable_sort(ads.ads.begin(), ads.ads.end(),
                     [](const AdRecord& a, const AdRecord& b) { return a.end_time < b.end_time; });
    for (int w1 = 0; w1 <= 20; w1 += 5) {
        const Mask m1 = exclusion_mask(series, ads, w1);
        const Mask m2 = exclusion_mask(series, ads, w1 + 7);
        for (std::size_t i = 0; i < m1.size(); ++i)
            if (m1[i])
                CHECK(m2[i]);
    }
}
