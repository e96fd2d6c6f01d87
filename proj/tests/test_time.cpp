#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adlift/errors.hpp"
#include "adlift/time.hpp"

using namespace adlift;

TEST_CASE("rfc3339 parse and format round trip") {
    const Timestamp ts = parse_rfc3339("2019-06-03T21:30:00Z");
    CHECK(format_rfc3339(ts) == "2019-06-03T21:30:00Z");
    const CivilTime c = civil_time(ts);
    CHECK(c.year == 2019);
    CHECK(c.month == 6);
    CHECK(c.day == 3);
    CHECK(c.hour == 21);
    CHECK(c.minute == 30);
    CHECK(c.second == 0);
}

TEST_CASE("offsets shift the epoch but keep the wall clock") {
    const Timestamp utc = parse_rfc3339("2019-01-01T12:00:00Z");
    const Timestamp prague = parse_rfc3339("2019-01-01T12:00:00+01:00");
    CHECK(prague.epoch_sec == utc.epoch_sec - 3600);
    CHECK(civil_time(prague).hour == 12);
    CHECK(format_rfc3339(prague) == "2019-01-01T12:00:00+01:00");

    const Timestamp negative = parse_rfc3339("2019-01-01T12:00:00-05:30");
    CHECK(negative.epoch_sec == utc.epoch_sec + 5 * 3600 + 1800);
    CHECK(format_rfc3339(negative) == "2019-01-01T12:00:00-05:30");
}

TEST_CASE("2019-06-03 is a Monday") {
    const Timestamp ts = parse_rfc3339("2019-06-03T21:30:00Z");
    CHECK(weekday_monday0(ts) == 0);
    CHECK(weekday_monday0(parse_rfc3339("1970-01-01T00:00:00Z")) == 3); // Thursday
    CHECK(weekday_monday0(parse_rfc3339("2019-06-09T23:59:59Z")) == 6); // Sunday
}

TEST_CASE("leap years and month lengths") {
    CHECK(is_leap_year(2000));
    CHECK(!is_leap_year(1900));
    CHECK(is_leap_year(2020));
    CHECK(days_in_month(2020, 2) == 29);
    CHECK(days_in_month(2019, 2) == 28);
    const Timestamp ts = parse_rfc3339("2020-02-29T00:00:00Z");
    CHECK(civil_time(ts).day == 29);
}

TEST_CASE("malformed timestamps are rejected") {
    CHECK_THROWS_AS(parse_rfc3339("2019-06-03 21:30:00Z"), DataError);
    CHECK_THROWS_AS(parse_rfc3339("2019-06-03T21:30:00"), DataError);
    CHECK_THROWS_AS(parse_rfc3339("2019-13-03T21:30:00Z"), DataError);
    CHECK_THROWS_AS(parse_rfc3339("2019-02-29T00:00:00Z"), DataError);
    CHECK_THROWS_AS(parse_rfc3339("2019-06-03T24:00:00Z"), DataError);
    CHECK_THROWS_AS(parse_rfc3339("not a date"), DataError);
}

TEST_CASE("civil conversion is its own inverse across a wide range") {
    for (std::int64_t days = -200000; days <= 200000; days += 1234) {
        int y, m, d;
        civil_from_days(days, y, m, d);
        CHECK(days_from_civil(y, m, d) == days);
    }
}
