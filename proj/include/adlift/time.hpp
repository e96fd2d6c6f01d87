#ifndef ADLIFT_TIME_HPP
#define ADLIFT_TIME_HPP

#include <cstdint>
#include <string>

namespace adlift {

// Civil (wall-clock) date-time fields as written in a timestamp.
struct CivilTime {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..31
    int hour = 0;
    int minute = 0;
    int second = 0;
};

// A point in time: UTC epoch seconds plus the UTC offset the source text
// carried. The offset is kept so calendar features reflect the local clock.
struct Timestamp {
    std::int64_t epoch_sec = 0;
    int offset_min = 0;

    friend bool operator==(const Timestamp& a, const Timestamp& b) {
        return a.epoch_sec == b.epoch_sec && a.offset_min == b.offset_min;
    }
};

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

// 0 = Monday ... 6 = Sunday.
int weekday_monday0(std::int64_t days_since_epoch);

Timestamp make_timestamp(const CivilTime& civil, int offset_min);
CivilTime civil_time(const Timestamp& ts); // in the timestamp's own offset
int weekday_monday0(const Timestamp& ts);

// RFC 3339 date-time, e.g. "2019-06-03T21:30:00Z" or "...+02:00".
// Throws DataError on malformed input or impossible dates.
Timestamp parse_rfc3339(const std::string& text);
std::string format_rfc3339(const Timestamp& ts);

bool is_leap_year(int year);
int days_in_month(int year, int month);

} // namespace adlift

#endif
