#include "adlift/time.hpp"

#include <cstdio>
#include <cstdlib>

#include "adlift/errors.hpp"

namespace adlift {

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static const int lengths[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year))
        return 29;
    return lengths[month - 1];
}

std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& year, int& month, int& day) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    year = static_cast<int>(y + (month <= 2));
}

int weekday_monday0(std::int64_t days) {
    return static_cast<int>(((days % 7) + 10) % 7); // day 0 (1970-01-01) is a Thursday
}

Timestamp make_timestamp(const CivilTime& c, int offset_min) {
    const std::int64_t days = days_from_civil(c.year, c.month, c.day);
    const std::int64_t local = days * 86400 + c.hour * 3600 + c.minute * 60 + c.second;
    return Timestamp{local - static_cast<std::int64_t>(offset_min) * 60, offset_min};
}

CivilTime civil_time(const Timestamp& ts) {
    const std::int64_t local = ts.epoch_sec + static_cast<std::int64_t>(ts.offset_min) * 60;
    std::int64_t days = local / 86400;
    std::int64_t rem = local % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    CivilTime c;
    civil_from_days(days, c.year, c.month, c.day);
    c.hour = static_cast<int>(rem / 3600);
    c.minute = static_cast<int>((rem % 3600) / 60);
    c.second = static_cast<int>(rem % 60);
    return c;
}

int weekday_monday0(const Timestamp& ts) {
    const std::int64_t local = ts.epoch_sec + static_cast<std::int64_t>(ts.offset_min) * 60;
    std::int64_t days = local / 86400;
    if (local % 86400 < 0)
        days -= 1;
    return weekday_monday0(days);
}

Timestamp parse_rfc3339(const std::string& text) {
    CivilTime c;
    int n = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &c.year, &c.month, &c.day,
                    &c.hour, &c.minute, &c.second, &n) != 6)
        throw DataError("invalid RFC 3339 timestamp: '" + text + "'");

    if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > days_in_month(c.year, c.month) ||
        c.hour > 23 || c.minute > 59 || c.second > 60)
        throw DataError("impossible date-time: '" + text + "'");
    if (c.second == 60) // leap second: fold onto the next minute boundary
        c.second = 59;

    const std::string zone = text.substr(static_cast<std::size_t>(n));
    int offset_min = 0;
    if (zone == "Z" || zone == "z") {
        offset_min = 0;
    } else if ((zone.size() == 6) && (zone[0] == '+' || zone[0] == '-') && zone[3] == ':') {
        int oh = 0, om = 0;
        if (std::sscanf(zone.c_str() + 1, "%2d:%2d", &oh, &om) != 2 || oh > 23 || om > 59)
            throw DataError("invalid UTC offset: '" + text + "'");
        offset_min = oh * 60 + om;
        if (zone[0] == '-')
            offset_min = -offset_min;
    } else {
        throw DataError("missing or invalid UTC offset: '" + text + "'");
    }
    return make_timestamp(c, offset_min);
}

std::string format_rfc3339(const Timestamp& ts) {
    const CivilTime c = civil_time(ts);
    char buf[40];
    if (ts.offset_min == 0) {
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month, c.day,
                      c.hour, c.minute, c.second);
    } else {
        const int om = ts.offset_min >= 0 ? ts.offset_min : -ts.offset_min;
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d%c%02d:%02d", c.year,
                      c.month, c.day, c.hour, c.minute, c.second,
                      ts.offset_min >= 0 ? '+' : '-', om / 60, om % 60);
    }
    return buf;
}

} // namespace adlift
