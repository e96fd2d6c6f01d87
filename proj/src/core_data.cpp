#include "adlift/core_data.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "adlift/errors.hpp"

namespace adlift {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open file: " + path);
    return in;
}

int level_index(std::string_view value, std::span<const std::string_view> levels) {
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] == value)
            return static_cast<int>(i);
    return -1;
}

} // namespace

std::vector<double> VisitSeries::counts_as_double() const {
    return std::vector<double>(counts.begin(), counts.end());
}

std::size_t AdSchedule::tied_end_times() const {
    std::size_t tied = 0;
    for (std::size_t j = 0; j < ads.size(); ++j) {
        const bool prev_same = j > 0 && ads[j - 1].end_time == ads[j].end_time;
        const bool next_same = j + 1 < ads.size() && ads[j + 1].end_time == ads[j].end_time;
        if (prev_same || next_same)
            ++tied;
    }
    return tied;
}

int motive_index(std::string_view level) { return level_index(level, kMotiveLevels); }
int position_index(std::string_view level) { return level_index(level, kPositionLevels); }
int channel_index(std::string_view level) { return level_index(level, kChannelLevels); }

VisitSeries load_visits(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "timestamp,visits")
        throw DataError("expected header 'timestamp,visits' in " + path);

    VisitSeries series;
    std::size_t row = 0;
    std::int64_t expected_epoch = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        ++row;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw ValueError("row " + std::to_string(row) + ": expected 2 fields", row);

        const Timestamp ts = parse_rfc3339(trim(fields[0]));
        if (row == 1) {
            series.start = ts;
            expected_epoch = ts.epoch_sec;
        } else if (ts.epoch_sec != expected_epoch) {
            if (ts.epoch_sec > expected_epoch) {
                const Timestamp missing{expected_epoch, series.start.offset_min};
                throw GapError("gap in visit series: first missing minute " +
                                   format_rfc3339(missing),
                               format_rfc3339(missing));
            }
            throw DataError("timestamps not ascending at row " + std::to_string(row));
        }

        const std::string value = trim(fields[1]);
        errno = 0;
        char* end = nullptr;
        const long long count = std::strtoll(value.c_str(), &end, 10);
        if (value.empty() || end == nullptr || *end != '\0' || errno != 0)
            throw ValueError("row " + std::to_string(row) + ": invalid count '" + value + "'",
                             row);
        if (count < 0)
            throw ValueError("row " + std::to_string(row) + ": negative count " + value, row);

        series.counts.push_back(count);
        expected_epoch += 60;
    }
    if (series.counts.empty())
        throw DataError("no data rows in " + path);
    return series;
}

void write_visits(const VisitSeries& series, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write file: " + path);
    out << "timestamp,visits\n";
    for (std::size_t i = 0; i < series.n(); ++i) {
        const Timestamp ts{series.start.epoch_sec + static_cast<std::int64_t>(i) * 60,
                           series.start.offset_min};
        out << format_rfc3339(ts) << ',' << series.counts[i] << '\n';
    }
}

AdSchedule load_ads(const std::string& path, const VisitSeries& series) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "end_time,motive,position,channel")
        throw DataError("expected header 'end_time,motive,position,channel' in " + path);

    AdSchedule schedule;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        ++row;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw ValueError("row " + std::to_string(row) + ": expected 4 fields", row);

        AdRecord ad;
        ad.end_stamp = parse_rfc3339(trim(fields[0]));
        ad.end_time =
            static_cast<double>(ad.end_stamp.epoch_sec - series.start.epoch_sec) / 60.0;
        if (ad.end_time < 0.0 || ad.end_time > static_cast<double>(series.n()))
            throw RangeError("row " + std::to_string(row) + ": ad at " +
                             format_rfc3339(ad.end_stamp) + " outside the series span");

        ad.motive = motive_index(trim(fields[1]));
        if (ad.motive < 0)
            throw ValueError("row " + std::to_string(row) + ": unknown motive '" +
                                 trim(fields[1]) + "'",
                             row);
        ad.position = position_index(trim(fields[2]));
        if (ad.position < 0)
            throw ValueError("row " + std::to_string(row) + ": unknown position '" +
                                 trim(fields[2]) + "'",
                             row);
        ad.channel = channel_index(trim(fields[3]));
        if (ad.channel < 0)
            throw ValueError("row " + std::to_string(row) + ": unknown channel '" +
                                 trim(fields[3]) + "'",
                             row);
        schedule.ads.push_back(ad);
    }

    std::stable_sort(schedule.ads.begin(), schedule.ads.end(),
                     [](const AdRecord& a, const AdRecord& b) { return a.end_time < b.end_time; });
    return schedule;
}

void write_ads(const AdSchedule& schedule, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write file: " + path);
    out << "end_time,motive,position,channel\n";
    for (const AdRecord& ad : schedule.ads) {
        out << format_rfc3339(ad.end_stamp) << ',' << kMotiveLevels[ad.motive] << ','
            << kPositionLevels[ad.position] << ',' << kChannelLevels[ad.channel] << '\n';
    }
}

Mask exclusion_mask(const VisitSeries& series, const AdSchedule& ads, int window_minutes) {
    if (window_minutes < 0)
        throw DomainError("exclusion window must be >= 0");
    Mask mask(series.n(), 0);
    const long n = static_cast<long>(series.n());
    for (const AdRecord& ad : ads.ads) {
        // minutes t with s < t <= s + window
        const long first = static_cast<long>(std::floor(ad.end_time)) + 1;
        const long last = static_cast<long>(std::floor(ad.end_time + window_minutes));
        for (long t = std::max(1L, first); t <= std::min(n, last); ++t)
            mask[static_cast<std::size_t>(t - 1)] = 1;
    }
    return mask;
}

} // namespace adlift
