#ifndef ADLIFT_CORE_DATA_HPP
#define ADLIFT_CORE_DATA_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adlift/time.hpp"

namespace adlift {

// 0/1 per-minute flag sequence.
using Mask = std::vector<std::uint8_t>;

// Minute-indexed visit counts. Minute t (1-based, t = 1..n) covers the
// interval [t-1, t) in minutes after `start`; counts[t-1] holds its visits.
struct VisitSeries {
    Timestamp start;
    std::vector<std::int64_t> counts;

    std::size_t n() const noexcept { return counts.size(); }
    std::vector<double> counts_as_double() const;

    friend bool operator==(const VisitSeries& a, const VisitSeries& b) {
        return a.start == b.start && a.counts == b.counts;
    }
};

// Declared level sets for the ad attributes.
inline constexpr std::array<std::string_view, 12> kMotiveLevels = {
    "sponsoring", "spot1", "spot2", "spot3",  "spot4",  "spot5",
    "spot6",      "spot7", "spot8", "spot9", "spot10", "spot11"};
inline constexpr std::array<std::string_view, 5> kPositionLevels = {
    "first", "second", "other", "penultimate", "last"};
inline constexpr std::array<std::string_view, 7> kChannelLevels = {
    "channel1", "channel2", "channel3", "channel4", "channel5", "channel6", "channel7"};

struct AdRecord {
    double end_time = 0.0; // minutes after series start, second precision
    Timestamp end_stamp;
    int motive = 0;   // index into kMotiveLevels
    int position = 0; // index into kPositionLevels
    int channel = 0;  // index into kChannelLevels
};

struct AdSchedule {
    std::vector<AdRecord> ads; // sorted ascending by end_time; ties permitted

    std::size_t m() const noexcept { return ads.size(); }
    // Count of ads sharing an end_time with another ad (simulcast broadcasts).
    std::size_t tied_end_times() const;
};

// CSV with header "timestamp,visits"; RFC 3339 timestamps, minute-spaced
// ascending, non-negative integer counts. Throws GapError on a missing
// minute and ValueError (with 1-based data row) on bad values.
VisitSeries load_visits(const std::string& path);
void write_visits(const VisitSeries& series, const std::string& path);

// CSV with header "end_time,motive,position,channel"; seconds-precision
// RFC 3339 end times. Output sorted by end_time. Throws RangeError for ads
// outside [start, start + n minutes] and ValueError for unknown levels.
AdSchedule load_ads(const std::string& path, const VisitSeries& series);
void write_ads(const AdSchedule& schedule, const std::string& path);

// mask[t-1] = true iff some ad with end offset s has s < t <= s + window.
// Used to drop post-ad minutes from bandwidth selection.
Mask exclusion_mask(const VisitSeries& series, const AdSchedule& ads, int window_minutes);

int motive_index(std::string_view level);   // -1 if unknown
int position_index(std::string_view level); // -1 if unknown
int channel_index(std::string_view level);  // -1 if unknown

} // namespace adlift

#endif
