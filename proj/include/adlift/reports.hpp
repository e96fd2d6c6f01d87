#ifndef ADLIFT_REPORTS_HPP
#define ADLIFT_REPORTS_HPP

#include <span>
#include <string>
#include <vector>

#include "adlift/core_data.hpp"

namespace adlift {

// Empirical visit quantiles around ad end times, raw counts (no diurnal
// adjustment). Relative minute 0 is the minute containing the ad's end.
struct QuantileReport {
    int before = 15;
    int after = 45;
    std::vector<double> probs;            // e.g. {0.05, 0.25, 0.5, 0.75, 0.95}
    std::vector<int> rel_minutes;         // -before .. +after
    std::vector<std::vector<double>> rows; // per relative minute, one value per prob
};

QuantileReport ad_window_quantiles(const VisitSeries& series, const AdSchedule& ads,
                                   int before = 15, int after = 45,
                                   std::span<const double> probs = {});

// CSV with a header note naming the quantile convention.
void write_quantile_csv(const QuantileReport& report, const std::string& path);

// Epanechnikov kernel density plus histogram of the non-zero lifts.
struct ThetaDensityReport {
    double bandwidth = 20.0;
    double bin_width = 10.0;
    std::vector<double> grid;
    std::vector<double> density;
    std::vector<double> bin_lo;   // histogram bin lower edges
    std::vector<long> bin_count;
    std::size_t n_nonzero = 0;
    bool empty = false; // no non-zero lifts: report carries only a warning
};

ThetaDensityReport theta_density(std::span<const double> thetas, double bandwidth = 20.0,
                                 double bin_width = 10.0);

void write_theta_density_csv(const ThetaDensityReport& report, const std::string& path);

} // namespace adlift

#endif
