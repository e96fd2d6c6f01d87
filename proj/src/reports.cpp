#include "adlift/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "adlift/errors.hpp"
#include "adlift/stats.hpp"

namespace adlift {

namespace {
constexpr double kDefaultProbs[] = {0.05, 0.25, 0.50, 0.75, 0.95};
}

QuantileReport ad_window_quantiles(const VisitSeries& series, const AdSchedule& ads, int before,
                                   int after, std::span<const double> probs) {
    if (before < 0 || after < 0)
        throw DomainError("ad_window_quantiles: window bounds must be >= 0");
    QuantileReport report;
    report.before = before;
    report.after = after;
    report.probs = probs.empty() ? std::vector<double>(std::begin(kDefaultProbs),
                                                       std::end(kDefaultProbs))
                                 : std::vector<double>(probs.begin(), probs.end());

    const long n = static_cast<long>(series.n());
    std::vector<double> window_counts;
    for (int r = -before; r <= after; ++r) {
        window_counts.clear();
        for (const AdRecord& ad : ads.ads) {
            // relative minute 0 = the minute containing the ad's end
            const long t = static_cast<long>(std::floor(ad.end_time)) + 1 + r;
            if (t < 1 || t > n)
                continue;
            window_counts.push_back(
                static_cast<double>(series.counts[static_cast<std::size_t>(t - 1)]));
        }
        report.rel_minutes.push_back(r);
        std::vector<double> row;
        if (!window_counts.empty()) {
            std::sort(window_counts.begin(), window_counts.end());
            for (double p : report.probs)
                row.push_back(quantile_sorted(window_counts, p));
        } else {
            row.assign(report.probs.size(), std::numeric_limits<double>::quiet_NaN());
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

void write_quantile_csv(const QuantileReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write file: " + path);
    out << "# quantile convention: type-7 (linear interpolation between order statistics)\n";
    out << "rel_minute";
    char buf[64];
    for (double p : report.probs) {
        std::snprintf(buf, sizeof(buf), ",q%g", p * 100.0);
        out << buf;
    }
    out << '\n';
    for (std::size_t i = 0; i < report.rel_minutes.size(); ++i) {
        out << report.rel_minutes[i];
        for (double v : report.rows[i]) {
            std::snprintf(buf, sizeof(buf), ",%.10g", v);
            out << buf;
        }
        out << '\n';
    }
}

ThetaDensityReport theta_density(std::span<const double> thetas, double bandwidth,
                                 double bin_width) {
    if (!(bandwidth > 0.0) || !(bin_width > 0.0))
        throw DomainError("theta_density: bandwidth and bin width must be positive");
    ThetaDensityReport report;
    report.bandwidth = bandwidth;
    report.bin_width = bin_width;

    std::vector<double> nonzero;
    for (double t : thetas)
        if (t != 0.0)
            nonzero.push_back(t);
    report.n_nonzero = nonzero.size();
    if (nonzero.empty()) {
        report.empty = true;
        return report;
    }

    const auto [lo_it, hi_it] = std::minmax_element(nonzero.begin(), nonzero.end());
    const double lo = *lo_it - bandwidth;
    const double hi = *hi_it + bandwidth;
    const double step = std::min(1.0, bandwidth / 20.0);
    const std::size_t points = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;

    const double norm = 1.0 / (static_cast<double>(nonzero.size()) * bandwidth);
    for (std::size_t i = 0; i < points; ++i) {
        const double x = lo + static_cast<double>(i) * step;
        double density = 0.0;
        for (double t : nonzero) {
            const double u = (x - t) / bandwidth;
            if (std::fabs(u) <= 1.0)
                density += 0.75 * (1.0 - u * u);
        }
        report.grid.push_back(x);
        report.density.push_back(density * norm);
    }

    const double first_bin = std::floor(*lo_it / bin_width) * bin_width;
    const std::size_t n_bins =
        static_cast<std::size_t>(std::floor((*hi_it - first_bin) / bin_width)) + 1;
    report.bin_lo.resize(n_bins);
    report.bin_count.assign(n_bins, 0);
    for (std::size_t b = 0; b < n_bins; ++b)
        report.bin_lo[b] = first_bin + static_cast<double>(b) * bin_width;
    for (double t : nonzero) {
        std::size_t b = static_cast<std::size_t>(std::floor((t - first_bin) / bin_width));
        b = std::min(b, n_bins - 1);
        ++report.bin_count[b];
    }
    return report;
}

void write_theta_density_csv(const ThetaDensityReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write file: " + path);
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "# epanechnikov kde, bandwidth=%g; histogram bins are [x, x+%g)\n",
                  report.bandwidth, report.bin_width);
    out << buf;
    out << "kind,x,y\n";
    if (report.empty) {
        out << "# warning: no non-zero lifts\n";
        return;
    }
    for (std::size_t i = 0; i < report.grid.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "density,%.10g,%.10g\n", report.grid[i],
                      report.density[i]);
        out << buf;
    }
    for (std::size_t b = 0; b < report.bin_lo.size(); ++b) {
        std::snprintf(buf, sizeof(buf), "histogram,%.10g,%ld\n", report.bin_lo[b],
                      report.bin_count[b]);
        out << buf;
    }
}

} // namespace adlift
