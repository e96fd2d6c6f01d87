#ifndef ADLIFT_STATS_HPP
#define ADLIFT_STATS_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "adlift/errors.hpp"

namespace adlift {

inline double mean(std::span<const double> v) {
    if (v.empty())
        throw DomainError("mean of empty range");
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

inline double sample_variance(std::span<const double> v) {
    if (v.size() < 2)
        throw DomainError("variance needs at least 2 values");
    const double m = mean(v);
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

// Type-7 quantile (linear interpolation between order statistics); input must
// already be sorted ascending.
inline double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty())
        throw DomainError("quantile of empty range");
    if (p <= 0.0)
        return sorted.front();
    if (p >= 1.0)
        return sorted.back();
    const double h = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= sorted.size())
        return sorted.back();
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, p);
}

} // namespace adlift

#endif
