#ifndef ADLIFT_KERNEL_SMOOTHER_HPP
#define ADLIFT_KERNEL_SMOOTHER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "adlift/core_data.hpp"

namespace adlift {

// Bounded-support kernels on [-1, 1].
enum class KernelId { triangular, epanechnikov, quartic, triweight, tricube };

inline constexpr KernelId kAllKernels[] = {KernelId::triangular, KernelId::epanechnikov,
                                           KernelId::quartic, KernelId::triweight,
                                           KernelId::tricube};

std::string kernel_name(KernelId k);
KernelId kernel_from_name(const std::string& name); // throws ConfigError if unknown

// K(u). Throws DomainError for |u| > 1. All five kernels vanish at |u| = 1.
double kernel_value(KernelId k, double u);

struct SmootherConfig {
    KernelId kernel = KernelId::triangular;
    int bandwidth = 8; // h >= 1, minutes
};

// Local weighted average with weights K(k / (h+1)), k = -h..h. Windows are
// truncated at the sequence edges and restricted to `available` points, with
// the weights renormalized over what remains. A window with no available
// point yields NaN ("missing"; callers decide how to treat it).
std::vector<double> smooth(std::span<const double> values,
                           std::span<const std::uint8_t> available, const SmootherConfig& cfg);
std::vector<double> smooth(std::span<const double> values, const SmootherConfig& cfg);

// (1/|subset|) * sum over subset of [y ln(rate) - rate - ln(y!)].
// Throws DomainError if a rate on the subset is <= 0 or the subset is empty.
double poisson_avg_loglik(std::span<const std::int64_t> observed,
                          std::span<const double> rates,
                          std::span<const std::size_t> subset);

// One grid cell of the bandwidth/kernel search.
struct CvCell {
    KernelId kernel = KernelId::triangular;
    int bandwidth = 1;
    double mean_loglik = 0.0;
    double mean_mse = 0.0;
    double sd_loglik = 0.0;     // across repeats
    int valid_repeats = 0;      // repeats contributing a defined score
    std::vector<double> repeat_logliks; // per-repeat scores, NaN where undefined
};

struct CvReport {
    std::vector<CvCell> cells; // kernel-major, bandwidth ascending within kernel
    int repeats = 0;
    std::uint64_t seed = 0;
    std::size_t best_index = 0;
    SmootherConfig best;
};

struct CvGrid {
    std::vector<KernelId> kernels{kAllKernels, kAllKernels + 5};
    int h_min = 1;
    int h_max = 60;
};

// Repeated 2-fold cross-validation: per repeat, the non-excluded minutes are
// split at random into equal halves; rates at validation minutes are smoothed
// from training minutes only and scored by the average Poisson log-likelihood
// (MSE is recorded alongside). Scores are averaged over repeats and the best
// cell maximizes the mean score; ties resolve to the smaller bandwidth, then
// to the kernel listed first. Bit-reproducible for a fixed seed.
CvReport select_bandwidth(const VisitSeries& series, const Mask& excluded, const CvGrid& grid,
                          int repeats, std::uint64_t seed);

void write_cv_report_csv(const CvReport& report, const std::string& path);

} // namespace adlift

#endif
