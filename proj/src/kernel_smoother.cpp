#include "adlift/kernel_smoother.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "adlift/errors.hpp"
#include "adlift/rng.hpp"

namespace adlift {

std::string kernel_name(KernelId k) {
    switch (k) {
    case KernelId::triangular: return "triangular";
    case KernelId::epanechnikov: return "epanechnikov";
    case KernelId::quartic: return "quartic";
    case KernelId::triweight: return "triweight";
    case KernelId::tricube: return "tricube";
    }
    return "unknown";
}

KernelId kernel_from_name(const std::string& name) {
    for (KernelId k : kAllKernels)
        if (kernel_name(k) == name)
            return k;
    throw ConfigError("unknown kernel '" + name + "'");
}

double kernel_value(KernelId k, double u) {
    const double a = std::fabs(u);
    if (a > 1.0)
        throw DomainError("kernel argument outside [-1, 1]");
    switch (k) {
    case KernelId::triangular:
        return 1.0 - a;
    case KernelId::epanechnikov:
        return 0.75 * (1.0 - u * u);
    case KernelId::quartic: {
        const double w = 1.0 - u * u;
        return (15.0 / 16.0) * w * w;
    }
    case KernelId::triweight: {
        const double w = 1.0 - u * u;
        return (35.0 / 32.0) * w * w * w;
    }
    case KernelId::tricube: {
        const double w = 1.0 - a * a * a;
        return (70.0 / 81.0) * w * w * w;
    }
    }
    throw DomainError("invalid kernel id");
}

namespace {

std::vector<double> kernel_weights(KernelId k, int h) {
    std::vector<double> w(static_cast<std::size_t>(2 * h + 1));
    for (int j = -h; j <= h; ++j)
        w[static_cast<std::size_t>(j + h)] =
            kernel_value(k, static_cast<double>(j) / static_cast<double>(h + 1));
    return w;
}

// Weighted average at index t over available in-range neighbours; NaN if none.
double smooth_at(std::span<const double> values, const std::uint8_t* available,
                 std::span<const double> weights, int h, std::size_t t) {
    const long n = static_cast<long>(values.size());
    const long lo = std::max(0L, static_cast<long>(t) - h);
    const long hi = std::min(n - 1, static_cast<long>(t) + h);
    double num = 0.0, den = 0.0;
    for (long i = lo; i <= hi; ++i) {
        if (available != nullptr && available[i] == 0)
            continue;
        const double w = weights[static_cast<std::size_t>(i - static_cast<long>(t) + h)];
        num += w * values[static_cast<std::size_t>(i)];
        den += w;
    }
    if (den <= 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    return num / den;
}

} // namespace

std::vector<double> smooth(std::span<const double> values,
                           std::span<const std::uint8_t> available, const SmootherConfig& cfg) {
    if (cfg.bandwidth < 1)
        throw DomainError("bandwidth must be >= 1");
    if (!available.empty() && available.size() != values.size())
        throw DomainError("values and availability must have equal length");
    const std::vector<double> w = kernel_weights(cfg.kernel, cfg.bandwidth);
    const std::uint8_t* avail = available.empty() ? nullptr : available.data();
    std::vector<double> out(values.size());
    for (std::size_t t = 0; t < values.size(); ++t)
        out[t] = smooth_at(values, avail, w, cfg.bandwidth, t);
    return out;
}

std::vector<double> smooth(std::span<const double> values, const SmootherConfig& cfg) {
    return smooth(values, {}, cfg);
}

double poisson_avg_loglik(std::span<const std::int64_t> observed, std::span<const double> rates,
                          std::span<const std::size_t> subset) {
    if (subset.empty())
        throw DomainError("poisson_avg_loglik: empty subset");
    double total = 0.0;
    for (std::size_t idx : subset) {
        const double rate = rates[idx];
        if (!(rate > 0.0))
            throw DomainError("poisson_avg_loglik: rate <= 0");
        const double y = static_cast<double>(observed[idx]);
        total += y * std::log(rate) - rate - std::lgamma(y + 1.0);
    }
    return total / static_cast<double>(subset.size());
}

CvReport select_bandwidth(const VisitSeries& series, const Mask& excluded, const CvGrid& grid,
                          int repeats, std::uint64_t seed) {
    if (repeats < 1)
        throw DomainError("select_bandwidth: repeats must be >= 1");
    if (grid.kernels.empty() || grid.h_min < 1 || grid.h_max < grid.h_min)
        throw DomainError("select_bandwidth: empty grid");
    if (!excluded.empty() && excluded.size() != series.n())
        throw DomainError("select_bandwidth: mask length mismatch");

    const std::size_t n = series.n();
    const std::vector<double> values = series.counts_as_double();

    std::vector<std::size_t> usable;
    usable.reserve(n);
    for (std::size_t t = 0; t < n; ++t)
        if (excluded.empty() || excluded[t] == 0)
            usable.push_back(t);
    if (usable.size() < 2)
        throw DomainError("select_bandwidth: fewer than 2 usable minutes");

    CvReport report;
    report.repeats = repeats;
    report.seed = seed;
    for (KernelId k : grid.kernels)
        for (int h = grid.h_min; h <= grid.h_max; ++h) {
            CvCell cell;
            cell.kernel = k;
            cell.bandwidth = h;
            cell.repeat_logliks.assign(static_cast<std::size_t>(repeats),
                                       std::numeric_limits<double>::quiet_NaN());
            report.cells.push_back(std::move(cell));
        }

    std::vector<double> mse_sums(report.cells.size(), 0.0);
    std::vector<double> ll_sums(report.cells.size(), 0.0);
    std::vector<double> ll_sumsq(report.cells.size(), 0.0);

    std::vector<std::size_t> order;
    Mask train(n, 0);
    std::vector<std::size_t> validation;

    for (int rep = 0; rep < repeats; ++rep) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
        order = usable;
        rng.shuffle(order);
        const std::size_t train_size = order.size() / 2;

        std::fill(train.begin(), train.end(), 0);
        validation.clear();
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i < train_size)
                train[order[i]] = 1;
            else
                validation.push_back(order[i]);
        }
        std::sort(validation.begin(), validation.end());

        for (std::size_t c = 0; c < report.cells.size(); ++c) {
            CvCell& cell = report.cells[c];
            const std::vector<double> w = kernel_weights(cell.kernel, cell.bandwidth);
            double ll = 0.0, mse = 0.0;
            std::size_t count = 0;
            for (std::size_t t : validation) {
                const double rate = smooth_at(values, train.data(), w, cell.bandwidth, t);
                if (!(rate > 0.0)) // NaN or degenerate zero rate
                    continue;
                const double y = values[t];
                ll += y * std::log(rate) - rate - std::lgamma(y + 1.0);
                mse += (y - rate) * (y - rate);
                ++count;
            }
            if (count > 0) {
                const double avg = ll / static_cast<double>(count);
                cell.repeat_logliks[static_cast<std::size_t>(rep)] = avg;
                ll_sums[c] += avg;
                ll_sumsq[c] += avg * avg;
                mse_sums[c] += mse / static_cast<double>(count);
                ++cell.valid_repeats;
            }
        }
    }

    bool have_best = false;
    for (std::size_t c = 0; c < report.cells.size(); ++c) {
        CvCell& cell = report.cells[c];
        if (cell.valid_repeats == 0)
            continue;
        const double r = static_cast<double>(cell.valid_repeats);
        cell.mean_loglik = ll_sums[c] / r;
        cell.mean_mse = mse_sums[c] / r;
        const double var = std::max(0.0, ll_sumsq[c] / r - cell.mean_loglik * cell.mean_loglik);
        cell.sd_loglik = std::sqrt(var);

        const CvCell& best = report.cells[report.best_index];
        const bool better =
            !have_best || cell.mean_loglik > best.mean_loglik ||
            (cell.mean_loglik == best.mean_loglik &&
             (cell.bandwidth < best.bandwidth ||
              (cell.bandwidth == best.bandwidth && c < report.best_index)));
        if (better) {
            report.best_index = c;
            have_best = true;
        }
    }
    if (!have_best)
        throw NumericalError("select_bandwidth: every grid cell was invalid");

    report.best = SmootherConfig{report.cells[report.best_index].kernel,
                                 report.cells[report.best_index].bandwidth};
    return report;
}

void write_cv_report_csv(const CvReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write file: " + path);
    out << "kernel,h,mean_loglik,mean_mse\n";
    char buf[128];
    for (const CvCell& cell : report.cells) {
        std::snprintf(buf, sizeof(buf), "%s,%d,%.10g,%.10g\n", kernel_name(cell.kernel).c_str(),
                      cell.bandwidth, cell.mean_loglik, cell.mean_mse);
        out << buf;
    }
}

} // namespace adlift
