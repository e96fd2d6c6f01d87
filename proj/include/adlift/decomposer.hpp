#ifndef ADLIFT_DECOMPOSER_HPP
#define ADLIFT_DECOMPOSER_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "adlift/core_data.hpp"
#include "adlift/kernel_smoother.hpp"
#include "adlift/nelder_mead.hpp"
#include "adlift/spread.hpp"

namespace adlift {

// Contiguous run of ads whose likelihood factorizes away from the rest:
// consecutive ads within a group are <= 2h+d minutes apart, adjacent groups
// are separated by more. The window is the minute range whose likelihood can
// depend on the group's lifts.
struct AdGroup {
    std::size_t first_ad = 0; // index into the schedule
    std::size_t last_ad = 0;  // inclusive
    long window_lo = 1;       // 1-based minute, inclusive
    long window_hi = 0;

    std::size_t size() const noexcept { return last_ad - first_ad + 1; }
};

// Split wherever the gap between consecutive ad end times exceeds 2h + d.
// Windows are [first s - h, last s + d + h] clipped to [1, n].
std::vector<AdGroup> partition_groups(const AdSchedule& ads, int bandwidth, int cutoff,
                                      std::size_t n_minutes);

// z ln(rate) - rate - ln(z!). Throws DomainError for rate <= 0.
double poisson_logpmf(std::int64_t z, double rate);

struct FitOptions {
    int cutoff = 30;
    double lambda_floor = 1e-8;
    double theta_snap = 1e-6;   // lifts below this are treated as exactly zero
    double outer_rel_tol = 1e-8;
    int max_outer_iterations = 50;
    NelderMeadOptions nm{};
    std::optional<SpreadSpec> init_spec; // warm start for the spread parameters
};

// mu_t = sum over the given ads of theta_j * V_{s_j}(t), evaluated on the
// 1-based minute range [window_lo, window_hi].
std::vector<double> compute_mu(std::span<const double> thetas, std::span<const AdRecord> ads,
                               const SpreadSpec& spec, long window_lo, long window_hi);

// lambda_t = kernel-smoothed residuals z - mu (full availability), floored.
std::vector<double> compute_lambda(const VisitSeries& z, std::span<const double> mu,
                                   const SmootherConfig& cfg, double floor_eps = 1e-8);

// Sum of poisson_logpmf(z_t, mu_t + lambda_t) over the group window; mu and
// lambda are recomputed from the arguments (lambda depends on the lifts
// through the residuals z - mu).
double group_loglik(const VisitSeries& z, const AdGroup& group,
                    std::span<const AdRecord> group_ads, std::span<const double> thetas,
                    const SpreadSpec& spec, const SmootherConfig& cfg,
                    const FitOptions& opt = {});

struct GroupFitResult {
    std::vector<double> thetas;
    double loglik = 0.0;
    int evaluations = 0;
    bool converged = false;
};

// Maximize the group's log-likelihood over its lift vector with the spread
// fixed. Lifts are clamped to >= 0 inside the objective and boundary rests
// (|theta| < theta_snap) come back as exact zeros.
GroupFitResult fit_group_thetas(const VisitSeries& z, const AdGroup& group,
                                std::span<const AdRecord> group_ads, const SpreadSpec& spec,
                                const SmootherConfig& cfg, std::span<const double> init,
                                const FitOptions& opt = {});

struct SpreadFitResult {
    SpreadSpec spec;
    double loglik = 0.0; // over all group windows
    int evaluations = 0;
    bool converged = false;
};

// Maximize the summed group log-likelihoods over the family's free spread
// parameters (log-transformed) with all lifts fixed.
SpreadFitResult fit_spread_params(const VisitSeries& z, std::span<const AdGroup> groups,
                                  const AdSchedule& ads, std::span<const double> thetas,
                                  SpreadFamily family, const SmootherConfig& cfg,
                                  const SpreadSpec& init, const FitOptions& opt = {});

struct DecompositionFit {
    SpreadSpec spec;
    std::vector<double> thetas;  // per ad, schedule order
    std::vector<double> mu;      // per minute
    std::vector<double> lambda;  // per minute
    double total_loglik = 0.0;
    double avg_loglik = 0.0;
    std::size_t k = 0;           // free spread parameters + number of ads
    double aic = 0.0;
    int outer_iterations = 0;
    bool converged = false;
    std::vector<double> loglik_history; // after every alternation half-step
    std::vector<AdGroup> groups;
};

// Alternate lift estimation (per group, spread fixed) with spread estimation
// (lifts fixed) until the relative improvement of the total log-likelihood
// falls under outer_rel_tol or the iteration cap is reached.
DecompositionFit fit(const VisitSeries& z, const AdSchedule& ads, const SmootherConfig& cfg,
                     SpreadFamily family, const FitOptions& opt = {});

double aic_from_average(double avg_loglik, std::size_t n, std::size_t k);

struct WilksResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    bool optimizer_warning = false; // restricted beat the full model beyond tolerance
};

// Likelihood-ratio test of a nested family against a fuller one;
// df = difference in free spread parameters.
WilksResult wilks_test(double loglik_restricted, double loglik_full, int df);
WilksResult wilks_test(const DecompositionFit& restricted, const DecompositionFit& full);

struct ModelComparisonRow {
    SpreadFamily family = SpreadFamily::exponential;
    SpreadSpec spec;
    double mean_delay = 0.0;
    double mode_delay = 0.0;
    double avg_loglik = 0.0;
    double aic = 0.0;
    std::optional<double> wilks_p; // vs gengamma; absent for gengamma itself
    bool wilks_warning = false;
};

using ModelComparison = std::vector<ModelComparisonRow>;

// One row per fit; Wilks p-values are filled against the gengamma fit when
// it is present among the fits.
ModelComparison compare_models(std::span<const DecompositionFit> fits,
                               std::span<const SpreadFamily> families);

} // namespace adlift

#endif
