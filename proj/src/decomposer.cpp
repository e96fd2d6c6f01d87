#include "adlift/decomposer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "adlift/errors.hpp"
#include "adlift/special_functions.hpp"

namespace adlift {
namespace {

std::vector<double> kernel_weights(KernelId k, int h) {
    std::vector<double> w(static_cast<std::size_t>(2 * h + 1));
    for (int j = -h; j <= h; ++j)
        w[static_cast<std::size_t>(j + h)] =
            kernel_value(k, static_cast<double>(j) / static_cast<double>(h + 1));
    return w;
}

// Per-group likelihood evaluator. Pre-extracts the window, pads it by h
// minutes for residual smoothing, and caches everything that does not change
// with the lifts (kernel weights, edge-truncated denominators, ln z!), plus
// the per-ad spread profiles for the current spread parameters.
class GroupWorkspace {
public:
    GroupWorkspace(const VisitSeries& z, const AdGroup& group, std::span<const AdRecord> ads,
                   const SmootherConfig& cfg, const FitOptions& opt)
        : ads_(ads), win_lo_(group.window_lo), win_hi_(group.window_hi), h_(cfg.bandwidth),
          floor_eps_(opt.lambda_floor) {
        const long n = static_cast<long>(z.n());
        pad_lo_ = std::max(1L, win_lo_ - h_);
        pad_hi_ = std::min(n, win_hi_ + h_);

        const std::size_t pad_size = static_cast<std::size_t>(pad_hi_ - pad_lo_ + 1);
        z_pad_.resize(pad_size);
        for (long t = pad_lo_; t <= pad_hi_; ++t)
            z_pad_[static_cast<std::size_t>(t - pad_lo_)] =
                static_cast<double>(z.counts[static_cast<std::size_t>(t - 1)]);

        const std::size_t win_size = static_cast<std::size_t>(win_hi_ - win_lo_ + 1);
        z_win_.resize(win_size);
        lgamma_z_.resize(win_size);
        for (long t = win_lo_; t <= win_hi_; ++t) {
            const std::int64_t count = z.counts[static_cast<std::size_t>(t - 1)];
            z_win_[static_cast<std::size_t>(t - win_lo_)] = static_cast<double>(count);
            lgamma_z_[static_cast<std::size_t>(t - win_lo_)] =
                std::lgamma(static_cast<double>(count) + 1.0);
        }

        weights_ = kernel_weights(cfg.kernel, h_);
        weight_den_.resize(win_size);
        for (long t = win_lo_; t <= win_hi_; ++t) {
            double den = 0.0;
            for (int k = -h_; k <= h_; ++k) {
                const long i = t + k;
                if (i >= 1 && i <= n)
                    den += weights_[static_cast<std::size_t>(k + h_)];
            }
            weight_den_[static_cast<std::size_t>(t - win_lo_)] = den;
        }

        mu_pad_.assign(pad_size, 0.0);
        residual_.assign(pad_size, 0.0);
    }

    void set_spec(const SpreadSpec& spec) {
        profiles_.clear();
        profiles_.reserve(ads_.size());
        for (const AdRecord& ad : ads_)
            profiles_.push_back(discretized_profile(spec, ad.end_time));
    }

    std::size_t dim() const { return ads_.size(); }

    double loglik(std::span<const double> thetas) const {
        std::fill(mu_pad_.begin(), mu_pad_.end(), 0.0);
        for (std::size_t j = 0; j < ads_.size(); ++j) {
            const SpreadProfile& p = profiles_[j];
            const double theta = thetas[j];
            if (theta == 0.0)
                continue;
            for (std::size_t i = 0; i < p.mass.size(); ++i) {
                const long t = p.first_minute + static_cast<long>(i);
                if (t < pad_lo_ || t > pad_hi_)
                    continue;
                mu_pad_[static_cast<std::size_t>(t - pad_lo_)] += theta * p.mass[i];
            }
        }
        for (std::size_t i = 0; i < residual_.size(); ++i)
            residual_[i] = z_pad_[i] - mu_pad_[i];

        double total = 0.0;
        for (long t = win_lo_; t <= win_hi_; ++t) {
            const std::size_t w_idx = static_cast<std::size_t>(t - win_lo_);
            double num = 0.0;
            const long k_lo = std::max(pad_lo_, t - h_);
            const long k_hi = std::min(pad_hi_, t + h_);
            for (long i = k_lo; i <= k_hi; ++i)
                num += weights_[static_cast<std::size_t>(i - t + h_)] *
                       residual_[static_cast<std::size_t>(i - pad_lo_)];
            const double lambda = std::max(num / weight_den_[w_idx], floor_eps_);
            const double rate = mu_pad_[static_cast<std::size_t>(t - pad_lo_)] + lambda;
            total += z_win_[w_idx] * std::log(rate) - rate - lgamma_z_[w_idx];
        }
        return total;
    }

private:
    std::span<const AdRecord> ads_;
    long win_lo_, win_hi_, pad_lo_ = 1, pad_hi_ = 0;
    int h_;
    double floor_eps_;
    std::vector<double> z_pad_, z_win_, lgamma_z_, weights_, weight_den_;
    std::vector<SpreadProfile> profiles_;
    mutable std::vector<double> mu_pad_, residual_;
};

// Lifts below the snap threshold (including negatives) count as exactly zero.
double snap_theta(double theta, double snap) { return theta >= snap ? theta : 0.0; }

std::vector<double> snap_all(std::span<const double> thetas, double snap) {
    std::vector<double> out(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i)
        out[i] = snap_theta(thetas[i], snap);
    return out;
}

// Free-parameter coordinates (log scale) for each family.
std::vector<double> spec_to_params(const SpreadSpec& spec) {
    switch (spec.family) {
    case SpreadFamily::exponential: return {std::log(spec.alpha)};
    case SpreadFamily::weibull: return {std::log(spec.alpha), std::log(spec.phi)};
    case SpreadFamily::gamma: return {std::log(spec.alpha), std::log(spec.psi)};
    case SpreadFamily::gengamma:
        return {std::log(spec.alpha), std::log(spec.phi), std::log(spec.psi)};
    }
    throw DomainError("invalid spread family");
}

SpreadSpec params_to_spec(SpreadFamily family, std::span<const double> p,
                          std::optional<int> cutoff) {
    switch (family) {
    case SpreadFamily::exponential:
        return SpreadSpec{family, std::exp(p[0]), 1.0, 1.0, cutoff};
    case SpreadFamily::weibull:
        return SpreadSpec{family, std::exp(p[0]), std::exp(p[1]), 1.0, cutoff};
    case SpreadFamily::gamma:
        return SpreadSpec{family, std::exp(p[0]), 1.0, std::exp(p[1]), cutoff};
    case SpreadFamily::gengamma:
        return SpreadSpec{family, std::exp(p[0]), std::exp(p[1]), std::exp(p[2]), cutoff};
    }
    throw DomainError("invalid spread family");
}

// Start coordinates for `family`, reusing whatever a warm-start spec carries.
SpreadSpec start_spec(SpreadFamily family, const std::optional<SpreadSpec>& init, int cutoff) {
    const double alpha = init ? init->alpha : 0.2;
    const double phi = init ? init->phi : 1.0;
    const double psi = init ? init->psi : 1.0;
    switch (family) {
    case SpreadFamily::exponential: return make_spread_spec(family, alpha, 1.0, 1.0, cutoff);
    case SpreadFamily::weibull: return make_spread_spec(family, alpha, phi, 1.0, cutoff);
    case SpreadFamily::gamma: return make_spread_spec(family, alpha, 1.0, psi, cutoff);
    case SpreadFamily::gengamma: return make_spread_spec(family, alpha, phi, psi, cutoff);
    }
    throw DomainError("invalid spread family");
}

constexpr double kBadObjective = 1e12;

} // namespace

std::vector<AdGroup> partition_groups(const AdSchedule& ads, int bandwidth, int cutoff,
                                      std::size_t n_minutes) {
    if (bandwidth < 1 || cutoff < 1)
        throw DomainError("partition_groups requires bandwidth >= 1 and cutoff >= 1");
    std::vector<AdGroup> groups;
    const double gap_threshold = 2.0 * bandwidth + cutoff;
    const long n = static_cast<long>(n_minutes);

    std::size_t start = 0;
    for (std::size_t j = 0; j < ads.m(); ++j) {
        const bool last = j + 1 == ads.m();
        if (!last && ads.ads[j + 1].end_time - ads.ads[j].end_time <= gap_threshold)
            continue;
        AdGroup g;
        g.first_ad = start;
        g.last_ad = j;
        g.window_lo = std::max(
            1L, static_cast<long>(std::ceil(ads.ads[start].end_time - bandwidth)));
        g.window_hi = std::min(
            n, static_cast<long>(std::floor(ads.ads[j].end_time + cutoff + bandwidth)));
        groups.push_back(g);
        start = j + 1;
    }
    return groups;
}

double poisson_logpmf(std::int64_t z, double rate) {
    if (z < 0)
        throw DomainError("poisson_logpmf requires z >= 0");
    if (!(rate > 0.0))
        throw DomainError("poisson_logpmf requires rate > 0");
    const double zd = static_cast<double>(z);
    return zd * std::log(rate) - rate - std::lgamma(zd + 1.0);
}

std::vector<double> compute_mu(std::span<const double> thetas, std::span<const AdRecord> ads,
                               const SpreadSpec& spec, long window_lo, long window_hi) {
    if (thetas.size() != ads.size())
        throw DomainError("compute_mu: thetas and ads must align");
    if (window_hi < window_lo)
        return {};
    std::vector<double> mu(static_cast<std::size_t>(window_hi - window_lo + 1), 0.0);
    for (std::size_t j = 0; j < ads.size(); ++j) {
        if (thetas[j] == 0.0)
            continue;
        const SpreadProfile p = discretized_profile(spec, ads[j].end_time);
        for (std::size_t i = 0; i < p.mass.size(); ++i) {
            const long t = p.first_minute + static_cast<long>(i);
            if (t < window_lo || t > window_hi)
                continue;
            mu[static_cast<std::size_t>(t - window_lo)] += thetas[j] * p.mass[i];
        }
    }
    return mu;
}

std::vector<double> compute_lambda(const VisitSeries& z, std::span<const double> mu,
                                   const SmootherConfig& cfg, double floor_eps) {
    if (mu.size() != z.n())
        throw DomainError("compute_lambda: mu must cover the whole series");
    std::vector<double> residual = z.counts_as_double();
    for (std::size_t i = 0; i < residual.size(); ++i)
        residual[i] -= mu[i];
    std::vector<double> lambda = smooth(residual, cfg);
    for (double& v : lambda)
        v = std::max(v, floor_eps);
    return lambda;
}

double group_loglik(const VisitSeries& z, const AdGroup& group,
                    std::span<const AdRecord> group_ads, std::span<const double> thetas,
                    const SpreadSpec& spec, const SmootherConfig& cfg, const FitOptions& opt) {
    if (thetas.size() != group_ads.size())
        throw DomainError("group_loglik: thetas and ads must align");
    GroupWorkspace ws(z, group, group_ads, cfg, opt);
    ws.set_spec(spec);
    return ws.loglik(thetas);
}

GroupFitResult fit_group_thetas(const VisitSeries& z, const AdGroup& group,
                                std::span<const AdRecord> group_ads, const SpreadSpec& spec,
                                const SmootherConfig& cfg, std::span<const double> init,
                                const FitOptions& opt) {
    if (init.size() != group_ads.size())
        throw DomainError("fit_group_thetas: init and ads must align");
    GroupWorkspace ws(z, group, group_ads, cfg, opt);
    ws.set_spec(spec);

    const double snap = opt.theta_snap;
    const auto objective = [&](std::span<const double> x) {
        std::vector<double> eff(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            eff[i] = snap_theta(x[i], snap);
        return -ws.loglik(eff);
    };

    std::vector<double> x0(init.begin(), init.end());
    for (double& v : x0)
        v = std::max(v, 0.0);
    std::vector<double> step(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i)
        step[i] = std::max(1.0, 0.1 * x0[i]);

    const NelderMeadResult nm = nelder_mead_minimize(objective, x0, step, opt.nm);

    GroupFitResult result;
    result.thetas = snap_all(nm.x, snap);
    result.loglik = -nm.f;
    result.evaluations = nm.evaluations;
    result.converged = nm.converged;
    return result;
}

namespace {

// Shared by fit_spread_params and the alternation loop: maximize the summed
// group log-likelihoods over the family's free parameters.
SpreadFitResult fit_spread_on_workspaces(std::vector<GroupWorkspace>& workspaces,
                                         std::span<const AdGroup> groups,
                                         std::span<const double> thetas, SpreadFamily family,
                                         const SpreadSpec& init, const FitOptions& opt) {
    const auto group_thetas = [&](std::size_t g) {
        return thetas.subspan(groups[g].first_ad, groups[g].size());
    };

    const auto objective = [&](std::span<const double> p) {
        SpreadSpec candidate = params_to_spec(family, p, init.cutoff);
        try {
            candidate.validate();
            double total = 0.0;
            for (std::size_t g = 0; g < workspaces.size(); ++g) {
                workspaces[g].set_spec(candidate);
                total += workspaces[g].loglik(group_thetas(g));
            }
            if (!std::isfinite(total))
                return kBadObjective;
            return -total;
        } catch (const std::exception&) {
            return kBadObjective;
        }
    };

    const std::vector<double> p0 = spec_to_params(init);
    const std::vector<double> step(p0.size(), 0.3);
    const NelderMeadResult nm = nelder_mead_minimize(objective, p0, step, opt.nm);

    SpreadFitResult result;
    result.spec = params_to_spec(family, nm.x, init.cutoff);
    result.spec.validate();
    result.loglik = -nm.f;
    result.evaluations = nm.evaluations;
    result.converged = nm.converged;

    // Leave the workspaces holding the fitted profiles.
    for (auto& ws : workspaces)
        ws.set_spec(result.spec);
    return result;
}

} // namespace

SpreadFitResult fit_spread_params(const VisitSeries& z, std::span<const AdGroup> groups,
                                  const AdSchedule& ads, std::span<const double> thetas,
                                  SpreadFamily family, const SmootherConfig& cfg,
                                  const SpreadSpec& init, const FitOptions& opt) {
    if (thetas.size() != ads.m())
        throw DomainError("fit_spread_params: thetas and schedule must align");
    std::vector<GroupWorkspace> workspaces;
    workspaces.reserve(groups.size());
    for (const AdGroup& g : groups)
        workspaces.emplace_back(z, g, std::span<const AdRecord>(ads.ads).subspan(g.first_ad,
                                                                                 g.size()),
                                cfg, opt);
    const SpreadSpec start = start_spec(family, init, init.cutoff.value_or(opt.cutoff));
    return fit_spread_on_workspaces(workspaces, groups, thetas, family, start, opt);
}

double aic_from_average(double avg_loglik, std::size_t n, std::size_t k) {
    return 2.0 * static_cast<double>(k) - 2.0 * avg_loglik * static_cast<double>(n);
}

DecompositionFit fit(const VisitSeries& z, const AdSchedule& ads, const SmootherConfig& cfg,
                     SpreadFamily family, const FitOptions& opt) {
    const std::size_t n = z.n();
    const std::size_t m = ads.m();

    DecompositionFit out;
    out.groups = partition_groups(ads, cfg.bandwidth, opt.cutoff, n);
    out.spec = start_spec(family, opt.init_spec, opt.cutoff);

    const std::vector<double> values = z.counts_as_double();
    const std::vector<double> baseline = smooth(values, cfg);

    // Baseline-only likelihood of the minutes outside every group window;
    // constant during the alternation.
    Mask in_window(n, 0);
    for (const AdGroup& g : out.groups)
        for (long t = g.window_lo; t <= g.window_hi; ++t)
            in_window[static_cast<std::size_t>(t - 1)] = 1;
    double remainder_ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (in_window[i])
            continue;
        remainder_ll += poisson_logpmf(z.counts[i], std::max(baseline[i], opt.lambda_floor));
    }

    // Initial lifts: positive part of the windowed excess over the baseline,
    // split equally among the ads covering each minute.
    std::vector<double> thetas(m, 0.0);
    if (m > 0) {
        std::vector<int> cover(n, 0);
        for (const AdRecord& ad : ads.ads) {
            const long lo = static_cast<long>(std::floor(ad.end_time)) + 1;
            const long hi = std::min(static_cast<long>(n), lo + opt.cutoff - 1);
            for (long t = std::max(1L, lo); t <= hi; ++t)
                ++cover[static_cast<std::size_t>(t - 1)];
        }
        for (std::size_t j = 0; j < m; ++j) {
            const long lo = static_cast<long>(std::floor(ads.ads[j].end_time)) + 1;
            const long hi = std::min(static_cast<long>(n), lo + opt.cutoff - 1);
            double excess = 0.0;
            for (long t = std::max(1L, lo); t <= hi; ++t) {
                const std::size_t i = static_cast<std::size_t>(t - 1);
                excess += std::max(values[i] - baseline[i], 0.0) /
                          static_cast<double>(cover[i]);
            }
            thetas[j] = excess;
        }
    }

    std::vector<GroupWorkspace> workspaces;
    workspaces.reserve(out.groups.size());
    for (const AdGroup& g : out.groups)
        workspaces.emplace_back(z, g, std::span<const AdRecord>(ads.ads).subspan(g.first_ad,
                                                                                 g.size()),
                                cfg, opt);
    for (auto& ws : workspaces)
        ws.set_spec(out.spec);

    const auto total_ll = [&](std::span<const double> th) {
        double total = remainder_ll;
        for (std::size_t g = 0; g < workspaces.size(); ++g)
            total += workspaces[g].loglik(th.subspan(out.groups[g].first_ad,
                                                     out.groups[g].size()));
        return total;
    };

    if (m == 0) {
        out.total_loglik = remainder_ll;
        out.converged = true;
    } else {
        double prev = total_ll(thetas);
        out.loglik_history.push_back(prev);
        for (int iter = 1; iter <= opt.max_outer_iterations; ++iter) {
            out.outer_iterations = iter;

            for (std::size_t g = 0; g < out.groups.size(); ++g) {
                const AdGroup& grp = out.groups[g];
                const auto group_ads =
                    std::span<const AdRecord>(ads.ads).subspan(grp.first_ad, grp.size());
                const auto init_span =
                    std::span<const double>(thetas).subspan(grp.first_ad, grp.size());
                const GroupFitResult res =
                    fit_group_thetas(z, grp, group_ads, out.spec, cfg, init_span, opt);
                std::copy(res.thetas.begin(), res.thetas.end(),
                          thetas.begin() + static_cast<std::ptrdiff_t>(grp.first_ad));
            }
            out.loglik_history.push_back(total_ll(thetas));

            const SpreadFitResult sres =
                fit_spread_on_workspaces(workspaces, out.groups, thetas, family, out.spec, opt);
            out.spec = sres.spec;
            const double now = sres.loglik + remainder_ll;
            out.loglik_history.push_back(now);

            const double rel = (now - prev) / std::max(std::fabs(prev), 1.0);
            prev = now;
            if (rel < opt.outer_rel_tol) {
                out.converged = true;
                break;
            }
        }
        out.total_loglik = prev;
    }

    out.thetas = thetas;
    out.mu = compute_mu(thetas, ads.ads, out.spec, 1, static_cast<long>(n));
    out.lambda = compute_lambda(z, out.mu, cfg, opt.lambda_floor);
    double full_total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        full_total += poisson_logpmf(z.counts[i], out.mu[i] + out.lambda[i]);
    out.total_loglik = full_total;
    out.avg_loglik = full_total / static_cast<double>(n);
    out.k = static_cast<std::size_t>(free_param_count(family)) + m;
    out.aic = 2.0 * static_cast<double>(out.k) - 2.0 * full_total;
    return out;
}

WilksResult wilks_test(double loglik_restricted, double loglik_full, int df) {
    if (df < 1)
        throw DomainError("wilks_test requires df >= 1");
    WilksResult result;
    result.df = df;
    double w = 2.0 * (loglik_full - loglik_restricted);
    if (w < -1e-6 * std::fabs(loglik_full))
        result.optimizer_warning = true;
    result.statistic = std::max(w, 0.0);
    result.p_value = 1.0 - chi_square_cdf(result.statistic, df);
    return result;
}

WilksResult wilks_test(const DecompositionFit& restricted, const DecompositionFit& full) {
    const int df =
        free_param_count(full.spec.family) - free_param_count(restricted.spec.family);
    return wilks_test(restricted.total_loglik, full.total_loglik, df);
}

ModelComparison compare_models(std::span<const DecompositionFit> fits,
                               std::span<const SpreadFamily> families) {
    if (fits.size() != families.size())
        throw DomainError("compare_models: fits and families must align");
    const DecompositionFit* gengamma = nullptr;
    for (std::size_t i = 0; i < families.size(); ++i)
        if (families[i] == SpreadFamily::gengamma)
            gengamma = &fits[i];

    ModelComparison rows;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        ModelComparisonRow row;
        row.family = families[i];
        row.spec = fits[i].spec;
        row.mean_delay = spread_mean(fits[i].spec);
        row.mode_delay = spread_mode(fits[i].spec);
        row.avg_loglik = fits[i].avg_loglik;
        row.aic = fits[i].aic;
        if (gengamma != nullptr && families[i] != SpreadFamily::gengamma) {
            const WilksResult wr = wilks_test(fits[i], *gengamma);
            row.wilks_p = wr.p_value;
            row.wilks_warning = wr.optimizer_warning;
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace adlift
