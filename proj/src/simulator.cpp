#include "adlift/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "adlift/errors.hpp"

namespace adlift {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::int64_t poisson_inversion(Rng& rng, double mu) {
    const double u = rng.uniform01();
    double p = std::exp(-mu);
    double s = p;
    std::int64_t x = 0;
    while (u > s) {
        ++x;
        p *= mu / static_cast<double>(x);
        s += p;
        if (x > 10000000)
            throw NumericalError("poisson inversion runaway");
    }
    return x;
}

// Transformed rejection with squeeze (PTRS), for large rates.
std::int64_t poisson_ptrs(Rng& rng, double mu) {
    const double slam = std::sqrt(mu);
    const double loglam = std::log(mu);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    while (true) {
        const double u = rng.uniform01() - 0.5;
        const double v = rng.uniform01();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mu + 0.43);
        if (us >= 0.07 && v <= v_r)
            return static_cast<std::int64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us))
            continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            k * loglam - mu - std::lgamma(k + 1.0))
            return static_cast<std::int64_t>(k);
    }
}

} // namespace

std::int64_t sample_poisson(Rng& rng, double rate) {
    if (!(rate >= 0.0) || !std::isfinite(rate))
        throw DomainError("sample_poisson requires a finite rate >= 0");
    if (rate == 0.0)
        return 0;
    if (rate < 30.0)
        return poisson_inversion(rng, rate);
    return poisson_ptrs(rng, rate);
}

double sample_gamma(Rng& rng, double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw DomainError("sample_gamma requires positive shape and scale");
    if (shape < 1.0) {
        const double u = 1.0 - rng.uniform01(); // (0, 1]
        return sample_gamma(rng, shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = 1.0 - rng.uniform01();
        if (u < 1.0 - 0.0331 * x * x * x * x)
            return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return d * v * scale;
    }
}

double baseline_rate(const BaselineSpec& spec, long t) {
    const double td = static_cast<double>(t) - 0.5; // mid-bucket
    switch (spec.kind) {
    case BaselineSpec::Kind::flat:
        return spec.level;
    case BaselineSpec::Kind::sinusoid:
        return spec.level + spec.amplitude * std::sin(kTwoPi * td / spec.period + spec.phase);
    case BaselineSpec::Kind::weekly:
        return spec.level + spec.amplitude * std::sin(kTwoPi * td / 1440.0 + spec.phase) +
               spec.weekly_amplitude * std::sin(kTwoPi * td / (1440.0 * 7.0));
    }
    throw DomainError("invalid baseline kind");
}

namespace {

std::vector<double> place_ads(const SimScenario& sc, Rng& rng) {
    if (!sc.fixed_ad_times.empty()) {
        std::vector<double> times = sc.fixed_ad_times;
        std::sort(times.begin(), times.end());
        return times;
    }
    if (sc.ad_count == 0)
        return {};
    const int cutoff = sc.spread.cutoff.value_or(30);
    const double lo = 30.0;
    const double hi = static_cast<double>(sc.n_minutes) - 30.0 - static_cast<double>(cutoff);
    if (hi <= lo)
        throw DomainError("scenario too short for the requested ads");

    std::vector<double> times(sc.ad_count);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        for (double& t : times)
            t = rng.uniform(lo, hi);
        std::sort(times.begin(), times.end());
        bool ok = true;
        for (std::size_t j = 0; j + 1 < times.size(); ++j)
            if (times[j + 1] - times[j] < sc.min_gap) {
                ok = false;
                break;
            }
        if (ok)
            return times;
    }
    // Dense schedules: fall back to even spacing with a min-gap-safe jitter.
    const double spacing = (hi - lo) / static_cast<double>(sc.ad_count);
    const double jitter = std::max(0.0, (spacing - sc.min_gap) / 2.0);
    for (std::size_t j = 0; j < sc.ad_count; ++j)
        times[j] = lo + spacing * (static_cast<double>(j) + 0.5) + rng.uniform(-jitter, jitter);
    return times;
}

} // namespace

SimResult simulate(const SimScenario& sc) {
    sc.spread.validate();
    if (sc.n_minutes == 0)
        throw DomainError("scenario needs at least one minute");
    if (sc.theta.zero_prob < 0.0 || sc.theta.zero_prob > 1.0)
        throw DomainError("zero_prob must lie in [0, 1]");

    Rng placement_rng(derive_seed(sc.seed, 1));
    Rng attribute_rng(derive_seed(sc.seed, 2));
    Rng theta_rng(derive_seed(sc.seed, 3));
    Rng count_rng(derive_seed(sc.seed, 4));

    SimResult result;
    result.series.start = sc.start;
    result.truth.spread = sc.spread;

    const std::vector<double> raw_times = place_ads(sc, placement_rng);
    for (double t : raw_times) {
        AdRecord ad;
        // Ads carry second precision; keep the offset consistent with it.
        const std::int64_t sec = static_cast<std::int64_t>(std::llround(t * 60.0));
        ad.end_time = static_cast<double>(sec) / 60.0;
        ad.end_stamp = Timestamp{sc.start.epoch_sec + sec, sc.start.offset_min};
        ad.motive = static_cast<int>(attribute_rng.index(kMotiveLevels.size()));
        ad.position = static_cast<int>(attribute_rng.index(kPositionLevels.size()));
        ad.channel = static_cast<int>(attribute_rng.index(kChannelLevels.size()));
        result.ads.ads.push_back(ad);
    }

    result.truth.theta_star.resize(result.ads.m(), 0.0);
    for (double& theta : result.truth.theta_star) {
        if (theta_rng.uniform01() < sc.theta.zero_prob)
            theta = 0.0;
        else
            theta = sample_gamma(theta_rng, sc.theta.shape, sc.theta.mean / sc.theta.shape);
    }

    const long n = static_cast<long>(sc.n_minutes);
    result.truth.mu_star =
        compute_mu(result.truth.theta_star, result.ads.ads, sc.spread, 1, n);
    result.truth.lambda_star.resize(sc.n_minutes);
    result.series.counts.resize(sc.n_minutes);
    for (long t = 1; t <= n; ++t) {
        const double lambda = baseline_rate(sc.baseline, t);
        if (!(lambda > 0.0))
            throw DomainError("baseline rate must stay positive");
        result.truth.lambda_star[static_cast<std::size_t>(t - 1)] = lambda;
        const double rate = lambda + result.truth.mu_star[static_cast<std::size_t>(t - 1)];
        result.series.counts[static_cast<std::size_t>(t - 1)] = sample_poisson(count_rng, rate);
    }
    return result;
}

TruthErrors truth_error(const DecompositionFit& fit, const SimTruth& truth) {
    if (fit.thetas.size() != truth.theta_star.size())
        throw DomainError("truth_error: fit and truth have different ad counts");
    TruthErrors e;
    for (std::size_t j = 0; j < fit.thetas.size(); ++j) {
        const double d = fit.thetas[j] - truth.theta_star[j];
        e.theta_mae += std::fabs(d);
        e.theta_rmse += d * d;
    }
    if (!fit.thetas.empty()) {
        e.theta_mae /= static_cast<double>(fit.thetas.size());
        e.theta_rmse = std::sqrt(e.theta_rmse / static_cast<double>(fit.thetas.size()));
    }
    e.spread_mean_error = std::fabs(spread_mean(fit.spec) - spread_mean(truth.spread));
    if (fit.lambda.size() == truth.lambda_star.size() && !fit.lambda.empty()) {
        double ss = 0.0;
        for (std::size_t i = 0; i < fit.lambda.size(); ++i) {
            const double d = fit.lambda[i] - truth.lambda_star[i];
            ss += d * d;
        }
        e.lambda_rmse = std::sqrt(ss / static_cast<double>(fit.lambda.size()));
    }
    return e;
}

namespace {

BaselineSpec::Kind baseline_kind_from_name(const std::string& name) {
    if (name == "flat")
        return BaselineSpec::Kind::flat;
    if (name == "sinusoid")
        return BaselineSpec::Kind::sinusoid;
    if (name == "weekly")
        return BaselineSpec::Kind::weekly;
    throw ConfigError("unknown baseline kind '" + name + "'");
}

std::string baseline_kind_name(BaselineSpec::Kind kind) {
    switch (kind) {
    case BaselineSpec::Kind::flat: return "flat";
    case BaselineSpec::Kind::sinusoid: return "sinusoid";
    case BaselineSpec::Kind::weekly: return "weekly";
    }
    return "unknown";
}

} // namespace

std::string scenario_to_json(const SimScenario& sc) {
    nlohmann::json j;
    j["n_minutes"] = sc.n_minutes;
    j["start"] = format_rfc3339(sc.start);
    j["seed"] = sc.seed;
    j["baseline"] = {{"kind", baseline_kind_name(sc.baseline.kind)},
                     {"level", sc.baseline.level},
                     {"amplitude", sc.baseline.amplitude},
                     {"period", sc.baseline.period},
                     {"phase", sc.baseline.phase},
                     {"weekly_amplitude", sc.baseline.weekly_amplitude}};
    j["ads"] = {{"count", sc.ad_count},
                {"min_gap", sc.min_gap},
                {"zero_prob", sc.theta.zero_prob},
                {"theta_mean", sc.theta.mean},
                {"theta_shape", sc.theta.shape}};
    if (!sc.fixed_ad_times.empty())
        j["ads"]["fixed_times"] = sc.fixed_ad_times;
    j["spread"] = nlohmann::json::parse(spread_spec_to_json(sc.spread));
    return j.dump(2);
}

SimScenario scenario_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid scenario JSON: ") + e.what());
    }
    try {
        SimScenario sc;
        sc.n_minutes = j.at("n_minutes").get<std::size_t>();
        sc.start = parse_rfc3339(j.at("start").get<std::string>());
        sc.seed = j.value("seed", std::uint64_t{1});
        const auto& b = j.at("baseline");
        sc.baseline.kind = baseline_kind_from_name(b.at("kind").get<std::string>());
        sc.baseline.level = b.value("level", 30.0);
        sc.baseline.amplitude = b.value("amplitude", 0.0);
        sc.baseline.period = b.value("period", 1440.0);
        sc.baseline.phase = b.value("phase", 0.0);
        sc.baseline.weekly_amplitude = b.value("weekly_amplitude", 0.0);
        const auto& a = j.at("ads");
        sc.ad_count = a.value("count", std::size_t{0});
        sc.min_gap = a.value("min_gap", 120.0);
        sc.theta.zero_prob = a.value("zero_prob", 0.0);
        sc.theta.mean = a.value("theta_mean", 150.0);
        sc.theta.shape = a.value("theta_shape", 2.0);
        if (a.contains("fixed_times"))
            sc.fixed_ad_times = a["fixed_times"].get<std::vector<double>>();
        sc.spread = spread_spec_from_json(j.at("spread").dump());
        return sc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid scenario: ") + e.what());
    }
}

SimScenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scenario_from_json(text);
}

void write_truth_json(const SimTruth& truth, std::uint64_t seed, const std::string& path) {
    nlohmann::json j;
    j["seed"] = seed;
    j["spread"] = nlohmann::json::parse(spread_spec_to_json(truth.spread));
    j["theta_star"] = truth.theta_star;
    j["mu_star"] = truth.mu_star;
    j["lambda_star"] = truth.lambda_star;
    std::ofstream out(path);
    if (!out)
        throw DataError("cannot write file: " + path);
    out << j.dump() << '\n';
}

} // namespace adlift
