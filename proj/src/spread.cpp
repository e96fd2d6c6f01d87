#include "adlift/spread.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "adlift/errors.hpp"
#include "adlift/special_functions.hpp"

namespace adlift {

std::string family_name(SpreadFamily f) {
    switch (f) {
    case SpreadFamily::exponential: return "exponential";
    case SpreadFamily::weibull: return "weibull";
    case SpreadFamily::gamma: return "gamma";
    case SpreadFamily::gengamma: return "gengamma";
    }
    return "unknown";
}

SpreadFamily family_from_name(const std::string& name) {
    for (SpreadFamily f : kAllFamilies)
        if (family_name(f) == name)
            return f;
    throw ConfigError("unknown spread family '" + name + "'");
}

int free_param_count(SpreadFamily f) {
    switch (f) {
    case SpreadFamily::exponential: return 1;
    case SpreadFamily::weibull: return 2;
    case SpreadFamily::gamma: return 2;
    case SpreadFamily::gengamma: return 3;
    }
    return 0;
}

void SpreadSpec::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha) || !(phi > 0.0) || !std::isfinite(phi) ||
        !(psi > 0.0) || !std::isfinite(psi))
        throw DomainError("spread parameters must be positive and finite");
    if (family == SpreadFamily::exponential && (phi != 1.0 || psi != 1.0))
        throw DomainError("exponential spread requires phi = 1 and psi = 1");
    if (family == SpreadFamily::weibull && psi != 1.0)
        throw DomainError("weibull spread requires psi = 1");
    if (family == SpreadFamily::gamma && phi != 1.0)
        throw DomainError("gamma spread requires phi = 1");
    if (cutoff && *cutoff < 1)
        throw DomainError("cutoff must be >= 1 minute");
}

SpreadSpec make_spread_spec(SpreadFamily family, double alpha, double phi, double psi,
                            std::optional<int> cutoff) {
    SpreadSpec spec{family, alpha, phi, psi, cutoff};
    spec.validate();
    return spec;
}

double density(const SpreadSpec& spec, double tau) {
    if (!(tau > 0.0))
        throw DomainError("spread density requires tau > 0");
    const double x = tau * spec.alpha;
    const double log_f = std::log(spec.alpha) + std::log(spec.phi) - std::lgamma(spec.psi) +
                         (spec.psi * spec.phi - 1.0) * std::log(x) - std::pow(x, spec.phi);
    return std::exp(log_f);
}

double density_integral(const SpreadSpec& spec, double t1, double t2) {
    if (t1 < 0.0 || t2 < t1)
        throw DomainError("density_integral requires 0 <= t1 <= t2");
    const double a = std::pow(t1 * spec.alpha, spec.phi);
    const double b = std::isinf(t2) ? std::numeric_limits<double>::infinity()
                                    : std::pow(t2 * spec.alpha, spec.phi);
    return reg_inc_gamma_q(spec.psi, a, b);
}

double spread_mean(const SpreadSpec& spec) {
    return std::exp(std::lgamma(spec.psi + 1.0 / spec.phi) - std::lgamma(spec.psi)) / spec.alpha;
}

double spread_mode(const SpreadSpec& spec) {
    if (spec.phi * spec.psi <= 1.0)
        return 0.0;
    return std::pow(spec.psi - 1.0 / spec.phi, 1.0 / spec.phi) / spec.alpha;
}

double discretized_spread(const SpreadSpec& spec, double s, long t) {
    if (t < 1)
        throw DomainError("discretized_spread requires t >= 1");
    const double td = static_cast<double>(t);
    if (td <= s)
        return 0.0;
    if (!spec.cutoff) {
        if (td <= s + 1.0)
            return density_integral(spec, 0.0, td - s);
        return density_integral(spec, td - s - 1.0, td - s);
    }
    const int d = *spec.cutoff;
    if (td > s + static_cast<double>(d))
        return 0.0;
    const double frac = s - std::floor(s);
    const double normalizer = density_integral(spec, 0.0, static_cast<double>(d) - frac);
    if (!(normalizer > 0.0))
        throw NumericalError("cutoff normalizer underflow in discretized_spread");
    const double numerator = td <= s + 1.0 ? density_integral(spec, 0.0, td - s)
                                           : density_integral(spec, td - s - 1.0, td - s);
    return numerator / normalizer;
}

SpreadProfile discretized_profile(const SpreadSpec& spec, double s, double tail_tol) {
    SpreadProfile profile;
    profile.first_minute = static_cast<long>(std::floor(s)) + 1;
    const double tau0 = static_cast<double>(profile.first_minute) - s; // in (0, 1]

    if (spec.cutoff) {
        const int d = *spec.cutoff;
        std::vector<double> lower(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            const double tau = tau0 + static_cast<double>(i);
            lower[static_cast<std::size_t>(i)] =
                reg_lower_gamma(spec.psi, std::pow(tau * spec.alpha, spec.phi));
        }
        const double normalizer = lower.back(); // integral of f over (0, d - frac(s)]
        if (!(normalizer > 0.0))
            throw NumericalError("cutoff normalizer underflow in discretized_profile");
        profile.mass.resize(static_cast<std::size_t>(d));
        double prev = 0.0;
        for (int i = 0; i < d; ++i) {
            profile.mass[static_cast<std::size_t>(i)] =
                (lower[static_cast<std::size_t>(i)] - prev) / normalizer;
            prev = lower[static_cast<std::size_t>(i)];
        }
        return profile;
    }

    constexpr long kMaxMinutes = 200000;
    double prev = 0.0;
    for (long i = 0; i < kMaxMinutes; ++i) {
        const double tau = tau0 + static_cast<double>(i);
        const double p = reg_lower_gamma(spec.psi, std::pow(tau * spec.alpha, spec.phi));
        profile.mass.push_back(p - prev);
        prev = p;
        if (1.0 - p < tail_tol)
            break;
    }
    return profile;
}

std::string spread_spec_to_json(const SpreadSpec& spec) {
    nlohmann::json j;
    j["family"] = family_name(spec.family);
    j["alpha"] = spec.alpha;
    j["phi"] = spec.phi;
    j["psi"] = spec.psi;
    if (spec.cutoff)
        j["cutoff"] = *spec.cutoff;
    else
        j["cutoff"] = nullptr;
    return j.dump();
}

SpreadSpec spread_spec_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    std::optional<int> cutoff;
    if (j.contains("cutoff") && !j["cutoff"].is_null())
        cutoff = j["cutoff"].get<int>();
    return make_spread_spec(family_from_name(j.at("family").get<std::string>()),
                            j.at("alpha").get<double>(), j.at("phi").get<double>(),
                            j.at("psi").get<double>(), cutoff);
}

} // namespace adlift
