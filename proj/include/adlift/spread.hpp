#ifndef ADLIFT_SPREAD_HPP
#define ADLIFT_SPREAD_HPP

#include <optional>
#include <string>
#include <vector>

namespace adlift {

// Nested positive-delay families: gengamma(alpha, phi, psi) with
// gamma (phi = 1), weibull (psi = 1), and exponential (phi = psi = 1).
enum class SpreadFamily { exponential, weibull, gamma, gengamma };

inline constexpr SpreadFamily kAllFamilies[] = {SpreadFamily::exponential, SpreadFamily::weibull,
                                                SpreadFamily::gamma, SpreadFamily::gengamma};

std::string family_name(SpreadFamily f);
SpreadFamily family_from_name(const std::string& name); // throws ConfigError if unknown

// Number of free distribution parameters (fixed special-case parameters do
// not count): exponential 1, weibull 2, gamma 2, gengamma 3.
int free_param_count(SpreadFamily f);

// Delay distribution of visits after an ad: density
// f(tau) = alpha*phi/Gamma(psi) * (tau*alpha)^(psi*phi-1) * exp(-(tau*alpha)^phi).
struct SpreadSpec {
    SpreadFamily family = SpreadFamily::exponential;
    double alpha = 0.2; // scale, 1/minutes
    double phi = 1.0;   // shape
    double psi = 1.0;   // shape
    std::optional<int> cutoff; // horizon d in minutes; effect is zero past it

    // Throws DomainError if parameters are non-positive, violate the family's
    // fixed-parameter constraints, or cutoff < 1.
    void validate() const;
};

SpreadSpec make_spread_spec(SpreadFamily family, double alpha, double phi, double psi,
                            std::optional<int> cutoff = std::nullopt);

// f(tau); tau > 0 (DomainError otherwise).
double density(const SpreadSpec& spec, double tau);

// Integral of the density over [t1, t2], 0 <= t1 <= t2 (t2 may be +inf).
double density_integral(const SpreadSpec& spec, double t1, double t2);

// E[T] = Gamma(psi + 1/phi) / (alpha * Gamma(psi)): average delay between an
// ad's end and the visits it causes.
double spread_mean(const SpreadSpec& spec);

// Mode: (1/alpha) * (psi - 1/phi)^(1/phi) when phi*psi > 1, else 0.
double spread_mode(const SpreadSpec& spec);

// Per-minute share of an ad's visits, for an ad ending at offset s (minutes,
// real-valued) and visit minute t (integer >= 1):
//   0 for t <= s; integral of f over (0, t-s] for the first minute;
//   over (t-s-1, t-s] afterwards. With a cutoff d the shares are divided by
//   the integral of f over (0, d - s + floor(s)] and vanish for t > s + d.
double discretized_spread(const SpreadSpec& spec, double s, long t);

// All non-zero shares of one ad in one pass. `first_minute` is the first
// affected minute floor(s)+1; mass[i] = share of minute first_minute + i.
// Without a cutoff the profile is truncated where the remaining tail
// drops below `tail_tol`.
struct SpreadProfile {
    long first_minute = 0;
    std::vector<double> mass;
};

SpreadProfile discretized_profile(const SpreadSpec& spec, double s, double tail_tol = 1e-12);

std::string spread_spec_to_json(const SpreadSpec& spec);
SpreadSpec spread_spec_from_json(const std::string& json_text);

} // namespace adlift

#endif
