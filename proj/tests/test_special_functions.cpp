#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "adlift/errors.hpp"
#include "adlift/rng.hpp"
#include "adlift/special_functions.hpp"
#include "test_util.hpp"

using namespace adlift;

namespace {

// Quadrature oracle for P(a, x): integrate t^(a-1) e^-t / Gamma(a).
double reg_lower_gamma_oracle(double a, double x) {
    const double lg = std::lgamma(a);
    return testutil::integrate(
        [&](double t) { return t <= 0.0 ? 0.0 : std::exp((a - 1.0) * std::log(t) - t - lg); },
        0.0, x, 1e-13);
}

} // namespace

TEST_CASE("closed forms: exponential and erf-free cases") {
    // a = 1: P(1, x) = 1 - e^-x
    for (double x : {0.01, 0.15, 1.0, 3.5, 20.0})
        CHECK(reg_lower_gamma(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
    // a = 2: P(2, x) = 1 - (1 + x) e^-x
    for (double x : {0.2, 1.0, 7.0})
        CHECK(reg_lower_gamma(2.0, x) ==
              doctest::Approx(1.0 - (1.0 + x) * std::exp(-x)).epsilon(1e-12));
}

TEST_CASE("quadrature oracle over a parameter sweep") {
    Rng rng(20240601);
    for (int i = 0; i < 200; ++i) {
        const double a = std::exp(rng.uniform(std::log(0.1), std::log(50.0)));
        const double x = std::exp(rng.uniform(std::log(0.01), std::log(80.0)));
        const double got = reg_lower_gamma(a, x);
        const double want = reg_lower_gamma_oracle(a, x);
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("interval form matches endpoint differences") {
    CHECK(reg_inc_gamma_q(1.0, 0.0, 0.15) == doctest::Approx(0.139292).epsilon(1e-4));
    CHECK(reg_inc_gamma_q(1.0, 0.0, 0.15) ==
          doctest::Approx(1.0 - std::exp(-0.15)).epsilon(1e-12));
    for (double psi : {0.5, 1.0, 2.7})
        CHECK(reg_inc_gamma_q(psi, 0.0, std::numeric_limits<double>::infinity()) ==
              doctest::Approx(1.0).epsilon(1e-12));
    for (double psi : {0.5, 1.0, 2.7})
        for (double a : {0.0, 0.4, 3.0})
            CHECK(reg_inc_gamma_q(psi, a, a) == 0.0);
}

TEST_CASE("interval form is monotone in b and antitone in a") {
    Rng rng(99);
    for (int i = 0; i < 100; ++i) {
        const double psi = std::exp(rng.uniform(std::log(0.2), std::log(10.0)));
        double a = rng.uniform(0.0, 5.0);
        double b = a + rng.uniform(0.0, 5.0);
        const double base = reg_inc_gamma_q(psi, a, b);
        CHECK(reg_inc_gamma_q(psi, a, b + 0.5) >= base - 1e-14);
        CHECK(reg_inc_gamma_q(psi, a + 0.25, b + 0.25 + (b - a)) >= 0.0);
        CHECK(reg_inc_gamma_q(psi, std::min(a + 0.5, b), b) <= base + 1e-14);
    }
}

TEST_CASE("domain violations throw") {
    CHECK_THROWS_AS(reg_lower_gamma(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(reg_lower_gamma(1.0, -0.1), DomainError);
    CHECK_THROWS_AS(reg_inc_gamma_q(1.0, 2.0, 1.0), DomainError);
    CHECK_THROWS_AS(chi_square_cdf(1.0, 0), DomainError);
}

TEST_CASE("chi-square CDF against quadrature and known points") {
    // density: x^(k/2-1) e^(-x/2) / (2^(k/2) Gamma(k/2))
    const auto chi2_cdf_oracle = [](double x, int df) {
        const double k2 = 0.5 * static_cast<double>(df);
        const double norm = k2 * std::log(2.0) + std::lgamma(k2);
        return testutil::integrate(
            [&](double t) {
                return t <= 0.0 ? 0.0 : std::exp((k2 - 1.0) * std::log(t) - 0.5 * t - norm);
            },
            0.0, x, 1e-13);
    };
    CHECK(1.0 - chi_square_cdf(3.84, 1) == doctest::Approx(0.05).epsilon(2e-3));
    CHECK(chi_square_cdf(0.0, 1) == 0.0);
    CHECK(chi_square_cdf(0.0, 5) == 0.0);
    for (int df : {1, 2, 5, 10})
        for (double x : {0.5, 2.0, 7.5, 25.0})
            CHECK(chi_square_cdf(x, df) == doctest::Approx(chi2_cdf_oracle(x, df)).epsilon(1e-9));
}
