#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "adlift/nelder_mead.hpp"
#include "adlift/rng.hpp"

using namespace adlift;

TEST_CASE("minimizes quadratic bowls across dimensions") {
    for (std::size_t dim = 1; dim <= 5; ++dim) {
        std::vector<double> center(dim);
        for (std::size_t i = 0; i < dim; ++i)
            center[i] = 1.0 + 0.5 * static_cast<double>(i);
        const auto f = [&](std::span<const double> x) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                s += (x[i] - center[i]) * (x[i] - center[i]);
            return s;
        };
        const std::vector<double> x0(dim, 10.0);
        const std::vector<double> step(dim, 1.0);
        const NelderMeadResult r = nelder_mead_minimize(f, x0, step);
        CHECK(r.converged);
        for (std::size_t i = 0; i < dim; ++i)
            CHECK(r.x[i] == doctest::Approx(center[i]).epsilon(1e-3));
    }
}

TEST_CASE("handles the rosenbrock valley") {
    const auto f = [](std::span<const double> x) {
        const double a = 1.0 - x[0];
        const double b = x[1] - x[0] * x[0];
        return a * a + 100.0 * b * b;
    };
    const std::vector<double> x0{-1.2, 1.0};
    const std::vector<double> step{0.5, 0.5};
    NelderMeadOptions opt;
    opt.max_evals_per_dim = 2000;
    const NelderMeadResult r = nelder_mead_minimize(f, x0, step, opt);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(2e-2));
}

TEST_CASE("never returns worse than the starting point") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        // rugged objective
        const double a = rng.uniform(0.5, 3.0);
        const double b = rng.uniform(-2.0, 2.0);
        const auto f = [&](std::span<const double> x) {
            return a * x[0] * x[0] + b * std::sin(5.0 * x[0]) + std::fabs(x[0]);
        };
        const std::vector<double> x0{rng.uniform(-5.0, 5.0)};
        const std::vector<double> step{0.7};
        NelderMeadOptions opt;
        opt.max_evals_per_dim = 40; // starve it on purpose
        const NelderMeadResult r = nelder_mead_minimize(f, x0, step, opt);
        CHECK(r.f <= f(x0) + 1e-15);
    }
}

TEST_CASE("respects the evaluation budget") {
    int calls = 0;
    const auto f = [&](std::span<const double> x) {
        ++calls;
        return x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    };
    const std::vector<double> x0{5.0, 5.0, 5.0};
    const std::vector<double> step{1.0, 1.0, 1.0};
    NelderMeadOptions opt;
    opt.max_evals_per_dim = 20;
    const NelderMeadResult r = nelder_mead_minimize(f, x0, step, opt);
    CHECK(r.evaluations <= 3 * 20 + 4); // shrink step may finish a sweep
    CHECK(calls == r.evaluations);
}

TEST_CASE("flat objective converges immediately") {
    const auto f = [](std::span<const double>) { return 4.2; };
    const std::vector<double> x0{0.0, 0.0};
    const std::vector<double> step{1.0, 1.0};
    const NelderMeadResult r = nelder_mead_minimize(f, x0, step);
    CHECK(r.converged);
    CHECK(r.f == 4.2);
}
