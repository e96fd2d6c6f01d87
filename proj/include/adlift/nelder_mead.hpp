#ifndef ADLIFT_NELDER_MEAD_HPP
#define ADLIFT_NELDER_MEAD_HPP

#include <functional>
#include <span>
#include <vector>

namespace adlift {

struct NelderMeadOptions {
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
    double f_tol = 1e-9;        // stop when max-min function value over the simplex is below this
    int max_evals_per_dim = 500;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int evaluations = 0;
    bool converged = false;
};

// Derivative-free simplex minimization. The initial simplex is x0 plus one
// vertex per dimension displaced by step[i]. Returns the best vertex ever
// evaluated, so the result is never worse than f(x0).
NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::span<const double> x0, std::span<const double> step,
                                      const NelderMeadOptions& options = {});

} // namespace adlift

#endif
