#include "adlift/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adlift/errors.hpp"

namespace adlift {

NelderMeadResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                      std::span<const double> x0, std::span<const double> step,
                                      const NelderMeadOptions& opt) {
    const std::size_t dim = x0.size();
    if (dim == 0 || step.size() != dim)
        throw DomainError("nelder_mead_minimize: empty point or step size mismatch");

    const int max_evals = opt.max_evals_per_dim * static_cast<int>(dim);
    int evals = 0;
    const auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };

    std::vector<std::vector<double>> simplex(dim + 1, std::vector<double>(x0.begin(), x0.end()));
    std::vector<double> fv(dim + 1);
    for (std::size_t i = 0; i < dim; ++i)
        simplex[i + 1][i] += step[i];
    for (std::size_t i = 0; i <= dim; ++i)
        fv[i] = eval(simplex[i]);

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);

    NelderMeadResult result;
    result.x = simplex[0];
    result.f = fv[0];
    const auto remember_best = [&](const std::vector<double>& x, double value) {
        if (value < result.f) {
            result.f = value;
            result.x = x;
        }
    };
    for (std::size_t i = 0; i <= dim; ++i)
        remember_best(simplex[i], fv[i]);

    while (true) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0];
        const std::size_t worst = order[dim];
        const std::size_t second_worst = order[dim - 1];

        if (fv[worst] - fv[best] < opt.f_tol) {
            result.converged = true;
            break;
        }
        if (evals >= max_evals)
            break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst)
                continue;
            for (std::size_t j = 0; j < dim; ++j)
                centroid[j] += simplex[i][j];
        }
        for (std::size_t j = 0; j < dim; ++j)
            centroid[j] /= static_cast<double>(dim);

        for (std::size_t j = 0; j < dim; ++j)
            xr[j] = centroid[j] + opt.reflection * (centroid[j] - simplex[worst][j]);
        const double fr = eval(xr);
        remember_best(xr, fr);

        if (fr < fv[best]) {
            for (std::size_t j = 0; j < dim; ++j)
                xe[j] = centroid[j] + opt.expansion * (xr[j] - centroid[j]);
            const double fe = eval(xe);
            remember_best(xe, fe);
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second_worst]) {
            simplex[worst] = xr;
            fv[worst] = fr;
            continue;
        }

        if (fr < fv[worst]) { // outside contraction
            for (std::size_t j = 0; j < dim; ++j)
                xc[j] = centroid[j] + opt.contraction * (xr[j] - centroid[j]);
            const double fc = eval(xc);
            remember_best(xc, fc);
            if (fc <= fr) {
                simplex[worst] = xc;
                fv[worst] = fc;
                continue;
            }
        } else { // inside contraction
            for (std::size_t j = 0; j < dim; ++j)
                xc[j] = centroid[j] - opt.contraction * (centroid[j] - simplex[worst][j]);
            const double fc = eval(xc);
            remember_best(xc, fc);
            if (fc < fv[worst]) {
                simplex[worst] = xc;
                fv[worst] = fc;
                continue;
            }
        }

        // shrink toward the best vertex
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best)
                continue;
            for (std::size_t j = 0; j < dim; ++j)
                simplex[i][j] = simplex[best][j] + opt.shrink * (simplex[i][j] - simplex[best][j]);
            fv[i] = eval(simplex[i]);
            remember_best(simplex[i], fv[i]);
        }
        if (evals >= max_evals)
            break;
    }

    result.evaluations = evals;
    return result;
}

} // namespace adlift
