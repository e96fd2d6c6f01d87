#ifndef ADLIFT_SPECIAL_FUNCTIONS_HPP
#define ADLIFT_SPECIAL_FUNCTIONS_HPP

namespace adlift {

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
// Series expansion for x < a + 1, continued fraction otherwise.
double reg_lower_gamma(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double reg_upper_gamma(double a, double x);

// Generalized regularized incomplete gamma over an interval:
// Q(psi, a, b) = [Gamma(psi, a) - Gamma(psi, b)] / Gamma(psi) = P(b) - P(a).
// Requires 0 <= a <= b; b may be +infinity.
double reg_inc_gamma_q(double psi, double a, double b);

// Chi-square CDF with df degrees of freedom.
double chi_square_cdf(double x, int df);

} // namespace adlift

#endif
