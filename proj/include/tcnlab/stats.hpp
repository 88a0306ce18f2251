// Student-t distribution machinery built on the regularized incomplete beta
// function (Lentz continued fraction), accurate to about 1e-12. Nothing here
// assumes an external statistics library.
#pragma once

namespace tcnlab {

// I_x(a, b) for a, b > 0 and x in [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

// P(T <= t) for T ~ Student-t with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

// Two-sided tail probability P(|T| >= |t|).
double student_t_two_sided_p(double t, double dof);

// Inverse CDF by bisection; prob in (0, 1).
double student_t_quantile(double prob, double dof);

} // namespace tcnlab
