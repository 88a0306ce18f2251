// Closed-form capacity and generalization bounds for the norm-constrained
// causal TCN class, plus the tightness ratio used to compare them with
// measured gaps. Natural logarithms throughout.
#pragma once

#include "tcnlab/mixing.hpp"

#include <cstddef>

namespace tcnlab {

struct BoundReport {
    double complexity_term = 0.0;     // C1 * R * sqrt(D p n ln(N) / N)
    double mixing_const = 0.0;        // C0 (N*beta(d*) collapses below it)
    double concentration_term = 0.0;  // sqrt(ln(1/delta) / N)
    double total = 0.0;
    // inputs, echoed for reporting
    std::size_t depth = 0, kernel_size = 0, in_dim = 0, n = 0;
    double norm_radius = 0.0, delta = 0.0, c1 = 0.0;
};

// Expected-Rademacher-complexity bound: 4 R sqrt(D p n ln(2m) / m).
double rademacher_bound(std::size_t depth, std::size_t kernel_size, std::size_t in_dim,
                        double radius, std::size_t m);

// Online regret bound 2N * rademacher_bound(.., N) = 8 R sqrt(D p n N ln(2N)).
double regret_bound(std::size_t depth, std::size_t kernel_size, std::size_t in_dim,
                    double radius, std::size_t n);

// Three-term generalization bound at the optimal delay. delta in (0,1),
// N >= 2. c1 defaults to the symbolic constant 8 from the regret analysis;
// empirically calibrated constants may be passed instead.
BoundReport generalization_bound(std::size_t depth, std::size_t kernel_size, std::size_t in_dim,
                                 double radius, std::size_t n, double delta,
                                 const MixingProfile& profile, double c1 = 8.0);

struct PolynomialRate {
    std::size_t delay = 0;    // ceil(N^(1/(gamma+1)))
    double exponent = 0.0;    // gamma/(gamma+1); bound decays as N^-exponent
};

// Delay choice and rate exponent under polynomial mixing, gamma > 1.
PolynomialRate polynomial_mixing_rate(double gamma, std::size_t n);

// gap / report.total; rejects a zero-total report.
double tightness_ratio(double gap, const BoundReport& report);

} // namespace tcnlab
