#include "tcnlab/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace tcnlab {

namespace {

void check_architecture(std::size_t depth, std::size_t kernel_size, std::size_t in_dim,
                        double radius) {
    if (depth < 1 || kernel_size < 1 || in_dim < 1)
        throw std::invalid_argument("bound: D, p, n must all be >= 1");
    if (!(radius >= 0.0)) throw std::invalid_argument("bound: R must be >= 0");
}

} // namespace

double rademacher_bound(std::size_t depth, std::size_t kernel_size, std::size_t in_dim,
                        double radius, std::size_t m) {
    check_architecture(depth, kernel_size, in_dim, radius);
    if (m < 1) throw std::invalid_argument("rademacher_bound: m must be >= 1");
    const double md = double(m);
    return 4.0 * radius *
           std::sqrt(double(depth * kernel_size * in_dim) * std::log(2.0 * md) / md);
}

double regret_bound(std::size_t depth, std::size_t kernel_size, std::size_t in_dim,
                    double radius, std::size_t n) {
    check_architecture(depth, kernel_size, in_dim, radius);
    if (n < 1) throw std::invalid_argument("regret_bound: N must be >= 1");
    const double nd = double(n);
    return 8.0 * radius * std::sqrt(double(depth * kernel_size * in_dim) * nd * std::log(2.0 * nd));
}

BoundReport generalization_bound(std::size_t depth, std::size_t kernel_size, std::size_t in_dim,
                                 double radius, std::size_t n, double delta,
                                 const MixingProfile& profile, double c1) {
    check_architecture(depth, kernel_size, in_dim, radius);
    if (n < 2) throw std::invalid_argument("generalization_bound: N must be >= 2");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("generalization_bound: delta must be in (0,1)");
    if (!(c1 >= 0.0)) throw std::invalid_argument("generalization_bound: C1 must be >= 0");

    const double nd = double(n);
    BoundReport report;
    report.complexity_term =
        c1 * radius * std::sqrt(double(depth * kernel_size * in_dim) * std::log(nd) / nd);
    report.mixing_const = profile.C0;
    report.concentration_term = std::sqrt(std::log(1.0 / delta) / nd);
    report.total = report.complexity_term + report.mixing_const + report.concentration_term;
    report.depth = depth;
    report.kernel_size = kernel_size;
    report.in_dim = in_dim;
    report.n = n;
    report.norm_radius = radius;
    report.delta = delta;
    report.c1 = c1;
    return report;
}

PolynomialRate polynomial_mixing_rate(double gamma, std::size_t n) {
    if (!(gamma > 1.0)) throw std::invalid_argument("polynomial_mixing_rate: gamma must be > 1");
    if (n < 1) throw std::invalid_argument("polynomial_mixing_rate: N must be >= 1");
    double root = std::pow(double(n), 1.0 / (gamma + 1.0));
    // pow() can land a hair to either side of an exact integer root; snap
    // before taking the ceiling.
    const double nearest = std::round(root);
    if (std::fabs(root - nearest) < 1e-9 * std::max(1.0, nearest)) root = nearest;
    PolynomialRate rate;
    rate.delay = static_cast<std::size_t>(std::ceil(root));
    rate.exponent = gamma / (gamma + 1.0);
    return rate;
}

double tightness_ratio(double gap, const BoundReport& report) {
    if (!(report.total > 0.0))
        throw std::invalid_argument("tightness_ratio: bound total must be positive");
    if (gap < 0.0) throw std::invalid_argument("tightness_ratio: gap must be nonnegative");
    return gap / report.total;
}

} // namespace tcnlab
