#include "tcnlab/blocking.hpp"

#include <cmath>
#include <stdexcept>

namespace tcnlab {

std::size_t optimal_delay(std::size_t n, double c0) {
    if (n < 1) throw std::invalid_argument("optimal_delay: N must be >= 1");
    if (!(c0 > 0.0)) throw std::invalid_argument("optimal_delay: c0 must be > 0");
    const double d = std::ceil(std::log(static_cast<double>(n)) / c0);
    return static_cast<std::size_t>(d);
}

BlockingPlan make_blocks(std::size_t n, std::size_t delay) {
    if (n < 1) throw std::invalid_argument("make_blocks: N must be >= 1");
    BlockingPlan plan;
    plan.n_total = n;
    plan.delay = delay;
    const std::size_t width = delay + 1;
    plan.n_blocks = n / width;
    plan.remainder = n - plan.n_blocks * width;
    plan.block_ranges.reserve(plan.n_blocks);
    for (std::size_t j = 1; j <= plan.n_blocks; ++j)
        plan.block_ranges.push_back({(j - 1) * width + 1, j * width});
    return plan;
}

double mixing_term(std::size_t n, std::size_t delay, const MixingProfile& profile) {
    if (delay < 1) throw std::invalid_argument("mixing_term: delay must be >= 1 (beta(0) undefined)");
    return static_cast<double>(n) * beta_coefficient(profile, delay);
}

double tv_bound(const BlockingPlan& plan, const MixingProfile& profile) {
    if (plan.n_blocks == 0) return 0.0;
    if (plan.delay < 1) throw std::invalid_argument("tv_bound: plan delay must be >= 1");
    return static_cast<double>(plan.n_blocks) * beta_coefficient(profile, plan.delay);
}

double tv_exact_oracle(const MarkovChain& chain, const BlockingPlan& plan) {
    const std::size_t s = chain.n_states;
    const std::size_t b = plan.n_blocks;
    if (b == 0) return 0.0;
    if (b == 1) return 0.0;  // single marginal, joint == product

    double outcomes = 1.0;
    for (std::size_t j = 0; j < b; ++j) {
        outcomes *= static_cast<double>(s);
        if (outcomes > 1e7)
            throw std::invalid_argument("tv_exact_oracle: S^B exceeds enumeration budget of 1e7");
    }

    // Block-first elements sit d+1 indices apart, so the joint law of
    // (X_{t_1},...,X_{t_B}) chains through Q = P^(d+1); each marginal is pi.
    const std::vector<double> q = transition_power(chain, plan.delay + 1);

    // Odometer enumeration of all S^B state paths, maintaining joint and
    // product probabilities incrementally.
    std::vector<std::size_t> path(b, 0);
    double tv = 0.0;
    while (true) {
        double joint = chain.stationary[path[0]];
        double product = chain.stationary[path[0]];
        for (std::size_t j = 1; j < b; ++j) {
            joint *= q[path[j - 1] * s + path[j]];
            product *= chain.stationary[path[j]];
        }
        tv += std::fabs(joint - product);

        std::size_t pos = 0;
        while (pos < b && ++path[pos] == s) path[pos++] = 0;
        if (pos == b) break;
    }
    return 0.5 * tv;
}

} // namespace tcnlab
