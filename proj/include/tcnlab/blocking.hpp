// Block partition of {1..N} underlying the delayed-feedback analysis.
//
// With delay d, the sequence splits into B = floor(N/(d+1)) blocks of
// d+1 consecutive indices plus a remainder r < d+1. First elements of
// consecutive blocks are d+1 indices apart (d intervening steps), so their
// pairwise dependence is governed by beta(d) and the joint law of all B
// first elements is within B*beta(d) of the product of its marginals in
// total variation.
#pragma once

#include "tcnlab/markov.hpp"
#include "tcnlab/mixing.hpp"

#include <cstddef>
#include <vector>

namespace tcnlab {

struct IndexInterval {
    std::size_t first = 0;  // 1-based, inclusive
    std::size_t last = 0;
};

struct BlockingPlan {
    std::size_t n_total = 0;
    std::size_t delay = 0;
    std::size_t n_blocks = 0;
    std::vector<IndexInterval> block_ranges;
    std::size_t remainder = 0;
};

// ceil(ln(N)/c0): the delay at which N*beta(d) collapses below C0 under
// exponential mixing. Returns 0 for N = 1.
std::size_t optimal_delay(std::size_t n, double c0);

BlockingPlan make_blocks(std::size_t n, std::size_t delay);

// N*beta(d); the residual-dependence penalty of the delayed-feedback bound.
// Requires d >= 1 (beta is defined from lag 1).
double mixing_term(std::size_t n, std::size_t delay, const MixingProfile& profile);

// B*beta(d): the blocking bound on the joint-vs-product total variation.
double tv_bound(const BlockingPlan& plan, const MixingProfile& profile);

// Exact counterpart by full enumeration: the total variation distance
// between the joint law of the B block-first elements of a stationary chain
// and the product of their marginals. Consecutive block-firsts are d+1
// steps apart, so the joint chains through P^(d+1). Rejects S^B > 1e7.
double tv_exact_oracle(const MarkovChain& chain, const BlockingPlan& plan);

} // namespace tcnlab
