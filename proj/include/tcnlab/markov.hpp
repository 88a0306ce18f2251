// Finite-state stationary Markov chains: the exactly computable substrate
// for dependence measurements. For a stationary chain, the beta-mixing
// coefficient at lag k has the closed form
//
//   beta(k) = (1/2) * sum_i pi_i * sum_j |P^k(i,j) - pi_j|,
//
// so chains serve as ground truth when checking formulaic envelopes and
// blocking inequalities.
#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace tcnlab {

struct MarkovChain {
    std::size_t n_states = 0;
    std::vector<double> transition;  // row-major S x S, rows sum to 1
    std::vector<double> stationary;  // pi, pi*P = pi

    [[nodiscard]] double p(std::size_t i, std::size_t j) const {
        return transition[i * n_states + j];
    }
};

// Validates row-stochasticity (1e-12) and computes the stationary law by
// power iteration, verified to pi*P = pi within 1e-10.
MarkovChain make_chain(std::size_t n_states, std::vector<double> transition);

// All rows equal: consecutive states are independent draws from `probs`.
MarkovChain iid_chain(std::vector<double> probs);

// Two states, P(stay) = q; second eigenvalue 2q-1, beta(k) = |2q-1|^k / 2.
MarkovChain symmetric_two_state(double stay_probability);

// Random ergodic chain with strictly positive entries (rows are normalized
// uniform draws).
MarkovChain random_stationary_chain(std::size_t n_states, std::uint64_t seed);

// Row-major S x S product of k copies of the transition matrix.
std::vector<double> transition_power(const MarkovChain& chain, std::size_t k);

// Exact beta(k) of the stationary chain; k >= 1.
double markov_beta_exact(const MarkovChain& chain, std::size_t k);

} // namespace tcnlab
