#include "tcnlab/markov.hpp"

#include "tcnlab/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tcnlab {

namespace {

// pi' = pi * P
std::vector<double> left_multiply(const std::vector<double>& pi,
                                  const std::vector<double>& p, std::size_t s) {
    std::vector<double> out(s, 0.0);
    for (std::size_t i = 0; i < s; ++i) {
        const double w = pi[i];
        if (w == 0.0) continue;
        for (std::size_t j = 0; j < s; ++j) out[j] += w * p[i * s + j];
    }
    return out;
}

std::vector<double> stationary_by_power_iteration(const std::vector<double>& p, std::size_t s) {
    std::vector<double> pi(s, 1.0 / static_cast<double>(s));
    for (int iter = 0; iter < 100000; ++iter) {
        std::vector<double> next = left_multiply(pi, p, s);
        double diff = 0.0;
        for (std::size_t j = 0; j < s; ++j) diff = std::max(diff, std::fabs(next[j] - pi[j]));
        pi = std::move(next);
        if (diff < 1e-15) break;
    }
    return pi;
}

} // namespace

MarkovChain make_chain(std::size_t n_states, std::vector<double> transition) {
    if (n_states == 0) throw std::invalid_argument("markov chain: need at least one state");
    if (transition.size() != n_states * n_states)
        throw std::invalid_argument("markov chain: transition matrix has wrong size");
    for (std::size_t i = 0; i < n_states; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n_states; ++j) {
            const double v = transition[i * n_states + j];
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument("markov chain: entry outside [0,1] in row " + std::to_string(i));
            row_sum += v;
        }
        if (std::fabs(row_sum - 1.0) > 1e-12)
            throw std::invalid_argument("markov chain: row " + std::to_string(i) + " sums to " +
                                        std::to_string(row_sum) + ", not 1");
    }

    MarkovChain chain;
    chain.n_states = n_states;
    chain.transition = std::move(transition);
    chain.stationary = stationary_by_power_iteration(chain.transition, n_states);

    const std::vector<double> check = left_multiply(chain.stationary, chain.transition, n_states);
    for (std::size_t j = 0; j < n_states; ++j) {
        if (std::fabs(check[j] - chain.stationary[j]) > 1e-10)
            throw std::invalid_argument("markov chain: stationary distribution did not converge");
    }
    return chain;
}

MarkovChain iid_chain(std::vector<double> probs) {
    const std::size_t s = probs.size();
    std::vector<double> p(s * s);
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) p[i * s + j] = probs[j];
    return make_chain(s, std::move(p));
}

MarkovChain symmetric_two_state(double stay_probability) {
    if (!(stay_probability > 0.0 && stay_probability < 1.0))
        throw std::invalid_argument("symmetric_two_state: stay probability must be in (0,1)");
    const double q = stay_probability;
    return make_chain(2, {q, 1.0 - q, 1.0 - q, q});
}

MarkovChain random_stationary_chain(std::size_t n_states, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> p(n_states * n_states);
    for (std::size_t i = 0; i < n_states; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n_states; ++j) {
            // Offset keeps every entry strictly positive, so the chain is
            // ergodic and the stationary law unique.
            const double v = 0.05 + rng.next_uniform();
            p[i * n_states + j] = v;
            row_sum += v;
        }
        for (std::size_t j = 0; j < n_states; ++j) p[i * n_states + j] /= row_sum;
    }
    return make_chain(n_states, std::move(p));
}

std::vector<double> transition_power(const MarkovChain& chain, std::size_t k) {
    const std::size_t s = chain.n_states;
    std::vector<double> result(s * s, 0.0);
    for (std::size_t i = 0; i < s; ++i) result[i * s + i] = 1.0;  // P^0 = I
    std::vector<double> scratch(s * s);
    for (std::size_t step = 0; step < k; ++step) {
        for (std::size_t i = 0; i < s; ++i) {
            for (std::size_t j = 0; j < s; ++j) {
                double acc = 0.0;
                for (std::size_t m = 0; m < s; ++m)
                    acc += result[i * s + m] * chain.transition[m * s + j];
                scratch[i * s + j] = acc;
            }
        }
        result.swap(scratch);
    }
    return result;
}

double markov_beta_exact(const MarkovChain& chain, std::size_t k) {
    if (k < 1) throw std::invalid_argument("markov_beta_exact: k must be >= 1");
    const std::size_t s = chain.n_states;
    const std::vector<double> pk = transition_power(chain, k);
    double total = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < s; ++j)
            row += std::fabs(pk[i * s + j] - chain.stationary[j]);
        total += chain.stationary[i] * row;
    }
    return 0.5 * total;
}

} // namespace tcnlab
