#include "doctest.h"

#include "tcnlab/blocking.hpp"
#include "tcnlab/rng.hpp"

#include <cmath>
#include <stdexcept>

using namespace tcnlab;

TEST_CASE("optimal_delay uses the natural logarithm") {
    CHECK(optimal_delay(16384, 0.5) == 20);
    CHECK(optimal_delay(1, 0.7) == 0);
    CHECK(optimal_delay(1000000, 0.5) == 28);
    CHECK_THROWS_AS(optimal_delay(100, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(optimal_delay(100, -1.0), std::invalid_argument);
}

TEST_CASE("discard fraction shrinks with sequence length") {
    const double f_16k = 1.0 / double(optimal_delay(16384, 0.5) + 1);
    const double f_1m = 1.0 / double(optimal_delay(1000000, 0.5) + 1);
    CHECK(f_16k == doctest::Approx(1.0 / 21.0));
    CHECK(f_1m == doctest::Approx(1.0 / 29.0));
    double prev = 1.0;
    for (std::size_t n = 1024; n <= (1u << 20); n *= 2) {
        const double f = 1.0 / double(optimal_delay(n, 0.5) + 1);
        CHECK(f <= prev + 1e-15);
        prev = f;
    }
}

TEST_CASE("make_blocks partitions as specified") {
    BlockingPlan plan = make_blocks(16384, 20);
    CHECK(plan.n_blocks == 780);
    CHECK(plan.remainder == 4);

    BlockingPlan unit = make_blocks(10, 0);
    CHECK(unit.n_blocks == 10);
    CHECK(unit.remainder == 0);
    CHECK(unit.block_ranges.front().first == 1);
    CHECK(unit.block_ranges.front().last == 1);

    BlockingPlan small = make_blocks(7, 3);
    CHECK(small.n_blocks == 1);
    CHECK(small.remainder == 3);
    REQUIRE(small.block_ranges.size() == 1);
    CHECK(small.block_ranges[0].first == 1);
    CHECK(small.block_ranges[0].last == 4);
}

TEST_CASE("blocking plan invariants hold for all N <= 1e4, d <= 100") {
    // Exhaustive; violations are counted in plain loops so the doctest
    // overhead stays off the hot path.
    std::size_t violations = 0;
    for (std::size_t n = 1; n <= 10000; ++n) {
        for (std::size_t d = 0; d <= 100; ++d) {
            const BlockingPlan plan = make_blocks(n, d);
            const std::size_t width = d + 1;
            if (plan.n_blocks != n / width) ++violations;
            if (plan.remainder != n - plan.n_blocks * width) ++violations;
            if (plan.remainder >= width) ++violations;
            if (plan.block_ranges.size() != plan.n_blocks) {
                ++violations;
                continue;
            }
            for (std::size_t j = 0; j < plan.n_blocks; ++j) {
                if (plan.block_ranges[j].first != j * width + 1) ++violations;
                if (plan.block_ranges[j].last != (j + 1) * width) ++violations;
                if (j > 0 &&
                    plan.block_ranges[j].first - plan.block_ranges[j - 1].first != width)
                    ++violations;
            }
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("mixing_term evaluates N*beta(d)") {
    const MixingProfile profile = MixingProfile::exponential(1.0, 0.5);
    CHECK(mixing_term(16384, 10, profile) == doctest::Approx(16384.0 * std::exp(-5.0)).epsilon(1e-12));
    CHECK(mixing_term(16384, 10, profile) == doctest::Approx(110.4).epsilon(1e-3));
    CHECK(mixing_term(5000, 3, MixingProfile::exponential(0.0, 1.0)) == 0.0);
    CHECK_THROWS_AS(mixing_term(100, 0, profile), std::invalid_argument);
}

TEST_CASE("optimal delay collapses the mixing term below C0") {
    for (std::size_t n = 1024; n <= (1u << 20); n *= 2) {
        for (double c0 : {0.1, 0.2, 0.5, 1.0, 2.0}) {
            const std::size_t d = optimal_delay(n, c0);
            const double term = mixing_term(n, d, MixingProfile::exponential(1.0, c0));
            CHECK(term <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("tv_bound evaluates B*beta(d) and is linear in C0") {
    BlockingPlan plan = make_blocks(16384, 20);
    const double v1 = tv_bound(plan, MixingProfile::exponential(1.0, 0.5));
    CHECK(v1 == doctest::Approx(780.0 * std::exp(-10.0)).epsilon(1e-12));
    CHECK(v1 == doctest::Approx(0.0354).epsilon(2e-3));
    const double v2 = tv_bound(plan, MixingProfile::exponential(2.0, 0.5));
    CHECK(v2 == doctest::Approx(2.0 * v1).epsilon(1e-12));

    BlockingPlan empty = make_blocks(3, 5);  // N < d+1 leaves zero blocks
    CHECK(tv_bound(empty, MixingProfile::exponential(1.0, 0.5)) == 0.0);
}

TEST_CASE("tv_exact_oracle vanishes for i.i.d. chains") {
    MarkovChain chain = iid_chain({0.25, 0.75});
    for (std::size_t d = 1; d <= 4; ++d) {
        BlockingPlan plan = make_blocks(4 * (d + 1), d);
        CHECK(tv_exact_oracle(chain, plan) == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("tv_exact_oracle stays below the blocking bound on a sticky chain") {
    MarkovChain chain = symmetric_two_state(0.9);
    BlockingPlan plan = make_blocks(12, 3);
    REQUIRE(plan.n_blocks == 3);
    const double exact = tv_exact_oracle(chain, plan);
    const double bound = double(plan.n_blocks) * markov_beta_exact(chain, plan.delay);
    CHECK(exact <= bound);
    CHECK(exact > 0.0);
}

TEST_CASE("tv_exact_oracle is non-increasing in the delay at fixed block count") {
    MarkovChain chain = symmetric_two_state(0.85);
    double prev = 1.0;
    for (std::size_t d = 1; d <= 6; ++d) {
        BlockingPlan plan = make_blocks(4 * (d + 1), d);
        REQUIRE(plan.n_blocks == 4);
        const double exact = tv_exact_oracle(chain, plan);
        CHECK(exact <= prev + 1e-12);
        prev = exact;
    }
}

TEST_CASE("tv_exact_oracle rejects infeasible enumerations") {
    MarkovChain chain = symmetric_two_state(0.7);
    BlockingPlan plan = make_blocks(100, 3);  // B = 25, 2^25 > 1e7
    CHECK_THROWS_AS(tv_exact_oracle(chain, plan), std::invalid_argument);
}

TEST_CASE("blocking inequality holds over a randomized chain family") {
    // The full 50-chain certification runs in the acceptance suite; this is
    // a fast slice.
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const std::size_t states = 2 + seed % 2;
        MarkovChain chain = random_stationary_chain(states, derive_seed({99, seed}));
        for (std::size_t d : {1, 3, 5}) {
            for (std::size_t b : {2, 4, 6}) {
                BlockingPlan plan = make_blocks(b * (d + 1), d);
                REQUIRE(plan.n_blocks == b);
                const double exact = tv_exact_oracle(chain, plan);
                const double bound = double(b) * markov_beta_exact(chain, d);
                CHECK(exact <= bound + 1e-12);
            }
        }
    }
}
