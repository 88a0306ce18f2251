// Delayed-feedback online learner and generalization-gap evaluation.
//
// The learner runs projected online gradient descent (mirror descent with
// an l2 regularizer) over one-step-ahead prediction: the hypothesis at
// round t predicts x_{t+1} from the prefix up to t, but the gradient used
// at round t comes from the datum observed d rounds earlier, so updates
// never touch the most recent (most dependent) observations. Every round's
// hypothesis feeds a running average; the averaged weights are the final
// predictor (online-to-batch conversion).
#pragma once

#include "tcnlab/tcn.hpp"

#include <cstdint>
#include <vector>

namespace tcnlab {

struct TrainConfig {
    std::size_t delay = 0;        // d
    std::size_t passes = 1;       // full passes over the sequence
    double step_scale = 1.0;      // multiplier on sqrt(ln N / t)
    double eval_fraction = 0.2;   // held-out contiguous suffix
    std::uint64_t seed = 0;
};

struct TrainedModel {
    TcnWeights averaged_weights;       // running mean of every round's hypothesis
    TcnWeights final_weights;
    std::vector<double> regret_trace;  // cumulative online loss, one entry per round
    std::vector<double> norms_trace;   // total_norm after each round
};

// step_scale * sqrt(ln N / t). N >= 2 and t >= 1.
double step_size(std::size_t t, std::size_t n, double step_scale = 1.0);

// Requires series length > delay + receptive_field. Deterministic for a
// fixed seed; delay 0 reduces to standard projected online gradient descent.
TrainedModel train_delayed_feedback(const TcnConfig& config, const Series& train,
                                    const TrainConfig& tcfg);

// Cumulative online loss minus the comparator's loss over the same visited
// positions. No sign constraint; callers typically pass the best offline
// model as a proxy for the in-class minimizer.
double regret_against_comparator(const std::vector<double>& regret_trace,
                                 const TcnConfig& config, const TcnWeights& comparator,
                                 const Series& series);

struct RegretReport {
    double regret = 0.0;
    double comparator_loss = 0.0;
    std::string comparator;  // which candidate won: "offline", "zero", "final"
};

// The true in-class minimizer is intractable for nonconvex stacks, so the
// reported regret uses the best of {offline-trained model, zero model, final
// online model} and is therefore a lower bound on the definitional R_N.
RegretReport reported_regret(const TcnConfig& config, const TrainedModel& model,
                             const Series& series, const TrainConfig& tcfg);

// Mean one-step-ahead clipped loss of `weights` over the series.
double one_step_loss(const TcnConfig& config, const TcnWeights& weights, const Series& series);

struct GapEvaluation {
    double train_loss = 0.0;  // in [0,1]
    double test_loss = 0.0;   // in [0,1]
    double gap = 0.0;         // |test - train|
    double total_norm = 0.0;
};

// One-step-ahead losses of the averaged predictor on both splits. Both
// series must be at least receptive_field + 1 long.
GapEvaluation evaluate_gap(const TcnConfig& config, const TcnWeights& weights,
                           const Series& train, const Series& test);

} // namespace tcnlab
