#include "tcnlab/training.hpp"

#include <cmath>
#include <stdexcept>

namespace tcnlab {

double step_size(std::size_t t, std::size_t n, double step_scale) {
    if (t < 1) throw std::invalid_argument("step_size: t must be >= 1");
    if (n < 2) throw std::invalid_argument("step_size: N must be >= 2 (ln N vanishes at 1)");
    return step_scale * std::sqrt(std::log(double(n)) / double(t));
}

TrainedModel train_delayed_feedback(const TcnConfig& config, const Series& train,
                                    const TrainConfig& tcfg) {
    validate_series(train);
    const std::size_t len = train.size();
    if (len <= tcfg.delay + receptive_field(config))
        throw std::invalid_argument("train_delayed_feedback: sequence too short for delay + receptive field");
    if (tcfg.passes < 1) throw std::invalid_argument("train_delayed_feedback: passes must be >= 1");

    const std::size_t positions = len - 1;  // predict x[t+1] from prefix up to t
    const std::size_t total_rounds = positions * tcfg.passes;
    if (total_rounds < 2)
        throw std::invalid_argument("train_delayed_feedback: need at least 2 online rounds");

    const std::size_t rf = receptive_field(config);

    TrainedModel model;
    TcnWeights weights = init_weights(config, tcfg.seed);
    model.averaged_weights = weights;
    scale_weights(model.averaged_weights, 0.0);
    model.regret_trace.reserve(total_rounds);
    model.norms_trace.reserve(total_rounds);

    TcnWorkspace ws;
    TcnWeights grads = weights;
    fill_zero(grads);
    std::vector<double> d_value;

    // Predicted value at `pos` from the window covering its receptive field;
    // identical to a full-sequence forward at that position.
    const auto predict_at = [&](std::size_t pos) {
        const std::size_t start = pos + 1 >= rf ? pos + 1 - rf : 0;
        const std::size_t t_len = pos - start + 1;
        forward_window(config, weights, train.values.data() + start, t_len, ws);
        return readout_at(weights, ws, t_len - 1);
    };

    double cumulative_loss = 0.0;
    std::size_t round = 0;
    for (std::size_t pass = 0; pass < tcfg.passes; ++pass) {
        for (std::size_t pos = 0; pos < positions; ++pos) {
            ++round;

            // Snapshot h_t into the running average before any update.
            const double shrink = 1.0 / double(round);
            scale_weights(model.averaged_weights, 1.0 - shrink);
            axpy(model.averaged_weights, shrink, weights);

            cumulative_loss += clipped_sq_loss(predict_at(pos), train[pos + 1]);
            model.regret_trace.push_back(cumulative_loss);

            // Feedback for position pos-delay arrives now; earlier rounds of
            // the pass wait.
            if (pos >= tcfg.delay) {
                const std::size_t fb = pos - tcfg.delay;
                const std::size_t start = fb + 1 >= rf ? fb + 1 - rf : 0;
                const std::size_t t_len = fb - start + 1;
                forward_window(config, weights, train.values.data() + start, t_len, ws);
                const double yhat = readout_at(weights, ws, t_len - 1);
                const double g = clipped_sq_loss_grad(yhat, train[fb + 1]);
                if (g != 0.0) {
                    fill_zero(grads);
                    d_value.assign(t_len, 0.0);
                    d_value[t_len - 1] = g;
                    backward_window(config, weights, ws, d_value.data(), grads);
                    axpy(weights, -step_size(round, total_rounds, tcfg.step_scale), grads);
                    for (Kernel& k : weights.layers) project_norm_21_inplace(k, config.norm_radius);
                }
            }
            model.norms_trace.push_back(total_norm(weights));
        }
    }

    model.final_weights = std::move(weights);
    return model;
}

double one_step_loss(const TcnConfig& config, const TcnWeights& weights, const Series& series) {
    validate_series(series);
    if (series.size() < receptive_field(config))
        throw std::invalid_argument("one_step_loss: series shorter than receptive field");
    if (series.size() < 2)
        throw std::invalid_argument("one_step_loss: need at least two values");
    const Prediction pred = forward(config, weights, series);
    double loss = 0.0;
    const std::size_t positions = series.size() - 1;
    for (std::size_t t = 0; t < positions; ++t)
        loss += clipped_sq_loss(pred.values[t], series[t + 1]);
    return loss / double(positions);
}

double regret_against_comparator(const std::vector<double>& regret_trace,
                                 const TcnConfig& config, const TcnWeights& comparator,
                                 const Series& series) {
    if (regret_trace.empty()) throw std::invalid_argument("regret: empty trace");
    validate_series(series);
    const std::size_t positions = series.size() - 1;
    if (positions == 0) throw std::invalid_argument("regret: series has no prediction targets");

    const Prediction pred = forward(config, comparator, series);
    std::vector<double> losses(positions);
    for (std::size_t t = 0; t < positions; ++t)
        losses[t] = clipped_sq_loss(pred.values[t], series[t + 1]);

    // Multi-pass traces revisit positions cyclically.
    double comparator_total = 0.0;
    for (std::size_t s = 0; s < regret_trace.size(); ++s) comparator_total += losses[s % positions];
    return regret_trace.back() - comparator_total;
}

RegretReport reported_regret(const TcnConfig& config, const TrainedModel& model,
                             const Series& series, const TrainConfig& tcfg) {
    // Offline candidate: undelayed training over the full sequence.
    TrainConfig offline_cfg = tcfg;
    offline_cfg.delay = 0;
    const TcnWeights offline = train_delayed_feedback(config, series, offline_cfg).final_weights;

    const std::size_t positions = series.size() - 1;
    const auto total_loss = [&](const TcnWeights& w) {
        return one_step_loss(config, w, series) * double(positions);
    };

    RegretReport report;
    report.comparator = "offline";
    report.comparator_loss = total_loss(offline);
    const double zero_loss = total_loss(zero_weights(config));
    if (zero_loss < report.comparator_loss) {
        report.comparator = "zero";
        report.comparator_loss = zero_loss;
    }
    const double final_loss = total_loss(model.final_weights);
    if (final_loss < report.comparator_loss) {
        report.comparator = "final";
        report.comparator_loss = final_loss;
    }
    const double per_pass = report.comparator_loss;
    const double passes = double(model.regret_trace.size()) / double(positions);
    report.comparator_loss = per_pass * passes;
    report.regret = model.regret_trace.back() - report.comparator_loss;
    return report;
}

GapEvaluation evaluate_gap(const TcnConfig& config, const TcnWeights& weights,
                           const Series& train, const Series& test) {
    GapEvaluation out;
    out.train_loss = one_step_loss(config, weights, train);
    out.test_loss = one_step_loss(config, weights, test);
    out.gap = std::fabs(out.test_loss - out.train_loss);
    out.total_norm = total_norm(weights);
    return out;
}

} // namespace tcnlab
