#include "tcnlab/rademacher.hpp"

#include "tcnlab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tcnlab {

RademacherEstimate rademacher_mc_from_values(const std::vector<double>& values,
                                             std::size_t n_hyp, std::size_t m,
                                             std::size_t trials, std::uint64_t seed) {
    if (trials < 100) throw std::invalid_argument("rademacher mc: trials must be >= 100");
    if (n_hyp == 0 || m == 0) throw std::invalid_argument("rademacher mc: empty value matrix");
    if (values.size() != n_hyp * m)
        throw std::invalid_argument("rademacher mc: value matrix size mismatch");

    SplitMix64 rng(seed);
    std::vector<double> signs(m);
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        for (std::size_t i = 0; i < m; ++i) signs[i] = (rng.next_u64() >> 63) ? 1.0 : -1.0;
        double best = -1e300;
        for (std::size_t h = 0; h < n_hyp; ++h) {
            const double* row = values.data() + h * m;
            double corr = 0.0;
            for (std::size_t i = 0; i < m; ++i) corr += signs[i] * row[i];
            if (corr > best) best = corr;
        }
        const double v = best / double(m);
        sum += v;
        sum_sq += v * v;
    }

    RademacherEstimate out;
    out.estimate = sum / double(trials);
    const double var = std::max(0.0, sum_sq / double(trials) - out.estimate * out.estimate);
    out.std_error = std::sqrt(var / double(trials));
    out.n_hypotheses = n_hyp;
    out.n_trials = trials;
    return out;
}

double rademacher_exact_from_values(const std::vector<double>& values,
                                    std::size_t n_hyp, std::size_t m) {
    if (n_hyp == 0 || m == 0) throw std::invalid_argument("rademacher exact: empty value matrix");
    if (m > 20) throw std::invalid_argument("rademacher exact: m too large for enumeration");
    if (values.size() != n_hyp * m)
        throw std::invalid_argument("rademacher exact: value matrix size mismatch");

    const std::size_t combos = std::size_t{1} << m;
    double total = 0.0;
    for (std::size_t mask = 0; mask < combos; ++mask) {
        double best = -1e300;
        for (std::size_t h = 0; h < n_hyp; ++h) {
            const double* row = values.data() + h * m;
            double corr = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                corr += ((mask >> i) & 1u) ? row[i] : -row[i];
            if (corr > best) best = corr;
        }
        total += best;
    }
    return total / (double(combos) * double(m));
}

namespace {

// Class member: depth conv layers, hidden width `channels`, final layer to a
// single channel, every layer projected to the radius; passthrough readout.
TcnConfig member_config(std::size_t depth, std::size_t kernel_size, double radius,
                        std::size_t channels) {
    TcnConfig cfg;
    cfg.depth = depth;
    cfg.kernel_size = kernel_size;
    cfg.in_dim = 1;
    cfg.channels = channels;
    cfg.dilation_base = 2;
    cfg.norm_radius = radius;
    return cfg;
}

TcnWeights sample_member(const TcnConfig& cfg, std::uint64_t seed) {
    NormalSampler normal(seed);
    TcnWeights w;
    std::size_t width = cfg.in_dim;
    for (std::size_t l = 0; l < cfg.depth; ++l) {
        const std::size_t out = (l + 1 == cfg.depth) ? 1 : cfg.channels;
        Kernel k = Kernel::zeros(cfg.kernel_size, width, out);
        const double sd = 1.0 / std::sqrt(double(k.taps * k.in_ch));
        for (double& v : k.w) v = sd * normal.next();
        project_norm_21_inplace(k, cfg.norm_radius);
        w.layers.push_back(std::move(k));
        width = out;
    }
    w.readout = Kernel::zeros(1, 1, 1);
    w.readout.w[0] = 1.0;
    return w;
}

// f(X) = output at the last position of the window.
double member_value(const TcnConfig& cfg, const TcnWeights& w,
                    const std::vector<double>& window, TcnWorkspace& ws) {
    forward_window(cfg, w, window.data(), window.size(), ws);
    return readout_at(w, ws, window.size() - 1);
}

void append_values(const TcnConfig& cfg, const TcnWeights& w,
                   const std::vector<std::vector<double>>& windows,
                   std::vector<double>& values, TcnWorkspace& ws) {
    for (const std::vector<double>& window : windows)
        values.push_back(member_value(cfg, w, window, ws));
}

// A few steps of normalized projected gradient ascent on the sign
// correlation g(W) = (1/m) sum_i sigma_i f_W(X_i), starting from the pool
// member that currently best matches sigma. Projection after every step
// keeps the iterate inside the class.
TcnWeights refine_member(const TcnConfig& cfg, TcnWeights w,
                         const std::vector<std::vector<double>>& windows,
                         const std::vector<double>& signs, std::size_t steps) {
    TcnWorkspace ws;
    TcnWeights grads = w;
    std::vector<double> d_value;
    const double m = double(windows.size());
    for (std::size_t step = 0; step < steps; ++step) {
        fill_zero(grads);
        for (std::size_t i = 0; i < windows.size(); ++i) {
            const std::vector<double>& window = windows[i];
            forward_window(cfg, w, window.data(), window.size(), ws);
            d_value.assign(window.size(), 0.0);
            d_value.back() = signs[i] / m;
            backward_window(cfg, w, ws, d_value.data(), grads);
        }
        double norm_sq = 0.0;
        for (const Kernel& k : grads.layers)
            for (double v : k.w) norm_sq += v * v;
        if (norm_sq < 1e-24) break;
        const double step_len = 0.5 * cfg.norm_radius / std::sqrt(double(step + 1));
        const double scale = step_len / std::sqrt(norm_sq);
        for (std::size_t l = 0; l < w.layers.size(); ++l) {
            Kernel& k = w.layers[l];
            const Kernel& g = grads.layers[l];
            for (std::size_t idx = 0; idx < k.w.size(); ++idx) k.w[idx] += scale * g.w[idx];
            project_norm_21_inplace(k, cfg.norm_radius);
        }
    }
    return w;
}

} // namespace

RademacherEstimate empirical_rademacher_mc(std::size_t depth, std::size_t kernel_size,
                                           double radius,
                                           const std::vector<std::vector<double>>& windows,
                                           const RademacherMcConfig& cfg) {
    if (windows.empty()) throw std::invalid_argument("rademacher mc: need at least one window");
    if (cfg.hypothesis_samples == 0)
        throw std::invalid_argument("rademacher mc: need at least one hypothesis");
    if (cfg.sigma_trials < 100)
        throw std::invalid_argument("rademacher mc: trials must be >= 100");
    for (const auto& w : windows)
        if (w.empty()) throw std::invalid_argument("rademacher mc: empty window");

    const std::size_t m = windows.size();
    const TcnConfig class_cfg = member_config(depth, kernel_size, radius, cfg.channels);

    std::vector<TcnWeights> pool;
    pool.reserve(cfg.hypothesis_samples + cfg.refine_rounds);
    std::vector<double> values;
    values.reserve((cfg.hypothesis_samples + cfg.refine_rounds) * m);

    TcnWorkspace ws;
    for (std::size_t h = 0; h < cfg.hypothesis_samples; ++h) {
        pool.push_back(sample_member(class_cfg, derive_seed({cfg.seed, 0x517, h})));
        append_values(class_cfg, pool.back(), windows, values, ws);
    }

    // Refinement: ascend from the best sampled member for a handful of
    // fresh sign draws and add the results to the pool.
    SplitMix64 refine_rng(derive_seed({cfg.seed, 0xA5C}));
    std::vector<double> signs(m);
    for (std::size_t r = 0; r < cfg.refine_rounds; ++r) {
        for (std::size_t i = 0; i < m; ++i)
            signs[i] = (refine_rng.next_u64() >> 63) ? 1.0 : -1.0;
        std::size_t best_h = 0;
        double best = -1e300;
        for (std::size_t h = 0; h < pool.size(); ++h) {
            double corr = 0.0;
            for (std::size_t i = 0; i < m; ++i) corr += signs[i] * values[h * m + i];
            if (corr > best) {
                best = corr;
                best_h = h;
            }
        }
        pool.push_back(refine_member(class_cfg, pool[best_h], windows, signs, cfg.refine_steps));
        append_values(class_cfg, pool.back(), windows, values, ws);
    }

    RademacherEstimate out = rademacher_mc_from_values(values, pool.size(), m, cfg.sigma_trials,
                                                       derive_seed({cfg.seed, 0x516A}));
    return out;
}

} // namespace tcnlab
