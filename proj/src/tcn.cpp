#include "tcnlab/tcn.hpp"

#include "tcnlab/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace tcnlab {

namespace {

std::size_t dilation_of(const TcnConfig& config, std::size_t layer) {
    std::size_t d = 1;
    for (std::size_t l = 0; l < layer; ++l) d *= config.dilation_base;
    return d;
}

} // namespace

std::size_t receptive_field(const TcnConfig& config) {
    std::size_t span = 0;
    for (std::size_t l = 0; l < config.depth; ++l)
        span += (config.kernel_size - 1) * dilation_of(config, l);
    return 1 + span;
}

void validate_shapes(const TcnConfig& config, const TcnWeights& weights) {
    if (weights.layers.size() != config.depth)
        throw std::invalid_argument("tcn: layer count does not match depth");
    std::size_t width = config.in_dim;
    for (std::size_t l = 0; l < weights.layers.size(); ++l) {
        const Kernel& k = weights.layers[l];
        if (k.taps != config.kernel_size)
            throw std::invalid_argument("tcn: kernel taps mismatch at layer " + std::to_string(l));
        if (k.in_ch != width)
            throw std::invalid_argument("tcn: input width mismatch at layer " + std::to_string(l));
        if (k.w.size() != k.taps * k.in_ch * k.out_ch)
            throw std::invalid_argument("tcn: kernel storage size mismatch at layer " + std::to_string(l));
        width = k.out_ch;
    }
    const Kernel& r = weights.readout;
    if (r.taps != 1 || r.in_ch != width || r.out_ch != 1 || r.w.size() != width)
        throw std::invalid_argument("tcn: readout shape mismatch");
}

TcnWeights zero_weights(const TcnConfig& config) {
    TcnWeights w;
    std::size_t width = config.in_dim;
    for (std::size_t l = 0; l < config.depth; ++l) {
        w.layers.push_back(Kernel::zeros(config.kernel_size, width, config.channels));
        width = config.channels;
    }
    w.readout = Kernel::zeros(1, width, 1);
    return w;
}

TcnWeights init_weights(const TcnConfig& config, std::uint64_t seed) {
    NormalSampler normal(seed);
    TcnWeights w = zero_weights(config);
    for (Kernel& k : w.layers) {
        const double sd = 1.0 / std::sqrt(double(k.taps * k.in_ch));
        for (double& v : k.w) v = sd * normal.next();
        project_norm_21_inplace(k, config.norm_radius);
    }
    const double sd = 1.0 / std::sqrt(double(w.readout.in_ch));
    for (double& v : w.readout.w) v = sd * normal.next();
    return w;
}

double norm_21(const Kernel& kernel) {
    double total = 0.0;
    for (std::size_t j = 0; j < kernel.out_ch; ++j) {
        double sq = 0.0;
        for (std::size_t k = 0; k < kernel.taps; ++k)
            for (std::size_t i = 0; i < kernel.in_ch; ++i) {
                const double v = kernel.at(k, i, j);
                sq += v * v;
            }
        total += std::sqrt(sq);
    }
    return total;
}

void project_norm_21_inplace(Kernel& kernel, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("project_norm_21: radius must be > 0");
    std::vector<double> norms(kernel.out_ch, 0.0);
    for (std::size_t j = 0; j < kernel.out_ch; ++j) {
        double sq = 0.0;
        for (std::size_t k = 0; k < kernel.taps; ++k)
            for (std::size_t i = 0; i < kernel.in_ch; ++i) {
                const double v = kernel.at(k, i, j);
                sq += v * v;
            }
        norms[j] = std::sqrt(sq);
    }
    const double sum = std::accumulate(norms.begin(), norms.end(), 0.0);
    if (sum <= radius) return;

    // Sorted-threshold projection of the channel-norm vector onto the l1
    // ball: theta is the largest shift that keeps the truncated simplex
    // condition, channels below it collapse to zero.
    std::vector<double> sorted = norms;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        cumulative += sorted[j];
        const double candidate = (cumulative - radius) / double(j + 1);
        if (sorted[j] - candidate > 0.0) theta = candidate;
    }
    for (std::size_t j = 0; j < kernel.out_ch; ++j) {
        const double target = std::max(norms[j] - theta, 0.0);
        const double factor = norms[j] > 0.0 ? target / norms[j] : 0.0;
        if (factor == 1.0) continue;
        for (std::size_t k = 0; k < kernel.taps; ++k)
            for (std::size_t i = 0; i < kernel.in_ch; ++i) kernel.at(k, i, j) *= factor;
    }
}

Kernel project_norm_21(const Kernel& kernel, double radius) {
    Kernel out = kernel;
    project_norm_21_inplace(out, radius);
    return out;
}

double total_norm(const TcnWeights& weights) {
    double total = 0.0;
    for (const Kernel& k : weights.layers) total += norm_21(k);
    total += norm_21(weights.readout);
    return total;
}

void forward_window(const TcnConfig& config, const TcnWeights& weights,
                    const double* input, std::size_t t_len, TcnWorkspace& ws) {
    const std::size_t depth = weights.layers.size();
    ws.t_len = t_len;
    ws.acts.resize(depth + 1);
    ws.acts[0].assign(input, input + config.in_dim * t_len);

    for (std::size_t l = 0; l < depth; ++l) {
        const Kernel& kern = weights.layers[l];
        const std::size_t dil = dilation_of(config, l);
        std::vector<double>& out = ws.acts[l + 1];
        out.assign(kern.out_ch * t_len, 0.0);
        const std::vector<double>& in = ws.acts[l];
        for (std::size_t j = 0; j < kern.out_ch; ++j) {
            double* oj = out.data() + j * t_len;
            for (std::size_t k = 0; k < kern.taps; ++k) {
                const std::size_t shift = k * dil;
                if (shift >= t_len) break;  // taps beyond the window hit the zero padding
                for (std::size_t i = 0; i < kern.in_ch; ++i) {
                    const double wkij = kern.at(k, i, j);
                    if (wkij == 0.0) continue;
                    const double* ii = in.data() + i * t_len;
                    for (std::size_t t = shift; t < t_len; ++t) oj[t] += wkij * ii[t - shift];
                }
            }
            for (std::size_t t = 0; t < t_len; ++t) oj[t] = oj[t] > 0.0 ? oj[t] : 0.0;  // ReLU
        }
    }
}

double readout_at(const TcnWeights& weights, const TcnWorkspace& ws, std::size_t t) {
    const std::vector<double>& top = ws.acts.back();
    const Kernel& r = weights.readout;
    double value = 0.0;
    for (std::size_t i = 0; i < r.in_ch; ++i) value += r.w[i] * top[i * ws.t_len + t];
    return value;
}

void backward_window(const TcnConfig& config, const TcnWeights& weights,
                     const TcnWorkspace& ws, const double* d_value, TcnWeights& grads) {
    const std::size_t depth = weights.layers.size();
    const std::size_t t_len = ws.t_len;
    const Kernel& r = weights.readout;
    const std::vector<double>& top = ws.acts[depth];

    // Readout: value_t = sum_i r_i * top[i,t].
    std::vector<double> d_cur(r.in_ch * t_len, 0.0);
    for (std::size_t i = 0; i < r.in_ch; ++i) {
        double acc = 0.0;
        const double* ti = top.data() + i * t_len;
        double* di = d_cur.data() + i * t_len;
        for (std::size_t t = 0; t < t_len; ++t) {
            acc += d_value[t] * ti[t];
            di[t] = d_value[t] * r.w[i];
        }
        grads.readout.w[i] += acc;
    }

    std::vector<double> d_prev;
    for (std::size_t l = depth; l-- > 0;) {
        const Kernel& kern = weights.layers[l];
        const std::size_t dil = dilation_of(config, l);
        const std::vector<double>& post = ws.acts[l + 1];
        const std::vector<double>& in = ws.acts[l];

        // ReLU gate: post > 0 iff the pre-activation was positive.
        for (std::size_t j = 0; j < kern.out_ch; ++j) {
            const double* pj = post.data() + j * t_len;
            double* dj = d_cur.data() + j * t_len;
            for (std::size_t t = 0; t < t_len; ++t)
                if (pj[t] <= 0.0) dj[t] = 0.0;
        }

        d_prev.assign(kern.in_ch * t_len, 0.0);
        Kernel& gk = grads.layers[l];
        for (std::size_t j = 0; j < kern.out_ch; ++j) {
            const double* dj = d_cur.data() + j * t_len;
            for (std::size_t k = 0; k < kern.taps; ++k) {
                const std::size_t shift = k * dil;
                if (shift >= t_len) break;
                for (std::size_t i = 0; i < kern.in_ch; ++i) {
                    const double* ii = in.data() + i * t_len;
                    double* dpi = d_prev.data() + i * t_len;
                    const double wkij = kern.at(k, i, j);
                    double acc = 0.0;
                    for (std::size_t t = shift; t < t_len; ++t) {
                        acc += dj[t] * ii[t - shift];
                        dpi[t - shift] += dj[t] * wkij;
                    }
                    gk.at(k, i, j) += acc;
                }
            }
        }
        d_cur.swap(d_prev);
    }
}

std::vector<double> forward_channels(const TcnConfig& config, const TcnWeights& weights,
                                     const std::vector<double>& input, std::size_t t_len) {
    if (t_len < 1) throw std::invalid_argument("tcn forward: empty input");
    if (input.size() != config.in_dim * t_len)
        throw std::invalid_argument("tcn forward: input size does not match in_dim x T");
    validate_shapes(config, weights);
    TcnWorkspace ws;
    forward_window(config, weights, input.data(), t_len, ws);
    std::vector<double> out(t_len);
    for (std::size_t t = 0; t < t_len; ++t) out[t] = readout_at(weights, ws, t);
    return out;
}

Prediction forward(const TcnConfig& config, const TcnWeights& weights, const Series& input) {
    if (config.in_dim != 1)
        throw std::invalid_argument("tcn forward(Series): config.in_dim must be 1");
    validate_series(input);
    return Prediction{forward_channels(config, weights, input.values, input.size())};
}

double clipped_sq_loss(double yhat, double y) {
    const double e = yhat - y;
    return std::min(e * e, 1.0);
}

double clipped_sq_loss_grad(double yhat, double y) {
    const double e = yhat - y;
    return e * e < 1.0 ? 2.0 * e : 0.0;
}

LossGradient loss_gradient(const TcnConfig& config, const TcnWeights& weights,
                           const Series& input, const Series& targets) {
    if (config.in_dim != 1)
        throw std::invalid_argument("loss_gradient: config.in_dim must be 1");
    validate_series(input);
    if (targets.size() != input.size())
        throw std::invalid_argument("loss_gradient: targets must align with predictions");
    validate_shapes(config, weights);

    const std::size_t t_len = input.size();
    TcnWorkspace ws;
    forward_window(config, weights, input.values.data(), t_len, ws);

    LossGradient result;
    result.grads = weights;
    fill_zero(result.grads);

    std::vector<double> d_value(t_len);
    const double inv = 1.0 / double(t_len);
    for (std::size_t t = 0; t < t_len; ++t) {
        const double yhat = readout_at(weights, ws, t);
        result.loss += clipped_sq_loss(yhat, targets[t]);
        d_value[t] = inv * clipped_sq_loss_grad(yhat, targets[t]);
    }
    result.loss *= inv;
    backward_window(config, weights, ws, d_value.data(), result.grads);
    return result;
}

void axpy(TcnWeights& y, double alpha, const TcnWeights& x) {
    for (std::size_t l = 0; l < y.layers.size(); ++l) {
        const std::vector<double>& src = x.layers[l].w;
        std::vector<double>& dst = y.layers[l].w;
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += alpha * src[i];
    }
    for (std::size_t i = 0; i < y.readout.w.size(); ++i) y.readout.w[i] += alpha * x.readout.w[i];
}

void scale_weights(TcnWeights& w, double factor) {
    for (Kernel& k : w.layers)
        for (double& v : k.w) v *= factor;
    for (double& v : w.readout.w) v *= factor;
}

void fill_zero(TcnWeights& w) {
    for (Kernel& k : w.layers) std::fill(k.w.begin(), k.w.end(), 0.0);
    std::fill(w.readout.w.begin(), w.readout.w.end(), 0.0);
}

std::size_t weight_count(const TcnWeights& w) {
    std::size_t n = w.readout.w.size();
    for (const Kernel& k : w.layers) n += k.w.size();
    return n;
}

namespace {

nlohmann::json kernel_to_json(const Kernel& k) {
    return {{"taps", k.taps}, {"in_ch", k.in_ch}, {"out_ch", k.out_ch}, {"values", k.w}};
}

Kernel kernel_from_json(const nlohmann::json& j) {
    Kernel k;
    k.taps = j.at("taps").get<std::size_t>();
    k.in_ch = j.at("in_ch").get<std::size_t>();
    k.out_ch = j.at("out_ch").get<std::size_t>();
    k.w = j.at("values").get<std::vector<double>>();
    if (k.w.size() != k.taps * k.in_ch * k.out_ch)
        throw std::invalid_argument("weights json: kernel value count does not match shape");
    return k;
}

} // namespace

std::string weights_to_json(const TcnConfig& config, const TcnWeights& weights) {
    nlohmann::json j;
    j["format"] = "tcn-weights";
    j["version"] = 1;
    j["config"] = {{"depth", config.depth},
                   {"kernel_size", config.kernel_size},
                   {"in_dim", config.in_dim},
                   {"channels", config.channels},
                   {"dilation_base", config.dilation_base},
                   {"norm_radius", config.norm_radius}};
    j["layers"] = nlohmann::json::array();
    for (const Kernel& k : weights.layers) j["layers"].push_back(kernel_to_json(k));
    j["readout"] = kernel_to_json(weights.readout);
    return j.dump();
}

std::pair<TcnConfig, TcnWeights> weights_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format") != "tcn-weights" || j.at("version") != 1)
        throw std::invalid_argument("weights json: unsupported format or version");
    TcnConfig config;
    const nlohmann::json& c = j.at("config");
    config.depth = c.at("depth").get<std::size_t>();
    config.kernel_size = c.at("kernel_size").get<std::size_t>();
    config.in_dim = c.at("in_dim").get<std::size_t>();
    config.channels = c.at("channels").get<std::size_t>();
    config.dilation_base = c.at("dilation_base").get<std::size_t>();
    config.norm_radius = c.at("norm_radius").get<double>();
    TcnWeights w;
    for (const nlohmann::json& lk : j.at("layers")) w.layers.push_back(kernel_from_json(lk));
    w.readout = kernel_from_json(j.at("readout"));
    validate_shapes(config, w);
    return {config, w};
}

} // namespace tcnlab
