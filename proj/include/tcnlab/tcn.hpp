// Causal dilated temporal convolutional network with explicit l2,1 norm
// accounting.
//
// The network is a stack of `depth` causal convolutions (left zero padding,
// dilation base^layer) each followed by ReLU, and a linear 1x1 readout.
// Capacity is controlled per layer by the mixed norm
//
//   ||W||_{2,1} = sum_j sqrt(sum_{k,i} W(k,i,j)^2)        (j: output channel)
//
// kept inside a radius-R ball by exact Euclidean projection. The readout is
// tracked in total_norm but exempt from the R constraint; the constrained
// hypothesis class is the set of convolutional stacks.
#pragma once

#include "tcnlab/series.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tcnlab {

struct TcnConfig {
    std::size_t depth = 1;         // D, convolutional layers
    std::size_t kernel_size = 5;   // p, taps per layer
    std::size_t in_dim = 1;        // n, input channels
    std::size_t channels = 16;     // hidden width
    std::size_t dilation_base = 2;
    double norm_radius = 1.0;      // R
};

// One convolution kernel of shape (taps, in_ch, out_ch), row-major.
struct Kernel {
    std::size_t taps = 0;
    std::size_t in_ch = 0;
    std::size_t out_ch = 0;
    std::vector<double> w;

    static Kernel zeros(std::size_t taps, std::size_t in_ch, std::size_t out_ch) {
        return Kernel{taps, in_ch, out_ch, std::vector<double>(taps * in_ch * out_ch, 0.0)};
    }
    double& at(std::size_t k, std::size_t i, std::size_t j) {
        return w[(k * in_ch + i) * out_ch + j];
    }
    [[nodiscard]] double at(std::size_t k, std::size_t i, std::size_t j) const {
        return w[(k * in_ch + i) * out_ch + j];
    }
};

struct TcnWeights {
    std::vector<Kernel> layers;  // depth conv kernels
    Kernel readout;              // 1 x last_width x 1
};

// Output aligned to input timesteps; values[t] depends only on inputs <= t.
struct Prediction {
    std::vector<double> values;
};

// 1 + (p-1) * sum_{l<D} base^l.
std::size_t receptive_field(const TcnConfig& config);

// Validates kernel chain consistency against the config (in_dim, taps,
// depth, scalar readout). Throws std::invalid_argument on mismatch.
void validate_shapes(const TcnConfig& config, const TcnWeights& weights);

TcnWeights zero_weights(const TcnConfig& config);

// Per-layer Gaussian entries with scale 1/sqrt(taps*in_ch), conv layers
// immediately projected into the R-ball so the initial hypothesis is
// already in the constrained class.
TcnWeights init_weights(const TcnConfig& config, std::uint64_t seed);

double norm_21(const Kernel& kernel);

// Euclidean projection onto {||.||_{2,1} <= radius}: channel directions are
// preserved and the vector of channel norms is projected onto the l1 ball
// by the sorted-threshold method. Feasible inputs pass through unchanged.
Kernel project_norm_21(const Kernel& kernel, double radius);
void project_norm_21_inplace(Kernel& kernel, double radius);

// Sum of norm_21 over all conv layers plus the readout.
double total_norm(const TcnWeights& weights);

Prediction forward(const TcnConfig& config, const TcnWeights& weights, const Series& input);

// Multichannel entry point; input is channel-major (in_dim x T).
std::vector<double> forward_channels(const TcnConfig& config, const TcnWeights& weights,
                                     const std::vector<double>& input, std::size_t t_len);

// Bounded squared error: min((yhat-y)^2, 1). Zero gradient in the clipped
// region.
double clipped_sq_loss(double yhat, double y);
double clipped_sq_loss_grad(double yhat, double y);

struct LossGradient {
    TcnWeights grads;
    double loss = 0.0;
};

// Mean clipped squared loss over all timesteps plus its exact gradient with
// respect to every weight. Targets must align 1:1 with predictions.
LossGradient loss_gradient(const TcnConfig& config, const TcnWeights& weights,
                           const Series& input, const Series& targets);

// ---------------------------------------------------------------------------
// Window-level machinery shared by the training loop and the complexity
// oracle. A workspace holds per-layer activations for one contiguous input
// window and is reused across calls to avoid reallocation in hot loops.

struct TcnWorkspace {
    std::vector<std::vector<double>> acts;  // acts[0] = input copy, channel-major
    std::size_t t_len = 0;
};

// Runs the conv stack over a window of length t_len (input channel-major,
// in_dim x t_len) and stores every activation in the workspace.
void forward_window(const TcnConfig& config, const TcnWeights& weights,
                    const double* input, std::size_t t_len, TcnWorkspace& ws);

// Readout value at position t of the last forward_window call.
double readout_at(const TcnWeights& weights, const TcnWorkspace& ws, std::size_t t);

// Backpropagates d(objective)/d(readout value) per position (length t_len)
// through the stored activations, accumulating (+=) weight gradients.
void backward_window(const TcnConfig& config, const TcnWeights& weights,
                     const TcnWorkspace& ws, const double* d_value, TcnWeights& grads);

// Weight-space algebra for optimizers and averaging.
void axpy(TcnWeights& y, double alpha, const TcnWeights& x);  // y += alpha*x
void scale_weights(TcnWeights& w, double factor);
void fill_zero(TcnWeights& w);
std::size_t weight_count(const TcnWeights& w);

// Versioned JSON document (layer shapes + row-major values).
std::string weights_to_json(const TcnConfig& config, const TcnWeights& weights);
std::pair<TcnConfig, TcnWeights> weights_from_json(const std::string& text);

} // namespace tcnlab
