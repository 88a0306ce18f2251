// Monte-Carlo estimation of empirical Rademacher complexity,
//
//   (1/m) E_sigma [ sup_f  sum_i sigma_i f(X_i) ],
//
// with the sup taken over a finite sampled subset of the hypothesis class,
// so the estimate is a sound lower bound on the true complexity: it can
// certify a violated capacity bound but never a satisfied one. A projected
// gradient-ascent refinement enriches the hypothesis pool with members
// optimized against concrete sign draws, tightening the lower bound while
// keeping every pool member inside the class.
#pragma once

#include "tcnlab/tcn.hpp"

#include <cstdint>
#include <vector>

namespace tcnlab {

struct RademacherEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t n_hypotheses = 0;
    std::size_t n_trials = 0;
};

// MC core over a precomputed value matrix (n_hyp x m, row-major): each trial
// draws sigma in {-1,+1}^m and takes max_h (1/m) sum_i sigma_i values[h][i].
// Requires trials >= 100.
RademacherEstimate rademacher_mc_from_values(const std::vector<double>& values,
                                             std::size_t n_hyp, std::size_t m,
                                             std::size_t trials, std::uint64_t seed);

// Exact counterpart by enumeration of all 2^m sign vectors (m <= 20); the
// independent oracle for the MC core.
double rademacher_exact_from_values(const std::vector<double>& values,
                                    std::size_t n_hyp, std::size_t m);

struct RademacherMcConfig {
    std::size_t hypothesis_samples = 500;
    std::size_t sigma_trials = 1000;
    std::size_t channels = 4;       // hidden width of sampled members
    std::size_t refine_rounds = 16; // pool members added by ascent
    std::size_t refine_steps = 10;
    std::uint64_t seed = 0;
};

// Estimates the complexity of the depth-D, kernel-p, radius-R causal TCN
// class on the given sample of univariate input windows. Sampled members
// have every convolutional layer projected into the R-ball and a final
// single-channel layer, so f(X) is the network output at the last window
// position.
RademacherEstimate empirical_rademacher_mc(std::size_t depth, std::size_t kernel_size,
                                           double radius,
                                           const std::vector<std::vector<double>>& windows,
                                           const RademacherMcConfig& cfg);

} // namespace tcnlab
