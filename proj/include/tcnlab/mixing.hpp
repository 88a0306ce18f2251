// Dependence models and sample-size accounting for stationary sequences.
//
// A MixingProfile is the parametric envelope of the beta-mixing
// coefficients of a process: beta(k) <= C0*exp(-c0*k) (exponential decay)
// or beta(k) <= C0*k^-gamma (polynomial decay). For an AR(1) process with
// lag-1 autocorrelation rho in (0,1), the standard envelope beta(k) <= rho^k
// corresponds to C0 = 1, c0 = -ln(rho).
#pragma once

#include "tcnlab/series.hpp"

#include <cstdint>

namespace tcnlab {

enum class DecayKind { Exponential, Polynomial };

struct MixingProfile {
    DecayKind kind = DecayKind::Exponential;
    double C0 = 1.0;     // multiplicative constant, >= 0
    double c0 = 1.0;     // exponential rate, > 0 (Exponential only)
    double gamma = 2.0;  // polynomial rate, > 1 (Polynomial only)

    static MixingProfile exponential(double C0, double c0);
    static MixingProfile polynomial(double C0, double gamma);
};

struct Ar1Spec {
    double rho = 0.0;              // lag-1 autocorrelation, |rho| < 1
    std::size_t length = 1;        // N
    std::uint64_t seed = 0;
    double target_variance = 1.0;  // stationary variance of X_t
};

// X_t = rho*X_{t-1} + eps_t with eps_t ~ N(0, var*(1-rho^2)) and X_0 drawn
// from the stationary law N(0, var), so no burn-in is needed. Deterministic
// for a fixed seed (splitmix64 + Box-Muller, see rng.hpp).
Series gen_ar1(const Ar1Spec& spec);

// beta(k) under the profile envelope; k >= 1.
double beta_coefficient(const MixingProfile& profile, std::size_t k);

// Exponential profile for AR(1): c0 = -ln(rho). The textbook envelope
// uses C0 = 1; pass a different C0 to tighten or loosen it.
MixingProfile ar1_mixing_profile(double rho, double C0 = 1.0);

// floor(N*(1-rho)/(1+rho)), the count of independent observations carrying
// the same information as N dependent ones.
std::size_t effective_sample_size(std::size_t n, double rho);

// floor(n_eff*(1+rho)/(1-rho)), evaluated ratio-first in double precision.
// This deliberately reproduces published fair-comparison tables bit-exactly,
// floor artifacts included: at (500, 0.2) the double product is
// 749.9999999999999 and the result is 749 even though exact rational
// arithmetic gives 750.
std::size_t required_length(std::size_t n_eff, double rho);

} // namespace tcnlab
