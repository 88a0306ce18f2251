#include "tcnlab/mixing.hpp"

#include "tcnlab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace tcnlab {

MixingProfile MixingProfile::exponential(double C0, double c0) {
    if (C0 < 0.0) throw std::invalid_argument("mixing profile: C0 must be >= 0");
    if (c0 <= 0.0) throw std::invalid_argument("mixing profile: c0 must be > 0");
    MixingProfile p;
    p.kind = DecayKind::Exponential;
    p.C0 = C0;
    p.c0 = c0;
    return p;
}

MixingProfile MixingProfile::polynomial(double C0, double gamma) {
    if (C0 < 0.0) throw std::invalid_argument("mixing profile: C0 must be >= 0");
    if (gamma <= 1.0) throw std::invalid_argument("mixing profile: gamma must be > 1");
    MixingProfile p;
    p.kind = DecayKind::Polynomial;
    p.C0 = C0;
    p.gamma = gamma;
    return p;
}

Series gen_ar1(const Ar1Spec& spec) {
    if (!(std::fabs(spec.rho) < 1.0))
        throw std::invalid_argument("gen_ar1: |rho| must be < 1 (non-stationary otherwise)");
    if (spec.length < 1) throw std::invalid_argument("gen_ar1: length must be >= 1");
    if (!(spec.target_variance > 0.0))
        throw std::invalid_argument("gen_ar1: target_variance must be > 0");

    NormalSampler normal(spec.seed);
    Series out;
    out.values.resize(spec.length);

    // Innovation variance var*(1-rho^2) keeps the stationary variance at
    // `target_variance` for every rho.
    const double x0_sd = std::sqrt(spec.target_variance);
    const double eps_sd = std::sqrt(spec.target_variance * (1.0 - spec.rho * spec.rho));

    double x = x0_sd * normal.next();
    out.values[0] = x;
    for (std::size_t t = 1; t < spec.length; ++t) {
        x = spec.rho * x + eps_sd * normal.next();
        out.values[t] = x;
    }
    return out;
}

double beta_coefficient(const MixingProfile& profile, std::size_t k) {
    if (k < 1) throw std::invalid_argument("beta_coefficient: k must be >= 1");
    switch (profile.kind) {
        case DecayKind::Exponential:
            return profile.C0 * std::exp(-profile.c0 * static_cast<double>(k));
        case DecayKind::Polynomial:
            return profile.C0 * std::pow(static_cast<double>(k), -profile.gamma);
    }
    throw std::logic_error("beta_coefficient: unknown decay kind");
}

MixingProfile ar1_mixing_profile(double rho, double C0) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("ar1_mixing_profile: rho must be in (0,1)");
    return MixingProfile::exponential(C0, -std::log(rho));
}

std::size_t effective_sample_size(std::size_t n, double rho) {
    if (n < 1) throw std::invalid_argument("effective_sample_size: N must be >= 1");
    if (!(rho >= 0.0 && rho < 1.0))
        throw std::invalid_argument("effective_sample_size: rho must be in [0,1)");
    const double ratio = (1.0 - rho) / (1.0 + rho);
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * ratio));
}

std::size_t required_length(std::size_t n_eff, double rho) {
    if (n_eff < 1) throw std::invalid_argument("required_length: n_eff must be >= 1");
    if (!(rho >= 0.0 && rho < 1.0))
        throw std::invalid_argument("required_length: rho must be in [0,1)");
    // Ratio first, then the product, then floor. The order matters for
    // bit-exact table reproduction (see header).
    const double ratio = (1.0 + rho) / (1.0 - rho);
    return static_cast<std::size_t>(std::floor(static_cast<double>(n_eff) * ratio));
}

} // namespace tcnlab
