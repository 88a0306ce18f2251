// Post-hoc statistics over completed runs: power-law scaling fits in
// log-log space, Welch contrasts with Bonferroni correction, Cohen's d
// effect sizes, and ordinary-least-squares calibration of the bound
// constants. All operations are pure.
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace tcnlab {

struct PowerLawFit {
    double exponent = 0.0;       // b in y = a * x^b
    double log_intercept = 0.0;  // ln(a)
    double r_squared = 0.0;
    std::size_t n_points = 0;
    bool degenerate = false;     // constant y: exponent 0, r_squared reported as 0
};

// OLS on (ln x, ln y); requires >= 3 strictly positive points.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

struct WelchResult {
    double t = 0.0;
    double dof = 0.0;
    double p = 1.0;
    bool degenerate = false;  // both samples constant
};

// Welch's t statistic with Satterthwaite degrees of freedom and a two-sided
// p-value. Each sample needs >= 2 finite values.
WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b);

// min(1, p*m) elementwise.
std::vector<double> bonferroni(std::vector<double> p_values, std::size_t m_comparisons);

struct EffectSize {
    double d = 0.0;
    bool zero_variance = false;
};

// Mean difference over the pooled standard deviation.
EffectSize cohens_d(const std::vector<double>& a, const std::vector<double>& b);

struct CalibrationPoint {
    double gap = 0.0;
    std::size_t depth = 1;
    std::size_t kernel_size = 1;
    std::size_t in_dim = 1;
    double norm_radius = 1.0;
    std::size_t n = 2;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct CalibrationResult {
    double c0_hat = 0.0;  // intercept
    double c1_hat = 0.0;  // slope on R*sqrt(D p n ln(N)/N)
    Interval ci95_c0;
    Interval ci95_c1;
    std::size_t n_runs = 0;
};

// OLS of gap on x = R*sqrt(D p n ln(N)/N) with intercept; 95% CIs from
// standard OLS theory. The concentration term is absorbed into the
// residual. Requires >= 3 runs spanning >= 2 distinct regressor values.
CalibrationResult calibrate_constants(const std::vector<CalibrationPoint>& runs);

// The regressor used by the calibration.
double calibration_regressor(const CalibrationPoint& run);

} // namespace tcnlab
