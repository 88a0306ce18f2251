#include "tcnlab/analysis.hpp"

#include "tcnlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tcnlab {

namespace {

double mean_of(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc / double(x.size());
}

// Unbiased sample variance.
double variance_of(const std::vector<double>& x, double mean) {
    double acc = 0.0;
    for (double v : x) acc += (v - mean) * (v - mean);
    return acc / double(x.size() - 1);
}

void check_sample(const std::vector<double>& x, const char* name) {
    if (x.size() < 2) throw std::invalid_argument(std::string("sample ") + name + ": need >= 2 values");
    for (double v : x)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string("sample ") + name + ": non-finite value");
}

} // namespace

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::invalid_argument("fit_power_law: need >= 3 points");
    for (const auto& [x, y] : points)
        if (!(x > 0.0) || !(y > 0.0))
            throw std::invalid_argument("fit_power_law: all coordinates must be positive");

    const std::size_t n = points.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(points[i].first);
        ly[i] = std::log(points[i].second);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / double(n), my = sy / double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_power_law: all x identical");

    PowerLawFit fit;
    fit.n_points = n;
    fit.exponent = sxy / sxx;
    fit.log_intercept = my - fit.exponent * mx;
    if (syy == 0.0) {
        // Constant y: slope is exactly 0 and R^2 is undefined; report 0.
        fit.exponent = 0.0;
        fit.log_intercept = my;
        fit.r_squared = 0.0;
        fit.degenerate = true;
        return fit;
    }
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = ly[i] - (fit.log_intercept + fit.exponent * lx[i]);
        rss += resid * resid;
    }
    fit.r_squared = std::clamp(1.0 - rss / syy, 0.0, 1.0);
    return fit;
}

WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b) {
    check_sample(a, "a");
    check_sample(b, "b");
    const double ma = mean_of(a), mb = mean_of(b);
    const double va = variance_of(a, ma), vb = variance_of(b, mb);
    const double na = double(a.size()), nb = double(b.size());

    WelchResult out;
    const double pooled_se_sq = va / na + vb / nb;
    if (pooled_se_sq == 0.0) {
        // Both samples constant: no evidence either way when the means agree.
        out.degenerate = true;
        out.t = ma == mb ? 0.0 : std::copysign(1e300, ma - mb);
        out.p = ma == mb ? 1.0 : 0.0;
        out.dof = na + nb - 2.0;
        return out;
    }
    out.t = (ma - mb) / std::sqrt(pooled_se_sq);
    const double num = pooled_se_sq * pooled_se_sq;
    const double den = (va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0);
    out.dof = num / den;
    out.p = student_t_two_sided_p(out.t, out.dof);
    return out;
}

std::vector<double> bonferroni(std::vector<double> p_values, std::size_t m_comparisons) {
    if (m_comparisons < 1) throw std::invalid_argument("bonferroni: m must be >= 1");
    for (double& p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bonferroni: p outside [0,1]");
        p = std::min(1.0, p * double(m_comparisons));
    }
    return p_values;
}

EffectSize cohens_d(const std::vector<double>& a, const std::vector<double>& b) {
    check_sample(a, "a");
    check_sample(b, "b");
    const double ma = mean_of(a), mb = mean_of(b);
    const double va = variance_of(a, ma), vb = variance_of(b, mb);
    const double na = double(a.size()), nb = double(b.size());
    const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
    EffectSize out;
    if (pooled == 0.0) {
        out.zero_variance = true;
        out.d = ma == mb ? 0.0 : std::copysign(1e300, ma - mb);
        return out;
    }
    out.d = (ma - mb) / std::sqrt(pooled);
    return out;
}

double calibration_regressor(const CalibrationPoint& run) {
    if (run.n < 2) throw std::invalid_argument("calibration: N must be >= 2");
    const double nd = double(run.n);
    return run.norm_radius *
           std::sqrt(double(run.depth * run.kernel_size * run.in_dim) * std::log(nd) / nd);
}

CalibrationResult calibrate_constants(const std::vector<CalibrationPoint>& runs) {
    if (runs.size() < 3) throw std::invalid_argument("calibrate_constants: need >= 3 runs");
    const std::size_t n = runs.size();
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = calibration_regressor(runs[i]);
        y[i] = runs[i].gap;
    }
    const double mx = mean_of(x), my = mean_of(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("calibrate_constants: rank-deficient design (single regressor value)");

    CalibrationResult out;
    out.n_runs = n;
    out.c1_hat = sxy / sxx;
    out.c0_hat = my - out.c1_hat * mx;

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double resid = y[i] - (out.c0_hat + out.c1_hat * x[i]);
        rss += resid * resid;
    }
    const double dof = double(n - 2);
    const double s2 = dof > 0.0 ? rss / dof : 0.0;
    const double se_slope = std::sqrt(s2 / sxx);
    const double se_intercept = std::sqrt(s2 * (1.0 / double(n) + mx * mx / sxx));
    const double t_crit = dof > 0.0 ? student_t_quantile(0.975, dof) : 0.0;
    out.ci95_c1 = {out.c1_hat - t_crit * se_slope, out.c1_hat + t_crit * se_slope};
    out.ci95_c0 = {out.c0_hat - t_crit * se_intercept, out.c0_hat + t_crit * se_intercept};
    return out;
}

} // namespace tcnlab
