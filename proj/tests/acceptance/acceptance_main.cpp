// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code; nothing is calibrated at runtime.
#include "tcnlab/analysis.hpp"
#include "tcnlab/blocking.hpp"
#include "tcnlab/bounds.hpp"
#include "tcnlab/experiments.hpp"
#include "tcnlab/ingest.hpp"
#include "tcnlab/rademacher.hpp"
#include "tcnlab/rng.hpp"
#include "tcnlab/stats.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace tcnlab;
namespace fs = std::filesystem;

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool condition, const std::string& message) {
        if (!condition) {
            passed = false;
            if (!detail.empty()) detail += "; ";
            detail += message;
        }
    }
    void note(const std::string& message) {
        if (!detail.empty()) detail += "; ";
        detail += message;
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Shared across criteria 6, 7 and 9: the desk-scale fair sweep.
struct SweepContext {
    std::vector<RunRecord> records;
    std::string canonical;
    bool ready = false;
};
SweepContext g_sweep;

// -----------------------------------------------------------------------
// 1. Fair-comparison raw lengths, bit-exact including floor artifacts.
Outcome criterion_1() {
    Outcome out;
    const std::vector<std::size_t> targets{500, 1000, 2000, 4000, 8000, 16000};
    const std::vector<double> rhos{0.2, 0.4, 0.6, 0.8};
    const std::size_t expected[6][4] = {
        {749, 1166, 2000, 4500},         {1499, 2333, 4000, 9000},
        {2999, 4666, 8000, 18000},       {5999, 9333, 16000, 36000},
        {11999, 18666, 32000, 72000},    {23999, 37333, 64000, 144000},
    };
    const ExperimentGrid grid = plan_fair_grid(targets, rhos, {2}, 1);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        for (std::size_t j = 0; j < rhos.size(); ++j) {
            std::size_t planned = 0;
            for (const RunSpec& spec : grid.cells)
                if (spec.n_eff == targets[i] && spec.rho == rhos[j]) planned = spec.n_raw;
            if (planned != expected[i][j]) {
                char buf[128];
                std::snprintf(buf, sizeof(buf), "cell (%zu, %g): got %zu want %zu", targets[i],
                              rhos[j], planned, expected[i][j]);
                out.require(false, buf);
            }
        }
    }
    out.note("24/24 raw lengths exact");
    return out;
}

// -----------------------------------------------------------------------
// 2. Optimal-delay arithmetic and discard fractions.
Outcome criterion_2() {
    Outcome out;
    out.require(optimal_delay(16384, 0.5) == 20, "d*(16384, 0.5) != 20");
    out.require(make_blocks(16384, 20).n_blocks == 780, "B != 780");
    char frac[16];
    std::snprintf(frac, sizeof(frac), "%.1f%%", 100.0 / 21.0);
    out.require(std::string(frac) == "4.8%", "discard fraction formats to " + std::string(frac));
    out.require(optimal_delay(1000000, 0.5) == 28, "d*(1e6, 0.5) != 28");
    std::snprintf(frac, sizeof(frac), "%.1f%%", 100.0 / 29.0);
    out.require(std::string(frac) == "3.4%", "1e6 fraction formats to " + std::string(frac));
    out.note("d*=20, B=780, 4.8%; d*=28, 3.4%");
    return out;
}

// -----------------------------------------------------------------------
// 3. Blocking inequality, exact TV vs B*beta(d), zero violations.
Outcome criterion_3() {
    Outcome out;
    std::size_t checks = 0;
    double worst_slack = 1e300;
    for (std::size_t chain_id = 0; chain_id < 50; ++chain_id) {
        const std::size_t states = 2 + chain_id % 2;
        const MarkovChain chain = random_stationary_chain(states, derive_seed({0xB10C, chain_id}));
        for (std::size_t d = 1; d <= 5; ++d) {
            const double beta = markov_beta_exact(chain, d);
            for (std::size_t b = 1; b <= 6; ++b) {
                const BlockingPlan plan = make_blocks(b * (d + 1), d);
                const double exact = tv_exact_oracle(chain, plan);
                const double bound = double(b) * beta;
                ++checks;
                worst_slack = std::min(worst_slack, bound - exact);
                if (exact > bound + 1e-12) {
                    char buf[128];
                    std::snprintf(buf, sizeof(buf), "chain %zu d=%zu B=%zu: %.3g > %.3g", chain_id,
                                  d, b, exact, bound);
                    out.require(false, buf);
                }
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%zu plans, 0 violations, min slack %.2e", checks, worst_slack);
    out.note(buf);
    return out;
}

// -----------------------------------------------------------------------
// 4. Monte-Carlo Rademacher estimate below the capacity formula by >= 3 SE.
Outcome criterion_4() {
    Outcome out;
    double worst_margin = 1e300;
    for (std::size_t depth : {1, 2, 3}) {
        for (std::size_t p : {1, 2, 5}) {
            for (double radius : {0.5, 1.0}) {
                for (std::size_t m : {8, 32, 128}) {
                    TcnConfig window_cfg;
                    window_cfg.depth = depth;
                    window_cfg.kernel_size = p;
                    const std::size_t len = receptive_field(window_cfg);
                    NormalSampler normal(derive_seed({0x5EED, depth, p, m}));
                    std::vector<std::vector<double>> windows(m, std::vector<double>(len));
                    for (auto& w : windows)
                        for (double& v : w) v = normal.next();

                    RademacherMcConfig cfg;  // 500 hypotheses, 1000 trials, ascent refinement
                    cfg.seed = derive_seed({0x51, depth, p, m, std::size_t(radius * 2)});
                    const RademacherEstimate est =
                        empirical_rademacher_mc(depth, p, radius, windows, cfg);
                    const double bound = rademacher_bound(depth, p, 1, radius, m);
                    if (est.std_error > 0.0)
                        worst_margin = std::min(worst_margin, (bound - est.estimate) / est.std_error);
                    if (!(est.estimate + 3.0 * est.std_error < bound)) {
                        char buf[128];
                        std::snprintf(buf, sizeof(buf), "cell D=%zu p=%zu R=%g m=%zu: %.4g vs %.4g",
                                      depth, p, radius, m, est.estimate, bound);
                        out.require(false, buf);
                    }
                }
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "54 cells, min margin %.0f SE", worst_margin);
    out.note(buf);
    return out;
}

// -----------------------------------------------------------------------
// 5. Finite-difference gradient agreement on 20 random small instances.
Outcome criterion_5() {
    Outcome out;
    double worst = 0.0;
    for (std::uint64_t instance = 0; instance < 20; ++instance) {
        SplitMix64 rng(derive_seed({0xF00D, instance}));
        TcnConfig cfg;
        cfg.depth = 1 + instance % 3;
        cfg.kernel_size = 1 + instance % 2;
        cfg.channels = 2;
        cfg.norm_radius = 50.0;
        const std::size_t t_len = 16;
        std::vector<double> input(t_len), targets(t_len);
        for (double& v : input) v = rng.next_uniform(-1.5, 1.5);
        TcnWeights w = init_weights(cfg, derive_seed({0xBEEF, instance}));
        scale_weights(w, 2.0);
        const Prediction pred = forward(cfg, w, Series{input, {}});
        bool any_clipped = false, any_quadratic = false;
        for (std::size_t t = 0; t < t_len; ++t) {
            const double offset = (t % 3 == 0) ? 1.7 : 0.3;  // straddles the clip boundary
            targets[t] = pred.values[t] - offset * ((t % 2 == 0) ? 1.0 : -1.0);
            (offset > 1.0 ? any_clipped : any_quadratic) = true;
        }
        out.require(any_clipped && any_quadratic, "fixture misses a loss branch");

        const Series input_series{input, {}};
        const Series target_series{targets, {}};
        const LossGradient lg = loss_gradient(cfg, w, input_series, target_series);
        const double h = 1e-5;
        auto loss_at = [&]() {
            double acc = 0.0;
            const Prediction p = forward(cfg, w, input_series);
            for (std::size_t t = 0; t < t_len; ++t) acc += clipped_sq_loss(p.values[t], targets[t]);
            return acc / double(t_len);
        };
        auto check_coord = [&](double& coord, double analytic) {
            const double keep = coord;
            coord = keep + h;
            const double up = loss_at();
            coord = keep - h;
            const double down = loss_at();
            coord = keep;
            const double fd = (up - down) / (2.0 * h);
            const double denom = std::max({std::fabs(fd), std::fabs(analytic), 1e-6});
            worst = std::max(worst, std::fabs(fd - analytic) / denom);
        };
        for (std::size_t l = 0; l < w.layers.size(); ++l)
            for (std::size_t i = 0; i < w.layers[l].w.size(); ++i)
                check_coord(w.layers[l].w[i], lg.grads.layers[l].w[i]);
        for (std::size_t i = 0; i < w.readout.w.size(); ++i)
            check_coord(w.readout.w[i], lg.grads.readout.w[i]);
    }
    out.require(worst < 1e-4, "max relative error " + std::to_string(worst));
    char buf[64];
    std::snprintf(buf, sizeof(buf), "20 instances, max rel err %.2e", worst);
    out.note(buf);
    return out;
}

// -----------------------------------------------------------------------
// 6. Desk-scale fair sweep: every gap below the symbolic bound.
Outcome criterion_6() {
    Outcome out;
    const std::string dir = (fs::temp_directory_path() / "tcnlab_acceptance_sweep").string();
    fs::remove_all(dir);
    GridOptions options;  // p=5, R=1, channels=16, delta=0.05, C1=8, C0=1 via rho>0
    const ExperimentGrid grid = plan_fair_grid({500, 1000, 2000}, {0.2, 0.8}, {2, 4}, 3, options);
    out.require(grid.cells.size() == 36, "grid is not 36 cells");
    const std::size_t threads = std::max(2u, std::thread::hardware_concurrency());
    const SweepReport report = sweep(grid, dir, threads);
    out.require(report.failed == 0, "sweep reported failures");
    g_sweep.records = read_store(report.store_path);
    g_sweep.canonical = slurp(report.canonical_path);
    g_sweep.ready = out.passed && g_sweep.records.size() == 36;

    double worst_ratio = 0.0;
    for (const RunRecord& r : g_sweep.records) {
        out.require(r.result.gap <= r.bound.total, "gap exceeds bound");
        out.require(r.ratio < 1.0, "tightness ratio not below 1");
        out.require(r.bound.mixing_const == 1.0, "C0 is not the symbolic 1");
        worst_ratio = std::max(worst_ratio, r.ratio);
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "36 runs, max gap/bound ratio %.4f", worst_ratio);
    out.note(buf);
    return out;
}

// -----------------------------------------------------------------------
// 7. Fair-comparison contrast report, negative scaling exponents, and
//    independent recomputation from the JSONL store.
Outcome criterion_7() {
    Outcome out;
    if (!g_sweep.ready) {
        out.require(false, "criterion 6 sweep unavailable");
        return out;
    }
    const std::vector<RunRecord>& records = g_sweep.records;

    const std::vector<ContrastRow> contrasts = rho_contrasts(records, 2000);
    out.require(!contrasts.empty(), "no contrast rows produced");
    const ContrastRow& pooled = contrasts.front();
    out.require(pooled.label == "rho0.2-vs-rho0.8@neff2000:pooled", "unexpected pooled label");
    out.require(pooled.n_a == 6 && pooled.n_b == 6, "pooled replicate counts wrong");

    // Independent recomputation straight from the canonical JSONL text.
    std::vector<double> gaps_weak, gaps_strong;
    std::istringstream stream(g_sweep.canonical);
    std::string line;
    while (std::getline(stream, line)) {
        const nlohmann::json j = nlohmann::json::parse(line);
        if (j["spec"]["n_eff"] != 2000) continue;
        const double rho = j["spec"]["rho"].get<double>();
        const double gap = j["result"]["gap"].get<double>();
        (rho == 0.2 ? gaps_weak : gaps_strong).push_back(gap);
    }
    out.require(gaps_weak.size() == 6 && gaps_strong.size() == 6, "store slice incomplete");
    auto mean_var = [](const std::vector<double>& x) {
        double m = 0.0;
        for (double v : x) m += v;
        m /= double(x.size());
        double var = 0.0;
        for (double v : x) var += (v - m) * (v - m);
        return std::pair<double, double>{m, var / double(x.size() - 1)};
    };
    const auto [mean_a, var_a] = mean_var(gaps_weak);
    const auto [mean_b, var_b] = mean_var(gaps_strong);
    const double se_sq = var_a / 6.0 + var_b / 6.0;
    const double t_stat = (mean_a - mean_b) / std::sqrt(se_sq);
    const double dof = se_sq * se_sq / ((var_a / 6.0) * (var_a / 6.0) / 5.0 +
                                        (var_b / 6.0) * (var_b / 6.0) / 5.0);
    out.require(std::fabs(pooled.mean_a - mean_a) < 1e-12, "mean_a not recomputable");
    out.require(std::fabs(pooled.mean_b - mean_b) < 1e-12, "mean_b not recomputable");
    out.require(std::fabs(pooled.t - t_stat) < 1e-9, "t statistic not recomputable");
    out.require(std::fabs(pooled.p_raw - student_t_two_sided_p(t_stat, dof)) < 1e-9,
                "p-value not recomputable");
    out.require(pooled.p_adj >= pooled.p_raw, "Bonferroni adjustment missing");

    const std::vector<ScalingRow> rows = scaling_by_rho(records);
    out.require(rows.size() == 2, "expected a scaling fit for each rho");
    for (const ScalingRow& row : rows)
        out.require(row.fit.exponent < 0.0, "non-negative scaling exponent");

    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "gap(0.2)=%.4f gap(0.8)=%.4f t=%.2f p_adj=%.3f d=%.2f; exponents %.2f / %.2f",
                  pooled.mean_a, pooled.mean_b, pooled.t, pooled.p_adj, pooled.cohens_d,
                  rows[0].fit.exponent, rows[1].fit.exponent);
    out.note(buf);
    return out;
}

// -----------------------------------------------------------------------
// 8. Analysis correctness: power-law recovery and constant calibration.
Outcome criterion_8() {
    Outcome out;

    std::vector<std::pair<double, double>> exact_pts;
    for (double x : {10.0, 100.0, 1000.0, 10000.0}) exact_pts.emplace_back(x, 2.0 * std::pow(x, -0.77));
    out.require(std::fabs(fit_power_law(exact_pts).exponent - (-0.77)) < 1e-9,
                "noiseless exponent not recovered to 1e-9");

    const std::vector<double> xs{500, 1000, 2000, 4000, 8000, 16000};
    double mean_exponent = 0.0;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        NormalSampler normal(derive_seed({0xAB, rep}));
        std::vector<std::pair<double, double>> pts;
        for (double x : xs) pts.emplace_back(x, 0.9 * std::pow(x, -1.21) * std::exp(0.05 * normal.next()));
        mean_exponent += fit_power_law(pts).exponent;
    }
    mean_exponent /= 20.0;
    out.require(std::fabs(mean_exponent - (-1.21)) < 0.05, "noisy exponent recovery off");

    std::vector<CalibrationPoint> noiseless;
    for (std::size_t depth : {2, 4, 6, 8})
        for (std::size_t n : {500, 2000, 8000}) {
            CalibrationPoint pt;
            pt.depth = depth;
            pt.kernel_size = 5;
            pt.n = n;
            pt.gap = 0.43 * calibration_regressor(pt) + 2.57;
            noiseless.push_back(pt);
        }
    const CalibrationResult exact_fit = calibrate_constants(noiseless);
    out.require(std::fabs(exact_fit.c0_hat - 2.57) < 1e-9, "C0 not recovered exactly");
    out.require(std::fabs(exact_fit.c1_hat - 0.43) < 1e-9, "C1 not recovered exactly");

    std::size_t covered_c0 = 0, covered_c1 = 0;
    const std::size_t replicates = 200;
    for (std::uint64_t rep = 0; rep < replicates; ++rep) {
        NormalSampler normal(derive_seed({0xCA1, rep}));
        std::vector<CalibrationPoint> runs;
        for (std::size_t depth : {2, 4, 6, 8})
            for (std::size_t n : {500, 1000, 2000, 4000, 8000, 16000}) {
                CalibrationPoint pt;
                pt.depth = depth;
                pt.kernel_size = 5;
                pt.n = n;
                pt.gap = 0.43 * calibration_regressor(pt) + 2.57 + 0.01 * normal.next();
                runs.push_back(pt);
            }
        const CalibrationResult fit = calibrate_constants(runs);
        if (fit.ci95_c0.lo <= 2.57 && 2.57 <= fit.ci95_c0.hi) ++covered_c0;
        if (fit.ci95_c1.lo <= 0.43 && 0.43 <= fit.ci95_c1.hi) ++covered_c1;
    }
    out.require(covered_c0 >= 180, "C0 coverage below 90%");
    out.require(covered_c1 >= 180, "C1 coverage below 90%");
    char buf[128];
    std::snprintf(buf, sizeof(buf), "mean exponent %.3f; coverage %zu/%zu and %zu/%zu",
                  mean_exponent, covered_c0, replicates, covered_c1, replicates);
    out.note(buf);
    return out;
}

// -----------------------------------------------------------------------
// 9. Determinism: canonical stores byte-identical at parallelism 1 and 8.
Outcome criterion_9() {
    Outcome out;
    GridOptions options;
    options.channels = 4;  // keep the re-run cheap but real
    const ExperimentGrid grid = plan_fair_grid({200, 400}, {0.2, 0.8}, {2}, 2, options);

    const std::string dir1 = (fs::temp_directory_path() / "tcnlab_determinism_p1").string();
    const std::string dir8 = (fs::temp_directory_path() / "tcnlab_determinism_p8").string();
    fs::remove_all(dir1);
    fs::remove_all(dir8);
    const SweepReport r1 = sweep(grid, dir1, 1);
    const SweepReport r8 = sweep(grid, dir8, 8);
    out.require(r1.failed == 0 && r8.failed == 0, "sweep failures");
    const std::string canon1 = slurp(r1.canonical_path);
    const std::string canon8 = slurp(r8.canonical_path);
    out.require(!canon1.empty(), "empty canonical store");
    out.require(canon1 == canon8, "parallelism changes the canonical store");

    // Re-running against the same manifest leaves the store untouched.
    const SweepReport again = sweep(grid, dir8, 8);
    out.require(again.executed == 0 && again.skipped == grid.cells.size(),
                "re-run did not skip completed cells");
    out.require(slurp(again.canonical_path) == canon8, "re-run changed the canonical store");

    // The criterion-6 sweep ran at full parallelism; replay two of its cells
    // serially and look for the identical canonical lines.
    if (g_sweep.ready) {
        GridOptions c6;
        const ExperimentGrid c6_grid = plan_fair_grid({500}, {0.2, 0.8}, {2}, 1, c6);
        for (const RunSpec& spec : c6_grid.cells) {
            RunRecord replayed = execute_run(spec, c6);
            replayed.duration_s = 0.0;
            const std::string line = run_record_to_json_line(replayed);
            out.require(g_sweep.canonical.find(line) != std::string::npos,
                        "replayed cell missing from the criterion-6 canonical store");
        }
    }
    out.note("8 cells, parallelism 1 vs 8 byte-identical; resume idempotent");
    return out;
}

// -----------------------------------------------------------------------
// 10. Zero-phase band-pass behavior on synthetic sinusoids at 250 Hz.
Outcome criterion_10() {
    Outcome out;
    const double fs = 250.0;
    auto sinusoid = [&](double freq, std::size_t n) {
        Series s;
        s.sampling_rate = fs;
        s.values.resize(n);
        for (std::size_t t = 0; t < n; ++t)
            s.values[t] = std::sin(2.0 * 3.14159265358979323846 * freq * double(t) / fs);
        return s;
    };
    auto steady_amplitude = [](const Series& s) {
        const std::size_t lo = s.size() / 4, hi = 3 * s.size() / 4;
        double acc = 0.0;
        for (std::size_t t = lo; t < hi; ++t) acc += s[t] * s[t];
        return std::sqrt(2.0 * acc / double(hi - lo));
    };

    Series dc;
    dc.sampling_rate = fs;
    dc.values.assign(2500, 1.0);
    const Series dc_out = bandpass(dc, 0.5, 40.0);
    double dc_peak = 0.0;
    for (std::size_t t = dc_out.size() / 4; t < 3 * dc_out.size() / 4; ++t)
        dc_peak = std::max(dc_peak, std::fabs(dc_out[t]));
    out.require(dc_peak < 1e-3, "DC residual " + std::to_string(dc_peak));

    const double in_band = steady_amplitude(bandpass(sinusoid(10.0, 5000), 0.5, 40.0));
    out.require(std::fabs(in_band - 1.0) <= 0.05, "10 Hz amplitude " + std::to_string(in_band));

    const double out_band = steady_amplitude(bandpass(sinusoid(100.0, 5000), 0.5, 40.0));
    out.require(out_band <= 0.1, "100 Hz amplitude " + std::to_string(out_band));

    char buf[128];
    std::snprintf(buf, sizeof(buf), "DC %.1e, 10 Hz %.3f, 100 Hz %.3f", dc_peak, in_band,
                  out_band);
    out.note(buf);
    return out;
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Entry> criteria{
        {1, "fair-comparison table bit-exact", criterion_1},
        {2, "optimal delay arithmetic", criterion_2},
        {3, "blocking inequality oracle", criterion_3},
        {4, "rademacher capacity oracle", criterion_4},
        {5, "gradient correctness", criterion_5},
        {6, "bound compliance on fair sweep", criterion_6},
        {7, "fair-comparison contrast report", criterion_7},
        {8, "analysis correctness", criterion_8},
        {9, "sweep determinism", criterion_9},
        {10, "signal preprocessing response", criterion_10},
    };

    bool all_passed = true;
    for (const Entry& entry : criteria) {
        const auto started = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = entry.run();
        } catch (const std::exception& e) {
            outcome.passed = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        std::printf("[%s] criterion %2d: %s (%s) [%.1f s]\n", outcome.passed ? "PASS" : "FAIL",
                    entry.id, entry.name, outcome.detail.c_str(), secs);
        std::fflush(stdout);
        all_passed = all_passed && outcome.passed;
    }
    return all_passed ? 0 : 1;
}
