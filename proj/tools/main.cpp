// tcnlab command line: generation, planning, sweeping, verification, bound
// evaluation, and analysis as subcommands. All randomness derives from
// explicit seeds; progress goes to stderr, data to stdout or files.
#include "tcnlab/blocking.hpp"
#include "tcnlab/bounds.hpp"
#include "tcnlab/experiments.hpp"
#include "tcnlab/ingest.hpp"
#include "tcnlab/rademacher.hpp"
#include "tcnlab/rng.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

using namespace tcnlab;
namespace fs = std::filesystem;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path);
    out << content;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
    double rho = 0.0;
    std::size_t length = 1000;
    std::uint64_t seed = 0;
    double variance = 1.0;
    double fs = 0.0;
    std::string out;
};

int cmd_gen(const GenArgs& args) {
    Series series = gen_ar1({args.rho, args.length, args.seed, args.variance});
    if (args.fs > 0.0) series.sampling_rate = args.fs;
    if (args.out.empty()) {
        for (double v : series.values) std::printf("%.17g\n", v);
    } else {
        write_series_csv(series, args.out);
        std::fprintf(stderr, "wrote %zu values to %s\n", series.size(), args.out.c_str());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// plan

struct PlanArgs {
    std::vector<std::size_t> sizes;
    std::vector<double> rhos{0.2, 0.4, 0.6, 0.8};
    std::vector<std::size_t> depths{2, 4, 6, 8};
    std::size_t trials = 3;
    GridOptions options;
    std::string out;
};

void print_length_table(const ExperimentGrid& grid) {
    std::printf("n_eff");
    for (double rho : grid.rhos) std::printf(",rho=%g", rho);
    std::printf("\n");
    for (std::size_t size : grid.sizes) {
        std::printf("%zu", size);
        for (double rho : grid.rhos) {
            const std::size_t n_raw =
                grid.kind == GridKind::Fair ? required_length(size, rho) : size;
            std::printf(",%zu", n_raw);
        }
        std::printf("\n");
    }
}

int cmd_plan(GridKind kind, const PlanArgs& args) {
    const ExperimentGrid grid =
        kind == GridKind::Fair
            ? plan_fair_grid(args.sizes, args.rhos, args.depths, args.trials, args.options)
            : plan_standard_grid(args.sizes, args.rhos, args.depths, args.trials, args.options);
    print_length_table(grid);
    std::fprintf(stderr, "%zu cells\n", grid.cells.size());
    if (!args.out.empty()) {
        spill(args.out, grid_manifest_json(grid));
        std::fprintf(stderr, "manifest written to %s\n", args.out.c_str());
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const std::string& manifest_path, const std::string& out_dir,
              std::size_t parallelism) {
    const ExperimentGrid grid = grid_from_manifest_json(slurp(manifest_path));
    std::fprintf(stderr, "sweeping %zu cells with parallelism %zu\n", grid.cells.size(),
                 parallelism);
    const SweepReport report = sweep(grid, out_dir, parallelism);
    std::fprintf(stderr, "executed %zu, skipped %zu, failed %zu\n", report.executed,
                 report.skipped, report.failed);
    for (const std::string& failure : report.failures)
        std::fprintf(stderr, "  %s\n", failure.c_str());
    std::printf("%s\n", report.canonical_path.c_str());
    return report.failed == 0 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// run

struct RunArgs {
    double rho = 0.2;
    std::size_t n_eff = 0;
    std::size_t n_raw = 0;
    std::size_t depth = 2;
    std::size_t trial = 0;
    GridOptions options;
};

int cmd_run(const RunArgs& args) {
    if ((args.n_eff == 0) == (args.n_raw == 0))
        throw std::invalid_argument("run: give exactly one of --n-eff or --n-raw");
    const ExperimentGrid grid =
        args.n_eff > 0
            ? plan_fair_grid({args.n_eff}, {args.rho}, {args.depth}, args.trial + 1, args.options)
            : plan_standard_grid({args.n_raw}, {args.rho}, {args.depth}, args.trial + 1,
                                 args.options);
    const RunSpec& spec = grid.cells[args.trial];
    const RunRecord record = execute_run(spec, grid.options);
    std::printf("%s\n", run_record_to_json_line(record).c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// bound

struct BoundArgs {
    std::size_t depth = 6, p = 5, n = 1;
    double radius = 1.0;
    std::size_t big_n = 16384;
    double delta = 0.05;
    double big_c0 = 1.0, c1 = 8.0;
    double rate_c0 = 0.0;  // exponential mixing rate; reports d* when given
};

int cmd_bound(const BoundArgs& args) {
    const MixingProfile profile = MixingProfile::exponential(args.big_c0, 1.0);
    const BoundReport report = generalization_bound(args.depth, args.p, args.n, args.radius,
                                                    args.big_n, args.delta, profile, args.c1);
    nlohmann::json j = {{"complexity", report.complexity_term},
                        {"mixing", report.mixing_const},
                        {"concentration", report.concentration_term},
                        {"total", report.total},
                        {"inputs",
                         {{"D", args.depth},
                          {"p", args.p},
                          {"n", args.n},
                          {"R", args.radius},
                          {"N", args.big_n},
                          {"delta", args.delta},
                          {"C0", args.big_c0},
                          {"C1", args.c1}}}};
    std::printf("%s\n\n", j.dump(2).c_str());
    std::printf("  %-14s %12.6f\n", "complexity", report.complexity_term);
    std::printf("  %-14s %12.6f\n", "mixing", report.mixing_const);
    std::printf("  %-14s %12.6f\n", "concentration", report.concentration_term);
    std::printf("  %-14s %12.6f\n", "total", report.total);
    if (args.rate_c0 > 0.0) {
        const std::size_t d_star = optimal_delay(args.big_n, args.rate_c0);
        std::printf("  d* = %zu (discard fraction 1/%zu \u2248 %.1f%%)\n", d_star, d_star + 1,
                    100.0 / double(d_star + 1));
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify

int verify_blocking(const std::string& out_path, std::size_t n_chains) {
    std::ostringstream csv;
    csv << "chain_id,B,d,tv_exact,tv_bound,pass\n";
    std::size_t violations = 0;
    for (std::size_t chain_id = 0; chain_id < n_chains; ++chain_id) {
        const std::size_t states = 2 + chain_id % 2;
        const MarkovChain chain = random_stationary_chain(states, derive_seed({0xB10C, chain_id}));
        for (std::size_t d = 1; d <= 5; ++d) {
            for (std::size_t b = 1; b <= 6; ++b) {
                const BlockingPlan plan = make_blocks(b * (d + 1), d);
                const double exact = tv_exact_oracle(chain, plan);
                const double bound = double(b) * markov_beta_exact(chain, d);
                const bool ok = exact <= bound + 1e-12;
                if (!ok) ++violations;
                char line[160];
                std::snprintf(line, sizeof(line), "%zu,%zu,%zu,%.12g,%.12g,%d\n", chain_id, b,
                              d, exact, bound, int(ok));
                csv << line;
            }
        }
    }
    if (out_path.empty())
        std::fputs(csv.str().c_str(), stdout);
    else
        spill(out_path, csv.str());
    std::fprintf(stderr, "blocking oracle: %zu chains, %zu violations\n", n_chains, violations);
    return violations == 0 ? 0 : 2;
}

int verify_rademacher(const std::string& out_path) {
    std::ostringstream csv;
    csv << "D,p,R,m,estimate,std_error,bound,margin_se,pass\n";
    std::size_t violations = 0;
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

                    RademacherMcConfig cfg;
                    cfg.seed = derive_seed({0x51, depth, p, m, std::size_t(radius * 2)});
                    const RademacherEstimate est =
                        empirical_rademacher_mc(depth, p, radius, windows, cfg);
                    const double bound = rademacher_bound(depth, p, 1, radius, m);
                    const double margin =
                        est.std_error > 0.0 ? (bound - est.estimate) / est.std_error : 1e300;
                    const bool ok = est.estimate + 3.0 * est.std_error < bound;
                    if (!ok) ++violations;
                    char line[200];
                    std::snprintf(line, sizeof(line), "%zu,%zu,%g,%zu,%.8g,%.8g,%.8g,%.1f,%d\n",
                                  depth, p, radius, m, est.estimate, est.std_error, bound, margin,
                                  int(ok));
                    csv << line;
                }
            }
        }
    }
    if (out_path.empty())
        std::fputs(csv.str().c_str(), stdout);
    else
        spill(out_path, csv.str());
    std::fprintf(stderr, "rademacher oracle: %zu violations\n", violations);
    return violations == 0 ? 0 : 2;
}

int verify_grad() {
    std::size_t failures = 0;
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
        for (std::size_t t = 0; t < t_len; ++t) {
            const double offset = (t % 3 == 0) ? 1.7 : 0.3;
            targets[t] = pred.values[t] - offset * ((t % 2 == 0) ? 1.0 : -1.0);
        }
        const Series input_series{input, {}};
        const Series target_series{targets, {}};
        const LossGradient lg = loss_gradient(cfg, w, input_series, target_series);

        const double h = 1e-5;
        double worst = 0.0;
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

        const bool ok = worst < 1e-4;
        if (!ok) ++failures;
        std::printf("grad instance %2llu: D=%zu p=%zu max_rel_err=%.3g %s\n",
                    static_cast<unsigned long long>(instance), cfg.depth, cfg.kernel_size, worst,
                    ok ? "ok" : "FAIL");
    }
    std::fprintf(stderr, "gradient check: %zu failures\n", failures);
    return failures == 0 ? 0 : 2;
}

// ---------------------------------------------------------------------------
// analyze / calibrate

nlohmann::json calibration_json(const CalibrationResult& fit) {
    return {{"c0_hat", fit.c0_hat},
            {"c1_hat", fit.c1_hat},
            {"ci95_c0", {fit.ci95_c0.lo, fit.ci95_c0.hi}},
            {"ci95_c1", {fit.ci95_c1.lo, fit.ci95_c1.hi}},
            {"n_runs", fit.n_runs}};
}

int cmd_analyze(const std::string& store_path, const std::string& out_dir, std::size_t n_eff,
                bool raw_points, double eval_fraction) {
    const std::vector<RunRecord> records = read_store(store_path);
    if (records.empty()) throw std::invalid_argument("analyze: store is empty");
    fs::create_directories(out_dir);

    spill((fs::path(out_dir) / "scaling.csv").string(),
          scaling_csv(scaling_by_rho(records, raw_points)));

    std::size_t level = n_eff;
    if (level == 0)
        for (const RunRecord& r : records) level = std::max(level, r.spec.n_eff);
    spill((fs::path(out_dir) / "contrasts.csv").string(),
          contrasts_csv(rho_contrasts(records, level)));

    spill((fs::path(out_dir) / "calibration.json").string(),
          calibration_json(calibrate_store(records, eval_fraction)).dump(2) + "\n");

    std::fprintf(stderr, "analyzed %zu records (contrasts at n_eff=%zu) into %s\n",
                 records.size(), level, out_dir.c_str());
    return 0;
}

int cmd_calibrate(const std::string& store_path, const std::string& out_path,
                  double eval_fraction) {
    const std::vector<RunRecord> records = read_store(store_path);
    if (records.empty()) throw std::invalid_argument("calibrate: store is empty");
    const nlohmann::json j = calibration_json(calibrate_store(records, eval_fraction));
    if (out_path.empty())
        std::printf("%s\n", j.dump(2).c_str());
    else
        spill(out_path, j.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------
// ingest

struct IngestArgs {
    std::string in, out;
    std::string format = "single";
    double fs = 250.0;
    double low = 0.0, high = 0.0;
    bool do_normalize = false;
};

int cmd_ingest(const IngestArgs& args) {
    SignalFile file;
    file.path = args.in;
    file.sampling_rate = args.fs;
    if (args.format == "single")
        file.format = SignalFormat::CsvSingleColumn;
    else if (args.format == "timestamped")
        file.format = SignalFormat::CsvTimestamped;
    else
        throw std::invalid_argument("ingest: format must be single or timestamped");

    LoadedSignal loaded = load_signal(file);
    std::fprintf(stderr, "loaded %zu samples (%zu interpolated)\n", loaded.series.size(),
                 loaded.interpolated.size());
    Series series = std::move(loaded.series);
    if (args.low > 0.0 || args.high > 0.0) {
        series = bandpass(series, args.low, args.high);
        std::fprintf(stderr, "band-pass %.3g-%.3g Hz applied\n", args.low, args.high);
    }
    if (args.do_normalize) series = normalize(series);

    std::ofstream out(args.out);
    if (!out) throw std::runtime_error("cannot write: " + args.out);
    out << "# tcnlab ingest source=" << args.in;
    if (args.low > 0.0) out << " band=" << args.low << "-" << args.high << "Hz";
    if (args.do_normalize) out << " normalized=1";
    out << "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "# fs=%.17g\n", *series.sampling_rate);
    out << buf;
    for (double v : series.values) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        out << buf;
    }
    std::fprintf(stderr, "wrote %s\n", args.out.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for norm-constrained causal TCNs on dependent data"};
    app.require_subcommand(1);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "generate a stationary AR(1) series as CSV");
    gen->add_option("--rho", gen_args.rho, "lag-1 autocorrelation in (-1,1)")->required();
    gen->add_option("--length", gen_args.length, "number of samples")->required();
    gen->add_option("--seed", gen_args.seed, "random seed");
    gen->add_option("--variance", gen_args.variance, "stationary variance");
    gen->add_option("--fs", gen_args.fs, "sampling rate to record in the header (Hz)");
    gen->add_option("--out", gen_args.out, "output CSV (stdout if omitted)");

    PlanArgs plan_args;
    CLI::App* plan = app.add_subcommand("plan", "plan an experiment grid");
    plan->require_subcommand(1);
    CLI::App* plan_fair = plan->add_subcommand("fair", "fixed effective sample size grid");
    CLI::App* plan_std = plan->add_subcommand("standard", "fixed raw length grid");
    for (CLI::App* sub : {plan_fair, plan_std}) {
        sub->add_option(sub == plan_fair ? "--targets" : "--lengths", plan_args.sizes,
                        "comma-separated sizes")
            ->required()
            ->delimiter(',');
        sub->add_option("--rhos", plan_args.rhos, "comma-separated mixing coefficients")
            ->delimiter(',');
        sub->add_option("--depths", plan_args.depths, "comma-separated depths")->delimiter(',');
        sub->add_option("--trials", plan_args.trials, "seeds per cell");
        sub->add_option("--p", plan_args.options.kernel_size, "kernel size");
        sub->add_option("--R", plan_args.options.norm_radius, "norm radius");
        sub->add_option("--channels", plan_args.options.channels, "hidden width");
        sub->add_option("--step-scale", plan_args.options.step_scale, "step size multiplier");
        sub->add_option("--passes", plan_args.options.passes, "passes over the sequence");
        sub->add_option("--root-seed", plan_args.options.root_seed, "root seed");
        sub->add_option("--out", plan_args.out, "manifest output path");
    }

    std::string sweep_manifest, sweep_out = "sweep_out";
    std::size_t sweep_parallelism = 1;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "execute a planned grid");
    sweep_cmd->add_option("--manifest", sweep_manifest, "manifest JSON from plan")->required();
    sweep_cmd->add_option("--out", sweep_out, "output directory");
    sweep_cmd->add_option("--parallelism", sweep_parallelism, "concurrent cells");

    RunArgs run_args;
    CLI::App* run_cmd = app.add_subcommand("run", "execute a single cell, print its JSONL line");
    run_cmd->add_option("--rho", run_args.rho, "mixing coefficient")->required();
    run_cmd->add_option("--n-eff", run_args.n_eff, "target effective sample size (fair mode)");
    run_cmd->add_option("--n-raw", run_args.n_raw, "raw length (standard mode)");
    run_cmd->add_option("--depth", run_args.depth, "network depth")->required();
    run_cmd->add_option("--trial", run_args.trial, "trial index");
    run_cmd->add_option("--p", run_args.options.kernel_size, "kernel size");
    run_cmd->add_option("--R", run_args.options.norm_radius, "norm radius");
    run_cmd->add_option("--channels", run_args.options.channels, "hidden width");
    run_cmd->add_option("--step-scale", run_args.options.step_scale, "step size multiplier");
    run_cmd->add_option("--passes", run_args.options.passes, "passes over the sequence");
    run_cmd->add_option("--root-seed", run_args.options.root_seed, "root seed");

    BoundArgs bound_args;
    CLI::App* bound_cmd = app.add_subcommand("bound", "evaluate the generalization bound");
    bound_cmd->add_option("--D", bound_args.depth, "depth")->required();
    bound_cmd->add_option("--p", bound_args.p, "kernel size")->required();
    bound_cmd->add_option("--n", bound_args.n, "input dimension");
    bound_cmd->add_option("--R", bound_args.radius, "norm radius")->required();
    bound_cmd->add_option("--N", bound_args.big_n, "sample size")->required();
    bound_cmd->add_option("--delta", bound_args.delta, "confidence parameter");
    bound_cmd->add_option("--C0", bound_args.big_c0, "mixing constant");
    bound_cmd->add_option("--C1", bound_args.c1, "complexity constant");
    bound_cmd->add_option("--c0", bound_args.rate_c0,
                          "exponential mixing rate; also reports the optimal delay");

    CLI::App* verify = app.add_subcommand("verify", "run the numerical oracles");
    verify->require_subcommand(1);
    std::string verify_out;
    std::size_t verify_chains = 50;
    CLI::App* v_block = verify->add_subcommand("blocking", "exhaustive TV oracle vs B*beta(d)");
    v_block->add_option("--out", verify_out, "CSV output path (stdout if omitted)");
    v_block->add_option("--chains", verify_chains, "number of random chains");
    CLI::App* v_rad = verify->add_subcommand("rademacher", "MC complexity vs capacity formula");
    v_rad->add_option("--out", verify_out, "CSV output path (stdout if omitted)");
    CLI::App* v_grad = verify->add_subcommand("grad", "finite-difference gradient check");
    CLI::App* v_all = verify->add_subcommand("all", "every oracle in sequence");

    std::string analyze_store, analyze_out = "analysis_out";
    std::size_t analyze_neff = 0;
    bool analyze_raw = false;
    double analyze_eval_fraction = 0.2;
    CLI::App* analyze_cmd = app.add_subcommand("analyze", "scaling, contrasts, calibration");
    analyze_cmd->add_option("--store", analyze_store, "results.jsonl path")->required();
    analyze_cmd->add_option("--out", analyze_out, "output directory");
    analyze_cmd->add_option("--neff", analyze_neff, "contrast level (largest if omitted)");
    analyze_cmd->add_flag("--raw-points", analyze_raw, "fit raw runs instead of level means");
    analyze_cmd->add_option("--eval-fraction", analyze_eval_fraction,
                            "held-out fraction used when the store was produced");

    std::string calibrate_store_path, calibrate_out;
    double calibrate_eval_fraction = 0.2;
    CLI::App* calibrate_cmd = app.add_subcommand("calibrate", "OLS fit of the bound constants");
    calibrate_cmd->add_option("--store", calibrate_store_path, "results.jsonl path")->required();
    calibrate_cmd->add_option("--out", calibrate_out, "calibration.json path (stdout if omitted)");
    calibrate_cmd->add_option("--eval-fraction", calibrate_eval_fraction,
                              "held-out fraction used when the store was produced");

    IngestArgs ingest_args;
    CLI::App* ingest_cmd = app.add_subcommand("ingest", "load and preprocess a signal file");
    ingest_cmd->add_option("--in", ingest_args.in, "input CSV")->required();
    ingest_cmd->add_option("--out", ingest_args.out, "output CSV")->required();
    ingest_cmd->add_option("--format", ingest_args.format, "single | timestamped");
    ingest_cmd->add_option("--fs", ingest_args.fs, "sampling rate in Hz")->required();
    ingest_cmd->add_option("--low", ingest_args.low, "band-pass low edge (Hz)");
    ingest_cmd->add_option("--high", ingest_args.high, "band-pass high edge (Hz)");
    ingest_cmd->add_flag("--normalize", ingest_args.do_normalize, "standardize after filtering");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        (void)app.exit(e);
        return 1;
    }

    try {
        if (*gen) return cmd_gen(gen_args);
        if (*plan_fair) return cmd_plan(GridKind::Fair, plan_args);
        if (*plan_std) return cmd_plan(GridKind::Standard, plan_args);
        if (*sweep_cmd) return cmd_sweep(sweep_manifest, sweep_out, sweep_parallelism);
        if (*run_cmd) return cmd_run(run_args);
        if (*bound_cmd) return cmd_bound(bound_args);
        if (*v_block) return verify_blocking(verify_out, verify_chains);
        if (*v_rad) return verify_rademacher(verify_out);
        if (*v_grad) return verify_grad();
        if (*v_all) {
            const int rc1 = verify_blocking("", verify_chains);
            const int rc2 = verify_rademacher("");
            const int rc3 = verify_grad();
            return (rc1 == 0 && rc2 == 0 && rc3 == 0) ? 0 : 2;
        }
        if (*analyze_cmd)
            return cmd_analyze(analyze_store, analyze_out, analyze_neff, analyze_raw,
                               analyze_eval_fraction);
        if (*calibrate_cmd)
            return cmd_calibrate(calibrate_store_path, calibrate_out, calibrate_eval_fraction);
        if (*ingest_cmd) return cmd_ingest(ingest_args);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
