#include "tcnlab/experiments.hpp"

#include "tcnlab/blocking.hpp"
#include "tcnlab/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace tcnlab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::size_t train_length(std::size_t n_raw, double eval_fraction) {
    const auto test_len = static_cast<std::size_t>(std::floor(eval_fraction * double(n_raw)));
    return n_raw - test_len;
}

std::size_t resolve_delay(double rho, std::size_t n_raw, const GridOptions& options) {
    if (options.delay_policy == DelayPolicy::Fixed) return options.fixed_delay;
    if (rho <= 0.0) return 0;  // independent data: no delay needed
    return optimal_delay(train_length(n_raw, options.eval_fraction), -std::log(rho));
}

std::uint64_t cell_seed(const GridOptions& options, double rho, std::size_t n_raw,
                        std::size_t depth, std::size_t trial) {
    return derive_seed({options.root_seed, std::bit_cast<std::uint64_t>(rho), n_raw, depth, trial});
}

ExperimentGrid plan_grid(GridKind kind, const std::vector<std::size_t>& sizes,
                         const std::vector<double>& rhos,
                         const std::vector<std::size_t>& depths, std::size_t trials,
                         const GridOptions& options) {
    ExperimentGrid grid;
    grid.kind = kind;
    grid.sizes = sizes;
    grid.rhos = rhos;
    grid.depths = depths;
    grid.trials = trials;
    grid.options = options;
    for (std::size_t size : sizes) {
        if (size < 1) throw std::invalid_argument("plan grid: sizes must be >= 1");
        for (double rho : rhos) {
            std::size_t n_raw = 0, n_eff = 0;
            if (kind == GridKind::Fair) {
                if (!(rho > 0.0 && rho < 1.0))
                    throw std::invalid_argument("plan fair grid: rho must be in (0,1)");
                n_eff = size;
                n_raw = required_length(size, rho);
            } else {
                if (!(rho >= 0.0 && rho < 1.0))
                    throw std::invalid_argument("plan standard grid: rho must be in [0,1)");
                n_raw = size;
                n_eff = effective_sample_size(size, rho);
            }
            for (std::size_t depth : depths) {
                for (std::size_t trial = 0; trial < trials; ++trial) {
                    RunSpec spec;
                    spec.rho = rho;
                    spec.n_raw = n_raw;
                    spec.n_eff = n_eff;
                    spec.depth = depth;
                    spec.kernel_size = options.kernel_size;
                    spec.norm_radius = options.norm_radius;
                    spec.seed = cell_seed(options, rho, n_raw, depth, trial);
                    spec.delay = resolve_delay(rho, n_raw, options);
                    grid.cells.push_back(spec);
                }
            }
        }
    }
    return grid;
}

json spec_to_json(const RunSpec& spec) {
    return {{"rho", spec.rho},       {"n_raw", spec.n_raw}, {"n_eff", spec.n_eff},
            {"depth", spec.depth},   {"p", spec.kernel_size}, {"R", spec.norm_radius},
            {"seed", spec.seed},     {"delay", spec.delay}};
}

RunSpec spec_from_json(const json& j) {
    RunSpec spec;
    spec.rho = j.at("rho").get<double>();
    spec.n_raw = j.at("n_raw").get<std::size_t>();
    spec.n_eff = j.at("n_eff").get<std::size_t>();
    spec.depth = j.at("depth").get<std::size_t>();
    spec.kernel_size = j.at("p").get<std::size_t>();
    spec.norm_radius = j.at("R").get<double>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.delay = j.at("delay").get<std::size_t>();
    return spec;
}

const char* kind_name(GridKind kind) { return kind == GridKind::Fair ? "fair" : "standard"; }

const char* policy_name(DelayPolicy policy) {
    return policy == DelayPolicy::Optimal ? "optimal" : "fixed";
}

json manifest_body(const ExperimentGrid& grid) {
    json j;
    j["schema_version"] = 1;
    j["kind"] = kind_name(grid.kind);
    j[grid.kind == GridKind::Fair ? "targets" : "lengths"] = grid.sizes;
    j["rhos"] = grid.rhos;
    j["depths"] = grid.depths;
    j["trials"] = grid.trials;
    const GridOptions& o = grid.options;
    j["options"] = {{"kernel_size", o.kernel_size},
                    {"norm_radius", o.norm_radius},
                    {"channels", o.channels},
                    {"step_scale", o.step_scale},
                    {"passes", o.passes},
                    {"eval_fraction", o.eval_fraction},
                    {"root_seed", o.root_seed},
                    {"delay_policy", policy_name(o.delay_policy)},
                    {"fixed_delay", o.fixed_delay},
                    {"delta", o.delta},
                    {"c1", o.c1}};
    return j;
}

std::string digest_of(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace

ExperimentGrid plan_fair_grid(const std::vector<std::size_t>& targets,
                              const std::vector<double>& rhos,
                              const std::vector<std::size_t>& depths, std::size_t trials,
                              const GridOptions& options) {
    return plan_grid(GridKind::Fair, targets, rhos, depths, trials, options);
}

ExperimentGrid plan_standard_grid(const std::vector<std::size_t>& lengths,
                                  const std::vector<double>& rhos,
                                  const std::vector<std::size_t>& depths, std::size_t trials,
                                  const GridOptions& options) {
    return plan_grid(GridKind::Standard, lengths, rhos, depths, trials, options);
}

RunRecord execute_run(const RunSpec& spec, const GridOptions& options) {
    const auto started = std::chrono::steady_clock::now();

    Ar1Spec data_spec;
    data_spec.rho = spec.rho;
    data_spec.length = spec.n_raw;
    data_spec.seed = derive_seed({spec.seed, 0xDA7A});
    data_spec.target_variance = 1.0;
    const Series full = gen_ar1(data_spec);

    const std::size_t n_train = train_length(spec.n_raw, options.eval_fraction);
    Series train_series{{full.values.begin(), full.values.begin() + long(n_train)}, {}};
    Series test_series{{full.values.begin() + long(n_train), full.values.end()}, {}};

    TcnConfig config;
    config.depth = spec.depth;
    config.kernel_size = spec.kernel_size;
    config.in_dim = 1;
    config.channels = options.channels;
    config.dilation_base = 2;
    config.norm_radius = spec.norm_radius;

    TrainConfig tcfg;
    tcfg.delay = spec.delay;
    tcfg.passes = options.passes;
    tcfg.step_scale = options.step_scale;
    tcfg.eval_fraction = options.eval_fraction;
    tcfg.seed = derive_seed({spec.seed, 0x1217});

    const TrainedModel model = train_delayed_feedback(config, train_series, tcfg);

    RunRecord record;
    record.spec = spec;
    record.result = evaluate_gap(config, model.averaged_weights, train_series, test_series);

    const MixingProfile profile =
        spec.rho > 0.0 ? ar1_mixing_profile(spec.rho) : MixingProfile::exponential(0.0, 1.0);
    record.bound = generalization_bound(spec.depth, spec.kernel_size, 1, spec.norm_radius,
                                        n_train, options.delta, profile, options.c1);
    record.ratio = tightness_ratio(record.result.gap, record.bound);
    record.duration_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return record;
}

std::string run_record_to_json_line(const RunRecord& record) {
    json j;
    j["spec"] = spec_to_json(record.spec);
    j["result"] = {{"train_loss", record.result.train_loss},
                   {"test_loss", record.result.test_loss},
                   {"gap", record.result.gap},
                   {"total_norm", record.result.total_norm}};
    j["bound"] = {{"complexity", record.bound.complexity_term},
                  {"mixing", record.bound.mixing_const},
                  {"concentration", record.bound.concentration_term},
                  {"total", record.bound.total},
                  {"ratio", record.ratio}};
    j["meta"] = {{"duration_s", record.duration_s}, {"version", record.version}};
    return j.dump();
}

RunRecord run_record_from_json_line(const std::string& line) {
    const json j = json::parse(line);
    RunRecord record;
    record.spec = spec_from_json(j.at("spec"));
    const json& r = j.at("result");
    record.result.train_loss = r.at("train_loss").get<double>();
    record.result.test_loss = r.at("test_loss").get<double>();
    record.result.gap = r.at("gap").get<double>();
    record.result.total_norm = r.at("total_norm").get<double>();
    const json& b = j.at("bound");
    record.bound.complexity_term = b.at("complexity").get<double>();
    record.bound.mixing_const = b.at("mixing").get<double>();
    record.bound.concentration_term = b.at("concentration").get<double>();
    record.bound.total = b.at("total").get<double>();
    record.ratio = b.at("ratio").get<double>();
    const json& m = j.at("meta");
    record.duration_s = m.at("duration_s").get<double>();
    record.version = m.at("version").get<std::string>();
    return record;
}

std::string run_spec_key(const RunSpec& spec) { return spec_to_json(spec).dump(); }

std::string grid_manifest_json(const ExperimentGrid& grid) {
    json j = manifest_body(grid);
    j["digest"] = digest_of(j.dump());
    return j.dump(2) + "\n";
}

ExperimentGrid grid_from_manifest_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("schema_version") != 1)
        throw std::invalid_argument("manifest: unsupported schema version");
    GridOptions options;
    const json& o = j.at("options");
    options.kernel_size = o.at("kernel_size").get<std::size_t>();
    options.norm_radius = o.at("norm_radius").get<double>();
    options.channels = o.at("channels").get<std::size_t>();
    options.step_scale = o.at("step_scale").get<double>();
    options.passes = o.at("passes").get<std::size_t>();
    options.eval_fraction = o.at("eval_fraction").get<double>();
    options.root_seed = o.at("root_seed").get<std::uint64_t>();
    options.delay_policy = o.at("delay_policy").get<std::string>() == "optimal"
                               ? DelayPolicy::Optimal
                               : DelayPolicy::Fixed;
    options.fixed_delay = o.at("fixed_delay").get<std::size_t>();
    options.delta = o.at("delta").get<double>();
    options.c1 = o.at("c1").get<double>();

    const GridKind kind = j.at("kind").get<std::string>() == "fair" ? GridKind::Fair
                                                                    : GridKind::Standard;
    const auto sizes =
        j.at(kind == GridKind::Fair ? "targets" : "lengths").get<std::vector<std::size_t>>();
    return plan_grid(kind, sizes, j.at("rhos").get<std::vector<double>>(),
                     j.at("depths").get<std::vector<std::size_t>>(),
                     j.at("trials").get<std::size_t>(), options);
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::vector<std::string> lines;
    std::ifstream in(path);
    if (!in) return lines;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

std::string canonical_line(const std::string& line) {
    json j = json::parse(line);
    j["meta"]["duration_s"] = 0.0;  // wall-clock is the one nondeterministic field
    return j.dump();
}

} // namespace

SweepReport sweep(const ExperimentGrid& grid, const std::string& out_dir,
                  std::size_t parallelism) {
    if (parallelism < 1) throw std::invalid_argument("sweep: parallelism must be >= 1");
    fs::create_directories(out_dir);

    SweepReport report;
    report.manifest_path = (fs::path(out_dir) / "manifest.json").string();
    report.store_path = (fs::path(out_dir) / "results.jsonl").string();
    report.canonical_path = (fs::path(out_dir) / "results.canonical.jsonl").string();

    const std::string manifest = grid_manifest_json(grid);
    if (fs::exists(report.manifest_path)) {
        std::ifstream in(report.manifest_path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        const json existing = json::parse(buffer.str());
        const json fresh = json::parse(manifest);
        if (existing.at("digest") != fresh.at("digest"))
            throw std::runtime_error("sweep: output directory holds a store for a different grid");
    } else {
        std::ofstream out(report.manifest_path);
        out << manifest;
    }

    // Resume: anything already in the store with a matching spec is done.
    std::vector<std::string> existing_lines = read_lines(report.store_path);
    std::set<std::string> done;
    for (const std::string& line : existing_lines)
        done.insert(json::parse(line).at("spec").dump());

    std::vector<const RunSpec*> pending;
    for (const RunSpec& spec : grid.cells) {
        if (done.count(spec_to_json(spec).dump()))
            ++report.skipped;
        else
            pending.push_back(&spec);
    }

    std::mutex sink_mutex;
    std::ofstream store(report.store_path, std::ios::app);
    if (!store) throw std::runtime_error("sweep: cannot open store for append");
    std::vector<std::string> new_lines;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        while (true) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= pending.size()) break;
            const RunSpec& spec = *pending[idx];
            try {
                const RunRecord record = execute_run(spec, grid.options);
                const std::string line = run_record_to_json_line(record);
                std::lock_guard<std::mutex> lock(sink_mutex);
                store << line << '\n';
                store.flush();
                new_lines.push_back(line);
                ++report.executed;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(sink_mutex);
                ++report.failed;
                report.failures.push_back("cell " + spec_to_json(spec).dump() + ": " + e.what());
            }
        }
    };

    if (parallelism == 1 || pending.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        const std::size_t n_threads = std::min(parallelism, pending.size());
        threads.reserve(n_threads);
        for (std::size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
        for (std::thread& t : threads) t.join();
    }

    // Canonical store: duration zeroed, duplicate cells collapsed, lines
    // sorted. Identical grids reproduce it byte for byte at any parallelism.
    std::vector<std::string> all_lines = existing_lines;
    all_lines.insert(all_lines.end(), new_lines.begin(), new_lines.end());
    std::map<std::string, std::string> by_key;
    for (const std::string& line : all_lines) {
        const std::string key = json::parse(line).at("spec").dump();
        by_key.emplace(key, canonical_line(line));  // first completion wins
    }
    std::vector<std::string> canonical;
    canonical.reserve(by_key.size());
    for (const auto& [key, line] : by_key) canonical.push_back(line);
    std::sort(canonical.begin(), canonical.end());
    std::ofstream canon(report.canonical_path, std::ios::trunc);
    for (const std::string& line : canonical) canon << line << '\n';

    return report;
}

std::vector<RunRecord> read_store(const std::string& jsonl_path) {
    std::vector<RunRecord> records;
    for (const std::string& line : read_lines(jsonl_path))
        records.push_back(run_record_from_json_line(line));
    return records;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::string format_rho(double rho) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", rho);
    return buf;
}

std::vector<std::pair<double, double>> gather_points(const std::vector<RunRecord>& records,
                                                     double rho, bool per_point,
                                                     std::size_t& replaced) {
    std::vector<std::pair<double, double>> points;
    if (per_point) {
        for (const RunRecord& r : records)
            if (r.spec.rho == rho) points.emplace_back(double(r.spec.n_eff), r.result.gap);
    } else {
        std::map<std::size_t, std::pair<double, std::size_t>> by_level;  // n_eff -> (sum, count)
        for (const RunRecord& r : records) {
            if (r.spec.rho != rho) continue;
            auto& [sum, count] = by_level[r.spec.n_eff];
            sum += r.result.gap;
            ++count;
        }
        for (const auto& [n_eff, agg] : by_level)
            points.emplace_back(double(n_eff), agg.first / double(agg.second));
    }
    // Zero gaps cannot enter the log transform; substitute the smallest
    // positive gap in the set and report how many were replaced.
    double smallest_positive = 0.0;
    for (const auto& [x, y] : points)
        if (y > 0.0 && (smallest_positive == 0.0 || y < smallest_positive)) smallest_positive = y;
    replaced = 0;
    for (auto& [x, y] : points) {
        if (y == 0.0 && smallest_positive > 0.0) {
            y = smallest_positive;
            ++replaced;
        }
    }
    std::sort(points.begin(), points.end());
    return points;
}

} // namespace

std::vector<ScalingRow> scaling_by_rho(const std::vector<RunRecord>& records, bool per_point) {
    std::set<double> rhos;
    for (const RunRecord& r : records) rhos.insert(r.spec.rho);
    std::vector<ScalingRow> rows;
    for (double rho : rhos) {
        ScalingRow row;
        row.rho = rho;
        auto points = gather_points(records, rho, per_point, row.replaced_zeros);
        if (points.size() < 3) continue;  // not enough levels to fit
        bool positive = true;
        for (const auto& [x, y] : points) positive = positive && y > 0.0;
        if (!positive) continue;  // all-zero gaps: nothing to fit
        row.fit = fit_power_law(points);
        rows.push_back(row);
    }
    return rows;
}

std::vector<ContrastRow> rho_contrasts(const std::vector<RunRecord>& records,
                                       std::size_t n_eff) {
    std::set<double> rho_set;
    std::set<std::size_t> depth_set;
    for (const RunRecord& r : records) {
        if (r.spec.n_eff != n_eff) continue;
        rho_set.insert(r.spec.rho);
        depth_set.insert(r.spec.depth);
    }
    const std::vector<double> rhos(rho_set.begin(), rho_set.end());

    const auto gaps_of = [&](double rho, long depth) {
        std::vector<double> gaps;
        for (const RunRecord& r : records)
            if (r.spec.n_eff == n_eff && r.spec.rho == rho &&
                (depth < 0 || r.spec.depth == std::size_t(depth)))
                gaps.push_back(r.result.gap);
        return gaps;
    };

    struct Pending {
        std::string label;
        std::vector<double> a, b;
    };
    std::vector<Pending> pooled, per_depth;
    for (std::size_t i = 0; i < rhos.size(); ++i) {
        for (std::size_t j = i + 1; j < rhos.size(); ++j) {
            const std::string pair_label =
                "rho" + format_rho(rhos[i]) + "-vs-rho" + format_rho(rhos[j]) + "@neff" +
                std::to_string(n_eff);
            pooled.push_back({pair_label + ":pooled", gaps_of(rhos[i], -1), gaps_of(rhos[j], -1)});
            for (std::size_t depth : depth_set)
                per_depth.push_back({pair_label + ":D=" + std::to_string(depth),
                                     gaps_of(rhos[i], long(depth)), gaps_of(rhos[j], long(depth))});
        }
    }

    const auto finish = [](std::vector<Pending>& family) {
        std::vector<ContrastRow> rows;
        std::vector<double> ps;
        for (Pending& p : family) {
            ContrastRow row;
            row.label = p.label;
            if (p.a.size() < 2 || p.b.size() < 2) continue;
            double sum_a = 0.0, sum_b = 0.0;
            for (double v : p.a) sum_a += v;
            for (double v : p.b) sum_b += v;
            row.mean_a = sum_a / double(p.a.size());
            row.mean_b = sum_b / double(p.b.size());
            row.n_a = p.a.size();
            row.n_b = p.b.size();
            const WelchResult w = welch_t(p.a, p.b);
            row.t = w.t;
            row.dof = w.dof;
            row.p_raw = w.p;
            row.cohens_d = tcnlab::cohens_d(p.a, p.b).d;
            ps.push_back(w.p);
            rows.push_back(row);
        }
        if (!rows.empty()) {
            const std::vector<double> adjusted = bonferroni(ps, rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i) rows[i].p_adj = adjusted[i];
        }
        return rows;
    };

    std::vector<ContrastRow> rows = finish(pooled);
    const std::vector<ContrastRow> depth_rows = finish(per_depth);
    rows.insert(rows.end(), depth_rows.begin(), depth_rows.end());
    return rows;
}

std::string scaling_csv(const std::vector<ScalingRow>& rows) {
    std::ostringstream out;
    out << "rho,exponent,r_squared,n_points,replaced_zeros,degenerate\n";
    for (const ScalingRow& row : rows) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%g,%.10g,%.10g,%zu,%zu,%d\n", row.rho, row.fit.exponent,
                      row.fit.r_squared, row.fit.n_points, row.replaced_zeros,
                      int(row.fit.degenerate));
        out << buf;
    }
    return out.str();
}

std::string contrasts_csv(const std::vector<ContrastRow>& rows) {
    std::ostringstream out;
    out << "pairing,mean_a,mean_b,n_a,n_b,t,dof,p_raw,p_adj,cohens_d\n";
    for (const ContrastRow& row : rows) {
        char buf[320];
        std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g,%zu,%zu,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                      row.label.c_str(), row.mean_a, row.mean_b, row.n_a, row.n_b, row.t, row.dof,
                      row.p_raw, row.p_adj, row.cohens_d);
        out << buf;
    }
    return out.str();
}

CalibrationResult calibrate_store(const std::vector<RunRecord>& records, double eval_fraction) {
    std::vector<CalibrationPoint> points;
    points.reserve(records.size());
    for (const RunRecord& r : records) {
        CalibrationPoint point;
        point.gap = r.result.gap;
        point.depth = r.spec.depth;
        point.kernel_size = r.spec.kernel_size;
        point.in_dim = 1;
        point.norm_radius = r.spec.norm_radius;
        point.n = train_length(r.spec.n_raw, eval_fraction);
        points.push_back(point);
    }
    return calibrate_constants(points);
}

} // namespace tcnlab
