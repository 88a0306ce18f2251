// Experiment planning, execution, and persistence.
//
// A grid is a full factorial of (size target or raw length) x rho x depth x
// trial. Fair grids fix the effective sample size and derive raw lengths
// via required_length; standard grids fix raw lengths and record the
// effective size for reinterpretation. Every cell owns a seed derived from
// the root seed and its coordinates, so adding cells never shifts the
// randomness of existing ones.
//
// Results persist as an append-only JSONL store plus a manifest. The
// canonical store (sorted, wall-clock zeroed) is what determinism is
// measured on: re-running a grid at any parallelism reproduces it byte for
// byte.
#pragma once

#include "tcnlab/analysis.hpp"
#include "tcnlab/bounds.hpp"
#include "tcnlab/training.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tcnlab {

inline constexpr const char* kVersion = "0.1.0";

enum class GridKind { Fair, Standard };
enum class DelayPolicy { Optimal, Fixed };

struct RunSpec {
    double rho = 0.0;
    std::size_t n_raw = 0;
    std::size_t n_eff = 0;
    std::size_t depth = 1;
    std::size_t kernel_size = 5;  // p
    double norm_radius = 1.0;     // R
    std::uint64_t seed = 0;
    std::size_t delay = 0;        // resolved delay used by the learner
};

struct GridOptions {
    std::size_t kernel_size = 5;
    double norm_radius = 1.0;
    std::size_t channels = 16;
    double step_scale = 0.5;
    std::size_t passes = 1;
    double eval_fraction = 0.2;   // contiguous suffix held out for testing
    std::uint64_t root_seed = 0;
    DelayPolicy delay_policy = DelayPolicy::Optimal;
    std::size_t fixed_delay = 0;
    double delta = 0.05;
    double c1 = 8.0;
};

struct ExperimentGrid {
    GridKind kind = GridKind::Fair;
    std::vector<std::size_t> sizes;  // N_eff targets (Fair) or raw lengths (Standard)
    std::vector<double> rhos;
    std::vector<std::size_t> depths;
    std::size_t trials = 1;
    GridOptions options;
    std::vector<RunSpec> cells;      // |sizes| * |rhos| * |depths| * trials
};

// Fair grid: rho in (0,1), raw lengths from required_length.
ExperimentGrid plan_fair_grid(const std::vector<std::size_t>& targets,
                              const std::vector<double>& rhos,
                              const std::vector<std::size_t>& depths, std::size_t trials,
                              const GridOptions& options = {});

// Standard grid over raw lengths; rho in [0,1).
ExperimentGrid plan_standard_grid(const std::vector<std::size_t>& lengths,
                                  const std::vector<double>& rhos,
                                  const std::vector<std::size_t>& depths, std::size_t trials,
                                  const GridOptions& options = {});

struct RunRecord {
    RunSpec spec;
    GapEvaluation result;
    BoundReport bound;
    double ratio = 0.0;
    double duration_s = 0.0;
    std::string version = kVersion;
};

// Generates data, trains the delayed-feedback learner, evaluates the gap,
// and attaches the bound report and tightness ratio. Deterministic in
// spec.seed apart from duration_s.
RunRecord execute_run(const RunSpec& spec, const GridOptions& options);

// One JSON object per line; keys sorted, doubles in shortest round-trip
// form, so identical records serialize identically.
std::string run_record_to_json_line(const RunRecord& record);
RunRecord run_record_from_json_line(const std::string& line);

// Cell identity used by resumption: the serialized spec object.
std::string run_spec_key(const RunSpec& spec);

std::string grid_manifest_json(const ExperimentGrid& grid);
ExperimentGrid grid_from_manifest_json(const std::string& text);

struct SweepReport {
    std::size_t executed = 0;
    std::size_t skipped = 0;   // already present with matching digest
    std::size_t failed = 0;
    std::vector<std::string> failures;
    std::string store_path;
    std::string canonical_path;
    std::string manifest_path;
};

// Executes all cells not yet in the store, appending to <out>/results.jsonl
// as they finish and rewriting <out>/results.canonical.jsonl (sorted,
// duration zeroed) at the end. Refuses to mix grids: an existing manifest
// with a different digest is an error. Cell failures are collected, not
// fatal.
SweepReport sweep(const ExperimentGrid& grid, const std::string& out_dir,
                  std::size_t parallelism);

std::vector<RunRecord> read_store(const std::string& jsonl_path);

// ---------------------------------------------------------------------------
// Store-level reports.

struct ScalingRow {
    double rho = 0.0;
    PowerLawFit fit;
    std::size_t replaced_zeros = 0;  // zero gaps substituted before the log fit
};

// Power-law fit of gap against N_eff per rho. By default fits the per-level
// mean gaps; per_point fits every raw run instead.
std::vector<ScalingRow> scaling_by_rho(const std::vector<RunRecord>& records,
                                       bool per_point = false);

struct ContrastRow {
    std::string label;
    double mean_a = 0.0, mean_b = 0.0;
    std::size_t n_a = 0, n_b = 0;
    double t = 0.0, dof = 0.0, p_raw = 1.0, p_adj = 1.0;
    double cohens_d = 0.0;
};

// Welch contrasts between every rho pair at one N_eff level, pooled across
// depths and seeds (as replicates) plus labeled per-depth rows. Bonferroni
// adjusts within each family.
std::vector<ContrastRow> rho_contrasts(const std::vector<RunRecord>& records,
                                       std::size_t n_eff);

std::string scaling_csv(const std::vector<ScalingRow>& rows);
std::string contrasts_csv(const std::vector<ContrastRow>& rows);

// Calibration of (C0, C1) over a store; N is the training length implied by
// eval_fraction.
CalibrationResult calibrate_store(const std::vector<RunRecord>& records,
                                  double eval_fraction = 0.2);

} // namespace tcnlab
