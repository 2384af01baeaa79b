#pragma once

#include "ogplab/instance.hpp"
#include "ogplab/overlap.hpp"
#include "ogplab/regularize.hpp"
#include "ogplab/solve.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ogplab {

enum class Family { ErNm, ErNp, Regular, DenseSk, DenseQspin };

struct RegularizeBlock {
    /// Target average degree for trim-and-fill.
    double lambda = 0.0;
    /// Radius for the tree-likeness fractions in the report.
    std::size_t radius = 2;
};

struct QaoaBlock {
    std::size_t p = 1;
    std::size_t resolution = 16;
};

/// One experiment: an instance family, the solver and detector settings, and how many
/// seeded trials to run. Loaded from YAML; see README for the schema.
struct ExperimentConfig {
    Family family = Family::Regular;
    std::size_t n = 0;
    std::size_t q = 3;
    std::optional<std::size_t> m;
    std::optional<double> edge_prob;
    std::optional<std::size_t> d;
    std::optional<RegularizeBlock> regularize;

    ThresholdSpec threshold;
    Backend backend = Backend::Auto;
    std::uint64_t node_budget = 0;
    std::size_t exhaustive_cap = 32;
    std::size_t member_cap = std::size_t{1} << 22;

    bool absolute = true;
    bool canonicalize = true;
    GapParams gap;

    std::optional<QaoaBlock> qaoa;

    std::size_t trials = 50;
    Seed base_seed = 0;
    std::string output;
};

std::string to_string(Family f);
Family parse_family(const std::string& s);
std::string to_string(Backend b);
Backend parse_backend(const std::string& s);

/// Parses YAML text and validates it; throws ConfigError with the offending key.
ExperimentConfig parse_config(const std::string& yaml);
ExperimentConfig load_config(const std::string& path);

/// Throws ConfigError when family parameters are missing or inconsistent.
void validate(const ExperimentConfig& cfg);

/// Experiment fields only (no output path), as echoed into the run file.
nlohmann::json config_json(const ExperimentConfig& cfg);

/// Trial instance for seed base_seed + index; substreams "graph", "couplings".
Instance make_instance(const ExperimentConfig& cfg, Seed trial_seed,
                       std::optional<RegularizeReport>* report = nullptr);

struct QaoaSummary {
    std::size_t p = 0;
    double value = 0.0;
    /// value / optimum.
    double ratio = 0.0;
    std::vector<double> gammas;
    std::vector<double> betas;
};

struct TrialRow {
    std::size_t index = 0;
    Seed seed = 0;
    bool ok = false;
    std::string error;
    std::size_t num_edges = 0;
    double optimum = 0.0;
    double threshold = 0.0;
    bool integral = false;
    std::size_t members = 0;
    bool exhaustive = false;
    bool z2_canonical = false;
    std::uint64_t nodes = 0;
    GapReport gap;
    /// Absent when fewer than two members survive.
    std::optional<OverlapSpectrum> spectrum;
    std::optional<RegularizeReport> regularize;
    std::optional<QaoaSummary> qaoa;
    double elapsed_ms = 0.0;
};

struct RunRecord {
    ExperimentConfig config;
    std::vector<TrialRow> trials;
    std::size_t completed = 0;
    std::size_t failed = 0;
    std::size_t gap_found = 0;
    /// gap_found / completed; unset when nothing completed.
    std::optional<double> gap_fraction;
    double elapsed_ms = 0.0;
};

struct RunOptions {
    unsigned workers = 1;
    /// Extra fields merged into the config record (used by sweep).
    nlohmann::json annotate = nlohmann::json::object();
};

/// Runs one trial end to end: generate, couple, solve, canonicalize when the cost is
/// Z2 symmetric, overlaps, gap detection, and optionally QAOA. Errors are captured in
/// the row.
TrialRow run_trial(const ExperimentConfig& cfg, std::size_t index);

/// Trials run concurrently on up to `workers` threads; JSONL lines (config record,
/// one row per trial, aggregate record) are written and flushed in trial order.
RunRecord run_experiment(const ExperimentConfig& cfg, std::ostream& out, const RunOptions& opts = {});
/// Writes to cfg.output when set, otherwise discards the JSONL.
RunRecord run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Numeric fields accepted as sweep axes.
std::vector<std::string> sweep_axes();
ExperimentConfig with_axis_value(const ExperimentConfig& cfg, const std::string& axis, double value);

/// One run per value with the same base seed, appended to one JSONL stream.
std::vector<RunRecord> sweep(const ExperimentConfig& tmpl, const std::string& axis,
                             const std::vector<double>& values, std::ostream& out,
                             const RunOptions& opts = {});

nlohmann::json trial_json(const TrialRow& row);
nlohmann::json aggregate_json(const RunRecord& rec);

/// Writes the `overlap,count` CSV of trial `index` from a run file. Throws LookupError
/// when no such trial row exists; trials without a spectrum give a header-only CSV.
void export_spectrum(const std::string& record_path, std::size_t index, std::ostream& csv);

/// JSONL with every "elapsed_ms" field removed, for determinism comparisons.
std::string strip_timing(const std::string& jsonl);

} // namespace ogplab
