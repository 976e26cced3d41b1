#pragma once

#include "s2shock/state.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace s2shock::harness {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct SweepAxes {
    std::vector<double> gamma;
    std::vector<double> tau0;
    std::vector<double> xi0;
    std::vector<int> n_cells;
    /// 0 means hardware concurrency.
    int threads = 0;

    auto empty() const -> bool { return gamma.empty() && tau0.empty() && xi0.empty() && n_cells.empty(); }
};

struct ExperimentConfig {
    SolverConfig solver;
    ModulationConfig modulation;
    MonitorConfig monitor;
    SweepAxes sweep;
    std::string out_dir = "runs/default";
    /// Self-similar CSV rows every this many records; 0 disables.
    int emit_selfsim = 0;
    /// Physical field CSV rows every this many records; 0 disables.
    int emit_fields = 0;
    std::uint64_t seed = 0;
};

/// The fully resolved document for a config (every key present).
auto to_json(const ExperimentConfig& cfg) -> json;

/// Overlay `doc` on the defaults. Unknown keys and type mismatches throw ConfigError.
auto from_json(const json& doc) -> ExperimentConfig;

auto load_config(const std::filesystem::path& path) -> ExperimentConfig;

/// Apply "a.b.c=value" to a document; the value is parsed as JSON, falling back to a string.
void apply_override(json& doc, const std::string& assignment);

/// 64-bit FNV-1a of the canonical physics document (output block excluded), as 16 hex digits.
auto fnv1a64(const std::string& bytes) -> std::uint64_t;
auto config_hash(const ExperimentConfig& cfg) -> std::string;

auto sample_to_json(const RunSample& s) -> json;
auto sample_from_json(const json& j) -> RunSample;
auto snapshot_to_json(const Snapshot& s) -> json;
auto snapshot_from_json(const json& j) -> Snapshot;

/// Per-run summary with diagnostics and pass flags.
auto summarize(const RunRecord& rec, const ExperimentConfig& cfg) -> json;

struct RunOutput {
    RunRecord record;
    json summary;
    std::filesystem::path dir;
};

/// Run one experiment and write run.jsonl, summary.json, config.json, metadata.json and,
/// when requested, snapshots.jsonl, selfsim.csv and fields.csv into `dir`.
auto run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& dir) -> RunOutput;

/// Rebuild a record from run.jsonl (snapshots from a sibling snapshots.jsonl when present).
auto read_record(const std::filesystem::path& path) -> std::pair<RunRecord, ExperimentConfig>;

/// Cross product of the sweep axes; an empty sweep yields the config itself.
auto expand_sweep(const ExperimentConfig& cfg) -> std::vector<ExperimentConfig>;

struct SweepRow {
    std::string hash;
    double gamma = 0.0;
    double tau0 = 0.0;
    double xi0 = 0.0;
    int n_cells = 0;
    std::string status;
    double T_star = 0.0;
    double T_minus_tau0 = 0.0;
    double rate_exponent = 0.0;
    double max_drift = 0.0;
    double holder_max = 0.0;
    double min_sigma = 0.0;
    double bootstrap_min_margin = 0.0;
    bool all_pass = false;
    std::string error;
};

/// Run the expanded sweep concurrently; rows sorted by config hash. Each run
/// writes into `dir`/<hash>/; sweep.csv goes into `dir`.
auto sweep(const ExperimentConfig& cfg, const std::filesystem::path& dir) -> std::vector<SweepRow>;

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

/// Slope of log|T* − τ₀| against log τ₀ over rows that blew up.
auto time_scaling_slope(const std::vector<SweepRow>& rows) -> double;

}  // namespace s2shock::harness
