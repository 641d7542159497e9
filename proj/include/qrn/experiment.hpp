// Experiment configuration, sweep execution and result files.
//
// Config files are INI-style: `[section]` headers followed by `key = value`
// lines, `#` or `;` comments. Sections: experiment, reservoir, stmc, narma,
// esn, sweep. Overrides use the dotted form `section.key=value` and are
// applied after the file, so they win.
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrn/tasks.hpp"

namespace qrn {

enum class Task { stmc, narma5, esn_baseline };

std::string_view to_string(Task t);
Task parse_task(std::string_view name);

struct SweepGrid {
    std::vector<double> gamma;
    std::vector<int> n_qubits;
    std::vector<int> n_repeats;
    std::vector<int> n_nodes;  // esn-baseline only

    bool empty() const {
        return gamma.empty() && n_qubits.empty() && n_repeats.empty() && n_nodes.empty();
    }
};

struct ExperimentConfig {
    Task task = Task::stmc;
    std::uint64_t seed = 42;
    ReservoirConfig reservoir;
    StmcSpec stmc;
    NarmaSpec narma;
    EsnConfig esn;
    int esn_seeds = 200;
    SweepGrid sweep;
    std::string output_dir;  // empty: derived from $QRN_OUTPUT_ROOT
    int jobs = 1;
    bool emit_features = false;

    void validate() const;
};

/// Parameter defaults of the STMC or NARMA-5 experiment.
ExperimentConfig default_config(Task task);

using Override = std::pair<std::string, std::string>;

/// Parses config text plus overrides. Unknown keys and out-of-range values
/// raise std::invalid_argument mentioning the dotted key path.
ExperimentConfig parse_config_text(std::string_view text,
                                   const std::vector<Override>& overrides = {});
ExperimentConfig parse_config(const std::filesystem::path& path,
                              const std::vector<Override>& overrides = {});

/// "a,b,c" or "start:stop:step" (inclusive stop).
std::vector<double> parse_real_grid(std::string_view text);
std::vector<int> parse_int_grid(std::string_view text);

/// Resolved configuration as JSON; parse_config_json(to_json(c)) == c.
nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);
/// FNV-1a 64 of the canonical JSON dump.
std::string config_hash(const ExperimentConfig& cfg);

/// Cartesian product of the sweep grids, n_qubits outermost, then n_repeats,
/// then gamma (or n_nodes for the ESN task). Each point has an empty grid.
std::vector<ExperimentConfig> enumerate_points(const ExperimentConfig& cfg);

struct ResultRecord {
    int point_index = 0;
    ExperimentConfig config;
    nlohmann::json metrics;
    double wall_time_s = 0.0;
    std::string version;
    std::uint64_t seed = 0;
    std::string error;  // empty on success
};

nlohmann::json to_json(const ResultRecord& r);
ResultRecord record_from_json(const nlohmann::json& j);

/// Runs one point. Weights and input data depend only on the experiment seed
/// so that ablations compare the same reservoir; shot noise uses the seed
/// derived from (seed, point_index).
ResultRecord run_point(const ExperimentConfig& point, int point_index);

/// Runs every point (worker pool of cfg.jobs threads), writes records.json,
/// results.csv, the plot CSVs and MANIFEST into `out_dir`.
std::vector<ResultRecord> run_sweep(const ExperimentConfig& cfg,
                                    const std::filesystem::path& out_dir);

/// Output directory: cfg.output_dir, else $QRN_OUTPUT_ROOT (default
/// "results") / "<task>-<hash>".
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg);

/// Tidy CSV, one row per point per metric.
void write_results_csv(std::ostream& os, const std::vector<ResultRecord>& records);

/// Writes per-figure CSVs; returns the files written.
std::vector<std::filesystem::path> emit_plotdata(const std::vector<ResultRecord>& records,
                                                 const std::filesystem::path& out_dir);

std::vector<ResultRecord> load_records(const std::filesystem::path& records_json);

/// √Var(U(0,1)) = √(1/12), the constant-predictor RMSE for STMC targets.
double stmc_random_guess();

std::string format_real(double v);

}  // namespace qrn
