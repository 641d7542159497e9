// qrn command-line driver: run, sweep, plotdata.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qrn/experiment.hpp"

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config;
    std::string task;
    std::string n_qubits, gamma, n_repeats, n_nodes;
    std::optional<int> n_shots, context, jobs;
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
    std::string backend;
    std::string out;
    bool features = false;
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config, "Config file (INI sections)")->check(CLI::ExistingFile);
    cmd->add_option("--task", o.task, "stmc, narma5 or esn-baseline");
    cmd->add_option("--n-qubits", o.n_qubits, "Total qubits (memory + readout)");
    cmd->add_option("--gamma", o.gamma, "Partial-SWAP exponent in (0, 1]");
    cmd->add_option("--n-repeats", o.n_repeats, "Embedding repetitions per step");
    cmd->add_option("--n-nodes", o.n_nodes, "ESN size (esn-baseline task)");
    cmd->add_option("--n-shots", o.n_shots, "Shots per step for sampling backends");
    cmd->add_option("--context", o.context, "Input context window length");
    cmd->add_option("--alpha", o.alpha, "Ridge regularization");
    cmd->add_option("--seed", o.seed, "Experiment seed");
    cmd->add_option("--backend", o.backend, "exact, sampled or trajectory");
    cmd->add_option("--out", o.out, "Output directory (default $QRN_OUTPUT_ROOT/<task>-<hash>)");
    cmd->add_option("--jobs", o.jobs, "Worker threads");
    cmd->add_flag("--features", o.features, "Write per-point feature CSV and JSON");
    cmd->add_option("--set", o.sets, "Extra override section.key=value (repeatable)");
}

std::vector<qrn::Override> overrides(const Options& o, bool sweep) {
    std::vector<qrn::Override> out;
    for (const auto& s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw std::invalid_argument(fmt::format("--set '{}': expected key=value", s));
        out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!o.task.empty()) out.emplace_back("experiment.task", o.task);
    auto scalar_or_grid = [&](const std::string& value, const char* key) {
        if (value.empty()) return;
        const bool list = value.find_first_of(",:") != std::string::npos;
        if (list && !sweep) throw std::invalid_argument(fmt::format("--{}: lists are only accepted by sweep", key));
        const std::string section = std::string(key) == "n_nodes" ? "esn." : "reservoir.";
        out.emplace_back((sweep && list ? "sweep." : section) + key, value);
    };
    scalar_or_grid(o.n_qubits, "n_qubits");
    scalar_or_grid(o.gamma, "gamma");
    scalar_or_grid(o.n_repeats, "n_repeats");
    scalar_or_grid(o.n_nodes, "n_nodes");
    if (o.n_shots) out.emplace_back("reservoir.n_shots", std::to_string(*o.n_shots));
    if (o.context) out.emplace_back("reservoir.context", std::to_string(*o.context));
    if (!o.backend.empty()) out.emplace_back("reservoir.backend", o.backend);
    if (o.seed) out.emplace_back("experiment.seed", std::to_string(*o.seed));
    if (o.jobs) out.emplace_back("experiment.jobs", std::to_string(*o.jobs));
    if (o.features) out.emplace_back("experiment.emit_features", "true");
    if (!o.out.empty()) out.emplace_back("experiment.output_dir", o.out);
    return out;
}

qrn::ExperimentConfig load(const Options& o, bool sweep) {
    auto ov = overrides(o, sweep);
    // The ridge penalty section depends on the task, so resolve it last.
    if (o.alpha) {
        const auto probe = o.config.empty() ? qrn::parse_config_text("", ov) : qrn::parse_config(o.config, ov);
        const char* section = probe.task == qrn::Task::stmc ? "stmc.alpha" : "narma.alpha";
        ov.emplace_back(section, qrn::format_real(*o.alpha));
    }
    return o.config.empty() ? qrn::parse_config_text("", ov) : qrn::parse_config(o.config, ov);
}

void print_summary(const std::vector<qrn::ResultRecord>& records, const fs::path& dir) {
    for (const auto& r : records) {
        const auto& c = r.config;
        if (!r.error.empty()) {
            fmt::print("point {:>4}  error: {}\n", r.point_index, r.error);
            continue;
        }
        switch (c.task) {
            case qrn::Task::stmc:
                fmt::print("point {:>4}  n_qubits={} n_repeats={} gamma={}  mean_rmse_short={}\n", r.point_index,
                           c.reservoir.n_qubits, c.reservoir.n_repeats, qrn::format_real(c.reservoir.gamma),
                           r.metrics.at("mean_rmse_short").dump());
                break;
            case qrn::Task::narma5:
                fmt::print("point {:>4}  n_qubits={} n_repeats={} gamma={}  rmse={}\n", r.point_index,
                           c.reservoir.n_qubits, c.reservoir.n_repeats, qrn::format_real(c.reservoir.gamma),
                           qrn::format_real(r.metrics.at("rmse").get<double>()));
                break;
            case qrn::Task::esn_baseline:
                fmt::print("point {:>4}  n_nodes={}  median_rmse={}\n", r.point_index, c.esn.n_nodes,
                           qrn::format_real(r.metrics.at("median").get<double>()));
                break;
        }
    }
    fmt::print("wrote {}\n", dir.string());
}

int execute(const Options& o, bool sweep) {
    const auto cfg = load(o, sweep);
    if (!sweep && qrn::enumerate_points(cfg).size() != 1) {
        throw std::invalid_argument("run expects a single point; use sweep for grids");
    }
    const fs::path dir = qrn::resolve_output_dir(cfg);
    const auto records = qrn::run_sweep(cfg, dir);
    print_summary(records, dir);
    for (const auto& r : records) {
        if (!r.error.empty()) return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum recurrent reservoir experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", QRN_VERSION);

    Options run_opts, sweep_opts;
    auto* run = app.add_subcommand("run", "Run one configuration");
    add_common(run, run_opts);
    auto* sweep = app.add_subcommand("sweep", "Run the grid of a configuration; list-valued flags become grids");
    add_common(sweep, sweep_opts);

    std::string records_path, plot_out;
    auto* plot = app.add_subcommand("plotdata", "Regenerate per-figure CSVs from records.json");
    plot->add_option("records", records_path, "records.json or the sweep directory")->required();
    plot->add_option("--out", plot_out, "Output directory (default: next to records.json)");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return execute(run_opts, false);
        if (*sweep) return execute(sweep_opts, true);
        fs::path path = records_path;
        if (fs::is_directory(path)) path /= "records.json";
        const fs::path out = plot_out.empty() ? path.parent_path() : fs::path(plot_out);
        for (const auto& f : qrn::emit_plotdata(qrn::load_records(path), out)) fmt::print("wrote {}\n", f.string());
        return 0;
    } catch (const std::exception& ex) {
        fmt::print(stderr, "error: {}\n", ex.what());
        return 2;
    }
}
