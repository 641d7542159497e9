#include "qrn/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace qrn {

namespace fs = std::filesystem;
using nlohmann::json;

#ifndef QRN_VERSION
#define QRN_VERSION "0.0.0"
#endif

std::string_view to_string(Task t) {
    switch (t) {
        case Task::stmc: return "stmc";
        case Task::narma5: return "narma5";
        case Task::esn_baseline: return "esn-baseline";
    }
    return "stmc";
}

Task parse_task(std::string_view name) {
    if (name == "stmc") return Task::stmc;
    if (name == "narma5" || name == "narma") return Task::narma5;
    if (name == "esn-baseline" || name == "esn") return Task::esn_baseline;
    throw std::invalid_argument(fmt::format("unknown task '{}' (expected stmc, narma5 or esn-baseline)", name));
}

double stmc_random_guess() { return std::sqrt(1.0 / 12.0); }

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    return fmt::format("{:.17g}", v);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double to_double(std::string_view text) {
    const std::string s = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(fmt::format("'{}' is not a number", s));
    }
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(fmt::format("'{}' is not a finite number", s));
    return v;
}

long long to_integer(std::string_view text) {
    const std::string s = trim(text);
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument(fmt::format("'{}' is not an integer", s));
    }
    if (used != s.size()) throw std::invalid_argument(fmt::format("'{}' is not an integer", s));
    return v;
}

int to_int(std::string_view text) {
    const long long v = to_integer(text);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw std::invalid_argument(fmt::format("'{}' is out of integer range", trim(text)));
    }
    return static_cast<int>(v);
}

std::uint64_t to_seed(std::string_view text) {
    const long long v = to_integer(text);
    if (v < 0) throw std::invalid_argument("seed must be non-negative");
    return static_cast<std::uint64_t>(v);
}

bool to_bool(std::string_view text) {
    const std::string s = trim(text);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw std::invalid_argument(fmt::format("'{}' is not a boolean", s));
}

double round_grid(double v) { return std::round(v * 1e12) / 1e12; }

struct Entry {
    std::string key;
    std::string value;
    std::string where;
};

void apply_entry(ExperimentConfig& c, const Entry& e) {
    const std::string& k = e.key;
    const std::string& v = e.value;
    if (k == "experiment.task") c.task = parse_task(trim(v));
    else if (k == "experiment.seed") c.seed = to_seed(v);
    else if (k == "experiment.output_dir") c.output_dir = trim(v);
    else if (k == "experiment.jobs") c.jobs = to_int(v);
    else if (k == "experiment.emit_features") c.emit_features = to_bool(v);
    else if (k == "experiment.esn_seeds") c.esn_seeds = to_int(v);
    else if (k == "reservoir.n_qubits") c.reservoir.n_qubits = to_int(v);
    else if (k == "reservoir.gamma") c.reservoir.gamma = to_double(v);
    else if (k == "reservoir.n_repeats") c.reservoir.n_repeats = to_int(v);
    else if (k == "reservoir.context") c.reservoir.context = to_int(v);
    else if (k == "reservoir.n_shots") c.reservoir.n_shots = to_int(v);
    else if (k == "reservoir.backend") c.reservoir.backend = parse_backend(trim(v));
    else if (k == "stmc.n_total") c.stmc.n_total = to_int(v);
    else if (k == "stmc.n_train") c.stmc.n_train = to_int(v);
    else if (k == "stmc.n_test") c.stmc.n_test = to_int(v);
    else if (k == "stmc.n_washout") c.stmc.n_washout = to_int(v);
    else if (k == "stmc.delays") c.stmc.delays = parse_int_grid(v);
    else if (k == "stmc.alpha") c.stmc.alpha = to_double(v);
    else if (k == "narma.n_total") c.narma.n_total = to_int(v);
    else if (k == "narma.n_train") c.narma.n_train = to_int(v);
    else if (k == "narma.n_test") c.narma.n_test = to_int(v);
    else if (k == "narma.n_washout") c.narma.n_washout = to_int(v);
    else if (k == "narma.alpha") c.narma.alpha = to_double(v);
    else if (k == "esn.n_nodes") c.esn.n_nodes = to_int(v);
    else if (k == "esn.spectral_radius") c.esn.spectral_radius = to_double(v);
    else if (k == "esn.leak_rate") c.esn.leak_rate = to_double(v);
    else if (k == "sweep.gamma") c.sweep.gamma = parse_real_grid(v);
    else if (k == "sweep.n_qubits") c.sweep.n_qubits = parse_int_grid(v);
    else if (k == "sweep.n_repeats") c.sweep.n_repeats = parse_int_grid(v);
    else if (k == "sweep.n_nodes") c.sweep.n_nodes = parse_int_grid(v);
    else throw std::invalid_argument("unknown key");
}

// Seeds stay in sync across the task specs.
void sync_seeds(ExperimentConfig& c) {
    c.stmc.seed = c.seed;
    c.narma.seed = c.seed;
    c.esn.seed = c.seed;
    c.reservoir.seed = c.seed;
}

}  // namespace

std::vector<double> parse_real_grid(std::string_view text) {
    std::vector<double> out;
    const std::string s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty grid");
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3) throw std::invalid_argument("range grid must be start:stop:step");
        const double start = to_double(parts[0]), stop = to_double(parts[1]), step = to_double(parts[2]);
        if (!(step > 0.0) || stop < start) throw std::invalid_argument("range grid needs step > 0 and stop >= start");
        const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (long long i = 0; i < count; ++i) out.push_back(round_grid(start + static_cast<double>(i) * step));
    } else {
        for (const auto& item : split(s, ',')) out.push_back(round_grid(to_double(item)));
    }
    return out;
}

std::vector<int> parse_int_grid(std::string_view text) {
    std::vector<int> out;
    const std::string s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty grid");
    if (s.find(':') != std::string::npos) {
        const auto parts = split(s, ':');
        if (parts.size() != 3) throw std::invalid_argument("range grid must be start:stop:step");
        const int start = to_int(parts[0]), stop = to_int(parts[1]), step = to_int(parts[2]);
        if (step == 0 || (stop - start) / step < 0) throw std::invalid_argument("range grid step does not reach stop");
        for (int v = start; step > 0 ? v <= stop : v >= stop; v += step) out.push_back(v);
    } else {
        for (const auto& item : split(s, ',')) out.push_back(to_int(item));
    }
    return out;
}

ExperimentConfig default_config(Task task) {
    ExperimentConfig c;
    c.task = task;
    c.seed = 42;
    if (task == Task::stmc) {
        c.reservoir.n_qubits = 16;
        c.reservoir.gamma = 0.55;
        c.reservoir.n_repeats = 1;
        c.reservoir.context = 1;
        c.reservoir.n_shots = 30000;
    } else {
        c.reservoir.n_qubits = 12;
        c.reservoir.gamma = 0.75;
        c.reservoir.n_repeats = 3;
        c.reservoir.context = 5;
        c.reservoir.n_shots = 60000;
    }
    c.reservoir.backend = Backend::exact;
    sync_seeds(c);
    return c;
}

void ExperimentConfig::validate() const {
    reservoir.validate();
    if (task == Task::stmc) stmc.validate();
    else narma.validate();
    if (task == Task::esn_baseline) esn.validate();
    if (jobs < 1) throw std::invalid_argument("experiment.jobs must be >= 1");
    if (esn_seeds < 1) throw std::invalid_argument("experiment.esn_seeds must be >= 1");
    for (double g : sweep.gamma) {
        if (!(g > 0.0 && g <= 1.0)) throw std::invalid_argument(fmt::format("sweep.gamma: {} outside (0, 1]", g));
    }
    for (int n : sweep.n_qubits) {
        if (n < 2 || n % 2 != 0 || n > 20) throw std::invalid_argument(fmt::format("sweep.n_qubits: {} must be even in [2, 20]", n));
    }
    for (int r : sweep.n_repeats) {
        if (r < 1) throw std::invalid_argument(fmt::format("sweep.n_repeats: {} must be >= 1", r));
    }
    for (int n : sweep.n_nodes) {
        if (n < 1) throw std::invalid_argument(fmt::format("sweep.n_nodes: {} must be >= 1", n));
    }
    if (task == Task::esn_baseline && (!sweep.gamma.empty() || !sweep.n_repeats.empty() || !sweep.n_qubits.empty())) {
        throw std::invalid_argument("sweep: the esn-baseline task only sweeps n_nodes");
    }
    if (task != Task::esn_baseline && !sweep.n_nodes.empty()) {
        throw std::invalid_argument("sweep.n_nodes only applies to the esn-baseline task");
    }
}

ExperimentConfig parse_config_text(std::string_view text, const std::vector<Override>& overrides) {
    std::vector<Entry> entries;
    std::string section;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find_first_of("#;");
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty()) continue;
        const std::string where = fmt::format("line {}", line_no);
        if (body.front() == '[') {
            if (body.back() != ']') throw std::invalid_argument(fmt::format("{}: malformed section header", where));
            section = trim(body.substr(1, body.size() - 2));
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw std::invalid_argument(fmt::format("{}: expected key = value", where));
        if (section.empty()) throw std::invalid_argument(fmt::format("{}: key outside of a [section]", where));
        entries.push_back({section + "." + trim(body.substr(0, eq)), trim(body.substr(eq + 1)), where});
    }
    for (const auto& [key, value] : overrides) entries.push_back({key, value, "override"});

    Task task = Task::stmc;
    for (const auto& e : entries) {
        if (e.key == "experiment.task") {
            try {
                task = parse_task(trim(e.value));
            } catch (const std::exception& ex) {
                throw std::invalid_argument(fmt::format("{} ({}): {}", e.key, e.where, ex.what()));
            }
        }
    }
    ExperimentConfig cfg = default_config(task);
    for (const auto& e : entries) {
        try {
            apply_entry(cfg, e);
        } catch (const std::exception& ex) {
            throw std::invalid_argument(fmt::format("{} ({}): {}", e.key, e.where, ex.what()));
        }
    }
    sync_seeds(cfg);
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config(const fs::path& path, const std::vector<Override>& overrides) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(fmt::format("cannot read config file '{}'", path.string()));
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), overrides);
}

// ---------------------------------------------------------------------------
// JSON

json to_json(const ExperimentConfig& c) {
    json j;
    j["task"] = std::string(to_string(c.task));
    j["seed"] = c.seed;
    j["reservoir"] = to_json(c.reservoir);
    j["stmc"] = {{"n_total", c.stmc.n_total}, {"n_train", c.stmc.n_train},
                 {"n_test", c.stmc.n_test},   {"n_washout", c.stmc.n_washout},
                 {"delays", c.stmc.delays},   {"alpha", c.stmc.alpha}};
    j["narma"] = {{"n_total", c.narma.n_total}, {"n_train", c.narma.n_train},
                  {"n_test", c.narma.n_test},   {"n_washout", c.narma.n_washout},
                  {"alpha", c.narma.alpha}};
    j["esn"] = {{"n_nodes", c.esn.n_nodes},
                {"spectral_radius", c.esn.spectral_radius},
                {"leak_rate", c.esn.leak_rate}};
    j["esn_seeds"] = c.esn_seeds;
    j["sweep"] = {{"gamma", c.sweep.gamma}, {"n_qubits", c.sweep.n_qubits},
                  {"n_repeats", c.sweep.n_repeats}, {"n_nodes", c.sweep.n_nodes}};
    j["output_dir"] = c.output_dir;
    j["jobs"] = c.jobs;
    j["emit_features"] = c.emit_features;
    return j;
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c = default_config(parse_task(j.at("task").get<std::string>()));
    c.seed = j.at("seed").get<std::uint64_t>();
    const json& r = j.at("reservoir");
    c.reservoir.n_qubits = r.at("n_qubits").get<int>();
    c.reservoir.gamma = r.at("gamma").get<double>();
    c.reservoir.n_repeats = r.at("n_repeats").get<int>();
    c.reservoir.context = r.at("context").get<int>();
    c.reservoir.n_shots = r.at("n_shots").get<int>();
    c.reservoir.backend = parse_backend(r.at("backend").get<std::string>());
    const json& s = j.at("stmc");
    c.stmc.n_total = s.at("n_total").get<int>();
    c.stmc.n_train = s.at("n_train").get<int>();
    c.stmc.n_test = s.at("n_test").get<int>();
    c.stmc.n_washout = s.at("n_washout").get<int>();
    c.stmc.delays = s.at("delays").get<std::vector<int>>();
    c.stmc.alpha = s.at("alpha").get<double>();
    const json& n = j.at("narma");
    c.narma.n_total = n.at("n_total").get<int>();
    c.narma.n_train = n.at("n_train").get<int>();
    c.narma.n_test = n.at("n_test").get<int>();
    c.narma.n_washout = n.at("n_washout").get<int>();
    c.narma.alpha = n.at("alpha").get<double>();
    const json& e = j.at("esn");
    c.esn.n_nodes = e.at("n_nodes").get<int>();
    c.esn.spectral_radius = e.at("spectral_radius").get<double>();
    c.esn.leak_rate = e.at("leak_rate").get<double>();
    c.esn_seeds = j.at("esn_seeds").get<int>();
    const json& g = j.at("sweep");
    c.sweep.gamma = g.at("gamma").get<std::vector<double>>();
    c.sweep.n_qubits = g.at("n_qubits").get<std::vector<int>>();
    c.sweep.n_repeats = g.at("n_repeats").get<std::vector<int>>();
    c.sweep.n_nodes = g.at("n_nodes").get<std::vector<int>>();
    c.output_dir = j.at("output_dir").get<std::string>();
    c.jobs = j.at("jobs").get<int>();
    c.emit_features = j.at("emit_features").get<bool>();
    sync_seeds(c);
    // The reservoir seed of a point is the derived shot seed; keep it.
    c.reservoir.seed = r.at("seed").get<std::uint64_t>();
    return c;
}

std::string config_hash(const ExperimentConfig& cfg) {
    json j = to_json(cfg);
    // Presentation-only fields do not change results.
    j.erase("output_dir");
    j.erase("jobs");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

json to_json(const ResultRecord& r) {
    return {{"point", r.point_index},       {"seed", r.seed},
            {"version", r.version},         {"wall_time_s", r.wall_time_s},
            {"config", to_json(r.config)},  {"metrics", r.metrics},
            {"error", r.error}};
}

ResultRecord record_from_json(const json& j) {
    ResultRecord r;
    r.point_index = j.at("point").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.version = j.at("version").get<std::string>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    r.config = config_from_json(j.at("config"));
    r.metrics = j.at("metrics");
    r.error = j.at("error").get<std::string>();
    return r;
}

// ---------------------------------------------------------------------------
// Execution

std::vector<ExperimentConfig> enumerate_points(const ExperimentConfig& cfg) {
    std::vector<ExperimentConfig> points;
    auto base = cfg;
    base.sweep = {};
    if (cfg.task == Task::esn_baseline) {
        const std::vector<int> nodes = cfg.sweep.n_nodes.empty() ? std::vector<int>{cfg.esn.n_nodes} : cfg.sweep.n_nodes;
        for (int n : nodes) {
            auto p = base;
            p.esn.n_nodes = n;
            points.push_back(std::move(p));
        }
        return points;
    }
    const auto qubits = cfg.sweep.n_qubits.empty() ? std::vector<int>{cfg.reservoir.n_qubits} : cfg.sweep.n_qubits;
    const auto repeats = cfg.sweep.n_repeats.empty() ? std::vector<int>{cfg.reservoir.n_repeats} : cfg.sweep.n_repeats;
    const auto gammas = cfg.sweep.gamma.empty() ? std::vector<double>{cfg.reservoir.gamma} : cfg.sweep.gamma;
    for (int nq : qubits) {
        for (int rep : repeats) {
            for (double g : gammas) {
                auto p = base;
                p.reservoir.n_qubits = nq;
                p.reservoir.n_repeats = rep;
                p.reservoir.gamma = g;
                points.push_back(std::move(p));
            }
        }
    }
    return points;
}

namespace {

json optional_real(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

json run_metrics(const ExperimentConfig& p, const fs::path* feature_dir, int index) {
    const auto emit = [&](const FeatureMatrix& f) {
        if (!feature_dir) return;
        std::ofstream csv(*feature_dir / fmt::format("features_{:04d}.csv", index));
        write_feature_csv(csv, f);
        std::ofstream js(*feature_dir / fmt::format("features_{:04d}.json", index));
        js << features_to_json(f, p.reservoir).dump(1) << '\n';
    };
    if (p.task == Task::stmc) {
        const auto u = gen_uniform(stream_seed(p.stmc.seed, Stream::data),
                                   static_cast<std::size_t>(p.stmc.n_total), 0.0, 1.0);
        const auto w = init_weights(stream_seed(p.seed, Stream::weights), p.reservoir.context, p.reservoir.n_mem());
        const FeatureMatrix f = run_reservoir(u, w, p.reservoir);
        emit(f);
        const StmcResult res = evaluate_stmc(p.stmc, f, u);
        json delays = json::array();
        for (const auto& d : res.per_delay) {
            delays.push_back({{"tau", d.tau}, {"r2", optional_real(d.metrics.r2)}, {"rmse", d.metrics.rmse},
                              {"n_train", d.n_train}, {"n_test", d.n_test}});
        }
        return {{"mean_rmse_short", std::isnan(res.mean_rmse_short) ? json(nullptr) : json(res.mean_rmse_short)},
                {"random_guess", stmc_random_guess()},
                {"per_delay", std::move(delays)}};
    }
    if (p.task == Task::narma5) {
        const NarmaSeries data = narma_dataset(p.narma);
        const auto w = init_weights(stream_seed(p.seed, Stream::weights), p.reservoir.context, p.reservoir.n_mem());
        const FeatureMatrix f = run_reservoir(data.input, w, p.reservoir);
        emit(f);
        const NarmaResult res = evaluate_narma(p.narma, f.rows, data.target);
        return {{"rmse", res.metrics.rmse}, {"r2", optional_real(res.metrics.r2)},
                {"random_guess", res.random_guess}};
    }
    const DistributionSummary s = run_esn_narma(p.narma, p.esn, p.esn_seeds);
    const NarmaSeries data = narma_dataset(p.narma);
    const Eigen::Map<const Eigen::VectorXd> y(data.target.data() + p.narma.n_train, p.narma.n_test);
    return {{"n_nodes", p.esn.n_nodes}, {"min", s.min},       {"q1", s.q1},
            {"median", s.median},       {"q3", s.q3},         {"max", s.max},
            {"values", s.values},       {"random_guess", random_guess_floor(y)}};
}

ResultRecord execute_point(const ExperimentConfig& point, int point_index, const fs::path* feature_dir) {
    ResultRecord r;
    r.point_index = point_index;
    r.config = point;
    r.config.reservoir.seed = derive_seed(point.seed, static_cast<std::uint64_t>(point_index));
    r.seed = point.seed;
    r.version = QRN_VERSION;
    const auto start = std::chrono::steady_clock::now();
    try {
        r.metrics = run_metrics(r.config, feature_dir, point_index);
    } catch (const std::exception& ex) {
        r.metrics = json::object();
        r.error = ex.what();
    }
    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace

ResultRecord run_point(const ExperimentConfig& point, int point_index) {
    return execute_point(point, point_index, nullptr);
}

fs::path resolve_output_dir(const ExperimentConfig& cfg) {
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    const char* root = std::getenv("QRN_OUTPUT_ROOT");
    const fs::path base = root && *root ? fs::path(root) : fs::path("results");
    return base / fmt::format("{}-{}", to_string(cfg.task), config_hash(cfg).substr(0, 8));
}

std::vector<ResultRecord> run_sweep(const ExperimentConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    const auto points = enumerate_points(cfg);
    fs::create_directories(out_dir);
    const fs::path staging = out_dir / "staging";
    fs::create_directories(staging);
    const fs::path* feature_dir = cfg.emit_features ? &out_dir : nullptr;

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            const ResultRecord r = execute_point(points[i], static_cast<int>(i), feature_dir);
            std::ofstream os(staging / fmt::format("point_{:06d}.json", i));
            os << to_json(r).dump() << '\n';
        }
    };
    const int n_workers = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(points.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<ResultRecord> records;
    records.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::ifstream is(staging / fmt::format("point_{:06d}.json", i));
        records.push_back(record_from_json(json::parse(is)));
    }
    fs::remove_all(staging);

    json all = json::array();
    for (const auto& r : records) all.push_back(to_json(r));
    std::ofstream(out_dir / "records.json") << all.dump(1) << '\n';
    {
        std::ofstream csv(out_dir / "results.csv");
        write_results_csv(csv, records);
    }
    const auto plots = emit_plotdata(records, out_dir);

    std::ofstream manifest(out_dir / "MANIFEST");
    manifest << "version " << QRN_VERSION << '\n'
             << "task " << to_string(cfg.task) << '\n'
             << "config_hash " << config_hash(cfg) << '\n'
             << "points " << records.size() << '\n'
             << "file records.json\n"
             << "file results.csv\n";
    for (const auto& p : plots) manifest << "file " << p.filename().string() << '\n';
    std::ofstream(out_dir / "config.json") << to_json(cfg).dump(1) << '\n';
    return records;
}

// ---------------------------------------------------------------------------
// Output files

namespace {

std::string cell(const json& v) {
    if (v.is_null()) return "";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    return format_real(v.get<double>());
}

std::string point_prefix(const ResultRecord& r) {
    const auto& c = r.config;
    return fmt::format("{},{},{},{},{},{},{},{}", r.point_index, to_string(c.task), c.reservoir.n_qubits,
                       c.reservoir.n_repeats, format_real(c.reservoir.gamma), c.reservoir.context,
                       to_string(c.reservoir.backend), c.esn.n_nodes);
}

}  // namespace

void write_results_csv(std::ostream& os, const std::vector<ResultRecord>& records) {
    os << "point,task,n_qubits,n_repeats,gamma,context,backend,n_nodes,metric,tau,value\n";
    for (const auto& r : records) {
        const std::string prefix = point_prefix(r);
        if (!r.error.empty()) {
            os << prefix << ",error,,\n";
            continue;
        }
        const json& m = r.metrics;
        switch (r.config.task) {
            case Task::stmc:
                for (const auto& d : m.at("per_delay")) {
                    os << prefix << ",r2," << d.at("tau").get<int>() << ',' << cell(d.at("r2")) << '\n';
                    os << prefix << ",rmse," << d.at("tau").get<int>() << ',' << cell(d.at("rmse")) << '\n';
                }
                os << prefix << ",mean_rmse_short,," << cell(m.at("mean_rmse_short")) << '\n';
                break;
            case Task::narma5:
                os << prefix << ",rmse,," << cell(m.at("rmse")) << '\n';
                os << prefix << ",r2,," << cell(m.at("r2")) << '\n';
                os << prefix << ",random_guess,," << cell(m.at("random_guess")) << '\n';
                break;
            case Task::esn_baseline:
                for (const char* key : {"min", "q1", "median", "q3", "max", "random_guess"}) {
                    os << prefix << ',' << key << ",," << cell(m.at(key)) << '\n';
                }
                break;
        }
    }
}

std::vector<fs::path> emit_plotdata(const std::vector<ResultRecord>& records, const fs::path& out_dir) {
    if (records.empty()) throw std::invalid_argument("emit_plotdata: no records");
    fs::create_directories(out_dir);
    std::vector<const ResultRecord*> stmc, narma, esn;
    for (const auto& r : records) {
        if (!r.error.empty()) continue;
        if (r.config.task == Task::stmc) stmc.push_back(&r);
        else if (r.config.task == Task::narma5) narma.push_back(&r);
        else esn.push_back(&r);
    }
    std::vector<fs::path> written;
    auto open = [&](const char* name) {
        written.push_back(out_dir / name);
        return std::ofstream(written.back());
    };
    auto key = [](const ResultRecord* r) {
        return fmt::format("{},{},{}", r->config.reservoir.n_qubits, r->config.reservoir.n_repeats,
                           format_real(r->config.reservoir.gamma));
    };
    if (!stmc.empty()) {
        auto tau_csv = open("stmc_r2_vs_tau.csv");
        tau_csv << "point,n_qubits,n_repeats,gamma,tau,r2,rmse\n";
        auto gamma_csv = open("stmc_rmse_vs_gamma.csv");
        gamma_csv << "point,n_qubits,n_repeats,gamma,mean_rmse_short,random_guess\n";
        for (const auto* r : stmc) {
            for (const auto& d : r->metrics.at("per_delay")) {
                tau_csv << r->point_index << ',' << key(r) << ',' << d.at("tau").get<int>() << ','
                        << cell(d.at("r2")) << ',' << cell(d.at("rmse")) << '\n';
            }
            gamma_csv << r->point_index << ',' << key(r) << ',' << cell(r->metrics.at("mean_rmse_short")) << ','
                      << format_real(stmc_random_guess()) << '\n';
        }
    }
    // Best QRN NARMA RMSE per memory register size, for the ESN comparison.
    std::map<int, double> best_qrn;
    if (!narma.empty()) {
        auto csv = open("narma_rmse_vs_gamma.csv");
        csv << "point,n_qubits,n_repeats,gamma,rmse,r2,random_guess\n";
        for (const auto* r : narma) {
            const double e = r->metrics.at("rmse").get<double>();
            csv << r->point_index << ',' << key(r) << ',' << format_real(e) << ',' << cell(r->metrics.at("r2"))
                << ',' << cell(r->metrics.at("random_guess")) << '\n';
            const int n_mem = r->config.reservoir.n_mem();
            const auto it = best_qrn.find(n_mem);
            if (it == best_qrn.end() || e < it->second) best_qrn[n_mem] = e;
        }
    }
    if (!esn.empty()) {
        auto csv = open("qrn_vs_esn.csv");
        csv << "point,n_nodes,min,q1,median,q3,max,random_guess,qrn_best_rmse\n";
        for (const auto* r : esn) {
            const json& m = r->metrics;
            const int n = m.at("n_nodes").get<int>();
            const auto it = best_qrn.find(n);
            csv << r->point_index << ',' << n << ',' << cell(m.at("min")) << ',' << cell(m.at("q1")) << ','
                << cell(m.at("median")) << ',' << cell(m.at("q3")) << ',' << cell(m.at("max")) << ','
                << cell(m.at("random_guess")) << ',' << (it == best_qrn.end() ? "" : format_real(it->second))
                << '\n';
        }
    }
    return written;
}

std::vector<ResultRecord> load_records(const fs::path& records_json) {
    std::ifstream is(records_json);
    if (!is) throw std::invalid_argument(fmt::format("cannot read '{}'", records_json.string()));
    std::vector<ResultRecord> out;
    for (const auto& j : json::parse(is)) out.push_back(record_from_json(j));
    return out;
}

}  // namespace qrn
