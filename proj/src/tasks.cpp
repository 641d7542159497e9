#include "qrn/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace qrn {

void StmcSpec::validate() const {
    if (n_train < 2 || n_test < 2 || n_washout < 0 || n_total < 1) {
        throw std::invalid_argument("stmc: n_train and n_test must be >= 2, n_washout >= 0");
    }
    if (n_washout + n_train + 2 > n_total) {
        throw std::invalid_argument(fmt::format(
            "stmc: n_washout + n_train leaves no test samples out of n_total = {}", n_total));
    }
    if (delays.empty()) throw std::invalid_argument("stmc.delays must not be empty");
    for (int tau : delays) {
        if (tau > 0) throw std::invalid_argument(fmt::format("stmc.delays must be <= 0, got {}", tau));
    }
    if (!std::isfinite(alpha) || alpha < 0.0) throw std::invalid_argument("stmc.alpha must be >= 0");
}

void NarmaSpec::validate() const {
    if (n_train < 2 || n_test < 2 || n_washout < 0) {
        throw std::invalid_argument("narma: n_train and n_test must be >= 2, n_washout >= 0");
    }
    if (n_train - n_washout < 2) throw std::invalid_argument("narma: washout consumes the training slice");
    if (n_train + n_test > n_total) {
        throw std::invalid_argument(fmt::format("narma: n_train + n_test = {} exceeds n_total = {}",
                                                n_train + n_test, n_total));
    }
    if (!std::isfinite(alpha) || alpha < 0.0) throw std::invalid_argument("narma.alpha must be >= 0");
}

void EsnConfig::validate() const {
    if (n_nodes < 1) throw std::invalid_argument("esn.n_nodes must be >= 1");
    if (!(spectral_radius > 0.0)) throw std::invalid_argument("esn.spectral_radius must be > 0");
    if (!(leak_rate > 0.0 && leak_rate <= 1.0)) throw std::invalid_argument("esn.leak_rate must lie in (0, 1]");
}

std::vector<double> gen_uniform(std::uint64_t seed, std::size_t n, double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("gen_uniform: need lo < hi");
    Rng rng(seed);
    std::vector<double> out(n);
    for (double& v : out) {
        v = lo + (hi - lo) * uniform01(rng);
        if (v >= hi) v = std::nextafter(hi, lo);
    }
    return out;
}

NarmaSeries narma5(std::span<const double> z) {
    if (z.size() < kNarmaStartupDiscard + 1) {
        throw std::invalid_argument("narma5: input series needs at least 6 samples");
    }
    const std::size_t n = z.size();
    std::vector<double> y(n + 1, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
        double window = 0.0;
        for (std::size_t i = 0; i < 5 && i <= t; ++i) window += y[t - i];
        const double lagged = t >= 4 ? z[t - 4] : 0.0;
        y[t + 1] = 0.3 * y[t] + 0.05 * y[t] * window + 1.5 * lagged * z[t] + 0.1;
    }
    NarmaSeries out;
    out.input.assign(z.begin() + kNarmaStartupDiscard, z.end());
    out.target.assign(y.begin() + kNarmaStartupDiscard + 1, y.end());
    return out;
}

AlignedSamples stmc_align(const FeatureMatrix& features, std::span<const double> u, int tau,
                          int n_washout) {
    if (tau > 0) throw std::invalid_argument("stmc_align: delay must be <= 0");
    if (static_cast<Eigen::Index>(u.size()) != features.t_len()) {
        throw std::invalid_argument("stmc_align: series length != feature rows");
    }
    const Eigen::Index t_len = features.t_len();
    const Eigen::Index first = -static_cast<Eigen::Index>(tau) + n_washout;
    AlignedSamples out;
    const Eigen::Index count = std::max<Eigen::Index>(0, t_len - first);
    out.rows.resize(count, features.f_dim());
    out.target.resize(count);
    out.time_index.reserve(static_cast<std::size_t>(count));
    out.source_index.reserve(static_cast<std::size_t>(count));
    for (Eigen::Index k = 0; k < count; ++k) {
        const Eigen::Index t = first + k;
        const Eigen::Index src = t + tau;
        out.rows.row(k) = features.rows.row(t);
        out.target(k) = u[static_cast<std::size_t>(src)];
        out.time_index.push_back(t);
        out.source_index.push_back(src);
    }
    return out;
}

Split split_samples(const AlignedSamples& samples, int n_train, int n_test) {
    const Eigen::Index available = samples.rows.rows();
    const Eigen::Index test = std::min<Eigen::Index>(n_test, available - n_train);
    if (available < n_train || test < 2) {
        throw std::invalid_argument(fmt::format(
            "insufficient aligned samples: {} available for {} train + test", available, n_train));
    }
    return {samples.rows.topRows(n_train), samples.target.head(n_train),
            samples.rows.middleRows(n_train, test), samples.target.segment(n_train, test)};
}

StmcResult evaluate_stmc(const StmcSpec& spec, const FeatureMatrix& features,
                         std::span<const double> u) {
    spec.validate();
    StmcResult result;
    std::vector<double> short_rmse(5, 0.0);
    std::vector<bool> have(5, false);
    for (int tau : spec.delays) {
        const AlignedSamples samples = stmc_align(features, u, tau, spec.n_washout);
        const Split split = split_samples(samples, spec.n_train, spec.n_test);
        const RidgeModel model = ridge_fit(split.train_rows, split.train_target, spec.alpha);
        const Eigen::VectorXd pred = predict(model, split.test_rows);
        DelayResult dr;
        dr.tau = tau;
        dr.metrics = score(pred, split.test_target);
        dr.n_train = static_cast<int>(split.train_rows.rows());
        dr.n_test = static_cast<int>(split.test_rows.rows());
        if (tau >= -4) {
            short_rmse[static_cast<std::size_t>(-tau)] = dr.metrics.rmse;
            have[static_cast<std::size_t>(-tau)] = true;
        }
        result.per_delay.push_back(dr);
    }
    if (std::all_of(have.begin(), have.end(), [](bool b) { return b; })) {
        result.mean_rmse_short = mean_rmse_short(short_rmse);
    } else {
        result.mean_rmse_short = std::nan("");
    }
    return result;
}

StmcResult run_stmc(const StmcSpec& spec, const ReservoirConfig& rc,
                    const EmbeddingWeights& weights) {
    spec.validate();
    const auto n = static_cast<std::size_t>(spec.n_total);
    const auto u = gen_uniform(stream_seed(spec.seed, Stream::data), n, 0.0, 1.0);
    return evaluate_stmc(spec, run_reservoir(u, weights, rc), u);
}

NarmaSeries narma_dataset(const NarmaSpec& spec) {
    const auto n = static_cast<std::size_t>(spec.n_total) + kNarmaStartupDiscard;
    const auto z = gen_uniform(stream_seed(spec.seed, Stream::data), n, 0.0, 0.5);
    return narma5(z);
}

NarmaResult evaluate_narma(const NarmaSpec& spec, const Eigen::MatrixXd& features,
                           std::span<const double> target) {
    spec.validate();
    if (features.rows() != static_cast<Eigen::Index>(target.size())) {
        throw std::invalid_argument("evaluate_narma: feature rows != target length");
    }
    if (features.rows() < spec.n_train + spec.n_test) {
        throw std::invalid_argument("evaluate_narma: insufficient samples for train + test");
    }
    const Eigen::Map<const Eigen::VectorXd> y(target.data(), static_cast<Eigen::Index>(target.size()));
    const Eigen::Index train_len = spec.n_train - spec.n_washout;
    const RidgeModel model = ridge_fit(features.middleRows(spec.n_washout, train_len),
                                       y.segment(spec.n_washout, train_len), spec.alpha);
    NarmaResult result;
    result.test_target = y.segment(spec.n_train, spec.n_test);
    result.test_prediction = predict(model, features.middleRows(spec.n_train, spec.n_test));
    result.metrics = score(result.test_prediction, result.test_target);
    result.random_guess = random_guess_floor(result.test_target);
    return result;
}

NarmaResult run_narma(const NarmaSpec& spec, const ReservoirConfig& rc,
                      const EmbeddingWeights& weights) {
    spec.validate();
    const NarmaSeries data = narma_dataset(spec);
    return evaluate_narma(spec, run_reservoir(data.input, weights, rc).rows, data.target);
}

double spectral_radius(const Eigen::MatrixXd& w) {
    if (w.rows() != w.cols() || w.rows() == 0) throw std::invalid_argument("spectral_radius: need a square matrix");
    Eigen::EigenSolver<Eigen::MatrixXd> solver(w, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

EsnWeights esn_weights(const EsnConfig& cfg, Rng& rng) {
    cfg.validate();
    const Eigen::Index n = cfg.n_nodes;
    auto draw = [&rng] { return 2.0 * uniform01(rng) - 1.0; };
    EsnWeights out;
    out.w.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) out.w(i, j) = draw();
    }
    out.w_in.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) out.w_in(i) = draw();
    const double radius = spectral_radius(out.w);
    if (radius <= 0.0) throw std::runtime_error("esn_weights: sampled recurrent matrix is nilpotent");
    out.w *= cfg.spectral_radius / radius;
    return out;
}

Eigen::MatrixXd esn_states(std::span<const double> u, const EsnWeights& weights,
                           double leak_rate, const Eigen::VectorXd& h0) {
    const Eigen::Index n = weights.w.rows();
    if (h0.size() != n || weights.w_in.size() != n) throw std::invalid_argument("esn_states: dimension mismatch");
    Eigen::MatrixXd states(static_cast<Eigen::Index>(u.size()), n);
    Eigen::VectorXd h = h0;
    for (std::size_t t = 0; t < u.size(); ++t) {
        const Eigen::VectorXd pre = weights.w * h + weights.w_in * u[t];
        h = (1.0 - leak_rate) * h + leak_rate * pre.array().tanh().matrix();
        states.row(static_cast<Eigen::Index>(t)) = h.transpose();
    }
    return states;
}

Eigen::MatrixXd esn_run(std::span<const double> u, const EsnConfig& cfg, Rng& rng) {
    const EsnWeights weights = esn_weights(cfg, rng);
    return esn_states(u, weights, cfg.leak_rate, Eigen::VectorXd::Zero(cfg.n_nodes));
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

DistributionSummary summarize(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("summarize: empty sample");
    DistributionSummary s;
    s.values = values;
    std::sort(values.begin(), values.end());
    s.min = values.front();
    s.max = values.back();
    s.q1 = quantile(values, 0.25);
    s.median = quantile(values, 0.5);
    s.q3 = quantile(values, 0.75);
    return s;
}

DistributionSummary run_esn_narma(const NarmaSpec& spec, const EsnConfig& cfg, int n_seeds) {
    if (n_seeds < 1) throw std::invalid_argument("run_esn_narma: n_seeds must be >= 1");
    spec.validate();
    cfg.validate();
    const NarmaSeries data = narma_dataset(spec);
    std::vector<double> rmses;
    rmses.reserve(static_cast<std::size_t>(n_seeds));
    for (int s = 0; s < n_seeds; ++s) {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(s)));
        const Eigen::MatrixXd states = esn_run(data.input, cfg, rng);
        rmses.push_back(evaluate_narma(spec, states, data.target).metrics.rmse);
    }
    return summarize(std::move(rmses));
}

}  // namespace qrn
