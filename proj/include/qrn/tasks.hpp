// Benchmarks: short-term memory capacity (STMC), NARMA-5 and a classical
// echo state network baseline.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrn/readout.hpp"
#include "qrn/reservoir.hpp"

namespace qrn {

struct StmcSpec {
    int n_total = 1000;
    int n_train = 700;
    int n_test = 275;
    int n_washout = 15;
    std::vector<int> delays{0, -1, -2, -3, -4, -5, -6, -7, -8, -9, -10};
    double alpha = 1e-5;
    std::uint64_t seed = 42;

    void validate() const;
};

struct NarmaSpec {
    int n_total = 1000;  // aligned (input, target) pairs after the startup discard
    int n_train = 750;
    int n_test = 250;
    int n_washout = 15;  // removed from the training slice only
    double alpha = 1e-4;
    std::uint64_t seed = 42;

    void validate() const;
};

struct EsnConfig {
    int n_nodes = 4;
    double spectral_radius = 0.9;
    double leak_rate = 0.5;
    std::uint64_t seed = 42;

    void validate() const;
};

/// n i.i.d. draws from U[lo, hi) via Rng(seed).
std::vector<double> gen_uniform(std::uint64_t seed, std::size_t n, double lo, double hi);

inline constexpr int kNarmaStartupDiscard = 5;

/// Inputs paired with their one-step-ahead NARMA-5 targets:
/// target[t] is ŷ_{t+1} computed from z up to input[t].
struct NarmaSeries {
    std::vector<double> input;
    std::vector<double> target;
};

/// ŷ_{t+1} = 0.3ŷ_t + 0.05ŷ_t Σ_{i=0}^{4} ŷ_{t−i} + 1.5 z_{t−4} z_t + 0.1 with
/// a zero history; the first five pairs are dropped.
NarmaSeries narma5(std::span<const double> z);

/// Aligned samples for one delay; `time_index[k]` is the feature row and
/// `source_index[k]` the series index of target[k].
struct AlignedSamples {
    Eigen::MatrixXd rows;
    Eigen::VectorXd target;
    std::vector<Eigen::Index> time_index;
    std::vector<Eigen::Index> source_index;
};

/// Pairs feature row t with u[t+τ], drops rows with t+τ < 0, then drops the
/// first `n_washout` aligned pairs.
AlignedSamples stmc_align(const FeatureMatrix& features, std::span<const double> u, int tau,
                          int n_washout);

/// Contiguous train/test split of aligned samples: the first n_train rows
/// train, the following (up to) n_test rows test.
struct Split {
    Eigen::MatrixXd train_rows;
    Eigen::VectorXd train_target;
    Eigen::MatrixXd test_rows;
    Eigen::VectorXd test_target;
};
Split split_samples(const AlignedSamples& samples, int n_train, int n_test);

struct DelayResult {
    int tau = 0;
    Metrics metrics;
    int n_train = 0;
    int n_test = 0;
};

struct StmcResult {
    std::vector<DelayResult> per_delay;
    double mean_rmse_short = 0.0;
};

/// STMC scoring for given features and input series.
StmcResult evaluate_stmc(const StmcSpec& spec, const FeatureMatrix& features,
                         std::span<const double> u);
/// Generates u ~ U(0,1), drives the reservoir and scores every delay.
StmcResult run_stmc(const StmcSpec& spec, const ReservoirConfig& rc,
                    const EmbeddingWeights& weights);

struct NarmaResult {
    Metrics metrics;
    double random_guess = 0.0;  // sqrt(Var(ŷ_test))
    Eigen::VectorXd test_prediction;
    Eigen::VectorXd test_target;
};

/// Inputs z ~ U(0, 0.5) of length n_total + 5, NARMA-5 targets.
NarmaSeries narma_dataset(const NarmaSpec& spec);

/// Washout is removed from the training slice; the last n_test rows test.
NarmaResult evaluate_narma(const NarmaSpec& spec, const Eigen::MatrixXd& features,
                           std::span<const double> target);
NarmaResult run_narma(const NarmaSpec& spec, const ReservoirConfig& rc,
                      const EmbeddingWeights& weights);

struct EsnWeights {
    Eigen::MatrixXd w;     // n_nodes × n_nodes, scaled to the requested spectral radius
    Eigen::VectorXd w_in;  // n_nodes
};

double spectral_radius(const Eigen::MatrixXd& w);

/// Dense W with U(−1,1) entries rescaled to cfg.spectral_radius, W_in U(−1,1).
EsnWeights esn_weights(const EsnConfig& cfg, Rng& rng);

/// h_t = (1−λ) h_{t−1} + λ tanh(W h_{t−1} + W_in u_t); returns T × n_nodes.
Eigen::MatrixXd esn_states(std::span<const double> u, const EsnWeights& weights,
                           double leak_rate, const Eigen::VectorXd& h0);
Eigen::MatrixXd esn_run(std::span<const double> u, const EsnConfig& cfg, Rng& rng);

struct DistributionSummary {
    std::vector<double> values;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};
DistributionSummary summarize(std::vector<double> values);

/// Seed s uses Rng(derive_seed(cfg.seed, s)); the NARMA data is fixed by spec.seed.
DistributionSummary run_esn_narma(const NarmaSpec& spec, const EsnConfig& cfg, int n_seeds);

}  // namespace qrn
