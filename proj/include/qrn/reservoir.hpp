// Recurrent partial-SWAP reservoir: embedding, memory exchange and
// measure-and-reset, producing one readout distribution per time step.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "qrn/embedding.hpp"
#include "qrn/qcore.hpp"

namespace qrn {

enum class Backend { exact, sampled, trajectory };

std::string_view to_string(Backend b);
Backend parse_backend(std::string_view name);

struct ReservoirConfig {
    int n_qubits = 16;  // memory + readout
    double gamma = 0.5;
    int n_repeats = 1;
    int context = 1;
    int n_shots = 30000;  // ignored by the exact backend
    std::uint64_t seed = 42;
    Backend backend = Backend::exact;

    int n_mem() const { return n_qubits / 2; }
    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// T × 2^n_mem matrix of readout bitstring probabilities.
struct FeatureMatrix {
    Eigen::MatrixXd rows;

    Eigen::Index t_len() const { return rows.rows(); }
    Eigen::Index f_dim() const { return rows.cols(); }
};

struct StepResult {
    DensityMatrix state;       // memory state after the damping channel
    RealVector distribution;  // readout distribution of this step
};

/// One recurrent block: embed `u_context`, then partial-SWAP, measure and
/// reset the readout register.
StepResult step(const DensityMatrix& rho, std::span<const double> u_context,
                const EmbeddingWeights& weights, const ReservoirConfig& cfg);

/// Exact readout distributions, starting from |0...0>.
FeatureMatrix run_exact(std::span<const double> u, const EmbeddingWeights& weights,
                        const ReservoirConfig& cfg);
FeatureMatrix run_exact(std::span<const double> u, const EmbeddingWeights& weights,
                        const ReservoirConfig& cfg, DensityMatrix initial);

/// Multinomial(n_shots, exact row) / n_shots for every step.
FeatureMatrix run_sampled(std::span<const double> u, const EmbeddingWeights& weights,
                          const ReservoirConfig& cfg, Rng& rng);

/// n_shots independent pure-state trajectories with sampled collapse. Shot s
/// uses a private generator seeded with derive_seed(base, s), where base is
/// one draw from `rng`.
FeatureMatrix run_trajectories(std::span<const double> u, const EmbeddingWeights& weights,
                               const ReservoirConfig& cfg, Rng& rng);

/// Dispatches on cfg.backend; sampling backends draw from the shots stream
/// of cfg.seed.
FeatureMatrix run_reservoir(std::span<const double> u, const EmbeddingWeights& weights,
                            const ReservoirConfig& cfg);

/// Readout register bitstring for column `index`, qubit n_mem-1 first, so
/// lexicographic order of labels equals column order.
std::string bitstring_label(Eigen::Index index, int n_bits);

/// CSV with header "t,<bitstrings...>" and 17 significant digits.
void write_feature_csv(std::ostream& os, const FeatureMatrix& features);
nlohmann::json features_to_json(const FeatureMatrix& features, const ReservoirConfig& cfg);
nlohmann::json to_json(const ReservoirConfig& cfg);

}  // namespace qrn
