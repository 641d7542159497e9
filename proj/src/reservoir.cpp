#include "qrn/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

namespace qrn {

std::string_view to_string(Backend b) {
    switch (b) {
        case Backend::exact: return "exact";
        case Backend::sampled: return "sampled";
        case Backend::trajectory: return "trajectory";
    }
    return "exact";
}

Backend parse_backend(std::string_view name) {
    if (name == "exact") return Backend::exact;
    if (name == "sampled") return Backend::sampled;
    if (name == "trajectory") return Backend::trajectory;
    throw std::invalid_argument(fmt::format("unknown backend '{}' (expected exact, sampled or trajectory)", name));
}

void ReservoirConfig::validate() const {
    if (n_qubits < 2 || n_qubits % 2 != 0 || n_qubits > 20) {
        throw std::invalid_argument(fmt::format("reservoir.n_qubits must be even and in [2, 20], got {}", n_qubits));
    }
    if (!std::isfinite(gamma) || gamma <= 0.0 || gamma > 1.0) {
        throw std::invalid_argument(fmt::format("reservoir.gamma must lie in (0, 1], got {}", gamma));
    }
    if (n_repeats < 1) {
        throw std::invalid_argument(fmt::format("reservoir.n_repeats must be >= 1, got {}", n_repeats));
    }
    if (context < 1) {
        throw std::invalid_argument(fmt::format("reservoir.context must be >= 1, got {}", context));
    }
    if (backend != Backend::exact && n_shots < 1) {
        throw std::invalid_argument(fmt::format("reservoir.n_shots must be >= 1 for the {} backend", to_string(backend)));
    }
}

namespace {

void check_weights(const EmbeddingWeights& weights, const ReservoirConfig& cfg) {
    cfg.validate();
    if (weights.n_mem != cfg.n_mem() || weights.context != cfg.context) {
        throw std::invalid_argument("embedding weights do not match the reservoir config");
    }
}

EmbeddingCircuit circuit_at(std::span<const double> u, std::size_t t,
                            const EmbeddingWeights& weights, const ReservoirConfig& cfg) {
    const auto x = context_window(u, t, cfg.context);
    return EmbeddingCircuit(compute_angles(x, weights), weights.w_hidden, cfg.n_repeats);
}

// Embeds, reads the distribution, applies the channel; rho is updated in place.
RealVector advance(DensityMatrix& rho, const EmbeddingCircuit& circuit, const KrausPair& kraus) {
    ComplexMatrix& m = rho.mutable_mat();
    circuit.apply(m);
    RealVector dist = outcome_distribution_from_populations(m.diagonal().real(), kraus.p);
    damping_channel_inplace(m, kraus);
    rho.rehermitize();
    return dist;
}

}  // namespace

StepResult step(const DensityMatrix& rho, std::span<const double> u_context,
                const EmbeddingWeights& weights, const ReservoirConfig& cfg) {
    check_weights(weights, cfg);
    if (rho.n_qubits() != cfg.n_mem()) {
        throw std::invalid_argument("step: state size does not match the memory register");
    }
    const EmbeddingCircuit circuit(compute_angles(u_context, weights), weights.w_hidden,
                                   cfg.n_repeats);
    DensityMatrix next = rho;
    RealVector dist = advance(next, circuit, kraus_pair(cfg.gamma));
    return {std::move(next), std::move(dist)};
}

FeatureMatrix run_exact(std::span<const double> u, const EmbeddingWeights& weights,
                        const ReservoirConfig& cfg, DensityMatrix initial) {
    check_weights(weights, cfg);
    if (u.empty()) throw std::invalid_argument("run_exact: empty input series");
    if (initial.n_qubits() != cfg.n_mem()) {
        throw std::invalid_argument("run_exact: initial state size does not match the memory register");
    }
    const KrausPair kraus = kraus_pair(cfg.gamma);
    FeatureMatrix out{Eigen::MatrixXd(static_cast<Eigen::Index>(u.size()),
                                      Eigen::Index{1} << cfg.n_mem())};
    DensityMatrix rho = std::move(initial);
    for (std::size_t t = 0; t < u.size(); ++t) {
        out.rows.row(static_cast<Eigen::Index>(t)) =
            advance(rho, circuit_at(u, t, weights, cfg), kraus).transpose();
    }
    return out;
}

FeatureMatrix run_exact(std::span<const double> u, const EmbeddingWeights& weights,
                        const ReservoirConfig& cfg) {
    return run_exact(u, weights, cfg, DensityMatrix(cfg.n_mem()));
}

FeatureMatrix run_sampled(std::span<const double> u, const EmbeddingWeights& weights,
                          const ReservoirConfig& cfg, Rng& rng) {
    if (cfg.n_shots < 1) throw std::invalid_argument("run_sampled: n_shots must be >= 1");
    FeatureMatrix exact = run_exact(u, weights, cfg);
    const double shots = static_cast<double>(cfg.n_shots);
    for (Eigen::Index t = 0; t < exact.t_len(); ++t) {
        auto row = exact.rows.row(t);
        long long remaining = cfg.n_shots;
        double mass = 1.0;
        for (Eigen::Index i = 0; i < row.size(); ++i) {
            const double prob = std::max(row(i), 0.0);
            long long count = 0;
            if (i + 1 == row.size()) {
                count = remaining;
            } else if (remaining > 0 && mass > 0.0) {
                const double cond = std::clamp(prob / mass, 0.0, 1.0);
                count = std::binomial_distribution<long long>(remaining, cond)(rng);
            }
            mass -= prob;
            remaining -= count;
            row(i) = static_cast<double>(count) / shots;
        }
    }
    return exact;
}

FeatureMatrix run_trajectories(std::span<const double> u, const EmbeddingWeights& weights,
                               const ReservoirConfig& cfg, Rng& rng) {
    check_weights(weights, cfg);
    if (cfg.n_shots < 1) throw std::invalid_argument("run_trajectories: n_shots must be >= 1");
    if (u.empty()) throw std::invalid_argument("run_trajectories: empty input series");
    const KrausPair kraus = kraus_pair(cfg.gamma);
    std::vector<EmbeddingCircuit> circuits;
    circuits.reserve(u.size());
    for (std::size_t t = 0; t < u.size(); ++t) circuits.push_back(circuit_at(u, t, weights, cfg));

    const Eigen::Index dim = Eigen::Index{1} << cfg.n_mem();
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> counts =
        Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>::Zero(
            static_cast<Eigen::Index>(u.size()), dim);
    const std::uint64_t base = rng();
    for (int shot = 0; shot < cfg.n_shots; ++shot) {
        Rng shot_rng(derive_seed(base, static_cast<std::uint64_t>(shot)));
        ComplexVector psi = ComplexVector::Unit(dim, 0);
        for (std::size_t t = 0; t < circuits.size(); ++t) {
            circuits[t].apply(psi);
            const auto bits = trajectory_step_inplace(psi, kraus, shot_rng);
            ++counts(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(bits));
        }
    }
    return {counts.cast<double>() / static_cast<double>(cfg.n_shots)};
}

FeatureMatrix run_reservoir(std::span<const double> u, const EmbeddingWeights& weights,
                            const ReservoirConfig& cfg) {
    Rng rng(stream_seed(cfg.seed, Stream::shots));
    switch (cfg.backend) {
        case Backend::exact: return run_exact(u, weights, cfg);
        case Backend::sampled: return run_sampled(u, weights, cfg, rng);
        case Backend::trajectory: return run_trajectories(u, weights, cfg, rng);
    }
    return run_exact(u, weights, cfg);
}

std::string bitstring_label(Eigen::Index index, int n_bits) {
    std::string s(static_cast<std::size_t>(n_bits), '0');
    for (int q = 0; q < n_bits; ++q) {
        if ((index >> q) & 1) s[static_cast<std::size_t>(n_bits - 1 - q)] = '1';
    }
    return s;
}

void write_feature_csv(std::ostream& os, const FeatureMatrix& features) {
    int n_bits = 0;
    while ((Eigen::Index{1} << n_bits) < features.f_dim()) ++n_bits;
    os << "t";
    for (Eigen::Index i = 0; i < features.f_dim(); ++i) os << ',' << bitstring_label(i, n_bits);
    os << '\n';
    for (Eigen::Index t = 0; t < features.t_len(); ++t) {
        os << t;
        for (Eigen::Index i = 0; i < features.f_dim(); ++i) {
            os << ',' << fmt::format("{:.17g}", features.rows(t, i));
        }
        os << '\n';
    }
}

nlohmann::json to_json(const ReservoirConfig& cfg) {
    return {
        {"n_qubits", cfg.n_qubits},
        {"gamma", cfg.gamma},
        {"n_repeats", cfg.n_repeats},
        {"context", cfg.context},
        {"n_shots", cfg.n_shots},
        {"seed", cfg.seed},
        {"backend", std::string(to_string(cfg.backend))},
    };
}

nlohmann::json features_to_json(const FeatureMatrix& features, const ReservoirConfig& cfg) {
    int n_bits = 0;
    while ((Eigen::Index{1} << n_bits) < features.f_dim()) ++n_bits;
    nlohmann::json columns = nlohmann::json::array();
    for (Eigen::Index i = 0; i < features.f_dim(); ++i) columns.push_back(bitstring_label(i, n_bits));
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index t = 0; t < features.t_len(); ++t) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index i = 0; i < features.f_dim(); ++i) row.push_back(features.rows(t, i));
        rows.push_back(std::move(row));
    }
    return {{"config", to_json(cfg)}, {"columns", std::move(columns)}, {"rows", std::move(rows)}};
}

}  // namespace qrn
