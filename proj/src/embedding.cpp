#include "qrn/embedding.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qrn {

EmbeddingWeights init_weights(std::uint64_t seed, int context, int n_mem) {
    if (context < 1 || n_mem < 1) {
        throw std::invalid_argument("init_weights: context and n_mem must be >= 1");
    }
    Rng rng(seed);
    auto draw = [&rng] { return std::numbers::pi * (1.0 - uniform01(rng)); };

    EmbeddingWeights w;
    w.context = context;
    w.n_mem = n_mem;
    w.seed = seed;
    w.w_in.resize(static_cast<std::size_t>(context) * n_mem * 3);
    w.w_bias.resize(static_cast<std::size_t>(n_mem) * 3);
    w.w_hidden.resize(static_cast<std::size_t>(n_mem));
    for (double& v : w.w_in) v = draw();
    for (double& v : w.w_bias) v = draw();
    for (double& v : w.w_hidden) v = draw();
    return w;
}

std::vector<double> context_window(std::span<const double> u, std::size_t t, int context) {
    if (context < 1) throw std::invalid_argument("context_window: context must be >= 1");
    if (t >= u.size()) throw std::invalid_argument("context_window: t outside series");
    std::vector<double> x(static_cast<std::size_t>(context), 0.0);
    for (std::size_t i = 0; i < x.size() && i <= t; ++i) x[i] = u[t - i];
    return x;
}

AngleMatrix compute_angles(std::span<const double> x, const EmbeddingWeights& w) {
    if (x.size() != static_cast<std::size_t>(w.context)) {
        throw std::invalid_argument("compute_angles: context vector length != weight context");
    }
    AngleMatrix theta(w.n_mem, 3);
    for (int j = 0; j < w.n_mem; ++j) {
        for (int k = 0; k < 3; ++k) {
            double acc = w.bias(j, k);
            for (int i = 0; i < w.context; ++i) acc += x[static_cast<std::size_t>(i)] * w.in(i, j, k);
            theta(j, k) = acc;
        }
    }
    return theta;
}

ComplexMatrix euler_rotation(double a1, double a2, double a3) {
    return rx(a1) * ry(a2) * rx(a3);
}

std::vector<std::pair<int, int>> entangler_pairs(int n_qubits) {
    std::vector<std::pair<int, int>> pairs;
    if (n_qubits == 2) {
        pairs.emplace_back(0, 1);
    } else if (n_qubits > 2) {
        for (int j = 0; j < n_qubits; ++j) pairs.emplace_back(j, (j + 1) % n_qubits);
    }
    return pairs;
}

EmbeddingCircuit::EmbeddingCircuit(const AngleMatrix& theta, std::span<const double> w_hidden,
                                   int n_repeats)
    : n_qubits_(static_cast<int>(theta.rows())), n_repeats_(n_repeats) {
    if (n_repeats < 1) throw std::invalid_argument("embedding: n_repeats must be >= 1");
    if (n_qubits_ < 1 || w_hidden.size() != static_cast<std::size_t>(n_qubits_)) {
        throw std::invalid_argument("embedding: w_hidden length must equal the number of angle rows");
    }
    rotations_.reserve(static_cast<std::size_t>(n_qubits_));
    for (int j = 0; j < n_qubits_; ++j) {
        rotations_.push_back(euler_rotation(theta(j, 0), theta(j, 1), theta(j, 2)));
    }
    const Eigen::Index d = Eigen::Index{1} << n_qubits_;
    phases_ = ComplexVector::Ones(d);
    for (const auto& [control, target] : entangler_pairs(n_qubits_)) {
        const double angle = w_hidden[static_cast<std::size_t>(control)];
        if (!std::isfinite(angle)) throw std::invalid_argument("embedding: non-finite CRZ angle");
        const complex down = std::polar(1.0, -angle / 2.0);
        const complex up = std::polar(1.0, angle / 2.0);
        for (Eigen::Index i = 0; i < d; ++i) {
            if (!((i >> control) & 1)) continue;
            phases_(i) *= ((i >> target) & 1) ? up : down;
        }
    }
}

void EmbeddingCircuit::apply(ComplexMatrix& rho) const {
    for (int r = 0; r < n_repeats_; ++r) {
        for (int j = 0; j < n_qubits_; ++j) apply_1q_inplace(rho, rotations_[j], j);
        apply_diagonal_inplace(rho, phases_);
    }
}

void EmbeddingCircuit::apply(ComplexVector& psi) const {
    for (int r = 0; r < n_repeats_; ++r) {
        for (int j = 0; j < n_qubits_; ++j) apply_1q_inplace(psi, rotations_[j], j);
        apply_diagonal_inplace(psi, phases_);
    }
}

ComplexMatrix EmbeddingCircuit::unitary() const {
    const Eigen::Index d = Eigen::Index{1} << n_qubits_;
    ComplexMatrix u(d, d);
    for (Eigen::Index col = 0; col < d; ++col) {
        ComplexVector e = ComplexVector::Unit(d, col);
        apply(e);
        u.col(col) = e;
    }
    return u;
}

ComplexMatrix embedding_unitary(const AngleMatrix& theta, std::span<const double> w_hidden,
                                int n_repeats) {
    return EmbeddingCircuit(theta, w_hidden, n_repeats).unitary();
}

}  // namespace qrn
