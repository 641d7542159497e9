// Input embedding: random weights, context windows, per-step rotation angles
// and the reuploading embedding circuit on the memory register.
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qrn/qcore.hpp"

namespace qrn {

/// Random embedding parameters, all sampled uniformly from (0, π].
///   w_in     c × n_mem × 3, flattened as (i * n_mem + j) * 3 + k
///   w_bias   n_mem × 3
///   w_hidden n_mem, one CRZ angle per memory qubit
struct EmbeddingWeights {
    int context = 0;
    int n_mem = 0;
    std::uint64_t seed = 0;
    std::vector<double> w_in;
    std::vector<double> w_bias;
    std::vector<double> w_hidden;

    double in(int i, int j, int k) const {
        return w_in[(static_cast<std::size_t>(i) * n_mem + j) * 3 + k];
    }
    double bias(int j, int k) const { return w_bias[static_cast<std::size_t>(j) * 3 + k]; }
};

/// n_mem × 3 Euler angles, one row per memory qubit.
using AngleMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;

/// Deterministic in `seed`. Draw order: w_in (i, j, k), then w_bias (j, k),
/// then w_hidden (j). Each value is π·(1 − v) with v uniform in [0, 1).
EmbeddingWeights init_weights(std::uint64_t seed, int context, int n_mem);

/// (u_t, u_{t-1}, ..., u_{t-c+1}), zero where the index precedes the series.
/// `t` is 0-based.
std::vector<double> context_window(std::span<const double> u, std::size_t t, int context);

/// Θ_{j,k} = Σ_i x_i · w_in[i,j,k] + w_bias[j,k].
AngleMatrix compute_angles(std::span<const double> x, const EmbeddingWeights& w);

/// One embedding step as a gate list: per-qubit Euler rotations
/// Rx(Θ_j1)·Ry(Θ_j2)·Rx(Θ_j3) (rightmost acts first), then a ring of CRZ
/// gates, qubit j controlling (j+1) mod n_mem with angle w_hidden[j]. The
/// block is repeated n_repeats times.
class EmbeddingCircuit {
public:
    EmbeddingCircuit(const AngleMatrix& theta, std::span<const double> w_hidden,
                     int n_repeats);

    int n_qubits() const { return n_qubits_; }
    int n_repeats() const { return n_repeats_; }
    const std::vector<ComplexMatrix>& rotations() const { return rotations_; }
    /// Diagonal of the full CRZ layer.
    const ComplexVector& entangler_phases() const { return phases_; }

    void apply(ComplexMatrix& rho) const;
    void apply(ComplexVector& psi) const;
    ComplexMatrix unitary() const;

private:
    int n_qubits_;
    int n_repeats_;
    std::vector<ComplexMatrix> rotations_;
    ComplexVector phases_;
};

/// Per-qubit Euler rotation Rx(a1)·Ry(a2)·Rx(a3).
ComplexMatrix euler_rotation(double a1, double a2, double a3);

/// The CRZ ring as (control, target) pairs. Empty for one qubit, a single
/// pair for two qubits.
std::vector<std::pair<int, int>> entangler_pairs(int n_qubits);

/// Dense 2^n_mem unitary of the embedding circuit.
ComplexMatrix embedding_unitary(const AngleMatrix& theta, std::span<const double> w_hidden,
                                int n_repeats);

}  // namespace qrn
