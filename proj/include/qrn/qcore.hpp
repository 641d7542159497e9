// Dense complex linear algebra, gates and the partial-SWAP channel.
//
// Qubit ordering: qubit q of an n-qubit register is bit q of the basis index
// (qubit 0 is the least significant bit). A k-qubit gate matrix acting on
// `targets` is written in the kron order of the list, i.e. targets[0] is the
// most significant bit of the gate's local index. A bitstring outcome index
// uses the same convention as the register: readout qubit j is bit j.
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qrn {

using complex = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Portable 64-bit Mersenne Twister; bit-exact across standard libraries.
using Rng = std::mt19937_64;

/// Uniform in [0, 1) from the top 53 bits of one draw. Unlike
/// std::uniform_real_distribution this is identical on every platform.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// splitmix64 finalizer; used to derive independent per-unit seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// One experiment seed feeds three disjoint generator streams so that
/// embedding weights, input series and shot noise are uncorrelated.
enum class Stream : std::uint64_t { weights = 0, data = 1, shots = 2 };
inline std::uint64_t stream_seed(std::uint64_t seed, Stream s) {
    return derive_seed(seed, static_cast<std::uint64_t>(s));
}

inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kStateTol = 1e-10;

double max_abs(const ComplexMatrix& m);
bool is_unitary(const ComplexMatrix& u, double tol = kUnitaryTol);

/// Kronecker product a ⊗ b (a is the most significant factor).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix rx(double theta);
ComplexMatrix ry(double theta);
/// Controlled-RZ with the control as the most significant local bit:
/// diag(1, 1, e^{-iθ/2}, e^{iθ/2}).
ComplexMatrix crz(double theta);
ComplexMatrix swap_gate();

/// Coefficients of X^γ = A·I + B·X.
struct PartialSwapCoefficients {
    complex a;
    complex b;
};
PartialSwapCoefficients partial_swap_coefficients(double gamma);

/// Two-qubit partial-SWAP on (memory, readout) in that kron order:
/// [[1,0,0,0],[0,A,B,0],[0,B,A,0],[0,0,0,1]].
ComplexMatrix partial_swap_unitary(double gamma);

/// Kraus pair of the partial-SWAP followed by a Z measurement and reset of a
/// readout qubit prepared in |0>. Outcome 0 gives k0 = diag(1, A), outcome 1
/// gives k1 = [[0, B], [0, 0]].
struct KrausPair {
    ComplexMatrix k0;
    ComplexMatrix k1;
    double gamma = 1.0;
    double p = 1.0;  // damping probability sin²(πγ/2)
};
KrausPair kraus_pair(double gamma);

class DensityMatrix {
public:
    /// |0...0><0...0| on n qubits.
    explicit DensityMatrix(int n_qubits);
    /// Validates Hermiticity, unit trace and positivity.
    DensityMatrix(int n_qubits, ComplexMatrix mat);

    static DensityMatrix from_pure(const ComplexVector& psi);

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return mat_.rows(); }
    const ComplexMatrix& mat() const { return mat_; }
    // Kernels write in place; callers are responsible for keeping the
    // matrix a valid state (CPTP maps do).
    ComplexMatrix& mutable_mat() { return mat_; }

    complex trace() const { return mat_.trace(); }
    double hermiticity_error() const;
    double min_eigenvalue() const;

    /// ρ ← (ρ+ρ†)/2, then rescale if |Tr ρ − 1| exceeds `trace_tol`.
    void rehermitize(double trace_tol = 1e-12);

private:
    int n_qubits_;
    ComplexMatrix mat_;
};

class StateVector {
public:
    explicit StateVector(int n_qubits);
    StateVector(int n_qubits, ComplexVector amps);

    int n_qubits() const { return n_qubits_; }
    const ComplexVector& amps() const { return amps_; }
    ComplexVector& mutable_amps() { return amps_; }

private:
    int n_qubits_;
    ComplexVector amps_;
};

/// ρ ↦ U ρ U† with U embedded on `targets`.
DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u,
                            std::span<const int> targets);

// In-place kernels used on the hot path.
void apply_1q_inplace(ComplexMatrix& rho, const ComplexMatrix& gate, int qubit);
void apply_1q_inplace(ComplexVector& psi, const ComplexMatrix& gate, int qubit);
/// ρ_ab ← d_a ρ_ab conj(d_b) for a diagonal unitary with entries `phases`.
void apply_diagonal_inplace(ComplexMatrix& rho, const ComplexVector& phases);
void apply_diagonal_inplace(ComplexVector& psi, const ComplexVector& phases);
/// Single-qubit Kraus channel ρ ↦ K0 ρ K0† + K1 ρ K1† on every qubit.
void damping_channel_inplace(ComplexMatrix& rho, const KrausPair& kraus);

/// Non-selective partial-SWAP + measure-and-reset on every memory qubit.
DensityMatrix damping_channel(const DensityMatrix& rho, double gamma);

/// Probability of each readout bitstring b, p(b) = Tr[K_b ρ K_b†].
RealVector outcome_distribution(const DensityMatrix& rho, double gamma);
/// Same, from the diagonal of ρ only (the Kraus effects are diagonal).
RealVector outcome_distribution_from_populations(RealVector populations,
                                                 double damping_p);

double purity(const DensityMatrix& rho);

struct TrajectoryOutcome {
    StateVector state;
    std::uint64_t bitstring;
};
/// Samples readout bitstring b with probability ||K_b ψ||² and returns the
/// collapsed, renormalized memory state.
TrajectoryOutcome trajectory_step(const StateVector& psi, double gamma,
                                  Rng& rng);
/// In-place variant; returns the sampled bitstring.
std::uint64_t trajectory_step_inplace(ComplexVector& psi,
                                      const KrausPair& kraus, Rng& rng);

}  // namespace qrn
