#include "qrn/qcore.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qrn {

namespace {

void require_finite(double theta, const char* what) {
    if (!std::isfinite(theta)) {
        throw std::invalid_argument(std::string(what) + ": angle must be finite");
    }
}

void require_gamma(double gamma) {
    if (!std::isfinite(gamma) || gamma <= 0.0 || gamma > 1.0) {
        throw std::invalid_argument("partial-SWAP strength gamma must lie in (0, 1], got " +
                                    std::to_string(gamma));
    }
}

Eigen::Index register_dim(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 30) {
        throw std::invalid_argument("register size must be in [1, 30] qubits, got " +
                                    std::to_string(n_qubits));
    }
    return Eigen::Index{1} << n_qubits;
}

// Half-angle cosine/sine of πγ/2 written so that γ = 1 gives (0, 1) exactly.
std::pair<double, double> half_angle(double gamma) {
    const double reduced = std::numbers::pi * (1.0 - gamma) / 2.0;
    return {std::sin(reduced), std::cos(reduced)};
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_unitary(const ComplexMatrix& u, double tol) {
    if (u.rows() != u.cols()) return false;
    const ComplexMatrix id = ComplexMatrix::Identity(u.rows(), u.cols());
    return max_abs(u.adjoint() * u - id) <= tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

ComplexMatrix rx(double theta) {
    require_finite(theta, "rx");
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    ComplexMatrix m(2, 2);
    m << complex(c, 0.0), complex(0.0, -s),
         complex(0.0, -s), complex(c, 0.0);
    return m;
}

ComplexMatrix ry(double theta) {
    require_finite(theta, "ry");
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    ComplexMatrix m(2, 2);
    m << c, -s,
         s, c;
    return m;
}

ComplexMatrix crz(double theta) {
    require_finite(theta, "crz");
    ComplexMatrix m = ComplexMatrix::Identity(4, 4);
    m(2, 2) = std::polar(1.0, -theta / 2.0);
    m(3, 3) = std::polar(1.0, theta / 2.0);
    return m;
}

ComplexMatrix swap_gate() {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = 1.0;
    m(1, 2) = 1.0;
    m(2, 1) = 1.0;
    m(3, 3) = 1.0;
    return m;
}

PartialSwapCoefficients partial_swap_coefficients(double gamma) {
    require_gamma(gamma);
    const auto [c, s] = half_angle(gamma);
    // e^{iφ} = c + i s with φ = πγ/2.
    const complex phase(c, s);
    return {phase * c, complex(0.0, -1.0) * phase * s};
}

ComplexMatrix partial_swap_unitary(double gamma) {
    const auto [a, b] = partial_swap_coefficients(gamma);
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = a;
    m(1, 2) = b;
    m(2, 1) = b;
    m(2, 2) = a;
    m(3, 3) = 1.0;
    return m;
}

KrausPair kraus_pair(double gamma) {
    const auto [a, b] = partial_swap_coefficients(gamma);
    const double s = half_angle(gamma).second;
    KrausPair k;
    k.k0 = ComplexMatrix::Zero(2, 2);
    k.k1 = ComplexMatrix::Zero(2, 2);
    k.k0(0, 0) = 1.0;
    k.k0(1, 1) = a;
    k.k1(0, 1) = b;
    k.gamma = gamma;
    k.p = s * s;
    return k;
}

// ---------------------------------------------------------------------------
// DensityMatrix / StateVector

DensityMatrix::DensityMatrix(int n_qubits)
    : n_qubits_(n_qubits),
      mat_(ComplexMatrix::Zero(register_dim(n_qubits), register_dim(n_qubits))) {
    mat_(0, 0) = 1.0;
}

DensityMatrix::DensityMatrix(int n_qubits, ComplexMatrix mat)
    : n_qubits_(n_qubits), mat_(std::move(mat)) {
    const Eigen::Index d = register_dim(n_qubits);
    if (mat_.rows() != d || mat_.cols() != d) {
        throw std::invalid_argument("density matrix dimension does not match 2^n_qubits");
    }
    if (!mat_.allFinite()) {
        throw std::invalid_argument("density matrix has non-finite entries");
    }
    if (hermiticity_error() > 1e-12) {
        throw std::invalid_argument("density matrix is not Hermitian");
    }
    if (std::abs(trace() - complex(1.0, 0.0)) > kStateTol) {
        throw std::invalid_argument("density matrix trace differs from 1");
    }
    if (min_eigenvalue() < -kStateTol) {
        throw std::invalid_argument("density matrix is not positive semidefinite");
    }
}

DensityMatrix DensityMatrix::from_pure(const ComplexVector& psi) {
    const Eigen::Index d = psi.size();
    int n = 0;
    while ((Eigen::Index{1} << n) < d) ++n;
    if ((Eigen::Index{1} << n) != d || n == 0) {
        throw std::invalid_argument("state vector length must be a power of two");
    }
    const ComplexVector v = psi / psi.norm();
    return DensityMatrix(n, v * v.adjoint());
}

double DensityMatrix::hermiticity_error() const {
    return max_abs(mat_ - mat_.adjoint());
}

double DensityMatrix::min_eigenvalue() const {
    const Eigen::MatrixXcd herm = (mat_ + mat_.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

void DensityMatrix::rehermitize(double trace_tol) {
    mat_ = ((mat_ + mat_.adjoint()) / 2.0).eval();
    const double tr = mat_.trace().real();
    if (std::abs(tr - 1.0) > trace_tol) {
        mat_ /= tr;
    }
}

StateVector::StateVector(int n_qubits)
    : n_qubits_(n_qubits), amps_(ComplexVector::Zero(register_dim(n_qubits))) {
    amps_(0) = 1.0;
}

StateVector::StateVector(int n_qubits, ComplexVector amps)
    : n_qubits_(n_qubits), amps_(std::move(amps)) {
    if (amps_.size() != register_dim(n_qubits)) {
        throw std::invalid_argument("state vector length does not match 2^n_qubits");
    }
    if (std::abs(amps_.norm() - 1.0) > kStateTol) {
        throw std::invalid_argument("state vector is not normalized");
    }
}

// ---------------------------------------------------------------------------
// Gate application

DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u,
                            std::span<const int> targets) {
    const int n = rho.n_qubits();
    const std::size_t k = targets.size();
    if (k == 0 || u.rows() != (Eigen::Index{1} << k) || u.cols() != u.rows()) {
        throw std::invalid_argument("apply_unitary: gate dimension must be 2^|targets|");
    }
    Eigen::Index target_mask = 0;
    for (int t : targets) {
        if (t < 0 || t >= n) {
            throw std::invalid_argument("apply_unitary: target qubit out of range");
        }
        const Eigen::Index bit = Eigen::Index{1} << t;
        if (target_mask & bit) {
            throw std::invalid_argument("apply_unitary: duplicate target qubit");
        }
        target_mask |= bit;
    }
    if (!is_unitary(u)) {
        throw std::invalid_argument("apply_unitary: gate is not unitary");
    }

    const Eigen::Index local = u.rows();
    std::vector<Eigen::Index> offset(static_cast<std::size_t>(local), 0);
    for (Eigen::Index l = 0; l < local; ++l) {
        for (std::size_t i = 0; i < k; ++i) {
            if (l & (Eigen::Index{1} << (k - 1 - i))) {
                offset[static_cast<std::size_t>(l)] |= Eigen::Index{1} << targets[i];
            }
        }
    }

    ComplexMatrix m = rho.mat();
    const Eigen::Index d = m.rows();
    std::vector<complex> in(static_cast<std::size_t>(local));
    // Left multiplication: mixes rows within each target block.
    for (Eigen::Index base = 0; base < d; ++base) {
        if (base & target_mask) continue;
        for (Eigen::Index c = 0; c < d; ++c) {
            for (Eigen::Index l = 0; l < local; ++l) in[l] = m(base + offset[l], c);
            for (Eigen::Index l = 0; l < local; ++l) {
                complex acc = 0.0;
                for (Eigen::Index j = 0; j < local; ++j) acc += u(l, j) * in[j];
                m(base + offset[l], c) = acc;
            }
        }
    }
    // Right multiplication by U†: mixes columns.
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index base = 0; base < d; ++base) {
            if (base & target_mask) continue;
            for (Eigen::Index l = 0; l < local; ++l) in[l] = m(r, base + offset[l]);
            for (Eigen::Index l = 0; l < local; ++l) {
                complex acc = 0.0;
                for (Eigen::Index j = 0; j < local; ++j) acc += in[j] * std::conj(u(l, j));
                m(r, base + offset[l]) = acc;
            }
        }
    }
    DensityMatrix out(n);
    out.mutable_mat() = std::move(m);
    return out;
}

void apply_1q_inplace(ComplexMatrix& rho, const ComplexMatrix& gate, int qubit) {
    const Eigen::Index d = rho.rows();
    const Eigen::Index mask = Eigen::Index{1} << qubit;
    const complex g00 = gate(0, 0), g01 = gate(0, 1), g10 = gate(1, 0), g11 = gate(1, 1);
    for (Eigen::Index r = 0; r < d; ++r) {
        if (r & mask) continue;
        auto row0 = rho.row(r);
        auto row1 = rho.row(r | mask);
        for (Eigen::Index c = 0; c < d; ++c) {
            const complex a = row0(c), b = row1(c);
            row0(c) = g00 * a + g01 * b;
            row1(c) = g10 * a + g11 * b;
        }
    }
    const complex h00 = std::conj(g00), h01 = std::conj(g01);
    const complex h10 = std::conj(g10), h11 = std::conj(g11);
    for (Eigen::Index r = 0; r < d; ++r) {
        complex* row = rho.row(r).data();
        for (Eigen::Index c = 0; c < d; ++c) {
            if (c & mask) continue;
            const complex a = row[c], b = row[c | mask];
            row[c] = a * h00 + b * h01;
            row[c | mask] = a * h10 + b * h11;
        }
    }
}

void apply_1q_inplace(ComplexVector& psi, const ComplexMatrix& gate, int qubit) {
    const Eigen::Index d = psi.size();
    const Eigen::Index mask = Eigen::Index{1} << qubit;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (i & mask) continue;
        const complex a = psi(i), b = psi(i | mask);
        psi(i) = gate(0, 0) * a + gate(0, 1) * b;
        psi(i | mask) = gate(1, 0) * a + gate(1, 1) * b;
    }
}

void apply_diagonal_inplace(ComplexMatrix& rho, const ComplexVector& phases) {
    const Eigen::Index d = rho.rows();
    for (Eigen::Index r = 0; r < d; ++r) {
        const complex pr = phases(r);
        complex* row = rho.row(r).data();
        for (Eigen::Index c = 0; c < d; ++c) row[c] *= pr * std::conj(phases(c));
    }
}

void apply_diagonal_inplace(ComplexVector& psi, const ComplexVector& phases) {
    psi.array() *= phases.array();
}

void damping_channel_inplace(ComplexMatrix& rho, const KrausPair& kraus) {
    const Eigen::Index d = rho.rows();
    const complex a = kraus.k0(1, 1);
    const complex a_conj = std::conj(a);
    const double p = kraus.p;
    const double keep = std::norm(a);
    for (Eigen::Index mask = 1; mask < d; mask <<= 1) {
        for (Eigen::Index r = 0; r < d; ++r) {
            if (r & mask) continue;
            complex* row0 = rho.row(r).data();
            complex* row1 = rho.row(r | mask).data();
            for (Eigen::Index c = 0; c < d; ++c) {
                if (c & mask) continue;
                const complex r11 = row1[c | mask];
                row0[c] += p * r11;
                row0[c | mask] *= a_conj;
                row1[c] *= a;
                row1[c | mask] = keep * r11;
            }
        }
    }
}

DensityMatrix damping_channel(const DensityMatrix& rho, double gamma) {
    const KrausPair kraus = kraus_pair(gamma);
    DensityMatrix out = rho;
    damping_channel_inplace(out.mutable_mat(), kraus);
    return out;
}

RealVector outcome_distribution_from_populations(RealVector populations,
                                                 double damping_p) {
    const Eigen::Index d = populations.size();
    const double keep = 1.0 - damping_p;
    // Each readout bit sees the effect diag(1, 1-p) for outcome 0 and
    // diag(0, p) for outcome 1 on its memory partner.
    for (Eigen::Index mask = 1; mask < d; mask <<= 1) {
        for (Eigen::Index i = 0; i < d; ++i) {
            if (i & mask) continue;
            const double excited = populations(i | mask);
            populations(i) += keep * excited;
            populations(i | mask) = damping_p * excited;
        }
    }
    return populations;
}

RealVector outcome_distribution(const DensityMatrix& rho, double gamma) {
    const KrausPair kraus = kraus_pair(gamma);
    RealVector pops = rho.mat().diagonal().real();
    return outcome_distribution_from_populations(std::move(pops), kraus.p);
}

double purity(const DensityMatrix& rho) {
    // Tr[ρ²] = Σ |ρ_ij|² for Hermitian ρ.
    return rho.mat().squaredNorm();
}

std::uint64_t trajectory_step_inplace(ComplexVector& psi, const KrausPair& kraus,
                                      Rng& rng) {
    constexpr double kDegenerate = 1e-15;
    const Eigen::Index d = psi.size();
    const complex a = kraus.k0(1, 1);
    const complex b = kraus.k1(0, 1);
    std::uint64_t bits = 0;
    int qubit = 0;
    for (Eigen::Index mask = 1; mask < d; mask <<= 1, ++qubit) {
        double excited = 0.0;
        for (Eigen::Index i = 0; i < d; ++i) {
            if (i & mask) excited += std::norm(psi(i));
        }
        const double total = psi.squaredNorm();
        const double p1 = kraus.p * excited / total;
        bool one = uniform01(rng) < p1;
        if (p1 < kDegenerate) one = false;
        if (1.0 - p1 < kDegenerate) one = true;
        for (Eigen::Index i = 0; i < d; ++i) {
            if (i & mask) continue;
            if (one) {
                psi(i) = b * psi(i | mask);
                psi(i | mask) = 0.0;
            } else {
                psi(i | mask) *= a;
            }
        }
        psi /= psi.norm();
        if (one) bits |= std::uint64_t{1} << qubit;
    }
    return bits;
}

TrajectoryOutcome trajectory_step(const StateVector& psi, double gamma, Rng& rng) {
    const KrausPair kraus = kraus_pair(gamma);
    ComplexVector amps = psi.amps();
    const std::uint64_t bits = trajectory_step_inplace(amps, kraus, rng);
    return {StateVector(psi.n_qubits(), std::move(amps)), bits};
}

}  // namespace qrn
