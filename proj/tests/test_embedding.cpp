#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "qrn/embedding.hpp"

using namespace qrn;

namespace {

std::vector<std::array<double, 3>> rows(const AngleMatrix& t) {
    std::vector<std::array<double, 3>> out;
    for (Eigen::Index j = 0; j < t.rows(); ++j) out.push_back({t(j, 0), t(j, 1), t(j, 2)});
    return out;
}

}  // namespace

TEST_CASE("init_weights") {
    const auto a = init_weights(42, 5, 6);
    const auto b = init_weights(42, 5, 6);
    CHECK(a.w_in == b.w_in);
    CHECK(a.w_bias == b.w_bias);
    CHECK(a.w_hidden == b.w_hidden);
    CHECK(a.w_in.size() == 5u * 6 * 3);
    CHECK(a.w_bias.size() == 6u * 3);
    CHECK(a.w_hidden.size() == 6u);
    const auto c = init_weights(43, 5, 6);
    CHECK(a.w_in != c.w_in);
    for (const auto* v : {&a.w_in, &a.w_bias, &a.w_hidden}) {
        for (double x : *v) {
            CHECK(x > 0.0);
            CHECK(x <= std::numbers::pi);
        }
    }
    // Draw order: w_in, then w_bias, then w_hidden from a single stream.
    Rng rng(42);
    for (double x : a.w_in) CHECK(x == std::numbers::pi * (1.0 - uniform01(rng)));
    for (double x : a.w_bias) CHECK(x == std::numbers::pi * (1.0 - uniform01(rng)));
    for (double x : a.w_hidden) CHECK(x == std::numbers::pi * (1.0 - uniform01(rng)));
    CHECK_THROWS_AS(init_weights(1, 0, 2), std::invalid_argument);
}

TEST_CASE("context_window") {
    const std::vector<double> u{0.5, 0.1, 0.2, 0.3, 0.4, 0.6, 0.7};
    CHECK(context_window(u, 3, 1) == std::vector<double>{0.3});
    CHECK(context_window(u, 0, 3) == std::vector<double>{0.5, 0.0, 0.0});
    CHECK(context_window(u, 5, 3) == std::vector<double>{0.6, 0.4, 0.3});
    CHECK_THROWS_AS(context_window(u, 7, 1), std::invalid_argument);
}

TEST_CASE("compute_angles") {
    const auto w = init_weights(3, 3, 4);
    const AngleMatrix zero = compute_angles(std::vector<double>(3, 0.0), w);
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 3; ++k) CHECK(zero(j, k) == w.bias(j, k));

    const auto w1 = init_weights(3, 1, 4);
    const AngleMatrix unit = compute_angles(std::vector<double>{1.0}, w1);
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 3; ++k) CHECK(unit(j, k) == w1.in(0, j, k) + w1.bias(j, k));

    const std::vector<double> x{0.3, -0.2, 0.9}, y{0.1, 0.5, -0.4};
    std::vector<double> xy(3);
    for (int i = 0; i < 3; ++i) xy[i] = x[i] + y[i];
    const AngleMatrix lhs = compute_angles(xy, w) + zero;
    const AngleMatrix rhs = compute_angles(x, w) + compute_angles(y, w);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
    CHECK_THROWS_AS(compute_angles(std::vector<double>{1.0}, w), std::invalid_argument);
}

TEST_CASE("embedding_unitary") {
    AngleMatrix zero = AngleMatrix::Zero(3, 3);
    CHECK(max_abs(embedding_unitary(zero, std::vector<double>(3, 0.0), 2) - ComplexMatrix::Identity(8, 8)) <
          1e-15);

    // One qubit: Rx(Θ1)·Ry(Θ2)·Rx(Θ3) with Rx(Θ3) acting first, no entangler.
    AngleMatrix one(1, 3);
    one << 0.4, 1.2, 2.5;
    const oracle::Mat expected = oracle::rx(0.4) * oracle::ry(1.2) * oracle::rx(2.5);
    CHECK(max_abs(embedding_unitary(one, std::vector<double>{0.9}, 1) - ComplexMatrix(expected)) < 1e-15);

    for (int n = 1; n <= 5; ++n) {
        const auto w = init_weights(derive_seed(8, n), 2, n);
        const AngleMatrix theta = compute_angles(std::vector<double>{0.37, 0.81}, w);
        for (int reps = 1; reps <= 3; ++reps) {
            const ComplexMatrix u = embedding_unitary(theta, w.w_hidden, reps);
            CHECK(is_unitary(u, 1e-12));
            const oracle::Mat ref = oracle::embedding(rows(theta), w.w_hidden, reps);
            CHECK(max_abs(u - ComplexMatrix(ref)) < 1e-12);
        }
    }
}

TEST_CASE("entangler topology") {
    CHECK(entangler_pairs(1).empty());
    CHECK(entangler_pairs(2) == std::vector<std::pair<int, int>>{{0, 1}});
    CHECK(entangler_pairs(4) == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

TEST_CASE("circuit apply matches dense unitary") {
    const auto w = init_weights(5, 1, 3);
    const EmbeddingCircuit circuit(compute_angles(std::vector<double>{0.6}, w), w.w_hidden, 2);
    std::mt19937_64 gen(2);
    const oracle::Mat rho = oracle::random_density(3, gen);
    ComplexMatrix m = rho;
    circuit.apply(m);
    const ComplexMatrix u = circuit.unitary();
    CHECK(max_abs(m - u * ComplexMatrix(rho) * u.adjoint()) < 1e-13);
    ComplexVector psi = ComplexVector::Zero(8);
    psi(3) = 1;
    circuit.apply(psi);
    CHECK((psi - u.col(3)).cwiseAbs().maxCoeff() < 1e-13);
}
