#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "qrn/reservoir.hpp"

using namespace qrn;

namespace {

std::vector<double> series(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> u(n);
    for (double& v : u) v = uniform01(rng);
    return u;
}

ReservoirConfig config(int n_qubits, double gamma, int repeats = 1, int context = 1) {
    ReservoirConfig c;
    c.n_qubits = n_qubits;
    c.gamma = gamma;
    c.n_repeats = repeats;
    c.context = context;
    return c;
}

EmbeddingWeights zero_weights(int context, int n_mem) {
    auto w = init_weights(1, context, n_mem);
    std::fill(w.w_in.begin(), w.w_in.end(), 0.0);
    std::fill(w.w_bias.begin(), w.w_bias.end(), 0.0);
    std::fill(w.w_hidden.begin(), w.w_hidden.end(), 0.0);
    return w;
}

double tv(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) { return 0.5 * (a - b).cwiseAbs().sum(); }

}  // namespace

TEST_CASE("config validation") {
    CHECK_NOTHROW(config(4, 0.5).validate());
    CHECK_THROWS_AS(config(3, 0.5).validate(), std::invalid_argument);
    CHECK_THROWS_AS(config(0, 0.5).validate(), std::invalid_argument);
    CHECK_THROWS_AS(config(4, 0.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(config(4, 1.01).validate(), std::invalid_argument);
    auto c = config(4, 0.5);
    c.backend = Backend::sampled;
    c.n_shots = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK(parse_backend("trajectory") == Backend::trajectory);
    CHECK_THROWS_AS(parse_backend("qpu"), std::invalid_argument);
}

TEST_CASE("step fixed point and full swap") {
    const auto cfg = config(4, 0.7);
    const auto w = zero_weights(1, 2);
    const auto r = step(DensityMatrix(2), std::vector<double>{0.3}, w, cfg);
    CHECK(r.distribution(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(max_abs(r.state.mat() - DensityMatrix(2).mat()) < 1e-15);

    // γ = 1 reads out and resets the memory whatever the embedding did.
    std::mt19937_64 gen(4);
    const auto wr = init_weights(9, 1, 2);
    const auto full = step(DensityMatrix(2, oracle::random_density(2, gen)), std::vector<double>{0.8}, wr,
                           config(4, 1.0));
    CHECK(std::abs(full.state.mat()(0, 0) - 1.0) < 1e-14);
    CHECK(purity(full.state) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("run_exact matches the joint-register oracle") {
    for (int n_qubits : {2, 4, 6}) {
        const int n = n_qubits / 2;
        for (int repeats : {1, 3}) {
            const auto w = init_weights(derive_seed(21, n_qubits + repeats), 2, n);
            const auto cfg = config(n_qubits, 0.35 + 0.1 * n, repeats, 2);
            const auto u = series(7, 10);
            const auto f = run_exact(u, w, cfg);
            oracle::Mat rho = oracle::Mat::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
            rho(0, 0) = 1;
            DensityMatrix state(n);
            for (std::size_t t = 0; t < u.size(); ++t) {
                const std::vector<double> x{u[t], t ? u[t - 1] : 0.0};
                const AngleMatrix theta = compute_angles(x, w);
                std::vector<std::array<double, 3>> rows;
                for (int j = 0; j < n; ++j) rows.push_back({theta(j, 0), theta(j, 1), theta(j, 2)});
                const oracle::Mat e = oracle::embedding(rows, w.w_hidden, repeats);
                const auto ref = oracle::joint_step(e * rho * e.adjoint(), cfg.gamma, n);
                CHECK((f.rows.row(static_cast<Eigen::Index>(t)).transpose() - ref.outcomes).cwiseAbs().maxCoeff() <=
                      1e-10);
                state = step(state, x, w, cfg).state;
                CHECK(max_abs(state.mat() - ComplexMatrix(ref.memory)) <= 1e-10);
                rho = ref.memory;
            }
        }
    }
}

TEST_CASE("rows are distributions and CPTP holds over long runs") {
    const auto cfg = config(8, 0.45, 2, 3);
    const auto w = init_weights(3, 3, 4);
    const auto u = series(5, 1000);
    DensityMatrix rho(4);
    for (std::size_t t = 0; t < u.size(); ++t) {
        std::vector<double> x{u[t], t >= 1 ? u[t - 1] : 0.0, t >= 2 ? u[t - 2] : 0.0};
        auto r = step(rho, x, w, cfg);
        CHECK(r.distribution.minCoeff() >= 0.0);
        CHECK(std::abs(r.distribution.sum() - 1.0) <= 1e-9);
        rho = std::move(r.state);
    }
    CHECK(std::abs(rho.trace() - 1.0) <= 1e-8);
    CHECK(rho.hermiticity_error() <= 1e-8);
    CHECK(rho.min_eigenvalue() >= -1e-8);
}

TEST_CASE("constant zero input gives identical rows") {
    const auto cfg = config(6, 0.5, 1, 2);
    const auto f = run_exact(std::vector<double>(30, 0.0), init_weights(4, 2, 3), cfg);
    // The repeated channel converges to a fixed point; rows settle accordingly.
    CHECK((f.rows.row(29) - f.rows.row(28)).cwiseAbs().maxCoeff() < 1e-8);
    const auto fz = run_exact(std::vector<double>(5, 0.0), zero_weights(2, 3), cfg);
    for (Eigen::Index t = 1; t < 5; ++t) CHECK((fz.rows.row(t) - fz.rows.row(0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single step equals outcome distribution of the embedded state") {
    const auto cfg = config(4, 0.6, 2);
    const auto w = init_weights(2, 1, 2);
    const auto f = run_exact(std::vector<double>{0.42}, w, cfg);
    const ComplexMatrix u = embedding_unitary(compute_angles(std::vector<double>{0.42}, w), w.w_hidden, 2);
    const ComplexMatrix rho = u * DensityMatrix(2).mat() * u.adjoint();
    const RealVector d = outcome_distribution(DensityMatrix(2, rho), 0.6);
    CHECK((f.rows.row(0).transpose() - d).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fading memory") {
    const double g = 0.5;
    const double p = std::pow(std::sin(std::numbers::pi * g / 2), 2);
    const int steps = static_cast<int>(std::ceil(std::log(1e-6) / std::log(1 - p)));
    const auto cfg = config(6, g, 1, 1);
    const auto w = init_weights(6, 1, 3);
    const auto u = series(8, steps + 5);
    std::mt19937_64 gen(10);
    const auto a = run_exact(u, w, cfg);
    const auto b = run_exact(u, w, cfg, DensityMatrix(3, oracle::random_density(3, gen)));
    CHECK((a.rows.row(steps) - b.rows.row(steps)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("sampled backend") {
    const auto w = init_weights(12, 1, 2);
    auto cfg = config(4, 0.55);
    cfg.backend = Backend::sampled;
    const auto u = series(13, 15);
    const auto exact = run_exact(u, w, cfg);

    cfg.n_shots = 1;
    Rng rng(1);
    const auto one = run_sampled(u, w, cfg, rng);
    for (Eigen::Index t = 0; t < one.t_len(); ++t) {
        CHECK(one.rows.row(t).sum() == 1.0);
        CHECK(one.rows.row(t).maxCoeff() == 1.0);
    }

    cfg.n_shots = 1000000;
    const auto many = run_sampled(u, w, cfg, rng);
    for (Eigen::Index t = 0; t < many.t_len(); ++t) {
        CHECK(tv(many.rows.row(t), exact.rows.row(t)) < 0.01);
        CHECK(many.rows.row(t).sum() == doctest::Approx(1.0).epsilon(1e-15));
    }

    // Mean of 100 reruns against 3σ binomial bounds.
    cfg.n_shots = 200;
    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(4);
    for (int r = 0; r < 100; ++r) mean += run_sampled(u, w, cfg, rng).rows.row(7);
    mean /= 100.0;
    for (Eigen::Index i = 0; i < 4; ++i) {
        const double q = exact.rows(7, i);
        CHECK(std::abs(mean(i) - q) <= 3 * std::sqrt(q * (1 - q) / (200.0 * 100.0)) + 1e-12);
    }

    Rng r1(5), r2(5);
    CHECK(run_sampled(u, w, cfg, r1).rows == run_sampled(u, w, cfg, r2).rows);
}

TEST_CASE("trajectory backend") {
    const auto u = series(17, 20);
    auto cfg = config(4, 0.5);
    cfg.backend = Backend::trajectory;

    cfg.n_shots = 50;
    Rng rng(3);
    const auto ground = run_trajectories(u, zero_weights(1, 2), cfg, rng);
    CHECK(ground.rows.col(0).minCoeff() == 1.0);

    const auto w = init_weights(19, 1, 2);
    cfg.n_shots = 50000;
    const auto traj = run_trajectories(u, w, cfg, rng);
    const auto exact = run_exact(u, w, cfg);
    for (Eigen::Index t = 0; t < traj.t_len(); ++t) CHECK(tv(traj.rows.row(t), exact.rows.row(t)) < 0.02);

    // γ = 1: every branch collapses to the ground state, which keeps purity 1.
    const KrausPair k = kraus_pair(1.0);
    const EmbeddingCircuit circuit(compute_angles(std::vector<double>{0.7}, w), w.w_hidden, 1);
    ComplexVector psi = ComplexVector::Unit(4, 0);
    for (int t = 0; t < 20; ++t) {
        circuit.apply(psi);
        trajectory_step_inplace(psi, k, rng);
        CHECK(std::abs(std::abs(psi(0)) - 1.0) < 1e-14);
    }
}

TEST_CASE("run_reservoir is deterministic") {
    const auto u = series(2, 12);
    const auto w = init_weights(2, 1, 2);
    auto cfg = config(4, 0.3);
    cfg.backend = Backend::sampled;
    cfg.n_shots = 500;
    CHECK(run_reservoir(u, w, cfg).rows == run_reservoir(u, w, cfg).rows);
    cfg.seed = 43;
    CHECK(run_reservoir(u, w, cfg).rows != run_reservoir(u, w, config(4, 0.3)).rows);
}

TEST_CASE("feature serialization") {
    CHECK(bitstring_label(1, 3) == "001");
    CHECK(bitstring_label(6, 3) == "110");
    FeatureMatrix f{Eigen::MatrixXd(2, 4)};
    f.rows << 0.1, 0.2, 0.3, 0.4, 1.0 / 3, 0.0, 0.0, 2.0 / 3;
    std::ostringstream os;
    write_feature_csv(os, f);
    CHECK(os.str() ==
          "t,00,01,10,11\n"
          "0,0.10000000000000001,0.20000000000000001,0.29999999999999999,0.40000000000000002\n"
          "1,0.33333333333333331,0,0,0.66666666666666663\n");
    const auto j = features_to_json(f, config(4, 0.5));
    CHECK(j["columns"][3] == "11");
    CHECK(j["config"]["gamma"] == 0.5);
    CHECK(j["rows"][1][3].get<double>() == 2.0 / 3);
}
