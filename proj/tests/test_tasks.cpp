#include <doctest.h>

#include <deque>
#include <numeric>
#include <set>

#include "qrn/tasks.hpp"

using namespace qrn;

namespace {

// Raw NARMA-5 values y[0..n] kept in a sliding history window.
std::vector<double> narma_oracle(const std::vector<double>& z) {
    std::vector<double> y{0.0};
    std::deque<double> hist{0.0};
    for (std::size_t t = 0; t < z.size(); ++t) {
        const double sum = std::accumulate(hist.begin(), hist.end(), 0.0);
        const double zl = t < 4 ? 0.0 : z[t - 4];
        const double next = 0.3 * hist.front() + 0.05 * hist.front() * sum + 1.5 * zl * z[t] + 0.1;
        hist.push_front(next);
        if (hist.size() > 5) hist.pop_back();
        y.push_back(next);
    }
    return y;
}

FeatureMatrix constant_features(Eigen::Index t, Eigen::Index f) {
    return {Eigen::MatrixXd::Constant(t, f, 0.5)};
}

}  // namespace

TEST_CASE("gen_uniform") {
    const auto a = gen_uniform(7, 100000, 0.0, 1.0);
    CHECK(a == gen_uniform(7, 100000, 0.0, 1.0));
    CHECK(std::accumulate(a.begin(), a.end(), 0.0) / a.size() == doctest::Approx(0.5).epsilon(0.02));
    const auto b = gen_uniform(7, 1000, 0.0, 0.5);
    for (double v : b) {
        CHECK(v >= 0.0);
        CHECK(v < 0.5);
    }
    CHECK_THROWS_AS(gen_uniform(1, 3, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("narma5 recursion") {
    const auto raw = narma_oracle(std::vector<double>(10, 0.0));
    CHECK(raw[1] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(raw[2] == doctest::Approx(0.1305).epsilon(1e-15));

    const auto z = gen_uniform(3, 10000, 0.0, 0.5);
    const auto s = narma5(z);
    const auto ref = narma_oracle(z);
    REQUIRE(s.target.size() == z.size() - 5);
    REQUIRE(s.input.size() == z.size() - 5);
    for (std::size_t k = 0; k < s.target.size(); ++k) {
        CHECK(std::abs(s.target[k] - ref[k + 6]) <= 1e-15);
        CHECK(s.input[k] == z[k + 5]);
        CHECK(s.target[k] > 0.0);
        CHECK(s.target[k] < 1.0);
    }
    const auto zero = narma5(std::vector<double>(10, 0.0));
    CHECK(zero.target[0] == doctest::Approx(raw[6]).epsilon(1e-15));
    CHECK_THROWS_AS(narma5(std::vector<double>(5, 0.1)), std::invalid_argument);
}

TEST_CASE("stmc alignment bookkeeping") {
    const auto u = gen_uniform(1, 100, 0.0, 1.0);
    FeatureMatrix f{Eigen::MatrixXd(100, 2)};
    for (Eigen::Index t = 0; t < 100; ++t) f.rows.row(t) << double(t), 1.0;

    const auto a0 = stmc_align(f, u, 0, 15);
    CHECK(a0.rows.rows() == 85);
    CHECK(a0.time_index.front() == 15);
    const auto a10 = stmc_align(f, u, -10, 0);
    CHECK(a10.rows.rows() == 90);
    for (Eigen::Index k = 0; k < a10.rows.rows(); ++k) {
        const auto t = a10.time_index[static_cast<std::size_t>(k)];
        CHECK(a10.rows(k, 0) == double(t));
        CHECK(a10.source_index[static_cast<std::size_t>(k)] == t - 10);
        CHECK(a10.target(k) == u[static_cast<std::size_t>(t - 10)]);
    }
    const auto b0 = stmc_align(f, u, 0, 0);
    const auto b3 = stmc_align(f, u, -3, 0);
    for (Eigen::Index k = 0; k < b3.target.size(); ++k) CHECK(b3.target(k) == b0.target(k));
    CHECK_THROWS_AS(stmc_align(f, u, 1, 0), std::invalid_argument);

    const auto split = split_samples(a0, 50, 40);
    CHECK(split.train_rows.rows() == 50);
    CHECK(split.test_rows.rows() == 35);
    CHECK(split.train_rows(49, 0) < split.test_rows(0, 0));
    CHECK(split.train_rows(0, 0) == 15.0);
}

TEST_CASE("stmc evaluation") {
    StmcSpec spec;
    const auto u = gen_uniform(stream_seed(spec.seed, Stream::data), 1000, 0.0, 1.0);

    const auto floor = evaluate_stmc(spec, constant_features(1000, 4), u);
    for (const auto& d : floor.per_delay) {
        if (d.tau < 0) CHECK(d.metrics.rmse == doctest::Approx(std::sqrt(1.0 / 12.0)).epsilon(0.08));
        CHECK_FALSE(d.metrics.r2.has_value());
        CHECK(d.n_train == 700);
    }
    CHECK(floor.per_delay.back().n_test == 275);
    CHECK(floor.per_delay.front().n_test == 275);

    // Columns holding delayed copies of u reproduce every covered delay.
    FeatureMatrix memory{Eigen::MatrixXd::Zero(1000, 11)};
    for (Eigen::Index t = 0; t < 1000; ++t)
        for (Eigen::Index k = 0; k <= 10 && k <= t; ++k) memory.rows(t, k) = u[static_cast<std::size_t>(t - k)];
    const auto perfect = evaluate_stmc(spec, memory, u);
    for (const auto& d : perfect.per_delay) CHECK(*d.metrics.r2 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(perfect.mean_rmse_short < 1e-3);
}

TEST_CASE("narma evaluation") {
    NarmaSpec spec;
    const auto data = narma_dataset(spec);
    REQUIRE(data.target.size() == 1000u);
    const auto res = evaluate_narma(spec, Eigen::MatrixXd::Constant(1000, 3, 1.0), data.target);
    CHECK(res.metrics.rmse == doctest::Approx(res.random_guess).epsilon(0.1));
    CHECK(res.test_target.size() == 250);
    CHECK(res.test_target(0) == data.target[750]);

    // Split swap: fitting on the test slice gives different metrics.
    Eigen::MatrixXd feats(1000, 2);
    for (Eigen::Index t = 0; t < 1000; ++t) feats.row(t) << data.input[t], t ? data.input[t - 1] : 0.0;
    const auto forward = evaluate_narma(spec, feats, data.target);
    Eigen::MatrixXd rev = feats.colwise().reverse();
    std::vector<double> rtarget(data.target.rbegin(), data.target.rend());
    const auto backward = evaluate_narma(spec, rev, rtarget);
    CHECK(forward.metrics.rmse != backward.metrics.rmse);
    CHECK_THROWS_AS(evaluate_narma(spec, feats.topRows(900), std::vector<double>(900, 0.0)), std::invalid_argument);
}

TEST_CASE("esn dynamics") {
    EsnWeights deg{Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1)};
    const std::vector<double> u{0.1, -0.4, 0.9};
    const auto h = esn_states(u, deg, 1.0, Eigen::VectorXd::Zero(1));
    for (std::size_t t = 0; t < u.size(); ++t) CHECK(h(t, 0) == doctest::Approx(std::tanh(u[t])).epsilon(1e-15));

    for (int n = 1; n <= 8; ++n) {
        EsnConfig cfg;
        cfg.n_nodes = n;
        Rng rng(derive_seed(5, n));
        const auto w = esn_weights(cfg, rng);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(w.w.cast<std::complex<double>>());
        CHECK(ces.eigenvalues().cwiseAbs().maxCoeff() == doctest::Approx(0.9).epsilon(1e-9));
        CHECK(w.w_in.cwiseAbs().maxCoeff() < 1.0);
    }

    EsnConfig cfg;
    cfg.n_nodes = 6;
    Rng rng(8);
    const auto w = esn_weights(cfg, rng);
    const auto z = gen_uniform(2, 200, 0.0, 0.5);
    const auto a = esn_states(z, w, 0.5, Eigen::VectorXd::Zero(6));
    const auto b = esn_states(z, w, 0.5, Eigen::VectorXd::Constant(6, 0.9));
    CHECK((a.row(199) - b.row(199)).cwiseAbs().maxCoeff() < 1e-6);

    EsnConfig bad;
    bad.leak_rate = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("esn narma distribution") {
    NarmaSpec spec;
    const auto data = narma_dataset(spec);
    const Eigen::Map<const Eigen::VectorXd> y(data.target.data() + 750, 250);
    const double floor = random_guess_floor(y);
    EsnConfig cfg;
    cfg.n_nodes = 4;
    const auto s = run_esn_narma(spec, cfg, 200);
    CHECK(s.values.size() == 200u);
    CHECK(std::set<double>(s.values.begin(), s.values.end()).size() == 200u);
    for (double v : s.values) CHECK(v <= floor * 1.05);
    CHECK(s.min <= s.q1);
    CHECK(s.q1 <= s.median);
    CHECK(s.median <= s.q3);
    CHECK(s.q3 <= s.max);
}

TEST_CASE("summarize") {
    const auto s = summarize({4.0, 1.0, 3.0, 2.0, 5.0});
    CHECK(s.median == 3.0);
    CHECK(s.q1 == 2.0);
    CHECK(s.q3 == 4.0);
    CHECK(s.values.front() == 4.0);
    CHECK(summarize({1.0, 2.0}).median == 1.5);
}
