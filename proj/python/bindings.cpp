#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qrn/experiment.hpp"

namespace py = pybind11;

namespace {

qrn::ReservoirConfig reservoir_config(int n_qubits, double gamma, int n_repeats, int context, int n_shots,
                                      std::uint64_t seed, const std::string& backend) {
    qrn::ReservoirConfig c;
    c.n_qubits = n_qubits;
    c.gamma = gamma;
    c.n_repeats = n_repeats;
    c.context = context;
    c.n_shots = n_shots;
    c.seed = seed;
    c.backend = qrn::parse_backend(backend);
    c.validate();
    return c;
}

qrn::DensityMatrix density(const qrn::ComplexMatrix& rho) {
    int n = 0;
    while ((Eigen::Index{1} << n) < rho.rows()) ++n;
    return qrn::DensityMatrix(n, rho);
}

py::dict metrics_dict(const qrn::Metrics& m) {
    py::dict d;
    d["r2"] = m.r2 ? py::cast(*m.r2) : py::none();
    d["rmse"] = m.rmse;
    return d;
}

}  // namespace

PYBIND11_MODULE(_qrn, m) {
    m.doc() = "Quantum recurrent reservoir simulator";
    m.attr("__version__") = QRN_VERSION;

    m.def("rx", &qrn::rx, py::arg("theta"));
    m.def("ry", &qrn::ry, py::arg("theta"));
    m.def("crz", &qrn::crz, py::arg("theta"));
    m.def("partial_swap_unitary", &qrn::partial_swap_unitary, py::arg("gamma"));
    m.def(
        "kraus_pair",
        [](double gamma) {
            const auto k = qrn::kraus_pair(gamma);
            return py::make_tuple(k.k0, k.k1);
        },
        py::arg("gamma"), "(K0, K1) of the partial-SWAP measure-and-reset channel.");
    m.def(
        "damping_channel", [](const qrn::ComplexMatrix& rho, double gamma) {
            return qrn::damping_channel(density(rho), gamma).mat();
        },
        py::arg("rho"), py::arg("gamma"));
    m.def(
        "outcome_distribution",
        [](const qrn::ComplexMatrix& rho, double gamma) { return qrn::outcome_distribution(density(rho), gamma); },
        py::arg("rho"), py::arg("gamma"));
    m.def(
        "purity", [](const qrn::ComplexMatrix& rho) { return qrn::purity(density(rho)); }, py::arg("rho"));

    py::class_<qrn::EmbeddingWeights>(m, "EmbeddingWeights")
        .def_readonly("context", &qrn::EmbeddingWeights::context)
        .def_readonly("n_mem", &qrn::EmbeddingWeights::n_mem)
        .def_readonly("seed", &qrn::EmbeddingWeights::seed)
        .def_readonly("w_in", &qrn::EmbeddingWeights::w_in)
        .def_readonly("w_bias", &qrn::EmbeddingWeights::w_bias)
        .def_readonly("w_hidden", &qrn::EmbeddingWeights::w_hidden);
    m.def("init_weights", &qrn::init_weights, py::arg("seed"), py::arg("context"), py::arg("n_mem"));
    m.def(
        "embedding_unitary",
        [](const qrn::EmbeddingWeights& w, const std::vector<double>& x, int n_repeats) {
            return qrn::embedding_unitary(qrn::compute_angles(x, w), w.w_hidden, n_repeats);
        },
        py::arg("weights"), py::arg("x"), py::arg("n_repeats") = 1,
        "Dense embedding unitary for one context window x.");

    m.def(
        "run_reservoir",
        [](const std::vector<double>& u, const qrn::EmbeddingWeights& w, int n_qubits, double gamma,
           int n_repeats, int n_shots, std::uint64_t seed, const std::string& backend) {
            const auto c = reservoir_config(n_qubits, gamma, n_repeats, w.context, n_shots, seed, backend);
            py::gil_scoped_release release;
            return qrn::run_reservoir(u, w, c).rows;
        },
        py::arg("u"), py::arg("weights"), py::arg("n_qubits"), py::arg("gamma"), py::arg("n_repeats") = 1,
        py::arg("n_shots") = 30000, py::arg("seed") = 42, py::arg("backend") = "exact",
        "T x 2^(n_qubits/2) readout distributions.");
    m.def("bitstring_label", &qrn::bitstring_label, py::arg("index"), py::arg("n_bits"));

    m.def(
        "ridge_fit",
        [](const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double alpha) {
            const auto model = qrn::ridge_fit(a, y, alpha);
            return py::make_tuple(model.weights, model.intercept);
        },
        py::arg("a"), py::arg("y"), py::arg("alpha"), "(weights, intercept) of the ridge readout.");
    m.def(
        "predict",
        [](const Eigen::VectorXd& weights, double intercept, const Eigen::MatrixXd& a) {
            return qrn::predict({weights, intercept, 0.0}, a);
        },
        py::arg("weights"), py::arg("intercept"), py::arg("a"));
    m.def("r_squared", &qrn::r_squared, py::arg("pred"), py::arg("target"));
    m.def("rmse", &qrn::rmse, py::arg("pred"), py::arg("target"));

    m.def(
        "narma5",
        [](const std::vector<double>& z) {
            const auto s = qrn::narma5(z);
            return py::make_tuple(s.input, s.target);
        },
        py::arg("z"), "(input, target) with the start-up transient dropped.");

    m.def(
        "run_stmc",
        [](int n_qubits, double gamma, int n_repeats, std::uint64_t seed, const std::string& config) {
            auto cfg = qrn::parse_config_text(config, {{"experiment.task", "stmc"},
                                                       {"reservoir.n_qubits", std::to_string(n_qubits)},
                                                       {"reservoir.gamma", qrn::format_real(gamma)},
                                                       {"reservoir.n_repeats", std::to_string(n_repeats)},
                                                       {"experiment.seed", std::to_string(seed)}});
            const auto w = qrn::init_weights(qrn::stream_seed(seed, qrn::Stream::weights),
                                             cfg.reservoir.context, cfg.reservoir.n_mem());
            qrn::StmcResult res;
            {
                py::gil_scoped_release release;
                res = qrn::run_stmc(cfg.stmc, cfg.reservoir, w);
            }
            py::dict per_delay;
            for (const auto& d : res.per_delay) per_delay[py::int_(d.tau)] = metrics_dict(d.metrics);
            py::dict out;
            out["mean_rmse_short"] = res.mean_rmse_short;
            out["per_delay"] = per_delay;
            return out;
        },
        py::arg("n_qubits") = 16, py::arg("gamma") = 0.55, py::arg("n_repeats") = 1, py::arg("seed") = 42,
        py::arg("config") = "", "STMC experiment; `config` holds extra INI text.");
    m.def(
        "run_narma",
        [](int n_qubits, double gamma, int n_repeats, std::uint64_t seed, const std::string& config) {
            auto cfg = qrn::parse_config_text(config, {{"experiment.task", "narma5"},
                                                       {"reservoir.n_qubits", std::to_string(n_qubits)},
                                                       {"reservoir.gamma", qrn::format_real(gamma)},
                                                       {"reservoir.n_repeats", std::to_string(n_repeats)},
                                                       {"experiment.seed", std::to_string(seed)}});
            const auto w = qrn::init_weights(qrn::stream_seed(seed, qrn::Stream::weights),
                                             cfg.reservoir.context, cfg.reservoir.n_mem());
            qrn::NarmaResult res;
            {
                py::gil_scoped_release release;
                res = qrn::run_narma(cfg.narma, cfg.reservoir, w);
            }
            py::dict out = metrics_dict(res.metrics);
            out["random_guess"] = res.random_guess;
            out["prediction"] = res.test_prediction;
            out["target"] = res.test_target;
            return out;
        },
        py::arg("n_qubits") = 12, py::arg("gamma") = 0.75, py::arg("n_repeats") = 3, py::arg("seed") = 42,
        py::arg("config") = "", "NARMA-5 experiment; `config` holds extra INI text.");
}
