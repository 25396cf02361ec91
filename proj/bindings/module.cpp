#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ising/estimators.hpp"
#include "ising/experiments.hpp"
#include "ising/io.hpp"
#include "ising/sampler.hpp"
#include "ising/solver.hpp"
#include "ising/topology.hpp"

namespace py = pybind11;
using namespace ising;

namespace {

MethodSpec spec_from_token(const std::string& token) {
    return MethodSpec::defaults(method_from_token(token));
}

py::dict estimate_to_dict(const GraphEstimate& est) {
    py::dict out;
    out["method"] = method_token(est.method);
    out["w_hat"] = est.w_hat.weights();
    out["w_raw"] = est.w_raw.weights();
    if (is_l0_method(est.method)) {
        out["k"] = est.k;
    } else {
        out["lambda_by_node"] = est.lambda_by_node;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Structure learning for sparse binary Ising models";

    py::register_exception<SolveError>(m, "SolveError");

    // Topologies and model summaries. Matrices cross the boundary as dense
    // numpy arrays.
    m.def(
        "lattice_topology",
        [](int side, double coupling) { return lattice_topology(side, coupling).weights(); },
        py::arg("side"), py::arg("coupling"),
        "Four-connected torus with constant couplings, as a dense matrix.");
    m.def(
        "random_regular_topology",
        [](int p, int degree, double weight_low, double weight_high, std::uint64_t seed) {
            return random_regular_topology(p, degree, weight_low, weight_high, seed).weights();
        },
        py::arg("p"), py::arg("degree"), py::arg("weight_low"), py::arg("weight_high"),
        py::arg("seed"));
    m.def(
        "graph_stats",
        [](const Eigen::MatrixXd& w) {
            const GraphStats stats = graph_stats(ConnectivityMatrix(w));
            py::dict out;
            out["max_degree"] = stats.max_degree;
            out["min_edge_weight"] =
                stats.min_edge_weight ? py::cast(*stats.min_edge_weight) : py::none();
            out["width"] = stats.width;
            out["edges"] = stats.edge_set;
            return out;
        },
        py::arg("w"));

    // Samplers.
    m.def(
        "log_partition",
        [](const Eigen::MatrixXd& w) { return log_partition(ConnectivityMatrix(w)); },
        py::arg("w"));
    m.def(
        "exact_sample",
        [](const Eigen::MatrixXd& w, int n, std::uint64_t seed) {
            return exact_sample(ConnectivityMatrix(w), n, seed).data();
        },
        py::arg("w"), py::arg("n"), py::arg("seed"));
    m.def(
        "gibbs_sample",
        [](const Eigen::MatrixXd& w, int n, int sweeps, std::uint64_t seed) {
            return gibbs_sample(ConnectivityMatrix(w), n, sweeps, seed).data();
        },
        py::arg("w"), py::arg("n"), py::arg("sweeps"), py::arg("seed"));
    m.def("conditional_prob", &conditional_prob, py::arg("w_row"), py::arg("z_rest"));

    // Losses and solver building blocks.
    m.def(
        "eval_logistic",
        [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
            NodeProblem prob{0, X, y};
            const LossEval ev = eval_logistic(prob, w);
            return py::make_tuple(ev.value, ev.gradient);
        },
        py::arg("X"), py::arg("y"), py::arg("w"));
    m.def(
        "eval_ise",
        [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Eigen::VectorXd& w) {
            NodeProblem prob{0, X, y};
            const LossEval ev = eval_ise(prob, w);
            return py::make_tuple(ev.value, ev.gradient);
        },
        py::arg("X"), py::arg("y"), py::arg("w"));
    m.def("prox_l0l2", &prox_l0l2, py::arg("v"), py::arg("k"), py::arg("theta"),
          "Keep the k largest-magnitude entries, scaled into the L2 ball of radius theta.");
    m.def("project_l1_ball", &project_l1_ball, py::arg("v"), py::arg("radius"));

    // End-to-end estimation.
    m.def(
        "fit_graph",
        [](const Eigen::MatrixXd& train, py::object validation, const std::string& method,
           py::object threshold) {
            const SampleSet train_set{Eigen::MatrixXd(train)};
            std::optional<SampleSet> val_set;
            if (!validation.is_none()) {
                val_set = SampleSet(validation.cast<Eigen::MatrixXd>());
            }
            std::optional<double> tau;
            if (!threshold.is_none()) tau = threshold.cast<double>();
            const GraphEstimate est = fit_graph(train_set, val_set ? &*val_set : nullptr,
                                                spec_from_token(method), tau);
            return estimate_to_dict(est);
        },
        py::arg("train"), py::arg("validation") = py::none(), py::arg("method") = "l0l2-lr",
        py::arg("threshold") = py::none(),
        "Fit one method end to end; returns w_hat, w_raw and the chosen parameters.");

    // Experiment grid driven by a JSON config string; reports land in out_dir.
    m.def(
        "run_experiment",
        [](const std::string& config_json, const std::string& out_dir) {
            const ExperimentConfig config = experiment_config_from_json(config_json);
            const GridResult result = run_grid(config);
            emit_report(result.records, out_dir);
            py::list failures;
            for (const auto& f : result.failures) {
                failures.append(py::make_tuple(method_token(f.method), f.p, f.n, f.repetition,
                                               f.message));
            }
            return failures;
        },
        py::arg("config_json"), py::arg("out_dir"));
}
