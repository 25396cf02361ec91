#include <doctest.h>

#include <cmath>
#include <set>

#include "ising/estimators.hpp"
#include "ising/rng.hpp"
#include "ising/sampler.hpp"
#include "ising/topology.hpp"

using namespace ising;

namespace {

SampleSet noise_samples(int n, int p, std::uint64_t seed) {
    return exact_sample(ConnectivityMatrix(Eigen::MatrixXd::Zero(p, p)), n, seed);
}

std::set<int> support_of(const Eigen::VectorXd& w) {
    std::set<int> s;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w(i) != 0.0) s.insert(static_cast<int>(i));
    }
    return s;
}

// Lattice neighbours of node j, mapped into the (p-1)-dim problem coordinates.
std::set<int> reduced_neighbors(const ConnectivityMatrix& w, int j) {
    std::set<int> out;
    for (int l = 0; l < w.p(); ++l) {
        if (l != j && w(j, l) != 0.0) out.insert(l < j ? l : l - 1);
    }
    return out;
}

}  // namespace

TEST_CASE("method metadata") {
    CHECK(is_l0_method(Method::L0L2Lr));
    CHECK(is_l0_method(Method::L0L2Ise));
    CHECK(is_l1_family(Method::L1Lr));
    CHECK(is_l1_family(Method::L1ConstrLr));
    CHECK(is_l1_family(Method::L1Ise));
    CHECK(loss_of(Method::L1Ise) == LossKind::InteractionScreening);
    CHECK(loss_of(Method::L1ConstrLr) == LossKind::Logistic);
    for (Method m : {Method::L1Lr, Method::L1ConstrLr, Method::L1Ise, Method::L0L2Lr,
                     Method::L0L2Ise}) {
        CHECK(method_from_token(method_token(m)) == m);
    }
    CHECK_THROWS_AS(method_from_token("ridge"), std::invalid_argument);
    CHECK(MethodSpec::defaults(Method::L1Lr).tuning == Tuning::ValidationLikelihood);
    CHECK(MethodSpec::defaults(Method::L0L2Ise).tuning == Tuning::Bic);
}

TEST_CASE("default grids") {
    const SampleSet samples = noise_samples(100, 4, 1);
    const NodeProblem prob = node_problem(samples, 0);
    const auto grid = default_lambda_grid(prob);
    REQUIRE(grid.size() == 20);
    const double head = 2.0 * (prob.X.transpose() * prob.y).lpNorm<Eigen::Infinity>() / prob.n();
    CHECK(grid.front() == doctest::Approx(head).epsilon(1e-12));
    for (size_t i = 1; i < grid.size(); ++i) {
        CHECK(grid[i] == doctest::Approx(0.5 * grid[i - 1]).epsilon(1e-12));
    }

    CHECK(default_k_grid(8) == std::vector<int>{8, 7, 6, 5, 4, 3, 2, 1});
    CHECK(default_k_grid(24) == std::vector<int>{24, 16, 12, 10, 8, 6, 5, 4, 3, 2, 1});
    CHECK(default_k_grid(16) == std::vector<int>{16, 12, 10, 8, 6, 5, 4, 3, 2, 1});
}

TEST_CASE("validation conditional likelihood closed forms") {
    const SampleSet samples = noise_samples(50, 4, 2);
    const NodeProblem prob = node_problem(samples, 0);
    CHECK(validation_conditional_likelihood(Eigen::VectorXd::Zero(3), prob) ==
          doctest::Approx(-std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("true weights score higher than zero on a large validation set") {
    const ConnectivityMatrix w_star = lattice_topology(3, 0.5);
    const SampleSet validation = exact_sample(w_star, 10000, 3);
    const NodeProblem prob = node_problem(validation, 0);
    const Eigen::VectorXd w_true = w_star.row_without_diagonal(0);
    CHECK(validation_conditional_likelihood(w_true, prob) >
          validation_conditional_likelihood(Eigen::VectorXd::Zero(8), prob));
}

TEST_CASE("perturbing the true weights lowers the expected validation score") {
    const ConnectivityMatrix w_star = lattice_topology(3, 0.5);
    const SampleSet validation = exact_sample(w_star, 10000, 4);
    const NodeProblem prob = node_problem(validation, 0);
    const Eigen::VectorXd w_true = w_star.row_without_diagonal(0);
    const double base = validation_conditional_likelihood(w_true, prob);
    double mean_noisy = 0.0;
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        Eigen::VectorXd noisy = w_true;
        for (Eigen::Index i = 0; i < noisy.size(); ++i) noisy(i) += rng.uniform(-0.3, 0.3);
        mean_noisy += validation_conditional_likelihood(noisy, prob);
    }
    mean_noisy /= 30.0;
    CHECK(mean_noisy < base);
}

TEST_CASE("l1 paths start with the exact zero solution") {
    const SampleSet train = noise_samples(400, 5, 6);
    const SampleSet validation = noise_samples(400, 5, 7);
    const NodeProblem prob_t = node_problem(train, 0);
    const NodeProblem prob_v = node_problem(validation, 0);
    for (Method m : {Method::L1Lr, Method::L1Ise}) {
        const auto cands = fit_node(prob_t, MethodSpec::defaults(m), &prob_v);
        REQUIRE(cands.size() == 20);
        CHECK(cands.front().w_raw.isZero(0.0));
        CHECK(cands.front().w.isZero(0.0));
    }
}

TEST_CASE("validation picks the zero model on pure noise") {
    const SampleSet train = noise_samples(2000, 5, 8);
    const SampleSet validation = noise_samples(2000, 5, 9);
    const GraphEstimate est =
        fit_graph(train, &validation, MethodSpec::defaults(Method::L1Lr));
    CHECK(est.w_raw.edge_pairs().empty());
}

TEST_CASE("assemble graph symmetrizes by averaging") {
    std::vector<Eigen::VectorXd> rows(3, Eigen::VectorXd::Zero(2));
    // Node 0 claims w(0,1) = 0.4; node 1 claims w(1,0) = 0.6.
    rows[0](0) = 0.4;
    rows[1](0) = 0.6;
    const ConnectivityMatrix w = assemble_graph(rows);
    CHECK(w(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w(1, 0) == doctest::Approx(0.5).epsilon(1e-15));

    // One-sided support still creates the (halved) edge.
    std::vector<Eigen::VectorXd> one_sided(3, Eigen::VectorXd::Zero(2));
    one_sided[0](1) = 0.8;  // node 0 -> node 2
    const ConnectivityMatrix w2 = assemble_graph(one_sided);
    CHECK(w2(0, 2) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(w2.edge_pairs() == std::vector<std::pair<int, int>>{{0, 2}});

    // Identical halves stay unchanged.
    std::vector<Eigen::VectorXd> sym(2, Eigen::VectorXd::Zero(1));
    sym[0](0) = 0.7;
    sym[1](0) = 0.7;
    CHECK(assemble_graph(sym)(0, 1) == 0.7);

    std::vector<Eigen::VectorXd> bad(3, Eigen::VectorXd::Zero(1));
    CHECK_THROWS_AS(assemble_graph(bad), std::invalid_argument);
}

TEST_CASE("hard threshold boundary convention") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 1) = m(1, 0) = 0.25;
    m(1, 2) = m(2, 1) = 0.3;
    m(0, 2) = m(2, 0) = 0.2;
    const ConnectivityMatrix w(m);

    CHECK(hard_threshold(w, 0.0).weights() == w.weights());  // identity at zero
    const ConnectivityMatrix cut = hard_threshold(w, 0.25);
    CHECK(cut(0, 1) == 0.25);  // entries equal to the threshold survive
    CHECK(cut(1, 2) == 0.3);
    CHECK(cut(0, 2) == 0.0);
    CHECK(hard_threshold(w, 0.21)(0, 2) == 0.0);
    CHECK_THROWS_AS(hard_threshold(w, -0.1), std::invalid_argument);
}

TEST_CASE("bic score plug-in value for the empty graph") {
    // Two all-zero candidates per node: S(k) = 0, so the score reduces to
    // -2 log L of the zero model, 2 p n log 2.
    const int p = 4, n = 500;
    std::vector<std::vector<NodeCandidate>> per_node(p);
    for (int j = 0; j < p; ++j) {
        for (int k : {2, 1}) {
            NodeCandidate c;
            c.k = k;
            c.w_raw = Eigen::VectorXd::Zero(p - 1);
            c.w = Eigen::VectorXd::Zero(p - 1);
            c.train_loss = std::log(2.0);
            c.train_logistic_loss = std::log(2.0);
            per_node[j].push_back(c);
        }
    }
    CHECK(bic_score(per_node, n, 1) ==
          doctest::Approx(2.0 * p * n * std::log(2.0)).epsilon(1e-12));
    CHECK(bic_select(per_node, n) == 1);  // tie resolves to the smaller k
}

TEST_CASE("bic prefers the true degree on the lattice") {
    const ConnectivityMatrix w_star = lattice_topology(3, 0.5);
    int bic_hits = 0;
    int support_hits = 0;
    for (int seed = 0; seed < 30; ++seed) {
        const SampleSet train = exact_sample(w_star, 4000, 5000 + seed);
        const SampleSet validation = exact_sample(w_star, 4000, 6000 + seed);
        const GraphEstimate est =
            fit_graph(train, &validation, MethodSpec::defaults(Method::L0L2Lr));
        bic_hits += est.k == 4;
        if (est.k == 4) support_hits += est.w_hat.same_edges(w_star);
    }
    CHECK(bic_hits >= 28);
    CHECK(support_hits >= 28);
}

TEST_CASE("node candidates at the true degree match the lattice neighbours") {
    const ConnectivityMatrix w_star = lattice_topology(3, 0.5);
    int hits = 0;
    for (int seed = 0; seed < 30; ++seed) {
        const SampleSet train = exact_sample(w_star, 4000, 7000 + seed);
        const SampleSet validation = exact_sample(w_star, 4000, 8000 + seed);
        const NodeProblem prob_t = node_problem(train, 0);
        const NodeProblem prob_v = node_problem(validation, 0);
        const auto cands = fit_node(prob_t, MethodSpec::defaults(Method::L0L2Lr), &prob_v);
        for (const auto& c : cands) {
            if (c.k == 4) hits += support_of(c.w) == reduced_neighbors(w_star, 0);
        }
    }
    CHECK(hits >= 28);
}

TEST_CASE("bic picks the sparsest candidate on pure noise") {
    int hits = 0;
    for (int seed = 0; seed < 10; ++seed) {
        const SampleSet train = noise_samples(2000, 6, 9000 + seed);
        const GraphEstimate est = fit_graph(train, nullptr, MethodSpec::defaults(Method::L0L2Lr));
        hits += est.k == 1;
    }
    CHECK(hits >= 9);
}

TEST_CASE("l0 candidates respect the cardinality bound per node") {
    const ConnectivityMatrix w_star = lattice_topology(3, 0.5);
    const SampleSet train = exact_sample(w_star, 1000, 42);
    const SampleSet validation = exact_sample(w_star, 1000, 43);
    const NodeProblem prob_t = node_problem(train, 4);
    const NodeProblem prob_v = node_problem(validation, 4);
    for (Method m : {Method::L0L2Lr, Method::L0L2Ise}) {
        const auto cands = fit_node(prob_t, MethodSpec::defaults(m), &prob_v);
        REQUIRE(cands.size() == 8);  // k = 8 .. 1
        for (const auto& c : cands) {
            CHECK(static_cast<int>(support_of(c.w_raw).size()) <= c.k);
            CHECK(static_cast<int>(support_of(c.w).size()) <= c.k);
        }
    }
}

TEST_CASE("refit candidates never raise the training loss") {
    const ConnectivityMatrix w_star = lattice_topology(3, 0.5);
    const SampleSet train = exact_sample(w_star, 800, 44);
    const SampleSet validation = exact_sample(w_star, 800, 45);
    const NodeProblem prob_t = node_problem(train, 2);
    const NodeProblem prob_v = node_problem(validation, 2);
    for (Method m : {Method::L1Lr, Method::L1Ise, Method::L0L2Lr}) {
        const auto cands = fit_node(prob_t, MethodSpec::defaults(m), &prob_v);
        for (const auto& c : cands) {
            CHECK(loss_value(prob_t, loss_of(m), c.w) <=
                  loss_value(prob_t, loss_of(m), c.w_raw) + 1e-12);
        }
    }
}

TEST_CASE("graph estimates are symmetric with zero diagonal and deterministic") {
    const ConnectivityMatrix w_star = lattice_topology(3, 0.5);
    const SampleSet train = exact_sample(w_star, 1500, 46);
    const SampleSet validation = exact_sample(w_star, 1500, 47);
    for (Method m : {Method::L1Lr, Method::L1ConstrLr, Method::L1Ise, Method::L0L2Lr,
                     Method::L0L2Ise}) {
        const MethodSpec spec = MethodSpec::defaults(m);
        const GraphEstimate a = fit_graph(train, &validation, spec, 0.25);
        const GraphEstimate b = fit_graph(train, &validation, spec, 0.25);
        CHECK(a.w_hat.weights() == b.w_hat.weights());  // deterministic refit
        if (is_l1_family(m)) {
            for (const auto& [i, j] : a.w_hat.edge_pairs()) {
                CHECK(std::abs(a.w_hat(i, j)) >= 0.25);
            }
        } else {
            CHECK(a.w_hat.weights() == a.w_raw.weights());  // no thresholding for L0
        }
    }
}

TEST_CASE("fit node contract checks") {
    const SampleSet train = noise_samples(100, 4, 48);
    const NodeProblem prob = node_problem(train, 0);
    CHECK_THROWS_AS(fit_node(prob, MethodSpec::defaults(Method::L1Lr), nullptr),
                    std::invalid_argument);
    // BIC-tuned fits run without a validation set.
    CHECK_NOTHROW(fit_node(prob, MethodSpec::defaults(Method::L0L2Lr), nullptr));
}
