#include <doctest.h>

#include <cmath>
#include <vector>

#include "ising/sampler.hpp"
#include "ising/topology.hpp"

using namespace ising;

namespace {

// Independent enumeration oracle: P(z) via direct evaluation of
// exp(0.5 z^T W z) over all states, normalized by the brute-force sum.
std::vector<double> exact_state_probs(const ConnectivityMatrix& w) {
    const int p = w.p();
    const size_t n_states = size_t{1} << p;
    std::vector<double> weight(n_states);
    double total = 0.0;
    for (size_t s = 0; s < n_states; ++s) {
        Eigen::VectorXd z(p);
        for (int j = 0; j < p; ++j) z(j) = (s >> j) & 1 ? 1.0 : -1.0;
        weight[s] = std::exp(0.5 * z.dot(w.weights() * z));
        total += weight[s];
    }
    for (double& x : weight) x /= total;
    return weight;
}

size_t row_state(const SampleSet& samples, int i) {
    size_t s = 0;
    for (int j = 0; j < samples.p(); ++j) {
        if (samples.data()(i, j) > 0.0) s |= size_t{1} << j;
    }
    return s;
}

double tv_distance(const SampleSet& samples, const std::vector<double>& probs) {
    std::vector<double> counts(probs.size(), 0.0);
    for (int i = 0; i < samples.n(); ++i) counts[row_state(samples, i)] += 1.0;
    double tv = 0.0;
    for (size_t s = 0; s < probs.size(); ++s) {
        tv += std::abs(counts[s] / samples.n() - probs[s]);
    }
    return 0.5 * tv;
}

ConnectivityMatrix single_edge_model(int p, int a, int b, double weight) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);
    w(a, b) = w(b, a) = weight;
    return ConnectivityMatrix(std::move(w));
}

}  // namespace

TEST_CASE("log partition closed forms") {
    CHECK(log_partition(ConnectivityMatrix(Eigen::MatrixXd::Zero(1, 1))) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(log_partition(ConnectivityMatrix(Eigen::MatrixXd::Zero(3, 3))) ==
          doctest::Approx(3.0 * std::log(2.0)).epsilon(1e-12));

    const auto w = single_edge_model(2, 0, 1, 0.5);
    const double expected = std::log(2.0 * std::exp(0.5) + 2.0 * std::exp(-0.5));
    CHECK(log_partition(w) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(log_partition(w) == doctest::Approx(1.5064).epsilon(1e-4));
}

TEST_CASE("log partition matches brute-force enumeration on random models") {
    const auto w = random_regular_topology(6, 3, 0.4, 0.9, 11);
    const int p = w.p();
    double z = 0.0;
    for (size_t s = 0; s < (size_t{1} << p); ++s) {
        Eigen::VectorXd v(p);
        for (int j = 0; j < p; ++j) v(j) = (s >> j) & 1 ? 1.0 : -1.0;
        z += std::exp(0.5 * v.dot(w.weights() * v));
    }
    CHECK(log_partition(w) == doctest::Approx(std::log(z)).epsilon(1e-10));
    CHECK_THROWS_AS(log_partition(ConnectivityMatrix(Eigen::MatrixXd::Zero(21, 21))),
                    std::invalid_argument);
}

TEST_CASE("exact state probabilities sum to one") {
    const auto w = random_regular_topology(4, 3, 0.5, 0.9, 5);
    const double log_z = log_partition(w);
    const int p = w.p();
    double total = 0.0;
    for (size_t s = 0; s < (size_t{1} << p); ++s) {
        Eigen::VectorXd v(p);
        for (int j = 0; j < p; ++j) v(j) = (s >> j) & 1 ? 1.0 : -1.0;
        total += std::exp(0.5 * v.dot(w.weights() * v) - log_z);
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("exact sampler matches the two-spin agreement probability") {
    const auto w = single_edge_model(2, 0, 1, 0.5);
    const SampleSet samples = exact_sample(w, 100000, 123);
    int agree = 0;
    for (int i = 0; i < samples.n(); ++i) {
        agree += samples.data()(i, 0) == samples.data()(i, 1);
    }
    const double expected = std::exp(0.5) / (std::exp(0.5) + std::exp(-0.5));
    CHECK(std::abs(static_cast<double>(agree) / samples.n() - expected) < 0.01);
}

TEST_CASE("exact sampler on the empty model is unbiased") {
    const SampleSet samples =
        exact_sample(ConnectivityMatrix(Eigen::MatrixXd::Zero(4, 4)), 100000, 7);
    for (int j = 0; j < 4; ++j) {
        CHECK(std::abs(samples.data().col(j).mean()) < 0.02);
    }
}

TEST_CASE("exact sampler determinism and spin entries") {
    const auto w = lattice_topology(3, 0.5);
    const SampleSet a = exact_sample(w, 200, 9);
    const SampleSet b = exact_sample(w, 200, 9);
    CHECK(a.data() == b.data());
    const SampleSet c = exact_sample(w, 200, 10);
    CHECK(a.data() != c.data());
    for (int i = 0; i < a.n(); ++i) {
        for (int j = 0; j < a.p(); ++j) {
            CHECK(std::abs(a.data()(i, j)) == 1.0);
        }
    }
}

TEST_CASE("conditional probability closed forms") {
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    CHECK(conditional_prob(zero, Eigen::VectorXd::Ones(3)) == 0.5);

    Eigen::VectorXd w(2), z(2);
    w << 0.5, 0.5;
    z << 1.0, 1.0;
    CHECK(conditional_prob(w, z) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-12));

    // P(z_j = +1 | rest) + P(z_j = -1 | rest) = 1; the latter flips the field sign.
    Eigen::VectorXd w2(3), z2(3);
    w2 << 0.3, -0.7, 0.2;
    z2 << 1.0, 1.0, -1.0;
    CHECK(conditional_prob(w2, z2) + conditional_prob(-w2, z2) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gibbs sampler approaches the exact distribution") {
    const auto w = single_edge_model(3, 0, 1, 0.8);
    const auto probs = exact_state_probs(w);
    const SampleSet samples = gibbs_sample(w, 100000, 1000, 21);
    CHECK(tv_distance(samples, probs) < 0.02);
}

TEST_CASE("gibbs on the empty model is uniform after one sweep") {
    const auto w = ConnectivityMatrix(Eigen::MatrixXd::Zero(3, 3));
    const auto probs = exact_state_probs(w);  // uniform
    const SampleSet samples = gibbs_sample(w, 100000, 1, 3);
    CHECK(tv_distance(samples, probs) < 0.02);
    for (double p : probs) CHECK(p == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("gibbs determinism") {
    const auto w = lattice_topology(3, 0.5);
    const SampleSet a = gibbs_sample(w, 100, 50, 17);
    const SampleSet b = gibbs_sample(w, 100, 50, 17);
    CHECK(a.data() == b.data());
}

TEST_CASE("gibbs mixing improves with more sweeps") {
    // Strongly coupled triangle: one sweep from a uniform start is visibly
    // off, a long chain sits at the Monte-Carlo noise floor.
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 1) = m(1, 0) = 0.8;
    m(1, 2) = m(2, 1) = 0.8;
    m(0, 2) = m(2, 0) = 0.8;
    const ConnectivityMatrix w(std::move(m));
    const auto probs = exact_state_probs(w);

    const double tv1 = tv_distance(gibbs_sample(w, 100000, 1, 40), probs);
    const double tv10 = tv_distance(gibbs_sample(w, 100000, 10, 41), probs);
    const double tv1000 = tv_distance(gibbs_sample(w, 100000, 1000, 42), probs);
    CHECK(tv10 < tv1);
    CHECK(tv1000 < tv1);
    CHECK(tv1000 < tv10 + 0.01);  // both sit at the noise floor
    CHECK(tv1000 < 0.02);
}

TEST_CASE("sampler config dispatch and validation") {
    const auto w = lattice_topology(3, 0.5);
    SamplerConfig config;
    config.method = SamplerMethod::Exact;
    config.rng_seed = 4;
    CHECK(draw_samples(w, 10, config).data() == exact_sample(w, 10, 4).data());
    config.method = SamplerMethod::Gibbs;
    config.gibbs_sweeps = 5;
    CHECK(draw_samples(w, 10, config).data() == gibbs_sample(w, 10, 5, 4).data());
    CHECK_THROWS_AS(gibbs_sample(w, 10, 0, 1), std::invalid_argument);
}
