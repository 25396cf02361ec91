#include "ising/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ising/rng.hpp"

namespace ising {

namespace {

void require_enumerable(int p) {
    if (p > kMaxExactNodes) {
        throw std::invalid_argument("exact enumeration supports at most 2^20 states");
    }
}

// Energies E(z) = 0.5 z^T W z for every state, indexed by the state's bit
// pattern (bit j set <=> z_j = +1). Walks states in Gray-code order so each
// step is a single spin flip with an O(p) incremental update.
std::vector<double> state_energies(const ConnectivityMatrix& w) {
    const int p = w.p();
    const std::uint64_t n_states = 1ULL << p;
    std::vector<double> energy(n_states);

    Eigen::VectorXd spins = Eigen::VectorXd::Constant(p, -1.0);
    Eigen::VectorXd field = w.weights() * spins;  // field_j = sum_l W_jl z_l
    double e = 0.5 * spins.dot(field);
    energy[0] = e;

    std::uint64_t gray = 0;
    for (std::uint64_t i = 1; i < n_states; ++i) {
        const std::uint64_t next_gray = i ^ (i >> 1);
        const int bit = static_cast<int>(std::countr_zero(gray ^ next_gray));
        gray = next_gray;
        // Flipping spin `bit` changes the energy by -2 z_bit field_bit.
        e += -2.0 * spins(bit) * field(bit);
        spins(bit) = -spins(bit);
        field += 2.0 * spins(bit) * w.weights().col(bit);
        energy[gray] = e;
    }
    return energy;
}

Eigen::VectorXd state_to_row(std::uint64_t state, int p) {
    Eigen::VectorXd row(p);
    for (int j = 0; j < p; ++j) row(j) = (state >> j) & 1ULL ? 1.0 : -1.0;
    return row;
}

}  // namespace

double log_partition(const ConnectivityMatrix& w) {
    require_enumerable(w.p());
    const std::vector<double> energy = state_energies(w);
    const double e_max = *std::max_element(energy.begin(), energy.end());
    double total = 0.0;
    for (double e : energy) total += std::exp(e - e_max);
    return e_max + std::log(total);
}

SampleSet exact_sample(const ConnectivityMatrix& w, int n, std::uint64_t seed) {
    require_enumerable(w.p());
    if (n < 0) throw std::invalid_argument("sample count must be non-negative");
    const int p = w.p();

    std::vector<double> cumulative = state_energies(w);
    const double e_max = *std::max_element(cumulative.begin(), cumulative.end());
    double total = 0.0;
    for (double& c : cumulative) {
        total += std::exp(c - e_max);
        c = total;
    }
    for (double& c : cumulative) c /= total;

    Rng rng(seed);
    Eigen::MatrixXd data(n, p);
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::uint64_t state =
            std::min<std::uint64_t>(it - cumulative.begin(), cumulative.size() - 1);
        data.row(i) = state_to_row(state, p);
    }
    return SampleSet(std::move(data));
}

double conditional_prob(const Eigen::VectorXd& w_row, const Eigen::VectorXd& z_rest) {
    if (w_row.size() != z_rest.size()) throw std::invalid_argument("dimension mismatch");
    const double t = 2.0 * w_row.dot(z_rest);
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

SampleSet gibbs_sample(const ConnectivityMatrix& w, int n, int sweeps, std::uint64_t seed) {
    if (sweeps < 1) throw std::invalid_argument("gibbs sweeps must be >= 1");
    if (n < 0) throw std::invalid_argument("sample count must be non-negative");
    const int p = w.p();

    // Sparse neighbour lists keep the local-field update O(degree) per flip.
    std::vector<std::vector<std::pair<int, double>>> neighbors(p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (w(i, j) != 0.0) neighbors[i].emplace_back(j, w(i, j));
        }
    }

    Eigen::MatrixXd data(n, p);
    std::vector<double> spins(p), field(p);
    for (int i = 0; i < n; ++i) {
        Rng rng(seed_combine(seed, static_cast<std::uint64_t>(i)));
        for (int j = 0; j < p; ++j) spins[j] = rng.spin();
        for (int j = 0; j < p; ++j) {
            double h = 0.0;
            for (const auto& [l, wjl] : neighbors[j]) h += wjl * spins[l];
            field[j] = h;
        }
        for (int s = 0; s < sweeps; ++s) {
            for (int j = 0; j < p; ++j) {
                const double t = 2.0 * field[j];
                const double prob_up = t >= 0.0 ? 1.0 / (1.0 + std::exp(-t))
                                                : std::exp(t) / (1.0 + std::exp(t));
                const double next = rng.uniform01() < prob_up ? 1.0 : -1.0;
                if (next != spins[j]) {
                    spins[j] = next;
                    for (const auto& [l, wjl] : neighbors[j]) field[l] += 2.0 * wjl * next;
                }
            }
        }
        for (int j = 0; j < p; ++j) data(i, j) = spins[j];
    }
    return SampleSet(std::move(data));
}

SampleSet draw_samples(const ConnectivityMatrix& w, int n, const SamplerConfig& config) {
    if (config.method == SamplerMethod::Exact) {
        return exact_sample(w, n, config.rng_seed);
    }
    return gibbs_sample(w, n, config.gibbs_sweeps, config.rng_seed);
}

}  // namespace ising
