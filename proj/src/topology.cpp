#include "ising/topology.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "ising/rng.hpp"

namespace ising {

ConnectivityMatrix lattice_topology(int side, double coupling) {
    if (side < 2) throw std::invalid_argument("lattice side must be >= 2");
    if (coupling <= 0.0) throw std::invalid_argument("lattice coupling must be positive");
    const int p = side * side;
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);
    auto at = [side](int r, int c) { return r * side + c; };
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            const int i = at(r, c);
            const int right = at(r, (c + 1) % side);
            const int down = at((r + 1) % side, c);
            // Assigning both orientations keeps w symmetric; at side = 2 the
            // wrap-around edge lands on the same entry and simply collapses.
            w(i, right) = w(right, i) = coupling;
            w(i, down) = w(down, i) = coupling;
        }
    }
    return ConnectivityMatrix(std::move(w));
}

ConnectivityMatrix random_regular_topology(int p, int degree, double weight_low,
                                           double weight_high, std::uint64_t seed) {
    if (degree < 1 || degree >= p) throw std::invalid_argument("need 1 <= degree < p");
    if ((static_cast<long long>(p) * degree) % 2 != 0) {
        throw std::invalid_argument("p * degree must be even");
    }
    if (weight_low > weight_high) throw std::invalid_argument("weight range is inverted");

    Rng rng(seed);
    constexpr int kMaxAttempts = 1000;
    std::vector<int> stubs(static_cast<size_t>(p) * degree);
    for (int v = 0; v < p; ++v) {
        std::fill_n(stubs.begin() + static_cast<size_t>(v) * degree, degree, v);
    }

    std::set<std::pair<int, int>> edges;
    bool ok = false;
    for (int attempt = 0; attempt < kMaxAttempts && !ok; ++attempt) {
        // Fisher-Yates shuffle, then pair consecutive stubs.
        for (int i = static_cast<int>(stubs.size()) - 1; i > 0; --i) {
            std::swap(stubs[i], stubs[rng.uniform_int(i + 1)]);
        }
        edges.clear();
        ok = true;
        for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int a = stubs[i], b = stubs[i + 1];
            if (a == b) { ok = false; break; }  // self-loop
            if (a > b) std::swap(a, b);
            if (!edges.emplace(a, b).second) { ok = false; break; }  // multi-edge
        }
    }
    if (!ok) throw std::runtime_error("random regular pairing did not converge");

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);
    for (const auto& [a, b] : edges) {  // std::set iterates in sorted order
        const double weight = rng.uniform(weight_low, weight_high);
        w(a, b) = w(b, a) = weight;
    }
    return ConnectivityMatrix(std::move(w));
}

}  // namespace ising
