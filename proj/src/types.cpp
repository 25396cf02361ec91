#include "ising/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ising {

ConnectivityMatrix::ConnectivityMatrix(Eigen::MatrixXd weights) : weights_(std::move(weights)) {
    if (weights_.rows() != weights_.cols() || weights_.rows() < 1) {
        throw std::invalid_argument("connectivity matrix must be square and non-empty");
    }
    const int p = static_cast<int>(weights_.rows());
    for (int i = 0; i < p; ++i) {
        if (weights_(i, i) != 0.0) {
            throw std::invalid_argument("connectivity matrix must have a zero diagonal");
        }
        for (int j = i + 1; j < p; ++j) {
            if (weights_(i, j) != weights_(j, i)) {
                throw std::invalid_argument("connectivity matrix must be symmetric");
            }
        }
    }
}

Eigen::VectorXd ConnectivityMatrix::row_without_diagonal(int j) const {
    const int p = this->p();
    if (j < 0 || j >= p) throw std::out_of_range("node index out of range");
    Eigen::VectorXd out(p - 1);
    int k = 0;
    for (int l = 0; l < p; ++l) {
        if (l != j) out(k++) = weights_(j, l);
    }
    return out;
}

std::vector<std::pair<int, int>> ConnectivityMatrix::edge_pairs() const {
    std::vector<std::pair<int, int>> edges;
    const int p = this->p();
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            if (weights_(i, j) != 0.0) edges.emplace_back(i, j);
        }
    }
    return edges;
}

bool ConnectivityMatrix::same_edges(const ConnectivityMatrix& other) const {
    return edge_pairs() == other.edge_pairs();
}

SampleSet::SampleSet(Eigen::MatrixXd data) : data_(std::move(data)) {
    for (Eigen::Index i = 0; i < data_.rows(); ++i) {
        for (Eigen::Index j = 0; j < data_.cols(); ++j) {
            const double v = data_(i, j);
            if (v != 1.0 && v != -1.0) {
                throw std::invalid_argument("sample entries must be exactly -1 or +1");
            }
        }
    }
}

NodeProblem node_problem(const SampleSet& samples, int j) {
    const int p = samples.p();
    const int n = samples.n();
    if (j < 0 || j >= p) throw std::out_of_range("node index out of range");
    NodeProblem prob;
    prob.node = j;
    prob.y = samples.data().col(j);
    prob.X.resize(n, p - 1);
    int k = 0;
    for (int l = 0; l < p; ++l) {
        if (l != j) prob.X.col(k++) = samples.data().col(l);
    }
    return prob;
}

GraphStats graph_stats(const ConnectivityMatrix& w) {
    GraphStats stats;
    const int p = w.p();
    double min_abs = std::numeric_limits<double>::infinity();
    for (int i = 0; i < p; ++i) {
        int degree = 0;
        for (int j = 0; j < p; ++j) {
            if (w(i, j) != 0.0) {
                ++degree;
                min_abs = std::min(min_abs, std::abs(w(i, j)));
            }
        }
        stats.max_degree = std::max(stats.max_degree, degree);
    }
    stats.edge_set = w.edge_pairs();
    if (!stats.edge_set.empty()) stats.min_edge_weight = min_abs;

    double max_row_l2 = 0.0;
    for (int j = 0; j < p; ++j) {
        max_row_l2 = std::max(max_row_l2, w.weights().row(j).norm());
    }
    stats.width = std::sqrt(static_cast<double>(stats.max_degree)) * max_row_l2;
    return stats;
}

}  // namespace ising
