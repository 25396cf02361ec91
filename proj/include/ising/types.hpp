#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

namespace ising {

/// Symmetric coupling matrix with zero diagonal. Holds both ground-truth
/// models and estimates.
class ConnectivityMatrix {
public:
    ConnectivityMatrix() = default;

    /// Validates symmetry and a zero diagonal; throws std::invalid_argument.
    explicit ConnectivityMatrix(Eigen::MatrixXd weights);

    int p() const { return static_cast<int>(weights_.rows()); }
    const Eigen::MatrixXd& weights() const { return weights_; }
    double operator()(int i, int j) const { return weights_(i, j); }

    /// Row j with the diagonal entry removed, i.e. the coupling vector of node j.
    Eigen::VectorXd row_without_diagonal(int j) const;

    /// Unordered edges (i < j) with nonzero weight.
    std::vector<std::pair<int, int>> edge_pairs() const;

    bool same_edges(const ConnectivityMatrix& other) const;

private:
    Eigen::MatrixXd weights_;
};

/// Degree/width summary of a coupling matrix.
struct GraphStats {
    int max_degree = 0;                        // largest row support size
    std::optional<double> min_edge_weight;     // absent for the empty graph
    double width = 0.0;                        // max_j sqrt(max_degree) * ||w_{-j}||_2
    std::vector<std::pair<int, int>> edge_set;
};

/// n x p matrix of spins in {-1, +1}, one sample per row.
class SampleSet {
public:
    SampleSet() = default;

    /// Validates that every entry is exactly -1 or +1.
    explicit SampleSet(Eigen::MatrixXd data);

    int n() const { return static_cast<int>(data_.rows()); }
    int p() const { return static_cast<int>(data_.cols()); }
    const Eigen::MatrixXd& data() const { return data_; }

private:
    Eigen::MatrixXd data_;
};

/// Per-node regression view of a sample set: y is column j, X is the rest.
struct NodeProblem {
    int node = 0;
    Eigen::MatrixXd X;  // n x (p-1), column j deleted, remaining columns in index order
    Eigen::VectorXd y;  // column j

    int n() const { return static_cast<int>(X.rows()); }
    int dim() const { return static_cast<int>(X.cols()); }
};

NodeProblem node_problem(const SampleSet& samples, int j);

GraphStats graph_stats(const ConnectivityMatrix& w);

}  // namespace ising
