#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ising/solver.hpp"
#include "ising/types.hpp"

namespace ising {

enum class Method { L1Lr, L1ConstrLr, L1Ise, L0L2Lr, L0L2Ise };
enum class Tuning { ValidationLikelihood, Bic };

bool is_l0_method(Method m);
bool is_l1_family(Method m);
LossKind loss_of(Method m);
std::string method_token(Method m);           // e.g. "l0l2-lr"
Method method_from_token(const std::string&); // throws on unknown token

struct MethodSpec {
    Method method = Method::L0L2Lr;
    Tuning tuning = Tuning::Bic;
    std::vector<double> lambda_grid;  // empty: per-node default (head 2||X^T y||_inf / n, ratio 0.5, 20 values)
    std::vector<int> k_grid;          // empty: default for the problem dimension
    SolveOptions solve;

    /// Spec with the conventional tuning rule for the method family.
    static MethodSpec defaults(Method m);
};

/// One point of a per-node regularization path.
struct NodeCandidate {
    double lambda = 0.0;  // L1 methods
    int k = 0;            // L0 methods
    Eigen::VectorXd w_raw;             // solver output before the support refit
    Eigen::VectorXd w;                 // refit on the selected support
    double train_loss = 0.0;           // method loss at w
    double train_logistic_loss = 0.0;  // logistic loss at w (model-selection scores use this)
};

std::vector<double> default_lambda_grid(const NodeProblem& prob);
std::vector<int> default_k_grid(int dim);

/// Full candidate path for one node. L1 methods sweep the lambda grid with
/// warm-started FISTA; L0 methods run the continuation sweep over the k grid,
/// initialized at the matching L1 solution (chosen on the validation set when
/// one is given, otherwise by a per-node BIC score). Every candidate is refit
/// on its own support. A validation problem is required for
/// ValidationLikelihood tuning.
std::vector<NodeCandidate> fit_node(const NodeProblem& train, const MethodSpec& spec,
                                    const NodeProblem* validation = nullptr);

/// Mean log conditional likelihood of the node values under w; equals the
/// negated logistic loss. Higher is better.
double validation_conditional_likelihood(const Eigen::VectorXd& w, const NodeProblem& prob);

/// BIC of the k-candidates across nodes: log(n) * S(k) - 2 log L, where S(k)
/// is the edge count of the assembled symmetrized graph and log L sums the
/// train log pseudo-likelihoods.
double bic_score(const std::vector<std::vector<NodeCandidate>>& per_node, int n, int k);

/// Arg-min of bic_score over the common k grid, ties to the smaller k.
int bic_select(const std::vector<std::vector<NodeCandidate>>& per_node, int n);

/// Scatter p per-node coupling vectors into rows and symmetrize by averaging.
ConnectivityMatrix assemble_graph(const std::vector<Eigen::VectorXd>& node_solutions);

/// Zero all entries with |W_ij| < tau (entries equal to tau are kept).
ConnectivityMatrix hard_threshold(const ConnectivityMatrix& w, double tau);

struct GraphEstimate {
    Method method = Method::L0L2Lr;
    ConnectivityMatrix w_hat;  // final estimate (thresholded for L1-family fits when tau given)
    ConnectivityMatrix w_raw;  // symmetrized refit estimate, before thresholding
    std::vector<double> lambda_by_node;  // L1 methods
    int k = 0;                           // L0 methods
};

/// End-to-end estimation of the coupling matrix: per-node fits, tuning,
/// symmetrization, and (L1-family only, when tau is given) hard thresholding.
GraphEstimate fit_graph(const SampleSet& train, const SampleSet* validation,
                        const MethodSpec& spec,
                        std::optional<double> threshold = std::nullopt);

}  // namespace ising
