#pragma once

#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ising/losses.hpp"
#include "ising/types.hpp"

namespace ising {

/// Joint cardinality / L2-radius constraint: ||w||_0 <= k, ||w||_2 <= theta.
struct L0L2Constraint {
    int k = 1;
    double theta = std::numeric_limits<double>::infinity();
};

struct SolveOptions {
    double epsilon = 1e-3;      // stop when ||w_{t+1} - w_t||^2 <= epsilon
    int t_max = 300;
    double step_scale = 1.01;   // D = step_scale * C, must be > 1
    double sigma_max_hint = 0;  // > 0: reuse a precomputed sigma_max(X X^T)
    double ise_l1_bound = 0;    // > 0: L1 radius for the ISE curvature bound in solve_fista
};

struct SolveResult {
    Eigen::VectorXd w;             // final point (after the on-support refit where applicable)
    Eigen::VectorXd w_pre_refit;   // main-loop output before the refit
    double loss = 0.0;             // objective at w
    std::vector<double> loss_trace;  // objective at each recorded iterate
    int iterations = 0;
    bool converged = false;
    double min_step_sq = std::numeric_limits<double>::infinity();
    double lipschitz = 0.0;  // C
    double step_bound = 0.0; // D
};

/// Raised when an iterate produces a non-finite objective.
class SolveError : public std::runtime_error {
public:
    SolveError(const std::string& msg, int iteration)
        : std::runtime_error(msg), iteration(iteration) {}
    int iteration;
};

/// Best approximation of v under the L0-L2 constraint: keep the k entries of
/// largest magnitude (ties to the lowest index), scale them by
/// min(1, theta / tau) where tau is their L2 norm, zero the rest.
/// k > dim(v) is treated as k = dim(v); tau = 0 yields the zero vector.
Eigen::VectorXd prox_l0l2(const Eigen::VectorXd& v, int k, double theta);

/// Euclidean projection onto the L1 ball, by the sort-based reduction to
/// simplex projection.
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius);

/// Componentwise soft-thresholding.
Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double tau);

/// Minimizes the loss over the support of w only (all other coordinates stay
/// zero), by gradient descent with backtracking line search. Coefficients are
/// capped at |w_i| <= 10 so a separating support cannot run away. Never
/// returns a point with higher loss than w.
Eigen::VectorXd refit_on_support(const NodeProblem& prob, LossKind kind,
                                 const Eigen::VectorXd& w);

/// Projected-gradient solver for min f(w) s.t. ||w||_0 <= k, ||w||_2 <= theta:
/// iterates w <- prox_l0l2(w - grad f(w)/D, k, theta) with D = step_scale * C,
/// then refits the selected support. w_init does not have to be feasible; the
/// loss trace starts at the first feasible iterate and is non-increasing.
SolveResult solve_l0l2(const NodeProblem& prob, LossKind kind, const L0L2Constraint& cons,
                       const Eigen::VectorXd& w_init, const SolveOptions& opts);

enum class Projector { SoftThreshold, L1Ball };

/// Accelerated proximal gradient (FISTA, restart-free momentum) with fixed
/// step 1/C. SoftThreshold solves the lambda-penalized problem (threshold
/// lambda/C per step); L1Ball solves the constrained problem with radius
/// lambda. Returns the best iterate seen, so the final objective never
/// exceeds the starting one.
SolveResult solve_fista(const NodeProblem& prob, LossKind kind, Projector projector,
                        double lambda, const Eigen::VectorXd& w_init,
                        const SolveOptions& opts);

/// Warm-started sweep over a strictly decreasing cardinality list
/// (front = dim, back = 1). The front entry is the supplied unconstrained
/// solution itself; each later k is solved with theta = 2 ||previous||_1,
/// initialized at the previous solution. Results are keyed by k, descending.
std::vector<std::pair<int, SolveResult>> continuation_path(
    const NodeProblem& prob, LossKind kind, const std::vector<int>& k_list,
    const Eigen::VectorXd& w_full_init, const SolveOptions& opts);

/// Writes "iteration,loss" rows for a solve trace.
void write_loss_trace(const SolveResult& result, const std::string& path);

}  // namespace ising
