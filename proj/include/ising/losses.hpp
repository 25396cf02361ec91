#pragma once

#include <Eigen/Dense>

#include "ising/types.hpp"

namespace ising {

enum class LossKind { Logistic, InteractionScreening };

struct LossEval {
    double value = 0.0;
    Eigen::VectorXd gradient;
};

/// (1/n) sum log(1 + exp(-2 y_i x_i.w)), evaluated through the shifted log1p
/// form so large margins cannot overflow.
LossEval eval_logistic(const NodeProblem& prob, const Eigen::VectorXd& w);

/// (1/n) sum exp(-y_i x_i.w).
LossEval eval_ise(const NodeProblem& prob, const Eigen::VectorXd& w);

LossEval eval_loss(const NodeProblem& prob, LossKind kind, const Eigen::VectorXd& w);

/// Value-only evaluation (skips the gradient).
double loss_value(const NodeProblem& prob, LossKind kind, const Eigen::VectorXd& w);

/// sigma_max(X X^T) via power iteration on the Gram matrix X^T X
/// (same spectrum), relative tolerance 1e-6, at most 200 iterations,
/// fixed-seed start vector.
double gram_spectral_norm(const NodeProblem& prob);

/// Gradient Lipschitz constant: sigma_max(X X^T)/n for the logistic loss,
/// e^lambda sigma_max(X X^T)/n for the interaction screening loss, valid on
/// the L1 ball of radius lambda.
double lipschitz_constant(const NodeProblem& prob, LossKind kind, double lambda);

/// Same constant from a precomputed spectral norm.
double lipschitz_from_sigma(double sigma_max, int n, LossKind kind, double lambda);

}  // namespace ising
