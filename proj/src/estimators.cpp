#include "ising/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ising {

bool is_l0_method(Method m) { return m == Method::L0L2Lr || m == Method::L0L2Ise; }

bool is_l1_family(Method m) { return !is_l0_method(m); }

LossKind loss_of(Method m) {
    return (m == Method::L1Ise || m == Method::L0L2Ise) ? LossKind::InteractionScreening
                                                        : LossKind::Logistic;
}

std::string method_token(Method m) {
    switch (m) {
        case Method::L1Lr: return "l1-lr";
        case Method::L1ConstrLr: return "l1constr-lr";
        case Method::L1Ise: return "l1-ise";
        case Method::L0L2Lr: return "l0l2-lr";
        case Method::L0L2Ise: return "l0l2-ise";
    }
    throw std::logic_error("unreachable");
}

Method method_from_token(const std::string& token) {
    if (token == "l1-lr") return Method::L1Lr;
    if (token == "l1constr-lr") return Method::L1ConstrLr;
    if (token == "l1-ise") return Method::L1Ise;
    if (token == "l0l2-lr") return Method::L0L2Lr;
    if (token == "l0l2-ise") return Method::L0L2Ise;
    throw std::invalid_argument("unknown method: " + token);
}

MethodSpec MethodSpec::defaults(Method m) {
    MethodSpec spec;
    spec.method = m;
    spec.tuning = is_l0_method(m) ? Tuning::Bic : Tuning::ValidationLikelihood;
    return spec;
}

std::vector<double> default_lambda_grid(const NodeProblem& prob) {
    // Head: twice the sup-norm of the per-feature correlations, for which the
    // penalized solution is exactly zero. 20 values, geometric ratio 0.5.
    const double head =
        std::max(2.0 * (prob.X.transpose() * prob.y).lpNorm<Eigen::Infinity>() / prob.n(), 1e-8);
    std::vector<double> grid(20);
    double lam = head;
    for (double& g : grid) {
        g = lam;
        lam *= 0.5;
    }
    return grid;
}

std::vector<int> default_k_grid(int dim) {
    std::vector<int> grid;
    if (dim <= 15) {
        for (int k = dim; k >= 1; --k) grid.push_back(k);
    } else {
        grid.push_back(dim);
        for (int k : {16, 12, 10, 8, 6, 5, 4, 3, 2, 1}) {
            if (k < dim) grid.push_back(k);
        }
    }
    return grid;
}

double validation_conditional_likelihood(const Eigen::VectorXd& w, const NodeProblem& prob) {
    return -loss_value(prob, LossKind::Logistic, w);
}

namespace {

// Support-keyed cache: candidates along one path often share a support, and
// the refit depends on the support alone.
class RefitCache {
public:
    RefitCache(const NodeProblem& train, LossKind kind) : train_(train), kind_(kind) {}

    NodeCandidate candidate(const Eigen::VectorXd& w_raw) {
        NodeCandidate cand;
        cand.w_raw = w_raw;
        std::vector<int> support;
        for (Eigen::Index i = 0; i < w_raw.size(); ++i) {
            if (w_raw(i) != 0.0) support.push_back(static_cast<int>(i));
        }
        const auto it = cache_.find(support);
        if (it != cache_.end()) {
            cand.w = it->second;
        } else {
            cand.w = refit_on_support(train_, kind_, w_raw);
            cache_.emplace(std::move(support), cand.w);
        }
        cand.train_loss = loss_value(train_, kind_, cand.w);
        cand.train_logistic_loss = kind_ == LossKind::Logistic
                                       ? cand.train_loss
                                       : loss_value(train_, LossKind::Logistic, cand.w);
        return cand;
    }

private:
    const NodeProblem& train_;
    LossKind kind_;
    std::map<std::vector<int>, Eigen::VectorXd> cache_;
};

// Path down the lambda grid. Every solve starts from zero: the head solution
// is exactly zero and supports then grow with decreasing lambda, which keeps
// the stopping rule meaningful at each grid point.
std::vector<NodeCandidate> l1_path(const NodeProblem& train, LossKind kind,
                                   Projector projector, const std::vector<double>& grid,
                                   const SolveOptions& opts) {
    std::vector<NodeCandidate> out;
    out.reserve(grid.size());
    RefitCache refits(train, kind);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(train.dim());
    for (double lam : grid) {
        const SolveResult r = solve_fista(train, kind, projector, lam, zero, opts);
        NodeCandidate cand = refits.candidate(r.w);
        cand.lambda = lam;
        out.push_back(std::move(cand));
    }
    return out;
}

// Index of the best candidate: highest validation likelihood when a
// validation problem is given (ties to the earlier, more regularized entry),
// otherwise smallest per-node BIC score.
size_t select_candidate(const std::vector<NodeCandidate>& cands, const NodeProblem* validation,
                        int n) {
    size_t best = 0;
    if (validation != nullptr) {
        double best_ll = validation_conditional_likelihood(cands[0].w, *validation);
        for (size_t i = 1; i < cands.size(); ++i) {
            const double ll = validation_conditional_likelihood(cands[i].w, *validation);
            if (ll > best_ll) {
                best_ll = ll;
                best = i;
            }
        }
    } else {
        auto node_bic = [n](const NodeCandidate& c) {
            int nnz = 0;
            for (Eigen::Index i = 0; i < c.w.size(); ++i) nnz += c.w(i) != 0.0;
            return std::log(static_cast<double>(n)) * nnz +
                   2.0 * n * c.train_logistic_loss;
        };
        double best_score = node_bic(cands[0]);
        for (size_t i = 1; i < cands.size(); ++i) {
            const double score = node_bic(cands[i]);
            if (score < best_score) {
                best_score = score;
                best = i;
            }
        }
    }
    return best;
}

}  // namespace

std::vector<NodeCandidate> fit_node(const NodeProblem& train, const MethodSpec& spec,
                                    const NodeProblem* validation) {
    if (spec.tuning == Tuning::ValidationLikelihood && validation == nullptr) {
        throw std::invalid_argument("validation-likelihood tuning needs a validation set");
    }
    SolveOptions opts = spec.solve;
    if (opts.sigma_max_hint <= 0.0) opts.sigma_max_hint = gram_spectral_norm(train);
    const LossKind kind = loss_of(spec.method);
    const std::vector<double> lambda_grid =
        spec.lambda_grid.empty() ? default_lambda_grid(train) : spec.lambda_grid;

    if (is_l1_family(spec.method)) {
        const Projector projector = spec.method == Method::L1ConstrLr
                                        ? Projector::L1Ball
                                        : Projector::SoftThreshold;
        return l1_path(train, kind, projector, lambda_grid, opts);
    }

    // L0 methods: continuation over k, started from the matching L1 solution.
    const std::vector<NodeCandidate> init_path =
        l1_path(train, kind, Projector::SoftThreshold, lambda_grid, opts);
    const size_t pick = select_candidate(init_path, validation, train.n());
    const Eigen::VectorXd w_init = init_path[pick].w_raw;

    const std::vector<int> k_grid =
        spec.k_grid.empty() ? default_k_grid(train.dim()) : spec.k_grid;
    const auto path = continuation_path(train, kind, k_grid, w_init, opts);

    std::vector<NodeCandidate> out;
    out.reserve(path.size());
    for (const auto& [k, result] : path) {
        NodeCandidate cand = make_candidate(train, kind, result.w_pre_refit);
        cand.k = k;
        out.push_back(std::move(cand));
    }
    return out;
}

ConnectivityMatrix assemble_graph(const std::vector<Eigen::VectorXd>& node_solutions) {
    const int p = static_cast<int>(node_solutions.size());
    Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(p, p);
    for (int j = 0; j < p; ++j) {
        if (node_solutions[j].size() != p - 1) {
            throw std::invalid_argument("node solution has the wrong dimension");
        }
        int k = 0;
        for (int l = 0; l < p; ++l) {
            if (l != j) rows(j, l) = node_solutions[j](k++);
        }
    }
    return ConnectivityMatrix(0.5 * (rows + rows.transpose()));
}

ConnectivityMatrix hard_threshold(const ConnectivityMatrix& w, double tau) {
    if (tau < 0.0) throw std::invalid_argument("threshold must be >= 0");
    Eigen::MatrixXd out = w.weights();
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        for (Eigen::Index j = 0; j < out.cols(); ++j) {
            if (std::abs(out(i, j)) < tau) out(i, j) = 0.0;
        }
    }
    return ConnectivityMatrix(std::move(out));
}

namespace {

void check_common_grid(const std::vector<std::vector<NodeCandidate>>& per_node) {
    if (per_node.empty() || per_node.front().empty()) {
        throw std::invalid_argument("no candidates to select from");
    }
    for (const auto& cands : per_node) {
        if (cands.size() != per_node.front().size()) {
            throw std::invalid_argument("candidate grids differ across nodes");
        }
    }
}

}  // namespace

double bic_score(const std::vector<std::vector<NodeCandidate>>& per_node, int n, int k) {
    check_common_grid(per_node);
    const int p = static_cast<int>(per_node.size());
    std::vector<Eigen::VectorXd> solutions(p);
    double sum_loss = 0.0;
    for (int j = 0; j < p; ++j) {
        const auto it = std::find_if(per_node[j].begin(), per_node[j].end(),
                                     [k](const NodeCandidate& c) { return c.k == k; });
        if (it == per_node[j].end()) throw std::invalid_argument("no candidate at requested k");
        solutions[j] = it->w;
        sum_loss += it->train_logistic_loss;
    }
    const auto edges = assemble_graph(solutions).edge_pairs();
    return std::log(static_cast<double>(n)) * static_cast<double>(edges.size()) +
           2.0 * n * sum_loss;
}

int bic_select(const std::vector<std::vector<NodeCandidate>>& per_node, int n) {
    check_common_grid(per_node);
    int best_k = 0;
    double best_score = std::numeric_limits<double>::infinity();
    // Candidate lists are ordered by k descending; scanning in reverse visits
    // smaller k first so ties resolve to the smaller k.
    for (size_t idx = per_node.front().size(); idx-- > 0;) {
        const int k = per_node.front()[idx].k;
        const double score = bic_score(per_node, n, k);
        if (score < best_score) {
            best_score = score;
            best_k = k;
        }
    }
    return best_k;
}

GraphEstimate fit_graph(const SampleSet& train, const SampleSet* validation,
                        const MethodSpec& spec, std::optional<double> threshold) {
    const int p = train.p();
    if (validation != nullptr && validation->p() != p) {
        throw std::invalid_argument("validation set has a different node count");
    }

    std::vector<std::vector<NodeCandidate>> per_node(p);
    std::vector<NodeProblem> val_probs(p);
    for (int j = 0; j < p; ++j) {
        const NodeProblem train_j = node_problem(train, j);
        if (validation != nullptr) val_probs[j] = node_problem(*validation, j);
        try {
            per_node[j] = fit_node(train_j, spec, validation ? &val_probs[j] : nullptr);
        } catch (const SolveError& e) {
            throw SolveError(std::string(e.what()) + " (node " + std::to_string(j) + ")",
                             e.iteration);
        }
    }

    GraphEstimate est;
    est.method = spec.method;
    std::vector<Eigen::VectorXd> chosen(p);

    if (is_l1_family(spec.method)) {
        est.lambda_by_node.resize(p);
        for (int j = 0; j < p; ++j) {
            const size_t pick = select_candidate(
                per_node[j], spec.tuning == Tuning::ValidationLikelihood ? &val_probs[j] : nullptr,
                train.n());
            chosen[j] = per_node[j][pick].w;
            est.lambda_by_node[j] = per_node[j][pick].lambda;
        }
    } else {
        int k_hat;
        if (spec.tuning == Tuning::Bic) {
            k_hat = bic_select(per_node, train.n());
        } else {
            // Validation tuning for L0: a single k maximizing the summed
            // conditional likelihood over nodes.
            const size_t n_k = per_node.front().size();
            size_t best_idx = 0;
            double best_ll = -std::numeric_limits<double>::infinity();
            for (size_t idx = 0; idx < n_k; ++idx) {
                double ll = 0.0;
                for (int j = 0; j < p; ++j) {
                    ll += validation_conditional_likelihood(per_node[j][idx].w, val_probs[j]);
                }
                if (ll > best_ll) {
                    best_ll = ll;
                    best_idx = idx;
                }
            }
            k_hat = per_node.front()[best_idx].k;
        }
        est.k = k_hat;
        for (int j = 0; j < p; ++j) {
            const auto it = std::find_if(per_node[j].begin(), per_node[j].end(),
                                         [k_hat](const NodeCandidate& c) { return c.k == k_hat; });
            chosen[j] = it->w;
        }
    }

    est.w_raw = assemble_graph(chosen);
    est.w_hat = (threshold.has_value() && is_l1_family(spec.method))
                    ? hard_threshold(est.w_raw, *threshold)
                    : est.w_raw;
    return est;
}

}  // namespace ising
