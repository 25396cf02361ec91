#include "ising/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace ising {

namespace {

constexpr double kRefitCap = 10.0;  // box bound during the on-support refit

bool l0l2_feasible(const Eigen::VectorXd& w, int k, double theta) {
    int nnz = 0;
    for (Eigen::Index i = 0; i < w.size(); ++i) nnz += w(i) != 0.0;
    return nnz <= k && w.norm() <= theta * (1.0 + 1e-12) + 1e-300;
}

double resolve_sigma(const NodeProblem& prob, const SolveOptions& opts) {
    return opts.sigma_max_hint > 0.0 ? opts.sigma_max_hint : gram_spectral_norm(prob);
}

}  // namespace

Eigen::VectorXd prox_l0l2(const Eigen::VectorXd& v, int k, double theta) {
    const int d = static_cast<int>(v.size());
    if (k < 1) throw std::invalid_argument("cardinality bound must be >= 1");
    if (theta < 0.0) throw std::invalid_argument("L2 radius must be >= 0");
    k = std::min(k, d);

    std::vector<int> idx(d);
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&v](int a, int b) {
        const double fa = std::abs(v(a)), fb = std::abs(v(b));
        return fa != fb ? fa > fb : a < b;  // ties to the lowest index
    });

    double tau_sq = 0.0;
    for (int i = 0; i < k; ++i) tau_sq += v(idx[i]) * v(idx[i]);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d);
    if (tau_sq == 0.0) return out;
    const double scale = std::min(1.0, theta / std::sqrt(tau_sq));
    for (int i = 0; i < k; ++i) out(idx[i]) = scale * v(idx[i]);
    return out;
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& v, double radius) {
    if (radius < 0.0) throw std::invalid_argument("L1 radius must be >= 0");
    if (v.lpNorm<1>() <= radius) return v;
    if (radius == 0.0) return Eigen::VectorXd::Zero(v.size());

    // Sort-based simplex projection applied to |v|.
    std::vector<double> u(v.data(), v.data() + v.size());
    for (double& x : u) x = std::abs(x);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, tau = 0.0;
    for (size_t j = 0; j < u.size(); ++j) {
        cum += u[j];
        const double candidate = (cum - radius) / static_cast<double>(j + 1);
        if (u[j] - candidate > 0.0) tau = candidate;
    }
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i)) - tau;
        out(i) = mag > 0.0 ? (v(i) > 0.0 ? mag : -mag) : 0.0;
    }
    return out;
}

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double tau) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i)) - tau;
        out(i) = mag > 0.0 ? (v(i) > 0.0 ? mag : -mag) : 0.0;
    }
    return out;
}

Eigen::VectorXd refit_on_support(const NodeProblem& prob, LossKind kind,
                                 const Eigen::VectorXd& w) {
    std::vector<int> support;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w(i) != 0.0) support.push_back(static_cast<int>(i));
    }
    if (support.empty()) return w;

    // Reduced problem over the support columns only.
    NodeProblem sub;
    sub.node = prob.node;
    sub.y = prob.y;
    sub.X.resize(prob.n(), static_cast<int>(support.size()));
    for (size_t i = 0; i < support.size(); ++i) sub.X.col(i) = prob.X.col(support[i]);

    Eigen::VectorXd ws(support.size());
    for (size_t i = 0; i < support.size(); ++i) {
        ws(i) = std::clamp(w(support[i]), -kRefitCap, kRefitCap);
    }

    double f = loss_value(sub, kind, ws);
    constexpr int kMaxIter = 500;
    for (int it = 0; it < kMaxIter; ++it) {
        const LossEval ev = eval_loss(sub, kind, ws);
        double step = 1.0;
        Eigen::VectorXd next;
        double f_next = f;
        bool improved = false;
        for (int half = 0; half < 60; ++half) {
            Eigen::VectorXd cand = ws - step * ev.gradient;
            for (Eigen::Index i = 0; i < cand.size(); ++i) {
                cand(i) = std::clamp(cand(i), -kRefitCap, kRefitCap);
            }
            const double fc = loss_value(sub, kind, cand);
            if (std::isfinite(fc) && fc < f) {
                next = std::move(cand);
                f_next = fc;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) break;
        const double move_sq = (next - ws).squaredNorm();
        ws = std::move(next);
        f = f_next;
        if (move_sq <= 1e-8) break;
    }

    Eigen::VectorXd out = Eigen::VectorXd::Zero(w.size());
    for (size_t i = 0; i < support.size(); ++i) out(support[i]) = ws(i);
    // If the box clamp made things worse (only possible for |w_i| > cap),
    // keep the input point.
    if (loss_value(prob, kind, out) > loss_value(prob, kind, w)) return w;
    return out;
}

SolveResult solve_l0l2(const NodeProblem& prob, LossKind kind, const L0L2Constraint& cons,
                       const Eigen::VectorXd& w_init, const SolveOptions& opts) {
    const int d = prob.dim();
    if (w_init.size() != d) throw std::invalid_argument("w_init dimension mismatch");
    if (cons.k < 1) throw std::invalid_argument("cardinality bound must be >= 1");
    if (cons.theta < 0.0) throw std::invalid_argument("L2 radius must be >= 0");
    if (opts.step_scale <= 1.0) throw std::invalid_argument("step_scale must exceed 1");
    const int k = std::min(cons.k, d);
    const double theta = cons.theta;
    if (kind == LossKind::InteractionScreening && !std::isfinite(theta)) {
        throw std::invalid_argument("ISE solve needs a finite L2 radius");
    }

    const double sigma = resolve_sigma(prob, opts);
    // The iterates satisfy ||w||_1 <= sqrt(k) theta, and that bound is convex,
    // so the curvature constant is valid on every segment between iterates.
    const double lambda_eff =
        kind == LossKind::InteractionScreening ? std::sqrt(static_cast<double>(k)) * theta : 0.0;
    const double C = lipschitz_from_sigma(sigma, prob.n(), kind, lambda_eff);
    const double D = opts.step_scale * C;

    SolveResult res;
    res.lipschitz = C;
    res.step_bound = D;

    Eigen::VectorXd w = w_init;
    bool feasible = l0l2_feasible(w, k, theta);
    LossEval ev = eval_loss(prob, kind, w);
    if (!std::isfinite(ev.value)) throw SolveError("non-finite loss at the initial point", 0);
    if (feasible) res.loss_trace.push_back(ev.value);

    for (int t = 1; t <= opts.t_max; ++t) {
        Eigen::VectorXd w_next = prox_l0l2(w - ev.gradient / D, k, theta);
        const double step_sq = (w_next - w).squaredNorm();
        if (feasible) res.min_step_sq = std::min(res.min_step_sq, step_sq);
        w = std::move(w_next);
        feasible = true;
        ev = eval_loss(prob, kind, w);
        if (!std::isfinite(ev.value)) throw SolveError("non-finite loss during solve", t);
        res.loss_trace.push_back(ev.value);
        res.iterations = t;
        if (step_sq <= opts.epsilon) {
            res.converged = true;
            break;
        }
    }

    res.w_pre_refit = w;
    res.w = refit_on_support(prob, kind, w);
    res.loss = loss_value(prob, kind, res.w);
    return res;
}

SolveResult solve_fista(const NodeProblem& prob, LossKind kind, Projector projector,
                        double lambda, const Eigen::VectorXd& w_init,
                        const SolveOptions& opts) {
    const int d = prob.dim();
    if (w_init.size() != d) throw std::invalid_argument("w_init dimension mismatch");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");

    const double sigma = resolve_sigma(prob, opts);
    double lambda_lip = 0.0;
    if (kind == LossKind::InteractionScreening) {
        // Working L1 ball for the curvature bound: the constraint radius when
        // projecting, otherwise a bound grown from the warm start.
        lambda_lip = opts.ise_l1_bound > 0.0
                         ? opts.ise_l1_bound
                         : std::max(1.0, 2.0 * w_init.lpNorm<1>());
        if (projector == Projector::L1Ball) lambda_lip = std::max(lambda_lip, lambda);
    }
    const double C = lipschitz_from_sigma(sigma, prob.n(), kind, lambda_lip);
    const double step = 1.0 / C;

    const bool penalized = projector == Projector::SoftThreshold;
    auto objective = [&](const Eigen::VectorXd& x) {
        const double f = loss_value(prob, kind, x);
        return penalized ? f + lambda * x.lpNorm<1>() : f;
    };

    SolveResult res;
    res.lipschitz = C;
    res.step_bound = C;

    Eigen::VectorXd w = penalized ? w_init : project_l1_ball(w_init, lambda);
    double obj = objective(w);
    if (!std::isfinite(obj)) throw SolveError("non-finite objective at the initial point", 0);
    res.loss_trace.push_back(obj);

    Eigen::VectorXd best_w = w;
    double best_obj = obj;
    Eigen::VectorXd z = w;
    double momentum = 1.0;

    for (int t = 1; t <= opts.t_max; ++t) {
        const LossEval ev = eval_loss(prob, kind, z);
        if (!std::isfinite(ev.value)) throw SolveError("non-finite loss during solve", t);
        const Eigen::VectorXd v = z - step * ev.gradient;
        Eigen::VectorXd w_next =
            penalized ? soft_threshold(v, lambda * step) : project_l1_ball(v, lambda);
        const double step_sq = (w_next - w).squaredNorm();
        const double obj_next = objective(w_next);
        if (!std::isfinite(obj_next)) throw SolveError("non-finite objective during solve", t);
        res.loss_trace.push_back(obj_next);
        if (obj_next < best_obj) {
            best_obj = obj_next;
            best_w = w_next;
        }
        const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
        z = w_next + ((momentum - 1.0) / momentum_next) * (w_next - w);
        momentum = momentum_next;
        w = std::move(w_next);
        res.iterations = t;
        if (step_sq <= opts.epsilon) {
            res.converged = true;
            break;
        }
    }

    res.w = best_w;
    res.w_pre_refit = best_w;
    res.loss = best_obj;
    res.min_step_sq = 0.0;
    return res;
}

std::vector<std::pair<int, SolveResult>> continuation_path(
    const NodeProblem& prob, LossKind kind, const std::vector<int>& k_list,
    const Eigen::VectorXd& w_full_init, const SolveOptions& opts) {
    const int d = prob.dim();
    if (k_list.empty() || k_list.front() != d || k_list.back() != 1) {
        throw std::invalid_argument("k list must run from dim down to 1");
    }
    for (size_t i = 1; i < k_list.size(); ++i) {
        if (k_list[i] >= k_list[i - 1]) {
            throw std::invalid_argument("k list must be strictly decreasing");
        }
    }

    std::vector<std::pair<int, SolveResult>> path;
    SolveResult head;
    head.w = w_full_init;
    head.w_pre_refit = w_full_init;
    head.loss = loss_value(prob, kind, w_full_init);
    head.loss_trace = {head.loss};
    head.converged = true;
    path.emplace_back(k_list.front(), std::move(head));

    Eigen::VectorXd carry = w_full_init;
    for (size_t i = 1; i < k_list.size(); ++i) {
        const double theta = 2.0 * carry.lpNorm<1>();
        L0L2Constraint cons{k_list[i], theta};
        try {
            SolveResult r = solve_l0l2(prob, kind, cons, carry, opts);
            carry = r.w;
            path.emplace_back(k_list[i], std::move(r));
        } catch (const SolveError& e) {
            throw SolveError(std::string(e.what()) + " (k = " + std::to_string(k_list[i]) + ")",
                             e.iteration);
        }
    }
    return path;
}

void write_loss_trace(const SolveResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "iteration,loss\n";
    for (size_t t = 0; t < result.loss_trace.size(); ++t) {
        out << t << ',' << result.loss_trace[t] << '\n';
    }
}

}  // namespace ising
