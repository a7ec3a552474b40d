#include "advreg/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace advreg {

namespace {

constexpr double kStepFloorRatio = 1e-15;

struct LossState {
    Vector sd;  ///< Sigma (theta - theta_opt)
    double sigma = 0.0;
    double nq = 0.0;
    double g = 0.0;  ///< c1 sigma + eps nq
    double loss = 0.0;
};

LossState eval(const GaussianLinearModel& model, const AttackSpec& attack,
               const Vector& theta) {
    LossState st;
    const Vector d = theta - model.theta_opt;
    st.sd = model.sigma * d;
    st.sigma = std::sqrt(std::max(d.dot(st.sd), 0.0) + model.sigma_w * model.sigma_w);
    st.nq = norm_value(theta, attack.dual_q());
    st.g = LossConstants::c1() * st.sigma + attack.epsilon * st.nq;
    st.loss = LossConstants::c2() * st.sigma * st.sigma + st.g * st.g;
    return st;
}

Vector subgradient_from(const LossState& st, const AttackSpec& attack, const Vector& theta) {
    const double c1 = LossConstants::c1();
    const double c2 = LossConstants::c2();
    Vector g = (2.0 * c2 + 2.0 * st.g * c1 / st.sigma) * st.sd;
    if (attack.epsilon > 0.0) {
        g += (2.0 * st.g * attack.epsilon) * norm_subgradient(theta, attack.dual_q());
    }
    return g;
}

void apply_mask(Vector& v, const std::vector<std::uint8_t>& mask) {
    if (mask.empty()) return;
    for (Index i = 0; i < v.size(); ++i) {
        if (!mask[static_cast<std::size_t>(i)]) v[i] = 0.0;
    }
}

/// Exact optimality test for theta = 0: zero minimizes the masked problem iff
/// ||(Sigma theta_opt)_mask||_p <= c1 sigma_0 eps.
bool zero_is_optimal(const Vector& v_masked, Norm attack_p, double sigma0, double eps) {
    if (eps <= 0.0) return false;
    return norm_value(v_masked, attack_p) <= LossConstants::c1() * sigma0 * eps;
}

}  // namespace

void OptimizerOptions::validate(Index dim) const {
    if (max_iters < 1) throw std::invalid_argument("OptimizerOptions: max_iters must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("OptimizerOptions: tol must be > 0");
    if (!(step > 0.0)) throw std::invalid_argument("OptimizerOptions: step must be > 0");
    if (subepoch < 1 || window < 1) {
        throw std::invalid_argument("OptimizerOptions: subepoch and window must be >= 1");
    }
    if (!support_mask.empty()) {
        if (static_cast<Index>(support_mask.size()) != dim) {
            throw std::invalid_argument("OptimizerOptions: support_mask size mismatch");
        }
        bool any = false;
        for (auto b : support_mask) any = any || b;
        if (!any) throw std::invalid_argument("OptimizerOptions: support_mask is empty");
    }
    if (init.size() != 0 && init.size() != dim) {
        throw std::invalid_argument("OptimizerOptions: init size mismatch");
    }
}

Vector norm_subgradient(const Vector& theta, Norm q) {
    const Index m = theta.size();
    Vector s = Vector::Zero(m);
    switch (q) {
        case Norm::L1:
            for (Index i = 0; i < m; ++i) {
                if (theta[i] > 0.0) s[i] = 1.0;
                else if (theta[i] < 0.0) s[i] = -1.0;
            }
            break;
        case Norm::L2: {
            const double n = theta.norm();
            if (n > 0.0) s = theta / n;
            break;
        }
        case Norm::LInf: {
            Index j = -1;
            double best = 0.0;
            for (Index i = 0; i < m; ++i) {
                const double a = std::abs(theta[i]);
                if (a > best) {
                    best = a;
                    j = i;
                }
            }
            if (j >= 0) s[j] = theta[j] > 0.0 ? 1.0 : -1.0;
            break;
        }
    }
    return s;
}

Vector subgradient(const GaussianLinearModel& model, const AttackSpec& attack,
                   const Vector& theta) {
    attack.validate();
    if (theta.size() != model.dim()) {
        throw std::invalid_argument("subgradient: theta dimension mismatch");
    }
    return subgradient_from(eval(model, attack, theta), attack, theta);
}

FitResult minimize_adversarial_loss(const GaussianLinearModel& model,
                                    const AttackSpec& attack,
                                    const OptimizerOptions& options) {
    attack.validate();
    const Index m = model.dim();
    options.validate(m);

    // Degenerate-budget shortcut (see header).
    {
        Vector v = model.sigma * model.theta_opt;
        apply_mask(v, options.support_mask);
        const double sigma0 = sigma_theta(model, Vector::Zero(m));
        if (zero_is_optimal(v, attack.norm_p, sigma0, attack.epsilon)) {
            FitResult res;
            if (v.isZero(0.0)) {
                res.theta_hat = Vector::Zero(m);
            } else {
                Vector u = dual_achieving_vector(v, attack.dual_q());
                apply_mask(u, options.support_mask);
                u /= u.norm();
                const double l0 = sigma0 * sigma0;
                const double rise = 2.0 * LossConstants::c1() * attack.epsilon * sigma0 *
                                        norm_value(u, attack.dual_q()) -
                                    2.0 * u.dot(v);
                const double t =
                    std::min(1e-10, 1e-12 * (1.0 + l0) / std::max(rise, 1e-300));
                res.theta_hat = t * u;
            }
            res.objective = adversarial_loss(model, res.theta_hat, attack);
            res.iterations = 0;
            res.converged = true;
            return res;
        }
    }

    Vector theta = options.init.size() ? options.init : Vector::Zero(m);
    apply_mask(theta, options.support_mask);

    LossState st = eval(model, attack, theta);
    Vector best = theta;
    double best_loss = st.loss;

    const double step0 = options.step * std::max(1.0, model.theta_opt.norm());
    double step = step0;
    const double floor = step0 * kStepFloorRatio;

    Vector avg_acc = Vector::Zero(m);
    double sub_best = best_loss;
    double win_best = best_loss;
    bool converged = false;
    int it = 0;

    while (it < options.max_iters) {
        Vector g = subgradient_from(st, attack, theta);
        apply_mask(g, options.support_mask);
        const double gn = g.norm();
        if (gn == 0.0) {
            converged = true;  // exact stationary point
            break;
        }
        theta -= (step / gn) * g;
        st = eval(model, attack, theta);
        avg_acc += theta;
        if (st.loss < best_loss) {
            best_loss = st.loss;
            best = theta;
        }
        ++it;
        if (it % options.subepoch == 0) {
            // On nonsmooth faces the iterate oscillates around the optimum;
            // the subepoch average lands on the face itself.
            const Vector avg = avg_acc / options.subepoch;
            avg_acc.setZero();
            const double avg_loss = eval(model, attack, avg).loss;
            if (avg_loss < best_loss) {
                best_loss = avg_loss;
                best = avg;
            }
            if (sub_best - best_loss <= options.tol * (1.0 + std::abs(best_loss))) {
                step *= 0.5;
                if (step < floor) {
                    converged = true;
                    break;
                }
            }
            sub_best = best_loss;
        }
        if (it % options.window == 0) {
            if (win_best - best_loss <= options.tol * (1.0 + std::abs(best_loss)) &&
                step < floor * 8.0) {
                converged = true;
                break;
            }
            win_best = best_loss;
        }
    }

    FitResult res;
    res.theta_hat = best;
    res.objective = adversarial_loss(model, best, attack);
    res.iterations = it;
    res.converged = converged;
    return res;
}

double nfs(const Vector& theta, const std::vector<Index>& core_set) {
    const double total = theta.squaredNorm();
    if (total == 0.0) {
        throw std::domain_error("nfs: undefined for the zero vector");
    }
    double core = 0.0;
    for (Index i : core_set) {
        if (i >= 0 && i < theta.size()) core += theta[i] * theta[i];
    }
    return (total - core) / total;
}

}  // namespace advreg
