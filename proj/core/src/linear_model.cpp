#include "advreg/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace advreg {

namespace {

double sign_plus(double x) { return x < 0.0 ? -1.0 : 1.0; }

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
}

}  // namespace

Norm dual_exponent(Norm p) {
    switch (p) {
        case Norm::L1: return Norm::LInf;
        case Norm::L2: return Norm::L2;
        case Norm::LInf: return Norm::L1;
    }
    throw std::invalid_argument("dual_exponent: unsupported norm selector");
}

std::string to_string(Norm n) {
    switch (n) {
        case Norm::L1: return "l1";
        case Norm::L2: return "l2";
        case Norm::LInf: return "linf";
    }
    return "?";
}

Norm parse_norm(const std::string& s) {
    if (s == "l1" || s == "L1" || s == "1") return Norm::L1;
    if (s == "l2" || s == "L2" || s == "2") return Norm::L2;
    if (s == "linf" || s == "Linf" || s == "inf") return Norm::LInf;
    throw std::invalid_argument("parse_norm: expected one of {l1, l2, linf}, got '" + s + "'");
}

double norm_value(const Vector& v, Norm n) {
    switch (n) {
        case Norm::L1: return v.lpNorm<1>();
        case Norm::L2: return v.norm();
        case Norm::LInf: return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
    }
    throw std::invalid_argument("norm_value: unsupported norm selector");
}

double LossConstants::c1() {
    static const double v = std::sqrt(2.0 / 3.14159265358979323846);
    return v;
}

double LossConstants::c2() {
    static const double v = 1.0 - c1() * c1();
    return v;
}

void AttackSpec::validate() const {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("AttackSpec: epsilon must be finite and >= 0");
    }
}

bool GaussianLinearModel::is_core(Index i) const {
    return std::find(core_set.begin(), core_set.end(), i) != core_set.end();
}

void GaussianLinearModel::validate() const {
    const Index m = theta_opt.size();
    if (sigma.rows() != m || sigma.cols() != m) {
        throw std::invalid_argument("GaussianLinearModel: sigma must be m x m");
    }
    if (!(sigma_w > 0.0)) {
        throw std::invalid_argument("GaussianLinearModel: sigma_w must be > 0");
    }
    if (!sigma.isApprox(sigma.transpose(), 1e-12)) {
        throw std::invalid_argument("GaussianLinearModel: sigma must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw std::invalid_argument("GaussianLinearModel: sigma is not PSD (eigenvalue < -1e-10)");
    }
    for (Index i = 0; i < m; ++i) {
        if (theta_opt[i] != 0.0 && !is_core(i)) {
            throw std::invalid_argument(
                "GaussianLinearModel: theta_opt has mass outside the core set at index " +
                std::to_string(i));
        }
    }
    for (Index i : core_set) {
        if (i < 0 || i >= m) {
            throw std::invalid_argument("GaussianLinearModel: core index out of range");
        }
    }
}

double sigma_theta(const GaussianLinearModel& model, const Vector& theta) {
    require_same_dim(theta, model.theta_opt, "sigma_theta");
    const Vector d = theta - model.theta_opt;
    const double quad = d.dot(model.sigma * d);
    // quad can round slightly negative for PSD sigma; clamp before the sqrt.
    return std::sqrt(std::max(quad, 0.0) + model.sigma_w * model.sigma_w);
}

double standard_loss(const GaussianLinearModel& model, const Vector& theta) {
    // sigma_theta^2, computed without the sqrt/square round trip so that the
    // shifted-loss evaluation reproduces it bit for bit at zero shift.
    require_same_dim(theta, model.theta_opt, "standard_loss");
    const Vector d = theta - model.theta_opt;
    return std::max(d.dot(model.sigma * d), 0.0) + model.sigma_w * model.sigma_w;
}

double adversarial_loss(const GaussianLinearModel& model, const Vector& theta,
                        const AttackSpec& attack) {
    attack.validate();
    const double s = sigma_theta(model, theta);
    const double nq = norm_value(theta, attack.dual_q());
    const double g = LossConstants::c1() * s + attack.epsilon * nq;
    return LossConstants::c2() * s * s + g * g;
}

Vector dual_achieving_vector(const Vector& v, Norm q) {
    Vector u = Vector::Zero(v.size());
    switch (q) {
        case Norm::LInf:
            for (Index i = 0; i < v.size(); ++i) u[i] = sign_plus(v[i]);
            break;
        case Norm::L2: {
            const double n = v.norm();
            if (n > 0.0) u = v / n;
            break;
        }
        case Norm::L1: {
            if (v.size() == 0) break;
            Index j = 0;
            for (Index i = 1; i < v.size(); ++i) {
                if (std::abs(v[i]) > std::abs(v[j])) j = i;
            }
            u[j] = sign_plus(v[j]);
            break;
        }
    }
    return u;
}

Vector worst_case_delta(const Vector& x, double y, const Vector& theta,
                        const AttackSpec& attack) {
    attack.validate();
    require_same_dim(x, theta, "worst_case_delta");
    const Index m = theta.size();
    Vector delta = Vector::Zero(m);
    if (theta.isZero(0.0) || attack.epsilon == 0.0) {
        return delta;
    }
    const double r = y - x.dot(theta);
    const double s = sign_plus(r);
    switch (attack.norm_p) {
        case Norm::L2:
            delta = (-s * attack.epsilon / theta.norm()) * theta;
            break;
        case Norm::LInf:
            for (Index i = 0; i < m; ++i) delta[i] = -s * attack.epsilon * sign_plus(theta[i]);
            break;
        case Norm::L1: {
            Index j = 0;
            for (Index i = 1; i < m; ++i) {
                if (std::abs(theta[i]) > std::abs(theta[j])) j = i;
            }
            delta[j] = -s * attack.epsilon * sign_plus(theta[j]);
            break;
        }
    }
    return delta;
}

double inner_max_value(const Vector& x, double y, const Vector& theta,
                       const AttackSpec& attack) {
    attack.validate();
    require_same_dim(x, theta, "inner_max_value");
    const double r = y - x.dot(theta);
    const double v = std::abs(r) + attack.epsilon * norm_value(theta, attack.dual_q());
    return v * v;
}

}  // namespace advreg
