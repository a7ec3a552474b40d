#include "advreg/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace advreg {

OracleReport monte_carlo_adversarial_loss(const Matrix& q, const Vector& theta_opt,
                                          double sigma_w, const Vector& theta,
                                          const AttackSpec& attack, Index n,
                                          std::uint64_t seed) {
    if (n < 100) throw std::invalid_argument("monte_carlo_adversarial_loss: n must be >= 100");
    attack.validate();
    const Index m = q.rows();
    if (theta.size() != m || theta_opt.size() != m) {
        throw std::invalid_argument("monte_carlo_adversarial_loss: dimension mismatch");
    }

    Rng rng(seed);
    Vector z(m);
    Vector x(m);
    double sum = 0.0;
    double sumsq = 0.0;
    for (Index k = 0; k < n; ++k) {
        for (Index j = 0; j < m; ++j) z[j] = rng.normal();
        x.noalias() = q * z;
        const double y = x.dot(theta_opt) + sigma_w * rng.normal();
        const double v = inner_max_value(x, y, theta, attack);
        sum += v;
        sumsq += v * v;
    }
    const double nn = static_cast<double>(n);
    OracleReport rep;
    rep.estimate = sum / nn;
    const double var = std::max(sumsq / nn - rep.estimate * rep.estimate, 0.0);
    rep.standard_error = std::sqrt(var / nn);

    GaussianLinearModel model;
    model.sigma = q * q.transpose();
    model.theta_opt = theta_opt;
    model.sigma_w = sigma_w;
    rep.closed_form = adversarial_loss(model, theta, attack);
    rep.z_score = rep.standard_error > 0.0
                      ? std::abs(rep.estimate - rep.closed_form) / rep.standard_error
                      : (rep.estimate == rep.closed_form ? 0.0 : INFINITY);
    return rep;
}

Vector sample_lp_ball(Rng& rng, Index m, Norm p, double eps) {
    Vector d(m);
    switch (p) {
        case Norm::LInf:
            for (Index i = 0; i < m; ++i) d[i] = rng.uniform(-eps, eps);
            break;
        case Norm::L2: {
            double n2 = 0.0;
            do {
                for (Index i = 0; i < m; ++i) d[i] = rng.normal();
                n2 = d.norm();
            } while (n2 == 0.0);
            const double r = eps * std::pow(rng.uniform(), 1.0 / static_cast<double>(m));
            d *= r / n2;
            break;
        }
        case Norm::L1: {
            // Exponential-sign construction: (g_1..g_m, e) with g ~ +-Exp(1)
            // and e ~ Exp(1); g / (sum |g| + e) is uniform in the l1 ball.
            double sum = 0.0;
            for (Index i = 0; i < m; ++i) {
                const double e = -std::log(1.0 - rng.uniform());
                const double s = rng.uniform() < 0.5 ? -1.0 : 1.0;
                d[i] = s * e;
                sum += e;
            }
            const double extra = -std::log(1.0 - rng.uniform());
            d *= eps / (sum + extra);
            break;
        }
    }
    return d;
}

double brute_force_inner_max(const Vector& x, double y, const Vector& theta,
                             const AttackSpec& attack, Index probes, std::uint64_t seed) {
    if (probes < 1) throw std::invalid_argument("brute_force_inner_max: probes must be >= 1");
    attack.validate();
    const Index m = theta.size();
    Rng rng(seed);

    auto value_at = [&](const Vector& delta) {
        const double r = y - (x + delta).dot(theta);
        return r * r;
    };

    double best = value_at(worst_case_delta(x, y, theta, attack));
    for (Index k = 0; k < probes; ++k) {
        best = std::max(best, value_at(sample_lp_ball(rng, m, attack.norm_p, attack.epsilon)));
    }
    return best;
}

double shifted_standard_loss(const Vector& theta, const Matrix& q_shifted,
                             const Vector& theta_opt, double sigma_w) {
    if (theta.size() != theta_opt.size() || q_shifted.rows() != theta.size()) {
        throw std::invalid_argument("shifted_standard_loss: dimension mismatch");
    }
    const Matrix sigma = q_shifted * q_shifted.transpose();
    const Vector d = theta - theta_opt;
    return std::max(d.dot(sigma * d), 0.0) + sigma_w * sigma_w;
}

double grid_search_minimum(const GaussianLinearModel& model, const AttackSpec& attack,
                           double lo, double hi, double final_pitch) {
    const Index m = model.dim();
    if (m > 3) throw std::invalid_argument("grid_search_minimum: m must be <= 3");
    if (!(hi > lo)) throw std::invalid_argument("grid_search_minimum: empty box");

    constexpr int kPoints = 13;
    Vector center = Vector::Constant(m, 0.5 * (lo + hi));
    double half = 0.5 * (hi - lo);
    double best = INFINITY;
    Vector best_point = center;

    Vector probe(m);
    int idx[3] = {0, 0, 0};
    while (2.0 * half / (kPoints - 1) > final_pitch) {
        const double pitch = 2.0 * half / (kPoints - 1);
        const Index levels = static_cast<Index>(std::pow(kPoints, static_cast<int>(m)));
        for (Index flat = 0; flat < levels; ++flat) {
            Index rest = flat;
            for (Index d = 0; d < m; ++d) {
                idx[d] = static_cast<int>(rest % kPoints);
                rest /= kPoints;
            }
            for (Index d = 0; d < m; ++d) {
                probe[d] = center[d] - half + pitch * idx[d];
            }
            const double v = adversarial_loss(model, probe, attack);
            if (v < best) {
                best = v;
                best_point = probe;
            }
        }
        // Shrink onto a +-3 cell window around the running argmin; the
        // minimizer of a convex objective cannot hide outside it at the
        // accuracy the previous level already certified.
        center = best_point;
        half = 3.0 * pitch;
    }
    return best;
}


}  // namespace advreg
