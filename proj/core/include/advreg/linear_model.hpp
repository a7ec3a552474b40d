#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace advreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Attack norms supported by the closed-form loss.
enum class Norm : std::uint8_t { L1, L2, LInf };

/// Dual exponent: 1 <-> inf, 2 <-> 2.
Norm dual_exponent(Norm p);

std::string to_string(Norm n);

/// Parses "l1" / "l2" / "linf"; throws std::invalid_argument otherwise.
Norm parse_norm(const std::string& s);

/// ||v||_n.
double norm_value(const Vector& v, Norm n);

/// Constants of the closed-form adversarial loss. c1 is E|N(0,1)|; the split
/// c1^2 + c2 = 1 holds exactly in double precision by construction.
struct LossConstants {
    static double c1();
    static double c2();
};

/// An lp-bounded input perturbation budget. dual_q() is the norm appearing in
/// the closed-form penalty term.
struct AttackSpec {
    Norm norm_p = Norm::L2;
    double epsilon = 0.0;

    Norm dual_q() const { return dual_exponent(norm_p); }

    /// Throws std::invalid_argument if epsilon < 0 or not finite.
    void validate() const;
};

/// Y = <X, theta_opt> + W with X ~ N(0, sigma), W ~ N(0, sigma_w^2).
/// theta_opt is supported on core_set; the remaining coordinates are the
/// spurious features.
struct GaussianLinearModel {
    Matrix sigma;
    Vector theta_opt;
    double sigma_w = 0.1;
    std::vector<Index> core_set;

    Index dim() const { return theta_opt.size(); }

    bool is_core(Index i) const;

    /// Checks symmetry, positive semidefiniteness (eigenvalues >= -1e-10),
    /// sigma_w > 0 and that theta_opt vanishes off the core set.
    /// Throws std::invalid_argument on violation.
    void validate() const;
};

/// sigma_theta = sqrt((theta - theta_opt)' Sigma (theta - theta_opt) + sigma_w^2).
/// Always >= sigma_w.
double sigma_theta(const GaussianLinearModel& model, const Vector& theta);

/// Population squared loss E[(Y - <X, theta>)^2] = sigma_theta^2.
double standard_loss(const GaussianLinearModel& model, const Vector& theta);

/// Closed-form population adversarial loss
///   c2 * sigma_theta^2 + (c1 * sigma_theta + eps * ||theta||_q)^2
/// with q the dual exponent of the attack norm. Convex in theta, equal to the
/// standard loss at eps = 0.
double adversarial_loss(const GaussianLinearModel& model, const Vector& theta,
                        const AttackSpec& attack);

/// Maximizer u of <u, v> over the unit ball of ||.||_q. Attains <u, v> =
/// ||v||_p (Hoelder equality; p dual to q). Ties on the q = inf branch break
/// to the lowest index; sign(0) is taken as +1.
Vector dual_achieving_vector(const Vector& v, Norm q);

/// Worst-case perturbation for the inner maximization at one sample: returns
/// delta with ||delta||_p <= eps and <delta, theta> = -sign(r) eps ||theta||_q
/// where r = y - <x, theta>. sign(0) := +1; the l1 branch puts the whole
/// budget on the lowest max-|theta_i| coordinate. theta = 0 yields delta = 0.
Vector worst_case_delta(const Vector& x, double y, const Vector& theta,
                        const AttackSpec& attack);

/// Value of the inner maximization: (|y - <x, theta>| + eps ||theta||_q)^2.
double inner_max_value(const Vector& x, double y, const Vector& theta,
                       const AttackSpec& attack);

}  // namespace advreg
