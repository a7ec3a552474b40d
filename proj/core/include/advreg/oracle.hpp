#pragma once

#include <cstdint>

#include "advreg/linear_model.hpp"
#include "advreg/rng.hpp"

namespace advreg {

/// Monte-Carlo estimate next to the closed form it certifies.
struct OracleReport {
    double estimate = 0.0;
    double standard_error = 0.0;
    double closed_form = 0.0;
    double z_score = 0.0;
};

/// Estimates the population adversarial loss by averaging the inner-max value
/// over n draws of (x, y) with x = Q z, z ~ N(0, I), and compares it to the
/// closed form under Sigma = QQ'.
OracleReport monte_carlo_adversarial_loss(const Matrix& q, const Vector& theta_opt,
                                          double sigma_w, const Vector& theta,
                                          const AttackSpec& attack, Index n,
                                          std::uint64_t seed);

/// Uniform draw from the lp ball of radius eps (l2 by direction/radius,
/// l1 by the exponential-sign construction, linf per coordinate).
Vector sample_lp_ball(Rng& rng, Index m, Norm p, double eps);

/// Best inner-max value found over `probes` random feasible perturbations
/// plus the analytic worst-case candidate. Never exceeds inner_max_value and
/// attains it through the analytic candidate.
double brute_force_inner_max(const Vector& x, double y, const Vector& theta,
                             const AttackSpec& attack, Index probes, std::uint64_t seed);

/// Population squared loss when the inputs follow N(0, Q'Q'^T) while the
/// labeling function (theta_opt, sigma_w) is unchanged:
/// (theta - theta_opt)' Q'Q'^T (theta - theta_opt) + sigma_w^2.
double shifted_standard_loss(const Vector& theta, const Matrix& q_shifted,
                             const Vector& theta_opt, double sigma_w);

/// Exhaustive minimization of the adversarial loss over [lo, hi]^m by grid
/// enumeration with recursive window refinement around the running argmin
/// (valid for the convex objective). Independent of the subgradient path;
/// practical for m <= 3 only.
double grid_search_minimum(const GaussianLinearModel& model, const AttackSpec& attack,
                           double lo, double hi, double final_pitch = 1e-7);

}  // namespace advreg
