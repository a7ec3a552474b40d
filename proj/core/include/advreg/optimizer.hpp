#pragma once

#include <cstdint>
#include <vector>

#include "advreg/linear_model.hpp"

namespace advreg {

/// Knobs for the subgradient solve. The step anneals geometrically: whenever
/// the best objective fails to improve by tol * (1 + |best|) over a subepoch,
/// the step halves; the solve stops once the step reaches its floor or the
/// iteration budget runs out. `window` is the coarser improvement window the
/// converged flag is reported against.
struct OptimizerOptions {
    int max_iters = 50000;
    double step = 0.1;      ///< initial step, scaled by max(1, ||theta_opt||)
    int subepoch = 150;     ///< anneal/averaging cadence
    int window = 500;       ///< improvement window for the stop test
    double tol = 1e-10;
    std::vector<std::uint8_t> support_mask;  ///< empty = all coordinates free
    Vector init;                             ///< empty = zero vector

    void validate(Index dim) const;
};

/// Outcome of a solve. theta_hat is zero outside the support mask and
/// objective always equals adversarial_loss(model, theta_hat, attack).
struct FitResult {
    Vector theta_hat;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// An element of the subdifferential of ||.||_q with the conventions:
/// q=1 sign vector with sign(0)=0; q=2 theta/||theta|| (zero at zero);
/// q=inf a signed unit mass on the first coordinate of maximal magnitude
/// (zero vector at zero).
Vector norm_subgradient(const Vector& theta, Norm q);

/// An element of the subdifferential of the closed-form adversarial loss.
/// Matches the gradient wherever the dual norm is differentiable (sigma_theta
/// is smooth everywhere since sigma_theta >= sigma_w > 0).
Vector subgradient(const GaussianLinearModel& model, const AttackSpec& attack,
                   const Vector& theta);

/// Minimizes the convex adversarial loss over theta, optionally restricted to
/// a support mask, by projected subgradient descent with geometric step
/// annealing and per-subepoch iterate averaging.
///
/// Degenerate budgets: once eps >= ||Sigma theta_opt||_p / (c1 sigma_0) the
/// exact minimizer is the zero vector (the directional derivative at zero is
/// nonnegative in every direction). The solve detects this analytically and
/// returns a vanishingly small iterate along the limiting minimizer direction
/// -- the Hoelder-equality vector of Sigma theta_opt -- so the objective is
/// still within tolerance of the optimum while the reliance diagnostics stay
/// continuous across the collapse.
FitResult minimize_adversarial_loss(const GaussianLinearModel& model,
                                    const AttackSpec& attack,
                                    const OptimizerOptions& options = {});

/// Norm fraction over spurious features: share of ||theta||^2 carried by the
/// coordinates outside core_set. Throws std::domain_error for theta = 0.
double nfs(const Vector& theta, const std::vector<Index>& core_set);

}  // namespace advreg
