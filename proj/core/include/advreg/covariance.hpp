#pragma once

#include <cstdint>
#include <vector>

#include "advreg/linear_model.hpp"
#include "advreg/rng.hpp"

namespace advreg {

/// Recipe for the correlated core/spurious factor matrix. The covariance of
/// the inputs is QQ' where Q is the row-normalized (and optionally scaled /
/// perturbed) version of the template below.
struct QMatrixSpec {
    Index m = 5;               ///< total feature count
    Index c = 2;               ///< core feature count, 1 <= c < m
    double eta = 0.25;         ///< core/spurious correlation strength
    double spurious_scale = 1.0;

    /// Throws std::invalid_argument when the counts or parameters are off.
    void validate() const;
};

/// Template matrix: core block has 1 on the diagonal and 1/2 off-diagonal;
/// each spurious row carries eta under every core column and 1 on its own
/// diagonal.
Matrix build_q_tilde(const QMatrixSpec& spec);

/// Divides every row by its Euclidean norm. Throws on a zero row.
Matrix normalize_rows(const Matrix& q_tilde);

/// Multiplies the spurious rows (indices >= spec.c) by s > 0.
Matrix scale_spurious_rows(const Matrix& q, const QMatrixSpec& spec, double s);

/// Adds independent N(0, sigma_q^2) noise to every entry of every spurious
/// row; core rows pass through untouched. Pure function of (inputs, seed).
Matrix perturb_spurious_rows(const Matrix& q, const QMatrixSpec& spec, double sigma_q,
                             std::uint64_t seed);

/// Sigma = QQ'.
Matrix covariance(const Matrix& q);

/// Fully assembled Q for a spec: build -> normalize -> scale.
Matrix build_q(const QMatrixSpec& spec);

/// theta_opt with ones on the first c coordinates.
Vector default_theta_opt(Index m, Index c);

std::vector<Index> core_indices(Index c);

/// Model whose inputs are distributed as Q N(0, I).
GaussianLinearModel make_model(const Matrix& q, const Vector& theta_opt, double sigma_w,
                               std::vector<Index> core_set);

/// Convenience: Eq-6-family model from a spec with unit theta_opt on the core.
GaussianLinearModel make_model(const QMatrixSpec& spec, double sigma_w = 0.1);

struct Sample {
    Matrix x;  ///< n x m inputs
    Vector y;  ///< n responses
};

/// Draws n samples of (x, y) with x = Q z, z ~ N(0, I), y = <x, theta_opt> + w.
Sample sample_data(const Matrix& q, const Vector& theta_opt, double sigma_w, Index n,
                   std::uint64_t seed);

}  // namespace advreg
