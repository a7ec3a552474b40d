#include "advreg/covariance.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace advreg {

void QMatrixSpec::validate() const {
    if (m < 2) throw std::invalid_argument("QMatrixSpec: m must be >= 2");
    if (c < 1 || c >= m) throw std::invalid_argument("QMatrixSpec: need 1 <= c < m");
    if (!(eta >= 0.0)) throw std::invalid_argument("QMatrixSpec: eta must be >= 0");
    if (!(spurious_scale > 0.0)) {
        throw std::invalid_argument("QMatrixSpec: spurious_scale must be > 0");
    }
}

Matrix build_q_tilde(const QMatrixSpec& spec) {
    spec.validate();
    Matrix qt = Matrix::Zero(spec.m, spec.m);
    for (Index i = 0; i < spec.c; ++i) {
        for (Index j = 0; j < spec.c; ++j) {
            qt(i, j) = (i == j) ? 1.0 : 0.5;
        }
    }
    for (Index i = spec.c; i < spec.m; ++i) {
        for (Index j = 0; j < spec.c; ++j) {
            qt(i, j) = spec.eta;
        }
        qt(i, i) = 1.0;
    }
    return qt;
}

Matrix normalize_rows(const Matrix& q_tilde) {
    Matrix q = q_tilde;
    for (Index i = 0; i < q.rows(); ++i) {
        const double n = q.row(i).norm();
        if (n == 0.0) {
            throw std::invalid_argument("normalize_rows: row " + std::to_string(i) +
                                        " has zero norm");
        }
        q.row(i) /= n;
    }
    return q;
}

Matrix scale_spurious_rows(const Matrix& q, const QMatrixSpec& spec, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("scale_spurious_rows: s must be > 0");
    Matrix out = q;
    for (Index i = spec.c; i < out.rows(); ++i) {
        out.row(i) *= s;
    }
    return out;
}

Matrix perturb_spurious_rows(const Matrix& q, const QMatrixSpec& spec, double sigma_q,
                             std::uint64_t seed) {
    if (!(sigma_q >= 0.0)) {
        throw std::invalid_argument("perturb_spurious_rows: sigma_q must be >= 0");
    }
    Matrix out = q;
    Rng rng(seed);
    for (Index i = spec.c; i < out.rows(); ++i) {
        for (Index j = 0; j < out.cols(); ++j) {
            out(i, j) += sigma_q * rng.normal();
        }
    }
    return out;
}

Matrix covariance(const Matrix& q) {
    if (q.rows() != q.cols()) throw std::invalid_argument("covariance: q must be square");
    return q * q.transpose();
}

Matrix build_q(const QMatrixSpec& spec) {
    Matrix q = normalize_rows(build_q_tilde(spec));
    if (spec.spurious_scale != 1.0) {
        q = scale_spurious_rows(q, spec, spec.spurious_scale);
    }
    return q;
}

Vector default_theta_opt(Index m, Index c) {
    Vector t = Vector::Zero(m);
    t.head(c).setOnes();
    return t;
}

std::vector<Index> core_indices(Index c) {
    std::vector<Index> idx(static_cast<std::size_t>(c));
    std::iota(idx.begin(), idx.end(), Index{0});
    return idx;
}

GaussianLinearModel make_model(const Matrix& q, const Vector& theta_opt, double sigma_w,
                               std::vector<Index> core_set) {
    GaussianLinearModel model;
    model.sigma = covariance(q);
    model.theta_opt = theta_opt;
    model.sigma_w = sigma_w;
    model.core_set = std::move(core_set);
    model.validate();
    return model;
}

GaussianLinearModel make_model(const QMatrixSpec& spec, double sigma_w) {
    return make_model(build_q(spec), default_theta_opt(spec.m, spec.c), sigma_w,
                      core_indices(spec.c));
}

Sample sample_data(const Matrix& q, const Vector& theta_opt, double sigma_w, Index n,
                   std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_data: n must be >= 1");
    const Index m = q.rows();
    if (theta_opt.size() != m) {
        throw std::invalid_argument("sample_data: theta_opt does not match q");
    }
    Sample out;
    out.x.resize(n, m);
    out.y.resize(n);
    Rng rng(seed);
    Vector z(m);
    for (Index k = 0; k < n; ++k) {
        for (Index j = 0; j < m; ++j) z[j] = rng.normal();
        out.x.row(k) = (q * z).transpose();
        out.y[k] = out.x.row(k).dot(theta_opt) + sigma_w * rng.normal();
    }
    return out;
}

}  // namespace advreg
