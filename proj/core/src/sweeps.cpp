#include "advreg/sweeps.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "advreg/csv.hpp"
#include "advreg/oracle.hpp"
#include "advreg/rng.hpp"

namespace advreg {

namespace {

/// Index-addressed parallel loop; output slots are preassigned so the result
/// does not depend on the thread count.
void parallel_for(int threads, std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min<int>(threads, static_cast<int>(n));
    pool.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::vector<double> resolved_epsilons(const SweepConfig& config, Norm p) {
    return config.epsilons.empty() ? default_epsilon_grid(p) : config.epsilons;
}

std::vector<double> resolved_etas(const SweepConfig& config, std::vector<double> fallback) {
    return config.etas.empty() ? std::move(fallback) : config.etas;
}

SweepRecord fit_record(const GaussianLinearModel& model, const AttackSpec& attack,
                       const OptimizerOptions& options) {
    SweepRecord row;
    const FitResult fit = minimize_adversarial_loss(model, attack, options);
    row.converged = fit.converged;
    row.iterations = fit.iterations;
    row.theta_hat = fit.theta_hat;
    row.adv_loss = fit.objective;
    row.clean_loss = standard_loss(model, fit.theta_hat);
    row.nfs_value = nfs(fit.theta_hat, model.core_set);
    return row;
}

}  // namespace

void SweepConfig::validate() const {
    if (m < 2 || c < 1 || c >= m) throw std::invalid_argument("SweepConfig: need m > c >= 1");
    if (noise_draws < 1) throw std::invalid_argument("SweepConfig: noise_draws must be >= 1");
    if (threads < 1) throw std::invalid_argument("SweepConfig: threads must be >= 1");
    if (!(sigma_w > 0.0)) throw std::invalid_argument("SweepConfig: sigma_w must be > 0");
    for (double e : epsilons) {
        if (!(e >= 0.0)) throw std::invalid_argument("SweepConfig: epsilon grid must be >= 0");
    }
    for (double s : sigma_qs) {
        if (!(s >= 0.0)) throw std::invalid_argument("SweepConfig: sigma_q grid must be >= 0");
    }
    for (double s : scales) {
        if (!(s > 0.0)) throw std::invalid_argument("SweepConfig: scale grid must be > 0");
    }
}

std::vector<double> default_epsilon_grid(Norm p) {
    const double hi = (p == Norm::LInf) ? 1.0 : 2.0;
    std::vector<double> grid(21);
    for (int i = 0; i < 21; ++i) grid[static_cast<std::size_t>(i)] = hi * i / 20.0;
    return grid;
}

std::vector<std::pair<Index, Index>> default_plateau_pairs() {
    return {{5, 4}, {8, 4}, {12, 4}, {12, 10}, {20, 10}};
}

double shift_scale_for(Norm p, const SweepConfig& config) {
    if (config.scales.size() == 1) return config.scales.front();
    return p == Norm::LInf ? 3.0 : 1.0;
}

std::vector<SweepRecord> run_nfs_sweep(const SweepConfig& config) {
    config.validate();
    const std::vector<Norm> norms =
        config.norms.empty() ? std::vector<Norm>{Norm::L1, Norm::L2, Norm::LInf} : config.norms;
    const std::vector<double> etas = resolved_etas(config, {0.0, 0.25, 0.5});

    struct Cell {
        Norm norm;
        double eta;
        double eps;
    };
    std::vector<Cell> cells;
    for (Norm p : norms) {
        for (double eta : etas) {
            for (double eps : resolved_epsilons(config, p)) cells.push_back({p, eta, eps});
        }
    }

    std::vector<SweepRecord> rows(cells.size());
    parallel_for(config.threads, cells.size(), [&](std::size_t i) {
        const Cell& cell = cells[i];
        QMatrixSpec spec{config.m, config.c, cell.eta, 1.0};
        const GaussianLinearModel model = make_model(spec, config.sigma_w);
        SweepRecord row = fit_record(model, {cell.norm, cell.eps}, config.optimizer);
        row.norm = cell.norm;
        row.eta = cell.eta;
        row.eps = cell.eps;
        row.m = config.m;
        row.c = config.c;
        row.seed = derive_seed(config.master_seed, i);
        rows[i] = std::move(row);
    });
    return rows;
}

std::vector<SweepRecord> run_scale_heatmap(const SweepConfig& config) {
    config.validate();
    const std::vector<Norm> norms =
        config.norms.empty() ? std::vector<Norm>{Norm::LInf} : config.norms;
    const std::vector<double> etas = resolved_etas(config, {0.5});
    const std::vector<double> scales =
        config.scales.empty() ? std::vector<double>{1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0}
                              : config.scales;

    struct Cell {
        Norm norm;
        double eta;
        double scale;
        double eps;
    };
    std::vector<Cell> cells;
    for (Norm p : norms) {
        for (double eta : etas) {
            for (double scale : scales) {
                for (double eps : resolved_epsilons(config, p)) {
                    cells.push_back({p, eta, scale, eps});
                }
            }
        }
    }

    std::vector<SweepRecord> rows(cells.size());
    parallel_for(config.threads, cells.size(), [&](std::size_t i) {
        const Cell& cell = cells[i];
        QMatrixSpec spec{config.m, config.c, cell.eta, cell.scale};
        const GaussianLinearModel model = make_model(spec, config.sigma_w);
        SweepRecord row = fit_record(model, {cell.norm, cell.eps}, config.optimizer);
        row.norm = cell.norm;
        row.eta = cell.eta;
        row.eps = cell.eps;
        row.scale = cell.scale;
        row.m = config.m;
        row.c = config.c;
        row.seed = derive_seed(config.master_seed, i);
        rows[i] = std::move(row);
    });
    return rows;
}

std::vector<SweepRecord> run_shift_robustness(const SweepConfig& config) {
    config.validate();
    const std::vector<Norm> norms =
        config.norms.empty() ? std::vector<Norm>{Norm::L1, Norm::L2, Norm::LInf} : config.norms;
    const std::vector<double> etas = resolved_etas(config, {0.25});
    const double eta = etas.front();
    std::vector<double> sigma_qs = config.sigma_qs;
    if (sigma_qs.empty()) {
        for (int i = 0; i <= 10; ++i) sigma_qs.push_back(i / 10.0);
    }

    struct Unit {
        Norm norm;
        double eps;
        std::size_t first_row;  ///< rows come in (core, total) pairs per sigma_q
    };
    std::vector<Unit> units;
    std::size_t row_count = 0;
    for (Norm p : norms) {
        for (double eps : resolved_epsilons(config, p)) {
            units.push_back({p, eps, row_count});
            row_count += 2 * sigma_qs.size();
        }
    }

    std::vector<SweepRecord> rows(row_count);
    parallel_for(config.threads, units.size(), [&](std::size_t u) {
        const Unit& unit = units[u];
        const double scale = shift_scale_for(unit.norm, config);
        QMatrixSpec spec{config.m, config.c, eta, scale};
        const Matrix q = build_q(spec);
        const GaussianLinearModel model =
            make_model(q, default_theta_opt(config.m, config.c), config.sigma_w,
                       core_indices(config.c));
        const AttackSpec attack{unit.norm, unit.eps};

        OptimizerOptions core_opts = config.optimizer;
        core_opts.support_mask.assign(static_cast<std::size_t>(config.m), 0);
        for (Index i = 0; i < config.c; ++i) core_opts.support_mask[static_cast<std::size_t>(i)] = 1;

        SweepRecord fits[2];
        fits[0] = fit_record(model, attack, core_opts);         // core
        fits[1] = fit_record(model, attack, config.optimizer);  // total

        for (std::size_t k = 0; k < sigma_qs.size(); ++k) {
            const double sq = sigma_qs[k];
            const std::size_t base = unit.first_row + 2 * k;
            const std::uint64_t cell_seed = derive_seed(config.master_seed, base);

            double means[2];
            if (sq == 0.0) {
                // Zero shift reproduces the in-distribution loss exactly; no
                // averaging round-off is allowed to creep in here.
                for (int f = 0; f < 2; ++f) {
                    means[f] = config.shift_loss == ShiftLoss::Standard
                                   ? standard_loss(model, fits[f].theta_hat)
                                   : adversarial_loss(model, fits[f].theta_hat, attack);
                }
            } else {
                double sums[2] = {0.0, 0.0};
                for (int d = 0; d < config.noise_draws; ++d) {
                    const Matrix q_pert =
                        perturb_spurious_rows(q, spec, sq, derive_seed(cell_seed, d));
                    if (config.shift_loss == ShiftLoss::Standard) {
                        for (int f = 0; f < 2; ++f) {
                            sums[f] += shifted_standard_loss(fits[f].theta_hat, q_pert,
                                                             model.theta_opt, config.sigma_w);
                        }
                    } else {
                        GaussianLinearModel shifted = model;
                        shifted.sigma = covariance(q_pert);
                        for (int f = 0; f < 2; ++f) {
                            sums[f] += adversarial_loss(shifted, fits[f].theta_hat, attack);
                        }
                    }
                }
                for (int f = 0; f < 2; ++f) means[f] = sums[f] / config.noise_draws;
            }

            for (int f = 0; f < 2; ++f) {
                SweepRecord row = fits[f];
                row.norm = unit.norm;
                row.eta = eta;
                row.eps = unit.eps;
                row.sigma_q = sq;
                row.scale = scale;
                row.m = config.m;
                row.c = config.c;
                row.model_kind = (f == 0) ? "core" : "total";
                row.noise_draws = config.noise_draws;
                row.seed = cell_seed;
                row.shifted_loss_mean = means[f];
                rows[base + static_cast<std::size_t>(f)] = std::move(row);
            }
        }
    });
    return rows;
}

std::vector<SweepRecord> run_plateau_sweep(const SweepConfig& config) {
    config.validate();
    const std::vector<Norm> norms =
        config.norms.empty() ? std::vector<Norm>{Norm::L1, Norm::L2} : config.norms;
    const std::vector<double> etas = resolved_etas(config, {0.5});
    const double eta = etas.front();
    const auto pairs = config.mc_pairs.empty() ? default_plateau_pairs() : config.mc_pairs;

    struct Cell {
        Norm norm;
        Index m;
        Index c;
        double eps;
    };
    std::vector<Cell> cells;
    for (Norm p : norms) {
        std::vector<double> eps_grid = resolved_epsilons(config, p);
        if (config.epsilons.empty()) {
            eps_grid.insert(eps_grid.end(), {10.0, 100.0, 1000.0});
        }
        for (const auto& [pm, pc] : pairs) {
            for (double eps : eps_grid) cells.push_back({p, pm, pc, eps});
        }
    }

    std::vector<SweepRecord> rows(cells.size());
    parallel_for(config.threads, cells.size(), [&](std::size_t i) {
        const Cell& cell = cells[i];
        QMatrixSpec spec{cell.m, cell.c, eta, 1.0};
        const GaussianLinearModel model = make_model(spec, config.sigma_w);
        SweepRecord row = fit_record(model, {cell.norm, cell.eps}, config.optimizer);
        row.norm = cell.norm;
        row.eta = eta;
        row.eps = cell.eps;
        row.m = cell.m;
        row.c = cell.c;
        row.seed = derive_seed(config.master_seed, i);
        rows[i] = std::move(row);
    });
    return rows;
}

std::string to_csv(const std::vector<SweepRecord>& rows, SweepKind kind) {
    std::string out;
    auto add = [&out](const std::string& field, bool last = false) {
        out += field;
        out.push_back(last ? '\n' : ',');
    };

    switch (kind) {
        case SweepKind::NfsSweep:
            out += "norm,eta,eps,m,c,seed,converged,iterations,nfs,clean_loss,adv_loss,theta_hat\n";
            break;
        case SweepKind::ScaleHeatmap:
            out += "norm,eta,scale,eps,m,c,seed,converged,iterations,nfs,clean_loss,adv_loss,theta_hat\n";
            break;
        case SweepKind::ShiftRobustness:
            out += "norm,eta,eps,sigma_q,model,scale,m,c,noise_draws,seed,converged,iterations,"
                   "nfs,clean_loss,adv_loss,shifted_loss_mean,theta_hat\n";
            break;
        case SweepKind::Plateau:
            out += "norm,m,c,eta,eps,seed,converged,iterations,nfs,clean_loss,adv_loss,theta_hat\n";
            break;
    }

    for (const SweepRecord& r : rows) {
        switch (kind) {
            case SweepKind::NfsSweep:
                add(to_string(r.norm));
                add(format_double(r.eta));
                add(format_double(r.eps));
                break;
            case SweepKind::ScaleHeatmap:
                add(to_string(r.norm));
                add(format_double(r.eta));
                add(format_double(r.scale));
                add(format_double(r.eps));
                break;
            case SweepKind::ShiftRobustness:
                add(to_string(r.norm));
                add(format_double(r.eta));
                add(format_double(r.eps));
                add(format_double(r.sigma_q));
                add(r.model_kind);
                add(format_double(r.scale));
                break;
            case SweepKind::Plateau:
                add(to_string(r.norm));
                add(std::to_string(r.m));
                add(std::to_string(r.c));
                add(format_double(r.eta));
                add(format_double(r.eps));
                break;
        }
        if (kind != SweepKind::Plateau) {
            add(std::to_string(r.m));
            add(std::to_string(r.c));
        }
        if (kind == SweepKind::ShiftRobustness) {
            add(std::to_string(r.noise_draws));
        }
        add(std::to_string(r.seed));
        add(r.converged ? "1" : "0");
        add(std::to_string(r.iterations));
        add(format_double(r.nfs_value));
        add(format_double(r.clean_loss));
        add(format_double(r.adv_loss));
        if (kind == SweepKind::ShiftRobustness) {
            add(format_double(r.shifted_loss_mean));
        }
        add(format_vector(r.theta_hat), /*last=*/true);
    }
    return out;
}

}  // namespace advreg
