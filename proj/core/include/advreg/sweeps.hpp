#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "advreg/covariance.hpp"
#include "advreg/linear_model.hpp"
#include "advreg/optimizer.hpp"

namespace advreg {

enum class SweepKind { NfsSweep, ScaleHeatmap, ShiftRobustness, Plateau };

/// Which population loss the shift experiment reports under the perturbed
/// covariance. The paper's phrasing pins the clean (standard) loss; the
/// adversarial variant is exposed behind this switch instead of guessing.
enum class ShiftLoss { Standard, Adversarial };

/// Grid description shared by all experiment runners. Empty grids take the
/// per-runner defaults listed next to each field.
struct SweepConfig {
    std::vector<Norm> norms;        ///< default: runner-specific
    std::vector<double> epsilons;   ///< default: l1/l2 0..2 (21), linf 0..1 (21)
    std::vector<double> etas;       ///< default: sweep {0,.25,.5}; heatmap {.5}; shift {.25}
    Index m = 5;
    Index c = 2;
    std::vector<std::pair<Index, Index>> mc_pairs;  ///< plateau; default five (m,c) pairs
    std::vector<double> scales;     ///< heatmap default {1,1.5,2,2.5,3,4,5}
    std::vector<double> sigma_qs;   ///< shift default 0..1 step 0.1
    int noise_draws = 100;
    double sigma_w = 0.1;
    std::uint64_t master_seed = 20240612;
    int threads = 1;
    ShiftLoss shift_loss = ShiftLoss::Standard;
    OptimizerOptions optimizer;

    void validate() const;
};

/// One grid cell of any runner. Fields that a runner does not touch keep
/// their defaults and are simply not emitted in its CSV schema.
struct SweepRecord {
    Norm norm = Norm::L2;
    double eta = 0.0;
    double eps = 0.0;
    Index m = 0;
    Index c = 0;
    double scale = 1.0;
    double sigma_q = 0.0;
    std::string model_kind;  ///< "core" / "total" (shift runner only)
    int noise_draws = 0;
    std::uint64_t seed = 0;
    bool converged = false;
    int iterations = 0;
    double nfs_value = 0.0;
    double clean_loss = 0.0;
    double adv_loss = 0.0;
    double shifted_loss_mean = 0.0;
    Vector theta_hat;
};

/// NFS against the adversarial budget for every (norm, eta) combination.
std::vector<SweepRecord> run_nfs_sweep(const SweepConfig& config);

/// NFS against (spurious scale, budget) for the linf attack family.
std::vector<SweepRecord> run_scale_heatmap(const SweepConfig& config);

/// Core-only vs all-feature fits evaluated under spurious-row covariance
/// perturbations; shifted losses are averaged over noise_draws draws shared
/// by both models.
std::vector<SweepRecord> run_shift_robustness(const SweepConfig& config);

/// NFS saturation for large budgets across (m, c) pairs.
std::vector<SweepRecord> run_plateau_sweep(const SweepConfig& config);

/// Serialization with the runner's column schema; byte-stable across reruns
/// and thread counts.
std::string to_csv(const std::vector<SweepRecord>& rows, SweepKind kind);

/// Default epsilon grid for a norm: 21 points on [0, 2] (l1, l2) or [0, 1]
/// (linf); the plateau runner appends {10, 100, 1000}.
std::vector<double> default_epsilon_grid(Norm p);

std::vector<std::pair<Index, Index>> default_plateau_pairs();

/// Spurious scale used by the shift experiment: 1 for l1/l2, 3 for linf,
/// overridden by a single-entry config.scales.
double shift_scale_for(Norm p, const SweepConfig& config);

}  // namespace advreg
