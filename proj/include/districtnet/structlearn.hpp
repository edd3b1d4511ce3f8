#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "districtnet/cmst.hpp"
#include "districtnet/gnn.hpp"
#include "districtnet/graph.hpp"
#include "districtnet/rng.hpp"

namespace districtnet {

/// Point in the convex hull of CMST edge-indicator solutions.
struct MomentVector {
    std::vector<double> mu;        // per edge, in [0,1]
    std::vector<long long> counts; // raw sample counts (mu = counts / n_samples)
    long long n_samples = 0;
};

struct TrainConfig {
    int epochs = 100;
    double initial_lr = 1e-3;
    double lr_decay = 0.9;      // applied every lr_decay_every epochs
    int lr_decay_every = 10;
    double lr_floor = 1e-4;
    int perturbation_samples = 20;  // M
    double epsilon = 1.0;
    int target_samples = 1000;
    int exact_cap = 16;
    std::uint64_t seed = 0;
    std::string log_path;        // optional CSV: epoch, surrogate loss, lr, wall_time
    std::string checkpoint_dir;  // optional, written every 10 epochs
};

double learning_rate_at(const TrainConfig& config, int epoch);

/// Randomized CMST target: per district, minimum spanning trees under i.i.d.
/// uniform edge weights; mu = per-edge selection frequency.
MomentVector construct_target(const DistrictingSolution& lambda_bar, const Instance& instance,
                              int n_samples, Rng& rng);

/// Solves the CMST at theta (falls back from exact to ILS above the cap).
using CmstSolver = std::function<CmstSolution(const std::vector<double>&, const Instance&)>;

CmstSolver default_cmst_solver(int exact_cap, Rng rng);

/// Mean of M perturbed argmax indicator vectors, Z ~ N(0, I) scaled by epsilon.
MomentVector perturbed_maximizer(const std::vector<double>& theta, const Instance& instance,
                                 double epsilon, int num_samples, const CmstSolver& solver,
                                 Rng& rng);

/// Stochastic loss gradient: perturbed average minus the target moment.
std::vector<double> fy_gradient(const std::vector<double>& theta, const MomentVector& mu_bar,
                                const Instance& instance, double epsilon, int num_samples,
                                const CmstSolver& solver, Rng& rng);

struct TrainRow {
    Instance instance;
    DistrictingSolution target;
};

/// Imitation training loop: forward, perturbed FY gradient, backward, SGD.
GnnParams train(const std::vector<TrainRow>& dataset, const TrainConfig& config, Rng& rng);

/// Same loop, continuing from existing parameters (checkpoint resume).
GnnParams train_from(GnnParams params, const std::vector<TrainRow>& dataset,
                     const TrainConfig& config, Rng& rng);

/// Full enumeration of feasible districting solutions, scored by Monte Carlo
/// district cost on a fixed scenario set.
DistrictingSolution exact_training_target(const Instance& instance, int scenario_count,
                                          Rng& rng, int cap = 16);

}  // namespace districtnet
