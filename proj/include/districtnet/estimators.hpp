#pragma once

#include <functional>
#include <string>
#include <vector>

#include "districtnet/demand.hpp"
#include "districtnet/graph.hpp"
#include "districtnet/rng.hpp"

namespace districtnet {

struct DistrictStats {
    double total_area = 0.0;         // A_d, km^2
    double expected_requests = 0.0;  // R_d = sum population * kappa
    double avg_depot_distance = 0.0; // Delta_d, Monte Carlo
};

enum class EstimatorKind { BD, FIG };

struct EstimatorParams {
    EstimatorKind kind = EstimatorKind::BD;
    std::vector<double> beta;  // length 1 for BD, 4 for FIG
    double fit_rmse = 0.0;
    std::size_t n_rows = 0;
};

/// A_d and R_d in closed form; Delta_d as the mean distance from the depot
/// to points sampled uniformly over the district's area (area-weighted over
/// the member BUs).
DistrictStats district_stats(const std::vector<int>& district, const Instance& instance,
                             int n_samples, Rng& rng);

/// BD:  beta * sqrt(A R) + 2 Delta
/// FIG: b1 * sqrt(A R) + b2 * Delta + b3 * sqrt(A / R) + b4
double estimate_cost(const EstimatorParams& params, const DistrictStats& stats);

/// Ordinary least squares on the estimator's basis functions.
EstimatorParams fit_estimator(EstimatorKind kind,
                              const std::vector<std::pair<DistrictStats, double>>& training);

void save_estimator(const EstimatorParams& params, const std::string& path);
EstimatorParams load_estimator(const std::string& path);

using CostOracle = std::function<double(const std::vector<int>&)>;

/// Wrap fitted params as a district-cost oracle with per-district stat
/// caching, so repeated ILS queries stay cheap and deterministic.
CostOracle make_estimator_oracle(EstimatorParams params, const Instance& instance,
                                 int n_samples, std::uint64_t seed);

}  // namespace districtnet
