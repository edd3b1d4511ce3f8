#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "districtnet/cmst.hpp"
#include "districtnet/demand.hpp"
#include "districtnet/estimators.hpp"
#include "districtnet/gnn.hpp"
#include "districtnet/graph.hpp"
#include "districtnet/rng.hpp"

namespace districtnet {

struct MethodResult {
    std::string method;
    double cost_km = 0.0;
    double rel_cost_pct = 0.0;   // vs the report's reference method
    double gap_pct = -1.0;       // vs the exact optimum; -1 when unknown
    double reock_mean = 0.0;
    bool feasible = true;
    double wall_ms = 0.0;
};

struct EvaluationReport {
    std::string instance_id;
    std::uint64_t seed = 0;
    std::uint64_t scenario_hash = 0;
    std::string reference;       // method the relative costs are against
    double exact_cost = -1.0;    // -1 when not computed
    std::vector<MethodResult> methods;
};

/// Forward pass for theta, then initialization + ILS on the CMST surrogate.
DistrictingSolution solve_districtnet(const Instance& instance, const GnnParams& params,
                                      IlsBudget budget, Rng& rng);

/// Initialization with uniform theta, then ILS driven by the given
/// district-cost oracle (BD / FIG / PredGNN / AvgTSP benchmarks).
DistrictingSolution solve_with_estimator(const Instance& instance, const CostOracle& oracle,
                                         IlsBudget budget, Rng& rng);

/// Area of the district divided by the area of the minimum enclosing circle
/// of its polygons' boundary points.
double reock(const std::vector<int>& district, const Instance& instance);

double mean_reock(const DistrictingSolution& solution, const Instance& instance);

/// Order-independent digest of a scenario set, recorded in reports so paired
/// comparisons can be audited.
std::uint64_t scenario_hash(const std::vector<Scenario>& scenarios);

/// Paired Monte Carlo evaluation of named solutions on one scenario set.
/// The first entry whose name equals `reference` anchors the relative costs
/// (defaults to the first method). exact_cost >= 0 enables gap reporting.
EvaluationReport evaluate(const std::vector<std::pair<std::string, DistrictingSolution>>& solutions,
                          const Instance& instance, const std::vector<Scenario>& scenarios,
                          const std::string& reference = "", double exact_cost = -1.0);

/// Enumerates all feasible districts and partitions them exactly,
/// minimizing the summed oracle cost. Requires N <= cap.
/// Whether the instance can be partitioned into num_districts connected,
/// size-bounded districts at all (enumeration-based; requires N <= 31).
bool has_feasible_partition(const Instance& instance);

DistrictingSolution exact_districting(const Instance& instance, const CostOracle& oracle,
                                      int cap = 16);

struct BenchmarkConfig {
    std::uint64_t seed = 0;
    int train_count = 20;
    int test_count = 20;
    int n_units = 12;
    int target_size = 3;
    int pool_cities = 3;
    int pool_city_units = 30;
    int target_scenarios = 100;   // MC scenarios for exact targets / optima
    int delta_samples = 200;      // depot-distance samples for estimator stats
    int epochs = 20;
    int perturbation_samples = 20;
    double epsilon = 1.0;
    int target_samples = 1000;
    long long predgnn_epochs = 400;
    long long ils_iterations = 60;
    double ils_seconds = 3600.0;  // generous so runs stay iteration-bound (deterministic)
    unsigned jobs = 0;            // 0 = hardware concurrency
    std::vector<std::string> methods{"districtnet", "bd", "fig"};
    std::string reference = "districtnet";
};

BenchmarkConfig load_benchmark_config(const std::string& path);
std::string benchmark_config_json(const BenchmarkConfig& config);

/// FNV-1a over a canonical JSON rendering; stamped into every output file.
std::uint64_t config_hash(const std::string& canonical_json);

/// Full desk-scale protocol: synthesize train/test instances, compute exact
/// targets and optima, train/fit every configured method, solve and evaluate
/// all test instances on shared scenarios, and write CSV + JSON reports
/// under out_dir (empty out_dir skips file output).
std::vector<EvaluationReport> run_benchmark(const BenchmarkConfig& config,
                                            const std::string& out_dir);

/// Mean gap (%) per method across reports; methods missing a gap are skipped.
std::vector<std::pair<std::string, double>> mean_gaps(
    const std::vector<EvaluationReport>& reports);

void write_reports(const std::vector<EvaluationReport>& reports,
                   const BenchmarkConfig& config, const std::string& out_dir);

}  // namespace districtnet
