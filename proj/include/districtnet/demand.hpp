#pragma once

#include <vector>

#include "districtnet/graph.hpp"
#include "districtnet/rng.hpp"

namespace districtnet {

/// One realization of the demand point process: request locations per BU.
struct Scenario {
    std::vector<std::vector<Point>> requests;  // indexed by vertex
};

struct Tour {
    std::vector<int> order;  // permutation of request indices
    double length = 0.0;     // closed walk depot -> requests -> depot
};

/// Demand rate per inhabitant: kappa = 96 / (8000 t), so a district of
/// target size handles about a hundred stops.
double demand_rate(int target_size);

/// Per BU: request count ~ Poisson(population * kappa), locations uniform
/// inside the BU polygon.
Scenario sample_scenario(const Instance& instance, Rng& rng);

/// A replayable batch of scenarios shared across all methods on an instance.
std::vector<Scenario> sample_scenarios(const Instance& instance, int count, Rng& rng);

/// Nearest-neighbor construction from the depot followed by 2-opt and
/// Or-opt (segments of 1..3) to a local optimum. Deterministic in the
/// input order.
Tour tsp_tour(const std::vector<Point>& points, Point depot);

/// Monte Carlo district cost: mean TSP length over the scenarios, pooling
/// the requests of the district's BUs.
double district_cost_mc(const std::vector<int>& district, const Instance& instance,
                        const std::vector<Scenario>& scenarios);

/// Deterministic approximation: TSP over the BU barycenters.
double avg_tsp_cost(const std::vector<int>& district, const Instance& instance);

void save_scenarios(const std::vector<Scenario>& scenarios, std::uint64_t seed,
                    const std::string& path);
std::vector<Scenario> load_scenarios(const std::string& path, std::uint64_t* seed_out = nullptr);

}  // namespace districtnet
