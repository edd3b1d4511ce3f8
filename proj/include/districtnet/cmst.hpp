#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "districtnet/estimators.hpp"  // CostOracle
#include "districtnet/graph.hpp"
#include "districtnet/rng.hpp"

namespace districtnet {

/// Forest of exactly k subtrees covering V, size-bounded per subtree.
struct CmstSolution {
    std::vector<char> y;                      // per-edge indicator
    std::vector<std::vector<int>> subtrees;   // vertex sets, sorted
    double objective = 0.0;                   // theta' y (max formulation)
};

struct DistrictingSolution {
    std::vector<std::vector<int>> districts;  // sorted vertex sets
    std::vector<int> assignment;              // per-vertex district index
    double objective = 0.0;                   // sum of oracle costs (min formulation)
    bool feasible = true;
    double wall_time_ms = 0.0;
    std::uint64_t seed = 0;
};

DistrictingSolution make_districting(std::vector<std::vector<int>> districts,
                                     std::size_t n_vertices);

/// Districts = connected components of the selected-edge forest.
DistrictingSolution decode(const CmstSolution& y, const Instance& instance);

/// All connected vertex subsets with size in [min_size, max_size], as bitmasks.
/// Requires N <= 31; each subset appears exactly once.
std::vector<std::uint32_t> enumerate_connected_subsets(const Instance& instance,
                                                       int min_size, int max_size);

std::vector<int> mask_to_vertices(std::uint32_t mask);

/// Maximum-spanning-tree weight of the induced subgraph under theta, plus the
/// tree's edge indices. Returns false if the induced subgraph is disconnected.
bool max_spanning_tree(std::uint32_t mask, const std::vector<double>& theta,
                       const Instance& instance, double* weight,
                       std::vector<int>* edges = nullptr);

/// Exact partition of all n vertices into exactly k of the given subsets,
/// branch and bound on the lowest uncovered vertex with memoization.
/// Returns false when no partition exists.
bool best_partition(const std::vector<std::uint32_t>& masks, const std::vector<double>& weights,
                    int n_vertices, int k, bool maximize, int min_size, int max_size,
                    std::vector<int>* chosen, double* value);

/// Exact solver for max_{y} theta' y over size-bounded k-subtree forests.
/// Enumerates connected subsets and partitions them by branch and bound on the
/// lowest uncovered vertex. Default cap N <= 16.
CmstSolution exact_cmst(const std::vector<double>& theta, const Instance& instance,
                        int cap = 16);

struct KruskalResult {
    std::vector<std::vector<int>> clusters;
    std::vector<int> tree_edges;  // edges that performed merges
};

/// Capacity-capped Kruskal on cost -theta: highest theta merges first.
KruskalResult modified_kruskal(const std::vector<double>& theta, const Instance& instance,
                               int cap);

/// Merge adjacent clusters, smallest combined size first (ties by lowest
/// minimum vertex ids), until exactly k remain.
std::vector<std::vector<int>> greedy_merge(std::vector<std::vector<int>> clusters, int k,
                                           const Instance& instance);

/// Size-bound repair: grow undersized districts from neighbors, then shrink
/// oversized ones, keeping every district connected.
DistrictingSolution repair(DistrictingSolution solution, const Instance& instance);

/// Border-node relocations and swaps between district pairs, best improving
/// move per pair, until a local optimum of the penalized objective.
DistrictingSolution local_search(DistrictingSolution solution, const CostOracle& cost_oracle,
                                 const Instance& instance, Rng& rng);

struct IlsBudget {
    long long max_iterations = 100;
    double max_seconds = 1e18;
};

/// Iterated local search: local_search alternated with a random perturbation
/// that applies each admissible move with probability 1.5%. Returns the best
/// feasible solution found (best penalized one, flagged, if none).
DistrictingSolution ils(DistrictingSolution initial, const CostOracle& cost_oracle,
                        const Instance& instance, IlsBudget budget, Rng& rng);

/// District cost under the CMST surrogate: negated max-spanning-tree weight
/// of the induced subgraph; +inf when disconnected.
CostOracle cmst_cost_oracle(const std::vector<double>& theta, const Instance& instance);

/// Modified Kruskal (cap = max size), greedy merge to k clusters, optional
/// repair for large instances.
DistrictingSolution initial_solution(const std::vector<double>& theta, const Instance& instance,
                                     Rng& rng, int repair_threshold = 600);

void save_solution(const DistrictingSolution& sol, const std::string& path);
DistrictingSolution load_solution(const std::string& path);

}  // namespace districtnet
