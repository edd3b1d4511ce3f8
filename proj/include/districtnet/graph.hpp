#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "districtnet/geometry.hpp"

namespace districtnet {

/// Smallest indivisible geographical cell.
struct BasicUnit {
    int id = 0;
    Polygon polygon;
    long long population = 1;
    double area = 0.0;       // km^2
    double perimeter = 0.0;  // km
    double depot_distance = 0.0;
    double compactness = 1.0;  // Reock score of the polygon, in (0,1]

    double density() const { return static_cast<double>(population) / area; }
    Point center() const { return polygon_centroid(polygon); }
};

struct CityGraph {
    std::string name;
    std::vector<BasicUnit> units;
    std::vector<std::pair<int, int>> edges;  // unordered, u < v
    Point depot;

    std::size_t num_vertices() const { return units.size(); }
    std::size_t num_edges() const { return edges.size(); }

    /// Adjacency lists (built on demand).
    std::vector<std::vector<int>> adjacency() const;

    bool is_connected() const;

    /// Connected components as vertex lists.
    std::vector<std::vector<int>> components() const;

    /// Recompute per-unit depot distances from the current depot.
    void update_depot_distances();
};

inline constexpr int kFeatureDim = 7;

/// A districting problem: geography plus edge features and size parameters.
struct Instance {
    CityGraph graph;
    std::vector<std::array<double, kFeatureDim>> edge_features;
    int target_size = 0;   // t
    int min_size = 0;      // ceil(0.8 t)
    int max_size = 0;      // floor(1.2 t)
    int num_districts = 0; // floor(N / t)
    std::uint64_t seed = 0;

    std::size_t num_vertices() const { return graph.num_vertices(); }
    std::size_t num_edges() const { return graph.num_edges(); }
};

struct SizeBounds {
    int min_size;
    int max_size;
    int num_districts;
};

/// t +- 20% with ceil/floor so the band stays inside the stated tolerance.
SizeBounds size_bounds_for(int n_vertices, int target_size);

/// Build an Instance around a graph: sets bounds, k, and edge features.
Instance make_instance(CityGraph graph, int target_size, std::uint64_t seed = 0);

}  // namespace districtnet
