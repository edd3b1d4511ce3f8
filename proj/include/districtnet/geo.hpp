#pragma once

#include <optional>
#include <string>
#include <vector>

#include "districtnet/graph.hpp"
#include "districtnet/rng.hpp"

namespace districtnet {

/// Ingest a GeoJSON FeatureCollection of population-labeled polygons.
/// Adjacency is derived from positive-length shared boundaries. Lon/lat input
/// is projected to km with a local equirectangular projection; coordinates
/// already in km (flagged by a top-level "units_km": true) are taken as is.
CityGraph load_geojson(const std::string& path, std::optional<Point> depot = std::nullopt);

/// Export a CityGraph back to GeoJSON. `district_of` (optional, per-vertex)
/// is written as a "district" property for external rendering.
void save_geojson(const CityGraph& graph, const std::string& path,
                  const std::vector<int>* district_of = nullptr);

/// Per-edge features: elementwise mean of the endpoint node features
/// (population, density, area, perimeter, compactness, depot distance)
/// plus the center-to-center distance.
std::vector<std::array<double, kFeatureDim>> compute_features(const CityGraph& graph);

/// Grow a random connected vertex set from a uniform start, one uniform
/// neighbor at a time, and return the induced subgraph.
CityGraph sample_connected_subgraph(const CityGraph& graph, std::size_t size, Rng& rng);

/// Pick a pool city proportional to size, sample a connected subgraph,
/// resample populations from N(8000, 2000) truncated to [5000, 20000],
/// place the depot at the subgraph centroid, recompute features.
Instance generate_training_instance(const std::vector<CityGraph>& pool, std::size_t size,
                                    int target_size, Rng& rng);

/// Synthetic city: Voronoi cells of uniform seed points in a square.
CityGraph synth_city(int n_units, Rng& rng, double square_side_km = 10.0);

/// Instance round-trip as a single JSON file (polygons, populations, edges,
/// depot, size parameters); derived fields are recomputed on load.
void save_instance(const Instance& instance, const std::string& path);
Instance load_instance(const std::string& path);

}  // namespace districtnet
