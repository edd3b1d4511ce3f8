#include "districtnet/graph.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>

#include "districtnet/geo.hpp"

namespace districtnet {

std::vector<std::vector<int>> CityGraph::adjacency() const {
    std::vector<std::vector<int>> adj(units.size());
    for (auto [u, v] : edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return adj;
}

std::vector<std::vector<int>> CityGraph::components() const {
    const int n = static_cast<int>(units.size());
    auto adj = adjacency();
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        const int c = static_cast<int>(out.size());
        out.emplace_back();
        std::queue<int> q;
        q.push(s);
        comp[s] = c;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            out[c].push_back(u);
            for (int v : adj[u]) {
                if (comp[v] < 0) {
                    comp[v] = c;
                    q.push(v);
                }
            }
        }
    }
    return out;
}

bool CityGraph::is_connected() const {
    return units.empty() || components().size() == 1;
}

void CityGraph::update_depot_distances() {
    for (auto& u : units) u.depot_distance = distance(u.center(), depot);
}

SizeBounds size_bounds_for(int n_vertices, int target_size) {
    if (target_size < 1) throw std::invalid_argument("target size must be positive");
    SizeBounds b;
    b.min_size = static_cast<int>(std::ceil(0.8 * target_size));
    b.max_size = static_cast<int>(std::floor(1.2 * target_size));
    b.num_districts = n_vertices / target_size;
    if (b.num_districts < 1) throw std::invalid_argument("fewer vertices than target size");
    return b;
}

Instance make_instance(CityGraph graph, int target_size, std::uint64_t seed) {
    Instance inst;
    const auto b = size_bounds_for(static_cast<int>(graph.num_vertices()), target_size);
    inst.graph = std::move(graph);
    inst.edge_features = compute_features(inst.graph);
    inst.target_size = target_size;
    inst.min_size = b.min_size;
    inst.max_size = b.max_size;
    inst.num_districts = b.num_districts;
    inst.seed = seed;
    return inst;
}

}  // namespace districtnet
