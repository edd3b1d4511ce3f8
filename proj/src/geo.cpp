#include "districtnet/geo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace districtnet {

using nlohmann::json;

namespace {

constexpr double kEarthRadiusKm = 6371.0;
constexpr double kDegToRad = 3.141592653589793 / 180.0;
constexpr double kAdjacencyTol = 1e-9;

void finalize_unit(BasicUnit& bu) {
    bu.area = polygon_area(bu.polygon);
    bu.perimeter = polygon_perimeter(bu.polygon);
    bu.compactness = reock_score(bu.polygon);
    if (bu.area <= 0.0) throw std::runtime_error("basic unit with non-positive area");
    if (bu.population < 1) throw std::runtime_error("basic unit with population < 1");
}

void build_adjacency(CityGraph& g) {
    g.edges.clear();
    const int n = static_cast<int>(g.units.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (shared_boundary_length(g.units[i].polygon, g.units[j].polygon) > kAdjacencyTol) {
                g.edges.emplace_back(i, j);
            }
        }
    }
}

Point area_weighted_centroid(const CityGraph& g) {
    double ax = 0, ay = 0, total = 0;
    for (const auto& u : g.units) {
        Point c = u.center();
        ax += u.area * c.x;
        ay += u.area * c.y;
        total += u.area;
    }
    return {ax / total, ay / total};
}

void sample_populations(CityGraph& g, Rng& rng) {
    for (auto& u : g.units) {
        u.population = static_cast<long long>(
            std::llround(rng.truncated_normal(8000.0, 2000.0, 5000.0, 20000.0)));
    }
}

}  // namespace

CityGraph load_geojson(const std::string& path, std::optional<Point> depot) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::runtime_error("malformed GeoJSON in " + path + ": " + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
        !doc.contains("features")) {
        throw std::runtime_error("expected a GeoJSON FeatureCollection: " + path);
    }

    const bool units_km = doc.value("units_km", false);

    CityGraph g;
    g.name = doc.value("name", path);
    for (const auto& feat : doc["features"]) {
        if (feat.value("type", "") != "Feature") throw std::runtime_error("non-Feature entry");
        const auto& geom = feat.at("geometry");
        if (geom.value("type", "") != "Polygon") {
            throw std::runtime_error("only Polygon features are supported");
        }
        const auto& ring = geom.at("coordinates").at(0);
        BasicUnit bu;
        bu.id = static_cast<int>(g.units.size());
        for (const auto& coord : ring) {
            bu.polygon.push_back({coord.at(0).get<double>(), coord.at(1).get<double>()});
        }
        // drop the GeoJSON-mandated repeated closing vertex
        if (bu.polygon.size() >= 2 &&
            distance(bu.polygon.front(), bu.polygon.back()) < 1e-12) {
            bu.polygon.pop_back();
        }
        if (bu.polygon.size() < 3) throw std::runtime_error("degenerate polygon ring");
        bu.population = feat.at("properties").at("population").get<long long>();
        g.units.push_back(std::move(bu));
    }
    if (g.units.empty()) throw std::runtime_error("empty FeatureCollection");

    if (!units_km) {
        // local equirectangular projection about the coordinate centroid
        double lon0 = 0, lat0 = 0;
        std::size_t cnt = 0;
        for (const auto& u : g.units) {
            for (const auto& p : u.polygon) {
                lon0 += p.x;
                lat0 += p.y;
                ++cnt;
            }
        }
        lon0 /= cnt;
        lat0 /= cnt;
        const double cos_lat0 = std::cos(lat0 * kDegToRad);
        for (auto& u : g.units) {
            for (auto& p : u.polygon) {
                p = {kEarthRadiusKm * cos_lat0 * (p.x - lon0) * kDegToRad,
                     kEarthRadiusKm * (p.y - lat0) * kDegToRad};
            }
        }
    }

    for (auto& u : g.units) finalize_unit(u);
    build_adjacency(g);

    if (depot) {
        g.depot = *depot;
    } else if (doc.contains("depot")) {
        g.depot = {doc["depot"].at(0).get<double>(), doc["depot"].at(1).get<double>()};
    } else {
        g.depot = area_weighted_centroid(g);
    }
    g.update_depot_distances();

    auto comps = g.components();
    if (comps.size() > 1) {
        std::ostringstream msg;
        msg << "adjacency graph is disconnected (" << comps.size() << " components):";
        for (const auto& c : comps) {
            msg << " {";
            for (std::size_t i = 0; i < c.size(); ++i) msg << (i ? "," : "") << c[i];
            msg << "}";
        }
        throw std::runtime_error(msg.str());
    }
    return g;
}

void save_geojson(const CityGraph& graph, const std::string& path,
                  const std::vector<int>* district_of) {
    json features = json::array();
    for (std::size_t i = 0; i < graph.units.size(); ++i) {
        const auto& u = graph.units[i];
        json ring = json::array();
        for (const auto& p : u.polygon) ring.push_back({p.x, p.y});
        ring.push_back({u.polygon.front().x, u.polygon.front().y});
        json props = {{"population", u.population}};
        if (district_of) props["district"] = (*district_of)[i];
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "Polygon"}, {"coordinates", {ring}}}},
                            {"properties", props}});
    }
    json doc = {{"type", "FeatureCollection"},
                {"name", graph.name},
                {"units_km", true},
                {"depot", {graph.depot.x, graph.depot.y}},
                {"features", features}};
    std::ofstream out(path);
    out << doc.dump(2) << "\n";
}

std::vector<std::array<double, kFeatureDim>> compute_features(const CityGraph& graph) {
    auto node_feat = [](const BasicUnit& u) {
        return std::array<double, 6>{static_cast<double>(u.population), u.density(),
                                     u.area, u.perimeter, u.compactness, u.depot_distance};
    };
    std::vector<std::array<double, kFeatureDim>> out;
    out.reserve(graph.edges.size());
    for (auto [a, b] : graph.edges) {
        const auto fa = node_feat(graph.units[a]);
        const auto fb = node_feat(graph.units[b]);
        std::array<double, kFeatureDim> f{};
        for (int i = 0; i < 6; ++i) f[i] = 0.5 * (fa[i] + fb[i]);
        f[6] = distance(graph.units[a].center(), graph.units[b].center());
        out.push_back(f);
    }
    return out;
}

CityGraph sample_connected_subgraph(const CityGraph& graph, std::size_t size, Rng& rng) {
    const std::size_t n = graph.num_vertices();
    if (size > n) throw std::invalid_argument("subgraph size exceeds graph size");
    auto adj = graph.adjacency();

    std::set<int> selected;
    int start = static_cast<int>(rng.uniform_index(n));
    selected.insert(start);
    while (selected.size() < size) {
        // neighbors of the current set, duplicates removed
        std::vector<int> frontier;
        for (int u : selected) {
            for (int v : adj[u]) {
                if (!selected.count(v)) frontier.push_back(v);
            }
        }
        std::sort(frontier.begin(), frontier.end());
        frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
        selected.insert(frontier[rng.uniform_index(frontier.size())]);
    }

    CityGraph sub;
    sub.name = graph.name;
    sub.depot = graph.depot;
    std::vector<int> remap(n, -1);
    for (int v : selected) {
        remap[v] = static_cast<int>(sub.units.size());
        BasicUnit bu = graph.units[v];
        bu.id = remap[v];
        sub.units.push_back(std::move(bu));
    }
    for (auto [u, v] : graph.edges) {
        if (remap[u] >= 0 && remap[v] >= 0) {
            sub.edges.emplace_back(std::min(remap[u], remap[v]), std::max(remap[u], remap[v]));
        }
    }
    return sub;
}

Instance generate_training_instance(const std::vector<CityGraph>& pool, std::size_t size,
                                    int target_size, Rng& rng) {
    if (pool.empty()) throw std::invalid_argument("empty city pool");
    // city selection proportional to BU count
    std::size_t total = 0;
    for (const auto& c : pool) total += c.num_vertices();
    std::size_t pick = rng.uniform_index(total);
    std::size_t city_idx = 0;
    for (std::size_t acc = 0; city_idx < pool.size(); ++city_idx) {
        acc += pool[city_idx].num_vertices();
        if (pick < acc) break;
    }

    CityGraph sub = sample_connected_subgraph(pool[city_idx], size, rng);
    sample_populations(sub, rng);
    sub.depot = area_weighted_centroid(sub);
    sub.update_depot_distances();
    return make_instance(std::move(sub), target_size, rng.seed());
}

CityGraph synth_city(int n_units, Rng& rng, double square_side_km) {
    if (n_units < 2) throw std::invalid_argument("synth_city needs at least 2 units");
    std::vector<Point> seeds;
    seeds.reserve(n_units);
    for (int i = 0; i < n_units; ++i) {
        seeds.push_back({rng.uniform(0.0, square_side_km), rng.uniform(0.0, square_side_km)});
    }

    CityGraph g;
    g.name = "synthetic";
    const Polygon square = {{0, 0}, {square_side_km, 0},
                            {square_side_km, square_side_km}, {0, square_side_km}};
    for (int i = 0; i < n_units; ++i) {
        Polygon cell = square;
        for (int j = 0; j < n_units && cell.size() >= 3; ++j) {
            if (j != i) cell = clip_to_bisector(cell, seeds[i], seeds[j]);
        }
        if (cell.size() < 3) throw std::runtime_error("degenerate Voronoi cell");
        BasicUnit bu;
        bu.id = i;
        bu.polygon = std::move(cell);
        g.units.push_back(std::move(bu));
    }
    sample_populations(g, rng);
    for (auto& u : g.units) finalize_unit(u);
    build_adjacency(g);
    g.depot = area_weighted_centroid(g);
    g.update_depot_distances();
    return g;
}

void save_instance(const Instance& instance, const std::string& path) {
    const auto& g = instance.graph;
    json units = json::array();
    for (const auto& u : g.units) {
        json ring = json::array();
        for (const auto& p : u.polygon) ring.push_back({p.x, p.y});
        units.push_back({{"polygon", ring}, {"population", u.population}});
    }
    json edges = json::array();
    for (auto [a, b] : g.edges) edges.push_back({a, b});
    json doc = {{"name", g.name},
                {"depot", {g.depot.x, g.depot.y}},
                {"units", units},
                {"edges", edges},
                {"target_size", instance.target_size},
                {"seed", instance.seed}};
    std::ofstream out(path);
    out << doc.dump(2) << "\n";
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc;
    in >> doc;
    CityGraph g;
    g.name = doc.value("name", path);
    for (const auto& ju : doc.at("units")) {
        BasicUnit bu;
        bu.id = static_cast<int>(g.units.size());
        for (const auto& c : ju.at("polygon")) {
            bu.polygon.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
        }
        bu.population = ju.at("population").get<long long>();
        finalize_unit(bu);
        g.units.push_back(std::move(bu));
    }
    for (const auto& je : doc.at("edges")) {
        g.edges.emplace_back(je.at(0).get<int>(), je.at(1).get<int>());
    }
    g.depot = {doc.at("depot").at(0).get<double>(), doc.at("depot").at(1).get<double>()};
    g.update_depot_distances();
    return make_instance(std::move(g), doc.at("target_size").get<int>(),
                         doc.value("seed", std::uint64_t{0}));
}

}  // namespace districtnet
