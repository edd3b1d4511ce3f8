#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "districtnet/geo.hpp"
#include "helpers.hpp"

using namespace districtnet;

namespace {

std::string write_squares_geojson(const std::vector<std::pair<double, double>>& origins,
                                  const std::vector<long long>& pops,
                                  const std::string& name) {
    std::string path = (std::filesystem::temp_directory_path() / (name + ".geojson")).string();
    std::ofstream out(path);
    out << R"({"type":"FeatureCollection","units_km":true,"features":[)";
    for (std::size_t i = 0; i < origins.size(); ++i) {
        auto [x, y] = origins[i];
        if (i) out << ",";
        out << R"({"type":"Feature","geometry":{"type":"Polygon","coordinates":[[)";
        out << "[" << x << "," << y << "],[" << x + 1 << "," << y << "],[" << x + 1 << ","
            << y + 1 << "],[" << x << "," << y + 1 << "],[" << x << "," << y << "]";
        out << R"(]]},"properties":{"population":)" << pops[i] << "}}";
    }
    out << "]}";
    return path;
}

}  // namespace

TEST_CASE("load_geojson adjacency from shared boundaries") {
    auto p2 = write_squares_geojson({{0, 0}, {1, 0}}, {10, 20}, "two");
    auto g2 = load_geojson(p2);
    CHECK(g2.num_vertices() == 2);
    CHECK(g2.num_edges() == 1);
    CHECK(g2.units[0].population == 10);
    CHECK(g2.units[1].population == 20);

    auto p3 = write_squares_geojson({{0, 0}, {1, 0}, {2, 0}}, {5, 5, 5}, "three");
    auto g3 = load_geojson(p3);
    CHECK(g3.num_vertices() == 3);
    CHECK(g3.num_edges() == 2);  // path graph, no 0-2 edge

    // 4x4 grid -> rook adjacency, 24 edges
    std::vector<std::pair<double, double>> origins;
    std::vector<long long> pops;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            origins.emplace_back(c, r);
            pops.push_back(100);
        }
    }
    auto g16 = load_geojson(write_squares_geojson(origins, pops, "grid16"));
    CHECK(g16.num_vertices() == 16);
    CHECK(g16.num_edges() == 24);
}

TEST_CASE("load_geojson rejects disconnected data naming components") {
    auto path = write_squares_geojson({{0, 0}, {5, 5}}, {10, 10}, "disc");
    CHECK_THROWS_WITH_AS(load_geojson(path),
                         doctest::Contains("disconnected"), std::runtime_error);
}

TEST_CASE("geojson round trip preserves graph structure") {
    auto path = write_squares_geojson({{0, 0}, {1, 0}, {1, 1}}, {7, 8, 9}, "rt");
    auto g = load_geojson(path);
    std::string out = (std::filesystem::temp_directory_path() / "rt_out.geojson").string();
    save_geojson(g, out);
    auto g2 = load_geojson(out);
    CHECK(g2.num_vertices() == g.num_vertices());
    CHECK(g2.edges == g.edges);
    for (std::size_t i = 0; i < g.units.size(); ++i) {
        CHECK(g2.units[i].population == g.units[i].population);
        CHECK(g2.units[i].area == doctest::Approx(g.units[i].area));
    }
}

TEST_CASE("compute_features: means plus center distance, d_f = 7") {
    auto g = helpers::grid_city(1, 2);
    g.units[0].population = 2;
    g.units[1].population = 4;
    auto f = compute_features(g);
    REQUIRE(f.size() == 1);
    CHECK(f[0].size() == 7);
    CHECK(f[0][0] == doctest::Approx(3.0));              // mean population
    CHECK(f[0][2] == doctest::Approx(1.0));              // mean area
    CHECK(f[0][4] == doctest::Approx(2.0 / 3.14159265358979).epsilon(1e-3));
    CHECK(f[0][6] == doctest::Approx(1.0));              // centers 1 km apart
}

TEST_CASE("sample_connected_subgraph") {
    auto g = helpers::grid_city(4, 4);
    Rng rng(3);
    auto whole = sample_connected_subgraph(g, 16, rng);
    CHECK(whole.num_vertices() == 16);
    CHECK(whole.num_edges() == g.num_edges());

    auto one = sample_connected_subgraph(g, 1, rng);
    CHECK(one.num_vertices() == 1);
    CHECK(one.num_edges() == 0);

    CHECK_THROWS_AS(sample_connected_subgraph(g, 17, rng), std::invalid_argument);

    for (int s = 0; s < 100; ++s) {
        Rng r(1000 + s);
        auto sub = sample_connected_subgraph(g, 1 + s % 16, r);
        CHECK(sub.is_connected());
    }

    // path 0-1-2, size 2: both connected pairs occur, roughly balanced
    auto path = helpers::path_city(3);
    int with0 = 0;
    const int draws = 10000;
    for (int s = 0; s < draws; ++s) {
        Rng r(s);
        auto sub = sample_connected_subgraph(path, 2, r);
        std::set<long long> pops;
        for (const auto& u : sub.units) pops.insert(u.id);
        (void)pops;
        // identify by total of original x-centroids: {0,1} vs {1,2}
        double cx = 0;
        for (const auto& u : sub.units) cx += u.center().x;
        if (cx < 3.0) ++with0;  // {0,1} sums to 2.0, {1,2} to 4.0
    }
    // start vertex uniform over 3, then uniform neighbor: P({0,1}) = 0.5
    CHECK(with0 / static_cast<double>(draws) == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("generate_training_instance") {
    Rng rng(5);
    std::vector<CityGraph> pool{helpers::grid_city(6, 5), helpers::grid_city(9, 10)};
    // selection proportional to BU count: 30 vs 90 -> 0.25 / 0.75
    int first = 0;
    const int draws = 10000;
    for (int s = 0; s < draws; ++s) {
        Rng r(s);
        Instance inst = generate_training_instance(pool, 3, 3, r);
        // pool cities have different unit areas? both unit squares; tell them
        // apart by max centroid coordinate (city 0 fits in 5x6)
        double mx = 0;
        for (const auto& u : inst.graph.units) mx = std::max(mx, u.center().x);
        double my = 0;
        for (const auto& u : inst.graph.units) my = std::max(my, u.center().y);
        if (mx <= 5.0 && my <= 6.0) ++first;
    }
    // city-1 subgraphs can also fall inside the 5x6 box, so `first`
    // overcounts; only check the lower bound direction loosely
    CHECK(first >= 0.25 * draws * 0.8);

    for (int s = 0; s < 200; ++s) {
        Rng r(77 + s);
        Instance inst = generate_training_instance(pool, 6, 3, r);
        for (const auto& u : inst.graph.units) {
            CHECK(u.population >= 5000);
            CHECK(u.population <= 20000);
        }
        CHECK(inst.num_districts == 2);
        CHECK(inst.min_size == 3);
        CHECK(inst.max_size == 3);
        CHECK(inst.edge_features.size() == inst.num_edges());
    }

    CHECK_THROWS_AS(generate_training_instance({}, 3, 3, rng), std::invalid_argument);
}

TEST_CASE("synth_city") {
    Rng rng(9);
    auto two = synth_city(2, rng);
    CHECK(two.num_vertices() == 2);
    CHECK(two.num_edges() == 1);

    for (int s = 0; s < 20; ++s) {
        Rng r(100 + s);
        auto g = synth_city(12, r, 10.0);
        CHECK(g.is_connected());
        double total = 0;
        for (const auto& u : g.units) total += u.area;
        CHECK(total == doctest::Approx(100.0).epsilon(1e-6));
        for (const auto& u : g.units) {
            CHECK(u.population >= 5000);
            CHECK(u.population <= 20000);
        }
    }
}

TEST_CASE("instance file round trip") {
    Rng rng(11);
    auto g = synth_city(8, rng);
    Instance inst = make_instance(std::move(g), 3, 123);
    std::string path = (std::filesystem::temp_directory_path() / "inst_rt.json").string();
    save_instance(inst, path);
    Instance back = load_instance(path);
    CHECK(back.num_vertices() == inst.num_vertices());
    CHECK(back.graph.edges == inst.graph.edges);
    CHECK(back.target_size == inst.target_size);
    CHECK(back.min_size == inst.min_size);
    CHECK(back.num_districts == inst.num_districts);
    CHECK(back.seed == inst.seed);
    for (std::size_t e = 0; e < inst.num_edges(); ++e) {
        for (int i = 0; i < kFeatureDim; ++i) {
            CHECK(back.edge_features[e][i] == doctest::Approx(inst.edge_features[e][i]));
        }
    }
}
