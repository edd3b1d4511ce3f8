#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numeric>

#include "districtnet/cmst.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace districtnet;

namespace {

bool district_connected(const std::vector<int>& d, const Instance& inst) {
    std::uint32_t m = 0;
    for (int v : d) m |= 1u << v;
    return oracle::subset_connected(m, inst);
}

bool feasible_solution(const DistrictingSolution& s, const Instance& inst) {
    if (static_cast<int>(s.districts.size()) != inst.num_districts) return false;
    std::vector<int> seen(inst.num_vertices(), 0);
    for (const auto& d : s.districts) {
        if (static_cast<int>(d.size()) < inst.min_size ||
            static_cast<int>(d.size()) > inst.max_size) {
            return false;
        }
        if (!district_connected(d, inst)) return false;
        for (int v : d) ++seen[v];
    }
    return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

}  // namespace

TEST_CASE("decode forms districts from selected-edge components") {
    Instance inst = helpers::grid_instance(1, 3, 1, 8000);  // path 0-1-2
    CmstSolution y;
    y.y = {1, 0};  // select edge (0,1) only
    auto sol = decode(y, inst);
    REQUIRE(sol.districts.size() == 2);
    CHECK(sol.districts[0] == std::vector<int>{0, 1});
    CHECK(sol.districts[1] == std::vector<int>{2});
    CHECK(sol.assignment[0] == sol.assignment[1]);
    CHECK(sol.assignment[2] != sol.assignment[0]);
}

TEST_CASE("enumerate_connected_subsets matches brute force") {
    for (auto [r, c, t] : {std::tuple{2, 3, 2}, std::tuple{3, 3, 3}, std::tuple{1, 5, 2}}) {
        Instance inst = helpers::grid_instance(r, c, t, 8000);
        auto masks = enumerate_connected_subsets(inst, inst.min_size, inst.max_size);
        std::vector<std::uint32_t> brute;
        for (std::uint32_t m = 1; m < (1u << inst.num_vertices()); ++m) {
            int sz = __builtin_popcount(m);
            if (sz >= inst.min_size && sz <= inst.max_size &&
                oracle::subset_connected(m, inst)) {
                brute.push_back(m);
            }
        }
        auto sorted = masks;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == brute);
        CHECK(sorted.size() == masks.size());
    }
}

TEST_CASE("exact_cmst path example") {
    Instance inst = helpers::grid_instance(1, 4, 2, 8000);  // path, bounds [2,2], k=2
    std::vector<double> theta = {1.0, 0.0, 1.0};
    auto sol = exact_cmst(theta, inst);
    CHECK(sol.objective == doctest::Approx(2.0));
    REQUIRE(sol.subtrees.size() == 2);
    CHECK(sol.subtrees[0] == std::vector<int>{0, 1});
    CHECK(sol.subtrees[1] == std::vector<int>{2, 3});
    CHECK(std::accumulate(sol.y.begin(), sol.y.end(), 0) == 2);  // N - k
}

TEST_CASE("exact_cmst uniform theta and k=1") {
    Instance inst = helpers::grid_instance(2, 3, 3, 8000);  // N=6, k=2
    std::vector<double> uni(inst.num_edges(), 0.7);
    auto sol = exact_cmst(uni, inst);
    CHECK(sol.objective == doctest::Approx((6 - 2) * 0.7));

    Instance whole = helpers::grid_instance(2, 3, 6, 8000);  // k=1, bounds include 6
    REQUIRE(whole.num_districts == 1);
    Rng rng(8);
    std::vector<double> theta;
    for (std::size_t e = 0; e < whole.num_edges(); ++e) theta.push_back(rng.uniform());
    auto mst = exact_cmst(theta, whole);
    std::uint32_t all = (1u << 6) - 1;
    CHECK(mst.objective ==
          doctest::Approx(oracle::partition_value({all}, theta, whole)).epsilon(1e-9));
}

TEST_CASE("exact_cmst equals brute-force partition search on random theta") {
    for (int s = 0; s < 10; ++s) {
        Instance inst = helpers::grid_instance(3, 3, 3, 8000);
        Rng rng(40 + s);
        std::vector<double> theta;
        for (std::size_t e = 0; e < inst.num_edges(); ++e) theta.push_back(rng.normal(0, 1));
        auto sol = exact_cmst(theta, inst);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& parts : oracle::all_partitions(inst)) {
            best = std::max(best, oracle::partition_value(parts, theta, inst));
        }
        CHECK(sol.objective == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("exact_cmst infeasible structure") {
    // 5 vertices with bounds [2,2] and k=2 cannot cover V
    Instance inst = helpers::grid_instance(1, 5, 2, 8000);
    std::vector<double> theta(inst.num_edges(), 1.0);
    CHECK_THROWS(exact_cmst(theta, inst));
}

TEST_CASE("modified_kruskal") {
    Instance inst = helpers::grid_instance(1, 4, 2, 8000);
    auto caps1 = modified_kruskal({1, 1, 1}, inst, 1);
    CHECK(caps1.clusters.size() == 4);
    CHECK(caps1.tree_edges.empty());

    auto res = modified_kruskal({3, 1, 2}, inst, 2);
    REQUIRE(res.clusters.size() == 2);
    auto cl = res.clusters;
    std::sort(cl.begin(), cl.end());
    CHECK(cl[0] == std::vector<int>{0, 1});
    CHECK(cl[1] == std::vector<int>{2, 3});

    Instance two = helpers::grid_instance(1, 2, 2, 8000);
    auto m2 = modified_kruskal({1.0}, two, 2);
    CHECK(m2.clusters.size() == 1);

    // cap respected on random graphs
    for (int s = 0; s < 20; ++s) {
        Instance g = helpers::grid_instance(3, 4, 3, 8000);
        Rng rng(s);
        std::vector<double> theta;
        for (std::size_t e = 0; e < g.num_edges(); ++e) theta.push_back(rng.normal(0, 1));
        for (const auto& c : modified_kruskal(theta, g, 4).clusters) {
            CHECK(c.size() <= 4);
        }
    }
}

TEST_CASE("greedy_merge") {
    Instance inst = helpers::grid_instance(1, 3, 1, 8000);
    std::vector<std::vector<int>> singles = {{0}, {1}, {2}};
    auto merged = greedy_merge(singles, 2, inst);
    REQUIRE(merged.size() == 2);
    std::sort(merged.begin(), merged.end());
    CHECK(merged[0] == std::vector<int>{0, 1});  // lowest-id tie-break merges (0,1)
    CHECK(merged[1] == std::vector<int>{2});

    auto same = greedy_merge(merged, 2, inst);
    CHECK(same == merged);

    Instance g = helpers::grid_instance(3, 4, 4, 8000);
    std::vector<std::vector<int>> s12;
    for (int v = 0; v < 12; ++v) s12.push_back({v});
    auto three = greedy_merge(s12, 3, g);
    REQUIRE(three.size() == 3);
    for (const auto& c : three) CHECK(district_connected(c, g));
}

TEST_CASE("repair") {
    Instance inst = helpers::grid_instance(1, 6, 3, 8000);  // bounds [3,3], k=2
    auto skew = make_districting({{0}, {1, 2, 3, 4, 5}}, 6);
    auto fixed = repair(skew, inst);
    CHECK(feasible_solution(fixed, inst));

    auto ok = make_districting({{0, 1, 2}, {3, 4, 5}}, 6);
    auto unchanged = repair(ok, inst);
    CHECK(unchanged.districts == ok.districts);

    // repaired districts always connected
    for (int s = 0; s < 100; ++s) {
        Instance g = helpers::grid_instance(3, 3, 3, 8000);
        Rng rng(500 + s);
        auto init = initial_solution(std::vector<double>(g.num_edges(), 1.0), g, rng, 1);
        for (const auto& d : repair(init, g).districts) {
            CHECK(district_connected(d, g));
        }
    }
}

TEST_CASE("cmst_cost_oracle") {
    // triangle: 3 units in a row plus a manual 0-2 edge
    CityGraph g = helpers::grid_city(1, 3);
    g.edges.emplace_back(0, 2);
    std::sort(g.edges.begin(), g.edges.end());
    Instance inst = make_instance(std::move(g), 3);
    // edges sorted: (0,1), (0,2), (1,2) with theta 1, 3, 2
    auto oracle_fn = cmst_cost_oracle({1.0, 3.0, 2.0}, inst);
    CHECK(oracle_fn({0}) == doctest::Approx(0.0));
    CHECK(oracle_fn({0, 2}) == doctest::Approx(-3.0));
    CHECK(oracle_fn({0, 1, 2}) == doctest::Approx(-5.0));  // max tree uses 3 and 2

    Instance path = helpers::grid_instance(1, 3, 3, 8000);
    auto po = cmst_cost_oracle({1.0, 2.0}, path);
    CHECK(std::isinf(po({0, 2})));  // disconnected induced subgraph
}

TEST_CASE("local_search steers to the oracle optimum on a 2x2 grid") {
    Instance inst = helpers::grid_instance(2, 2, 2, 8000);
    // vertices: 0 1 / 2 3; horizontal pairs {0,1},{2,3}
    CostOracle oracle_fn = [](const std::vector<int>& d) {
        if (d == std::vector<int>{0, 1} || d == std::vector<int>{2, 3}) return 0.0;
        return 1.0;
    };
    auto vertical = make_districting({{0, 2}, {1, 3}}, 4);
    Rng rng(1);
    auto out = local_search(vertical, oracle_fn, inst, rng);
    auto got = out.districts;
    std::sort(got.begin(), got.end());
    std::vector<std::vector<int>> want = {{0, 1}, {2, 3}};
    CHECK(got == want);

    auto single = make_districting({{0, 1, 2, 3}}, 4);
    Instance k1 = helpers::grid_instance(2, 2, 4, 8000);
    auto same = local_search(single, oracle_fn, k1, rng);
    CHECK(same.districts == single.districts);
}

TEST_CASE("ils on the cmst oracle matches exact at small N") {
    int match = 0;
    for (int s = 0; s < 12; ++s) {
        Instance inst = helpers::grid_instance(3, 3, 3, 8000);
        Rng rng(900 + s);
        std::vector<double> theta;
        for (std::size_t e = 0; e < inst.num_edges(); ++e) theta.push_back(rng.normal(0, 1));
        auto exact = exact_cmst(theta, inst);
        Rng ils_rng(1900 + s);
        auto init = initial_solution(theta, inst, ils_rng);
        auto sol = ils(init, cmst_cost_oracle(theta, inst), inst, {300, 10.0}, ils_rng);
        REQUIRE(sol.feasible);
        CHECK(feasible_solution(sol, inst));
        // max formulation: heuristic theta-objective never exceeds the exact optimum
        CHECK(-sol.objective <= exact.objective + 1e-9);
        if (std::abs(-sol.objective - exact.objective) < 1e-9) ++match;
    }
    CHECK(match >= 10);
}

TEST_CASE("initial_solution invariants") {
    for (int s = 0; s < 50; ++s) {
        Instance inst = helpers::grid_instance(3, 4, 3, 8000);  // N=12, k=4
        Rng rng(3000 + s);
        std::vector<double> theta;
        for (std::size_t e = 0; e < inst.num_edges(); ++e) theta.push_back(rng.normal(0, 1));
        auto sol = initial_solution(theta, inst, rng);
        // partitions V into connected clusters (sizes may still be off-bounds)
        std::vector<int> seen(inst.num_vertices(), 0);
        for (const auto& d : sol.districts) {
            CHECK(district_connected(d, inst));
            for (int v : d) ++seen[v];
        }
        CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
        CHECK(sol.districts.size() == static_cast<std::size_t>(inst.num_districts));
    }
}

TEST_CASE("solution file round trip") {
    auto sol = make_districting({{0, 1}, {2, 3}}, 4);
    sol.objective = 1.25;
    sol.seed = 42;
    std::string path = (std::filesystem::temp_directory_path() / "sol_rt.json").string();
    save_solution(sol, path);
    auto back = load_solution(path);
    CHECK(back.districts == sol.districts);
    CHECK(back.assignment == sol.assignment);
    CHECK(back.objective == doctest::Approx(1.25));
    CHECK(back.seed == 42);
}
