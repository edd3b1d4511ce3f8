#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "districtnet/geometry.hpp"
#include "districtnet/graph.hpp"

namespace oracle {

// Exact closed-tour length depot -> all points -> depot (Held-Karp, n <= 13).
inline double held_karp(const std::vector<districtnet::Point>& pts,
                        districtnet::Point depot) {
    const int n = static_cast<int>(pts.size());
    if (n == 0) return 0.0;
    if (n == 1) return 2.0 * districtnet::distance(depot, pts[0]);
    auto d = [&](int a, int b) { return districtnet::distance(pts[a], pts[b]); };
    const int full = 1 << n;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> dp(full, std::vector<double>(n, inf));
    for (int i = 0; i < n; ++i) dp[1 << i][i] = districtnet::distance(depot, pts[i]);
    for (int mask = 1; mask < full; ++mask) {
        for (int last = 0; last < n; ++last) {
            if (!(mask & (1 << last)) || dp[mask][last] == inf) continue;
            for (int nxt = 0; nxt < n; ++nxt) {
                if (mask & (1 << nxt)) continue;
                const int m2 = mask | (1 << nxt);
                dp[m2][nxt] = std::min(dp[m2][nxt], dp[mask][last] + d(last, nxt));
            }
        }
    }
    double best = inf;
    for (int last = 0; last < n; ++last) {
        best = std::min(best, dp[full - 1][last] + districtnet::distance(pts[last], depot));
    }
    return best;
}

inline bool subset_connected(std::uint32_t mask, const districtnet::Instance& inst) {
    if (mask == 0) return false;
    const auto adj = inst.graph.adjacency();
    int start = 0;
    while (!(mask & (1u << start))) ++start;
    std::uint32_t seen = 1u << start;
    std::vector<int> stack{start};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u : adj[v]) {
            if ((mask & (1u << u)) && !(seen & (1u << u))) {
                seen |= 1u << u;
                stack.push_back(u);
            }
        }
    }
    return seen == mask;
}

// All partitions of V into exactly k connected subsets with sizes in bounds.
inline std::vector<std::vector<std::uint32_t>> all_partitions(
    const districtnet::Instance& inst) {
    const int n = static_cast<int>(inst.num_vertices());
    std::vector<std::uint32_t> feasible;
    for (std::uint32_t m = 1; m < (1u << n); ++m) {
        const int sz = __builtin_popcount(m);
        if (sz >= inst.min_size && sz <= inst.max_size && subset_connected(m, inst)) {
            feasible.push_back(m);
        }
    }
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> cur;
    const std::uint32_t all = (1u << n) - 1;
    auto rec = [&](auto&& self, std::uint32_t covered) -> void {
        if (static_cast<int>(cur.size()) > inst.num_districts) return;
        if (covered == all) {
            if (static_cast<int>(cur.size()) == inst.num_districts) out.push_back(cur);
            return;
        }
        int low = 0;
        while (covered & (1u << low)) ++low;
        for (std::uint32_t m : feasible) {
            if ((m & (1u << low)) && !(m & covered)) {
                cur.push_back(m);
                self(self, covered | m);
                cur.pop_back();
            }
        }
    };
    rec(rec, 0);
    return out;
}

// Max spanning forest value of a partition under theta (brute force over
// spanning trees is unnecessary: greedy Kruskal per subset is itself an
// oracle because MST is exactly solvable; implemented independently here).
inline double partition_value(const std::vector<std::uint32_t>& parts,
                              const std::vector<double>& theta,
                              const districtnet::Instance& inst) {
    double total = 0.0;
    for (std::uint32_t m : parts) {
        std::vector<int> order(inst.num_edges());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return theta[a] > theta[b]; });
        std::vector<int> parent(inst.num_vertices());
        for (std::size_t v = 0; v < parent.size(); ++v) parent[v] = static_cast<int>(v);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (int e : order) {
            auto [u, v] = inst.graph.edges[e];
            if (!(m & (1u << u)) || !(m & (1u << v))) continue;
            int a = find(u), b = find(v);
            if (a != b) {
                parent[a] = b;
                total += theta[e];
            }
        }
    }
    return total;
}

}  // namespace oracle
