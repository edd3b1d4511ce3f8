#include "districtnet/cmst.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace districtnet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct UnionFind {
    std::vector<int> parent, size;
    explicit UnionFind(int n) : parent(n), size(n, 1) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size[a] < size[b]) std::swap(a, b);
        parent[b] = a;
        size[a] += size[b];
        return true;
    }
};

bool connected_subset(const std::vector<int>& vs, const std::vector<std::vector<int>>& adj,
                      int skip = -1) {
    std::vector<int> members;
    for (int v : vs) {
        if (v != skip) members.push_back(v);
    }
    if (members.empty()) return false;
    std::vector<char> in(adj.size(), 0), seen(adj.size(), 0);
    for (int v : members) in[v] = 1;
    std::queue<int> q;
    q.push(members.front());
    seen[members.front()] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u]) {
            if (in[v] && !seen[v]) {
                seen[v] = 1;
                ++reached;
                q.push(v);
            }
        }
    }
    return reached == members.size();
}

int size_violation(std::size_t size, const Instance& inst) {
    int v = 0;
    const int s = static_cast<int>(size);
    if (s < inst.min_size) v += inst.min_size - s;
    if (s > inst.max_size) v += s - inst.max_size;
    return v;
}

}  // namespace

DistrictingSolution make_districting(std::vector<std::vector<int>> districts,
                                     std::size_t n_vertices) {
    DistrictingSolution sol;
    sol.assignment.assign(n_vertices, -1);
    for (auto& d : districts) std::sort(d.begin(), d.end());
    std::sort(districts.begin(), districts.end());
    for (std::size_t i = 0; i < districts.size(); ++i) {
        for (int v : districts[i]) {
            if (sol.assignment[v] != -1) throw std::invalid_argument("vertex in two districts");
            sol.assignment[v] = static_cast<int>(i);
        }
    }
    for (int a : sol.assignment) {
        if (a < 0) throw std::invalid_argument("vertex not covered by any district");
    }
    sol.districts = std::move(districts);
    return sol;
}

DistrictingSolution decode(const CmstSolution& y, const Instance& instance) {
    const std::size_t n = instance.num_vertices();
    UnionFind uf(static_cast<int>(n));
    for (std::size_t e = 0; e < instance.num_edges(); ++e) {
        if (y.y[e]) uf.unite(instance.graph.edges[e].first, instance.graph.edges[e].second);
    }
    std::unordered_map<int, std::vector<int>> comps;
    for (std::size_t v = 0; v < n; ++v) comps[uf.find(static_cast<int>(v))].push_back(static_cast<int>(v));
    std::vector<std::vector<int>> districts;
    for (auto& [root, vs] : comps) districts.push_back(std::move(vs));
    return make_districting(std::move(districts), n);
}

std::vector<int> mask_to_vertices(std::uint32_t mask) {
    std::vector<int> vs;
    for (int v = 0; mask; ++v, mask >>= 1) {
        if (mask & 1u) vs.push_back(v);
    }
    return vs;
}

std::vector<std::uint32_t> enumerate_connected_subsets(const Instance& instance,
                                                       int min_size, int max_size) {
    const int n = static_cast<int>(instance.num_vertices());
    if (n > 31) throw std::invalid_argument("subset enumeration limited to N <= 31");
    std::vector<std::uint32_t> nbr(n, 0);
    for (auto [u, v] : instance.graph.edges) {
        nbr[u] |= 1u << v;
        nbr[v] |= 1u << u;
    }

    std::vector<std::uint32_t> out;
    // Each connected set is generated once: grow from its lowest vertex and
    // never re-add candidates already declined at this branch.
    std::function<void(std::uint32_t, std::uint32_t)> grow =
        [&](std::uint32_t set, std::uint32_t forbidden) {
            const int size = std::popcount(set);
            if (size >= min_size) out.push_back(set);
            if (size == max_size) return;
            std::uint32_t boundary = 0;
            for (std::uint32_t m = set; m;) {
                const int v = std::countr_zero(m);
                m &= m - 1;
                boundary |= nbr[v];
            }
            std::uint32_t cand = boundary & ~set & ~forbidden;
            std::uint32_t declined = 0;
            while (cand) {
                const int u = std::countr_zero(cand);
                cand &= cand - 1;
                grow(set | (1u << u), forbidden | declined);
                declined |= 1u << u;
            }
        };
    for (int v = 0; v < n; ++v) {
        // forbid all lower-indexed vertices so v is the set minimum
        grow(1u << v, (1u << v) - 1);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool max_spanning_tree(std::uint32_t mask, const std::vector<double>& theta,
                       const Instance& instance, double* weight, std::vector<int>* edges) {
    std::vector<int> in_edges;
    for (std::size_t e = 0; e < instance.num_edges(); ++e) {
        auto [u, v] = instance.graph.edges[e];
        if ((mask >> u & 1u) && (mask >> v & 1u)) in_edges.push_back(static_cast<int>(e));
    }
    std::stable_sort(in_edges.begin(), in_edges.end(),
                     [&](int a, int b) { return theta[a] > theta[b]; });
    UnionFind uf(static_cast<int>(instance.num_vertices()));
    double w = 0.0;
    int merges = 0;
    if (edges) edges->clear();
    for (int e : in_edges) {
        if (uf.unite(instance.graph.edges[e].first, instance.graph.edges[e].second)) {
            w += theta[e];
            ++merges;
            if (edges) edges->push_back(e);
        }
    }
    if (merges != std::popcount(mask) - 1) return false;
    if (weight) *weight = w;
    return true;
}

bool best_partition(const std::vector<std::uint32_t>& masks, const std::vector<double>& weights,
                    int n_vertices, int k, bool maximize, int min_size, int max_size,
                    std::vector<int>* chosen, double* value) {
    // index subsets by their lowest vertex
    std::vector<std::vector<int>> by_lowest(n_vertices);
    for (std::size_t i = 0; i < masks.size(); ++i) {
        by_lowest[std::countr_zero(masks[i])].push_back(static_cast<int>(i));
    }

    const double worst = maximize ? -kInf : kInf;
    struct Entry {
        double value;
        int choice;
    };
    std::unordered_map<std::uint64_t, Entry> memo;

    std::function<double(std::uint32_t, int)> solve = [&](std::uint32_t uncovered,
                                                          int parts) -> double {
        if (uncovered == 0) return parts == 0 ? 0.0 : worst;
        const int remaining = std::popcount(uncovered);
        if (parts <= 0 || remaining < parts * min_size || remaining > parts * max_size) {
            return worst;
        }
        const std::uint64_t key = (static_cast<std::uint64_t>(uncovered) << 6) |
                                  static_cast<std::uint64_t>(parts);
        if (auto it = memo.find(key); it != memo.end()) return it->second.value;
        const int v = std::countr_zero(uncovered);
        double best = worst;
        int best_choice = -1;
        for (int idx : by_lowest[v]) {
            if ((masks[idx] & ~uncovered) != 0) continue;
            const double sub = solve(uncovered & ~masks[idx], parts - 1);
            if (!std::isfinite(sub) && sub == worst) continue;
            const double total = weights[idx] + sub;
            if (best_choice < 0 || (maximize ? total > best : total < best)) {
                best = total;
                best_choice = idx;
            }
        }
        memo[key] = {best, best_choice};
        return best;
    };

    const std::uint32_t full = (n_vertices == 32) ? 0xffffffffu
                                                  : ((1u << n_vertices) - 1u);
    const double v = solve(full, k);
    if (!std::isfinite(v)) return false;
    if (value) *value = v;
    if (chosen) {
        chosen->clear();
        std::uint32_t uncovered = full;
        int parts = k;
        while (uncovered) {
            const std::uint64_t key = (static_cast<std::uint64_t>(uncovered) << 6) |
                                      static_cast<std::uint64_t>(parts);
            const int idx = memo.at(key).choice;
            chosen->push_back(idx);
            uncovered &= ~masks[idx];
            --parts;
        }
    }
    return true;
}

CmstSolution exact_cmst(const std::vector<double>& theta, const Instance& instance, int cap) {
    const int n = static_cast<int>(instance.num_vertices());
    if (n > cap) throw std::invalid_argument("instance exceeds exact solver cap");
    auto masks = enumerate_connected_subsets(instance, instance.min_size, instance.max_size);
    std::vector<double> weights(masks.size());
    for (std::size_t i = 0; i < masks.size(); ++i) {
        double w;
        if (!max_spanning_tree(masks[i], theta, instance, &w)) {
            throw std::logic_error("enumerated subset not connected");
        }
        weights[i] = w;
    }
    std::vector<int> chosen;
    double value;
    if (!best_partition(masks, weights, n, instance.num_districts, /*maximize=*/true,
                        instance.min_size, instance.max_size, &chosen, &value)) {
        throw std::runtime_error("no feasible partition for the given bounds");
    }
    CmstSolution sol;
    sol.y.assign(instance.num_edges(), 0);
    sol.objective = value;
    for (int idx : chosen) {
        std::vector<int> tree;
        max_spanning_tree(masks[idx], theta, instance, nullptr, &tree);
        for (int e : tree) sol.y[e] = 1;
        sol.subtrees.push_back(mask_to_vertices(masks[idx]));
    }
    std::sort(sol.subtrees.begin(), sol.subtrees.end());
    return sol;
}

KruskalResult modified_kruskal(const std::vector<double>& theta, const Instance& instance,
                               int cap) {
    if (cap < 1) throw std::invalid_argument("cap must be >= 1");
    const int n = static_cast<int>(instance.num_vertices());
    std::vector<int> order(instance.num_edges());
    std::iota(order.begin(), order.end(), 0);
    // cost = -theta: scan by increasing cost, lowest edge index on ties
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return theta[a] > theta[b]; });
    UnionFind uf(n);
    KruskalResult res;
    for (int e : order) {
        auto [u, v] = instance.graph.edges[e];
        const int ru = uf.find(u), rv = uf.find(v);
        if (ru != rv && uf.size[ru] + uf.size[rv] <= cap) {
            uf.unite(u, v);
            res.tree_edges.push_back(e);
        }
    }
    std::unordered_map<int, std::vector<int>> groups;
    for (int v = 0; v < n; ++v) groups[uf.find(v)].push_back(v);
    for (auto& [root, vs] : groups) res.clusters.push_back(std::move(vs));
    for (auto& c : res.clusters) std::sort(c.begin(), c.end());
    std::sort(res.clusters.begin(), res.clusters.end());
    return res;
}

std::vector<std::vector<int>> greedy_merge(std::vector<std::vector<int>> clusters, int k,
                                           const Instance& instance) {
    if (static_cast<int>(clusters.size()) < k) {
        throw std::invalid_argument("fewer clusters than target count");
    }
    auto adj = instance.graph.adjacency();
    while (static_cast<int>(clusters.size()) > k) {
        // adjacency between clusters via member vertices
        std::vector<int> cluster_of(instance.num_vertices(), -1);
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            for (int v : clusters[c]) cluster_of[v] = static_cast<int>(c);
        }
        int best_a = -1, best_b = -1;
        std::size_t best_size = 0;
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            for (int v : clusters[a]) {
                for (int w : adj[v]) {
                    const int b = cluster_of[w];
                    if (b <= static_cast<int>(a)) continue;
                    const std::size_t combined = clusters[a].size() + clusters[b].size();
                    bool better = best_a < 0 || combined < best_size;
                    if (!better && combined == best_size) {
                        // ties: lowest pair of minimum vertex ids
                        better = std::make_pair(clusters[a].front(), clusters[b].front()) <
                                 std::make_pair(clusters[best_a].front(), clusters[best_b].front());
                    }
                    if (better) {
                        best_a = static_cast<int>(a);
                        best_b = b;
                        best_size = combined;
                    }
                }
            }
        }
        if (best_a < 0) throw std::runtime_error("no adjacent cluster pair to merge");
        auto merged = clusters[best_a];
        merged.insert(merged.end(), clusters[best_b].begin(), clusters[best_b].end());
        std::sort(merged.begin(), merged.end());
        clusters.erase(clusters.begin() + best_b);
        clusters[best_a] = std::move(merged);
    }
    std::sort(clusters.begin(), clusters.end());
    return clusters;
}

DistrictingSolution repair(DistrictingSolution solution, const Instance& instance) {
    auto adj = instance.graph.adjacency();
    auto& districts = solution.districts;
    auto& assignment = solution.assignment;

    auto move_node = [&](int node, int from, int to) {
        auto& src = districts[from];
        src.erase(std::find(src.begin(), src.end(), node));
        districts[to].push_back(node);
        std::sort(districts[to].begin(), districts[to].end());
        assignment[node] = to;
    };

    // candidate transfer: a node of `donor` adjacent to `receiver` whose
    // removal keeps the donor connected; lowest id wins
    auto find_transfer = [&](int donor, int receiver) -> int {
        for (int v : districts[donor]) {
            bool touches = false;
            for (int w : adj[v]) {
                if (assignment[w] == receiver) {
                    touches = true;
                    break;
                }
            }
            if (!touches) continue;
            if (districts[donor].size() >= 2 && connected_subset(districts[donor], adj, v)) {
                return v;
            }
        }
        return -1;
    };

    auto pass = [&](bool grow) {
        std::vector<int> order(districts.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (districts[a].size() != districts[b].size()) {
                return grow ? districts[a].size() < districts[b].size()
                            : districts[a].size() > districts[b].size();
            }
            return a < b;
        });
        for (int d : order) {
            if (grow) {
                while (static_cast<int>(districts[d].size()) < instance.min_size) {
                    // prefer the largest neighboring donor
                    int best_donor = -1, best_node = -1;
                    for (std::size_t other = 0; other < districts.size(); ++other) {
                        if (static_cast<int>(other) == d) continue;
                        const int node = find_transfer(static_cast<int>(other), d);
                        if (node < 0) continue;
                        if (best_donor < 0 ||
                            districts[other].size() > districts[best_donor].size()) {
                            best_donor = static_cast<int>(other);
                            best_node = node;
                        }
                    }
                    if (best_donor < 0) break;
                    move_node(best_node, best_donor, d);
                }
            } else {
                while (static_cast<int>(districts[d].size()) > instance.max_size) {
                    // push a border node into the smallest adjacent district
                    int best_recv = -1, best_node = -1;
                    for (std::size_t other = 0; other < districts.size(); ++other) {
                        if (static_cast<int>(other) == d) continue;
                        const int node = find_transfer(d, static_cast<int>(other));
                        if (node < 0) continue;
                        if (best_recv < 0 ||
                            districts[other].size() < districts[best_recv].size()) {
                            best_recv = static_cast<int>(other);
                            best_node = node;
                        }
                    }
                    if (best_recv < 0) break;
                    move_node(best_node, d, best_recv);
                }
            }
        }
    };

    auto violation = [&] {
        int total = 0;
        for (const auto& d : districts) total += size_violation(d.size(), instance);
        return total;
    };

    // iterate passes: a single pass cannot shuttle capacity through
    // intermediate districts, repeated passes can; bounded for termination
    for (std::size_t round = 0; round < 2 * instance.num_vertices(); ++round) {
        if (violation() == 0) break;
        pass(/*grow=*/true);
        pass(/*grow=*/false);
    }

    const bool feasible = violation() == 0;
    DistrictingSolution out = make_districting(solution.districts, instance.num_vertices());
    out.feasible = feasible;
    out.seed = solution.seed;
    return out;
}

namespace {

double penalized_cost(const std::vector<int>& district, const CostOracle& oracle,
                      const Instance& inst, double rho) {
    return oracle(district) + rho * size_violation(district.size(), inst);
}

/// One local-search (or perturbation) sweep machinery shared by LS and ILS.
/// perturb_prob == 0 runs best-improvement local search to a local optimum;
/// otherwise every admissible move is applied with that probability.
DistrictingSolution search_sweep(DistrictingSolution sol, const CostOracle& oracle,
                                 const Instance& inst, Rng& rng, double rho,
                                 double perturb_prob) {
    auto adj = inst.graph.adjacency();
    auto& districts = sol.districts;
    auto& assignment = sol.assignment;
    const std::size_t k = districts.size();

    auto cost_of = [&](const std::vector<int>& d) {
        return penalized_cost(d, oracle, inst, rho);
    };

    auto with_node = [](std::vector<int> d, int add, int remove) {
        if (remove >= 0) d.erase(std::find(d.begin(), d.end(), remove));
        if (add >= 0) {
            d.insert(std::lower_bound(d.begin(), d.end(), add), add);
        }
        return d;
    };

    bool improvement = true;
    while (improvement) {
        improvement = false;
        // district pairs in random order
        std::vector<std::pair<int, int>> pairs;
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = a + 1; b < k; ++b) {
                pairs.emplace_back(static_cast<int>(a), static_cast<int>(b));
            }
        }
        for (std::size_t i = pairs.size(); i > 1; --i) {
            std::swap(pairs[i - 1], pairs[rng.uniform_index(i)]);
        }

        for (auto [a, b] : pairs) {
            // border nodes of a district: adjacent to the other district
            auto border = [&](int da, int db) {
                std::vector<int> out;
                for (int v : districts[da]) {
                    for (int w : adj[v]) {
                        if (assignment[w] == db) {
                            out.push_back(v);
                            break;
                        }
                    }
                }
                return out;
            };
            const auto border_a = border(a, b);
            const auto border_b = border(b, a);
            const double base = cost_of(districts[a]) + cost_of(districts[b]);

            struct Move {
                int node_a = -1;  // moved a -> b
                int node_b = -1;  // moved b -> a (swap when both set)
                double delta = 0.0;
            };
            Move best;
            bool have_best = false;
            auto consider = [&](int na, int nb) {
                // earlier accepted perturbation moves may have displaced a node
                if (na >= 0 && assignment[na] != a) return;
                if (nb >= 0 && assignment[nb] != b) return;
                auto new_a = with_node(districts[a], nb, na);
                auto new_b = with_node(districts[b], na, nb);
                if (new_a.empty() || new_b.empty()) return;
                if (!connected_subset(new_a, adj) || !connected_subset(new_b, adj)) return;
                const double delta = cost_of(new_a) + cost_of(new_b) - base;
                if (perturb_prob > 0.0) {
                    if (rng.uniform() < perturb_prob) {
                        districts[a] = std::move(new_a);
                        districts[b] = std::move(new_b);
                        for (int v : districts[a]) assignment[v] = a;
                        for (int v : districts[b]) assignment[v] = b;
                    }
                    return;
                }
                if (delta < -1e-12 && (!have_best || delta < best.delta)) {
                    best = {na, nb, delta};
                    have_best = true;
                }
            };

            for (int na : border_a) consider(na, -1);
            for (int nb : border_b) consider(-1, nb);
            for (int na : border_a) {
                for (int nb : border_b) consider(na, nb);
            }

            if (perturb_prob == 0.0 && have_best) {
                districts[a] = with_node(districts[a], best.node_b, best.node_a);
                districts[b] = with_node(districts[b], best.node_a, best.node_b);
                for (int v : districts[a]) assignment[v] = a;
                for (int v : districts[b]) assignment[v] = b;
                improvement = true;
            }
        }
        if (perturb_prob > 0.0) break;  // perturbation is a single sweep
    }

    sol.objective = 0.0;
    sol.feasible = true;
    for (const auto& d : districts) {
        sol.objective += oracle(d);
        if (size_violation(d.size(), inst) > 0) sol.feasible = false;
    }
    return sol;
}

double incumbent_rho(const DistrictingSolution& sol, const CostOracle& oracle) {
    double max_cost = 1.0;
    for (const auto& d : sol.districts) max_cost = std::max(max_cost, oracle(d));
    return 10.0 * max_cost;
}

}  // namespace

DistrictingSolution local_search(DistrictingSolution solution, const CostOracle& cost_oracle,
                                 const Instance& instance, Rng& rng) {
    const double rho = incumbent_rho(solution, cost_oracle);
    return search_sweep(std::move(solution), cost_oracle, instance, rng, rho, 0.0);
}

DistrictingSolution ils(DistrictingSolution initial, const CostOracle& cost_oracle,
                        const Instance& instance, IlsBudget budget, Rng& rng) {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };

    auto penalized_total = [&](const DistrictingSolution& s, double rho) {
        double total = 0.0;
        for (const auto& d : s.districts) total += penalized_cost(d, cost_oracle, instance, rho);
        return total;
    };

    DistrictingSolution current = std::move(initial);
    double rho = incumbent_rho(current, cost_oracle);
    DistrictingSolution best = search_sweep(current, cost_oracle, instance, rng, rho, 0.0);
    current = best;
    bool have_feasible = best.feasible;
    double best_pen = penalized_total(best, rho);

    for (long long iter = 0; iter < budget.max_iterations; ++iter) {
        if (elapsed() > budget.max_seconds) break;
        current = search_sweep(std::move(current), cost_oracle, instance, rng, rho, 0.015);
        current = search_sweep(std::move(current), cost_oracle, instance, rng, rho, 0.0);
        const double pen = penalized_total(current, rho);
        const bool better = current.feasible
                                ? (!have_feasible || current.objective < best.objective - 1e-12)
                                : (!have_feasible && pen < best_pen - 1e-12);
        if (better) {
            best = current;
            best_pen = pen;
            have_feasible = have_feasible || current.feasible;
            rho = incumbent_rho(best, cost_oracle);
        }
    }
    best.wall_time_ms = elapsed() * 1000.0;
    best.seed = rng.seed();
    return best;
}

CostOracle cmst_cost_oracle(const std::vector<double>& theta, const Instance& instance) {
    return [theta, &instance](const std::vector<int>& district) -> double {
        if (district.size() == 1) return 0.0;
        std::uint32_t mask = 0;
        for (int v : district) mask |= 1u << v;
        double w;
        if (!max_spanning_tree(mask, theta, instance, &w)) return kInf;
        return -w;
    };
}

DistrictingSolution initial_solution(const std::vector<double>& theta, const Instance& instance,
                                     Rng& rng, int repair_threshold) {
    auto kr = modified_kruskal(theta, instance, instance.max_size);
    auto clusters = greedy_merge(std::move(kr.clusters), instance.num_districts, instance);
    DistrictingSolution sol = make_districting(std::move(clusters), instance.num_vertices());
    sol.seed = rng.seed();
    auto violates = [&] {
        for (const auto& d : sol.districts) {
            if (size_violation(d.size(), instance) > 0) return true;
        }
        return false;
    };
    if (static_cast<int>(instance.num_vertices()) >= repair_threshold || violates()) {
        sol = repair(std::move(sol), instance);
    }
    sol.feasible = !violates();
    return sol;
}

using nlohmann::json;

void save_solution(const DistrictingSolution& sol, const std::string& path) {
    json doc = {{"assignment", sol.assignment},
                {"objective", sol.objective},
                {"feasible", sol.feasible},
                {"seed", sol.seed},
                {"wall_time_ms", sol.wall_time_ms}};
    std::ofstream out(path);
    out << doc.dump(2) << "\n";
}

DistrictingSolution load_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc;
    in >> doc;
    std::vector<int> assignment = doc.at("assignment").get<std::vector<int>>();
    const int k = assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
    std::vector<std::vector<int>> districts(k);
    for (std::size_t v = 0; v < assignment.size(); ++v) {
        districts[assignment[v]].push_back(static_cast<int>(v));
    }
    DistrictingSolution sol = make_districting(std::move(districts), assignment.size());
    sol.objective = doc.value("objective", 0.0);
    sol.feasible = doc.value("feasible", true);
    sol.seed = doc.value("seed", std::uint64_t{0});
    sol.wall_time_ms = doc.value("wall_time_ms", 0.0);
    return sol;
}

}  // namespace districtnet
