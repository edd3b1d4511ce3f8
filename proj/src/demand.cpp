#include "districtnet/demand.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace districtnet {

double demand_rate(int target_size) { return 96.0 / (8000.0 * target_size); }

Scenario sample_scenario(const Instance& instance, Rng& rng) {
    const double kappa = demand_rate(instance.target_size);
    Scenario s;
    s.requests.resize(instance.num_vertices());
    for (std::size_t v = 0; v < instance.num_vertices(); ++v) {
        const auto& bu = instance.graph.units[v];
        const int count = rng.poisson(static_cast<double>(bu.population) * kappa);
        s.requests[v].reserve(count);
        for (int i = 0; i < count; ++i) {
            s.requests[v].push_back(sample_point_in_polygon(bu.polygon, rng));
        }
    }
    return s;
}

std::vector<Scenario> sample_scenarios(const Instance& instance, int count, Rng& rng) {
    std::vector<Scenario> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        Rng sub = rng.substream(static_cast<std::uint64_t>(i));
        out.push_back(sample_scenario(instance, sub));
    }
    return out;
}

namespace {

double tour_length(const std::vector<Point>& pts, const std::vector<int>& order, Point depot) {
    if (order.empty()) return 0.0;
    double len = distance(depot, pts[order.front()]);
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        len += distance(pts[order[i]], pts[order[i + 1]]);
    }
    len += distance(pts[order.back()], depot);
    return len;
}

}  // namespace

static void improve_tour(const std::vector<Point>& points, Point depot,
                         std::vector<int>& ord);

Tour tsp_tour(const std::vector<Point>& points, Point depot) {
    Tour tour;
    const int n = static_cast<int>(points.size());
    if (n == 0) return tour;

    // nearest neighbor; `first` >= 0 forces the initial visit
    auto nn_order = [&](int first) {
        std::vector<int> ord;
        std::vector<bool> used(n, false);
        Point cur = depot;
        if (first >= 0) {
            used[first] = true;
            ord.push_back(first);
            cur = points[first];
        }
        while (static_cast<int>(ord.size()) < n) {
            int best = -1;
            double best_d = 0;
            for (int i = 0; i < n; ++i) {
                if (used[i]) continue;
                double d = distance(cur, points[i]);
                if (best < 0 || d < best_d) {
                    best = i;
                    best_d = d;
                }
            }
            used[best] = true;
            ord.push_back(best);
            cur = points[best];
        }
        return ord;
    };

    tour.order = nn_order(-1);
    improve_tour(points, depot, tour.order);
    tour.length = tour_length(points, tour.order, depot);

    // small point sets: multi-start to escape nearest-neighbor local optima
    if (n <= 12) {
        for (int first = 0; first < n; ++first) {
            auto ord = nn_order(first);
            improve_tour(points, depot, ord);
            const double len = tour_length(points, ord, depot);
            if (len < tour.length - 1e-12) {
                tour.order = std::move(ord);
                tour.length = len;
            }
        }
    }
    return tour;
}

// 2-opt + Or-opt local improvement of a closed tour rooted at the depot.
static void improve_tour(const std::vector<Point>& points, Point depot,
                         std::vector<int>& ord) {
    const int n = static_cast<int>(ord.size());
    auto pos_point = [&](int i) -> Point {
        // i in [0, n]: 0 is the depot, else ord[i-1]
        return i == 0 ? depot : points[ord[i - 1]];
    };
    bool improved = true;
    while (improved) {
        improved = false;
        // 2-opt: reverse ord[i..j]
        for (int i = 0; i < n - 1; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const Point a = pos_point(i), b = pos_point(i + 1);
                const Point c = pos_point(j + 1), d = (j + 1 == n) ? depot : pos_point(j + 2);
                const double delta = distance(a, c) + distance(b, d) -
                                     (distance(a, b) + distance(c, d));
                if (delta < -1e-12) {
                    std::reverse(ord.begin() + i, ord.begin() + j + 1);
                    improved = true;
                }
            }
        }
        // Or-opt: relocate segments of length 1..3, O(1) delta per candidate
        for (int seg = 1; seg <= 3 && seg <= n - 1; ++seg) {
            for (int i = 0; i + seg <= n; ++i) {
                const Point s0 = points[ord[i]];
                const Point s1 = points[ord[i + seg - 1]];
                const Point prev = (i == 0) ? depot : points[ord[i - 1]];
                const Point next = (i + seg == n) ? depot : points[ord[i + seg]];
                const double removal = distance(prev, next) -
                                       distance(prev, s0) - distance(s1, next);
                // insertion slot jp in the reduced tour of length n - seg
                auto orig = [&](int r) { return r < i ? r : r + seg; };
                for (int jp = 0; jp <= n - seg; ++jp) {
                    if (jp == i) continue;
                    const Point a = (jp == 0) ? depot : points[ord[orig(jp - 1)]];
                    const Point b = (jp == n - seg) ? depot : points[ord[orig(jp)]];
                    const double delta = removal + distance(a, s0) + distance(s1, b) -
                                         distance(a, b);
                    if (delta < -1e-12) {
                        std::vector<int> cand;
                        cand.reserve(n);
                        cand.insert(cand.end(), ord.begin(), ord.begin() + i);
                        cand.insert(cand.end(), ord.begin() + i + seg, ord.end());
                        cand.insert(cand.begin() + jp, ord.begin() + i,
                                    ord.begin() + i + seg);
                        ord = std::move(cand);
                        improved = true;
                        // indices shifted; restart this segment scan
                        i = -1;
                        break;
                    }
                }
                if (i < 0) break;
            }
        }
    }
}

double district_cost_mc(const std::vector<int>& district, const Instance& instance,
                        const std::vector<Scenario>& scenarios) {
    if (district.empty()) throw std::invalid_argument("empty district");
    double total = 0.0;
    for (const auto& s : scenarios) {
        std::vector<Point> pts;
        for (int v : district) {
            pts.insert(pts.end(), s.requests[v].begin(), s.requests[v].end());
        }
        total += tsp_tour(pts, instance.graph.depot).length;
    }
    return scenarios.empty() ? 0.0 : total / static_cast<double>(scenarios.size());
}

double avg_tsp_cost(const std::vector<int>& district, const Instance& instance) {
    if (district.empty()) throw std::invalid_argument("empty district");
    std::vector<Point> centers;
    centers.reserve(district.size());
    for (int v : district) centers.push_back(instance.graph.units[v].center());
    return tsp_tour(centers, instance.graph.depot).length;
}

using nlohmann::json;

void save_scenarios(const std::vector<Scenario>& scenarios, std::uint64_t seed,
                    const std::string& path) {
    json arr = json::array();
    for (const auto& s : scenarios) {
        json per_bu = json::array();
        for (const auto& reqs : s.requests) {
            json pts = json::array();
            for (const auto& p : reqs) pts.push_back({p.x, p.y});
            per_bu.push_back(pts);
        }
        arr.push_back(per_bu);
    }
    json doc = {{"seed", seed}, {"scenarios", arr}};
    std::ofstream out(path);
    out << doc.dump() << "\n";
}

std::vector<Scenario> load_scenarios(const std::string& path, std::uint64_t* seed_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc;
    in >> doc;
    if (seed_out) *seed_out = doc.value("seed", std::uint64_t{0});
    std::vector<Scenario> out;
    for (const auto& s : doc.at("scenarios")) {
        Scenario sc;
        for (const auto& per_bu : s) {
            std::vector<Point> pts;
            for (const auto& p : per_bu) pts.push_back({p.at(0), p.at(1)});
            sc.requests.push_back(std::move(pts));
        }
        out.push_back(std::move(sc));
    }
    return out;
}

}  // namespace districtnet
