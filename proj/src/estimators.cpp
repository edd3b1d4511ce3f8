#include "districtnet/estimators.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <stdexcept>

#include <json.hpp>

namespace districtnet {

DistrictStats district_stats(const std::vector<int>& district, const Instance& instance,
                             int n_samples, Rng& rng) {
    if (district.empty()) throw std::invalid_argument("empty district");
    const double kappa = demand_rate(instance.target_size);
    DistrictStats st;
    for (int v : district) {
        st.total_area += instance.graph.units[v].area;
        st.expected_requests += static_cast<double>(instance.graph.units[v].population) * kappa;
    }
    // uniform over the district area: pick a BU area-proportionally, then
    // a uniform point inside it
    double sum = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        double pick = rng.uniform(0.0, st.total_area);
        int chosen = district.back();
        for (int v : district) {
            pick -= instance.graph.units[v].area;
            if (pick <= 0.0) {
                chosen = v;
                break;
            }
        }
        Point p = sample_point_in_polygon(instance.graph.units[chosen].polygon, rng);
        sum += distance(instance.graph.depot, p);
    }
    st.avg_depot_distance = sum / n_samples;
    return st;
}

double estimate_cost(const EstimatorParams& params, const DistrictStats& stats) {
    const double a = stats.total_area, r = stats.expected_requests, dd = stats.avg_depot_distance;
    if (params.kind == EstimatorKind::BD) {
        if (params.beta.size() != 1) throw std::invalid_argument("BD needs one parameter");
        return params.beta[0] * std::sqrt(a * r) + 2.0 * dd;
    }
    if (params.beta.size() != 4) throw std::invalid_argument("FIG needs four parameters");
    if (r <= 0.0) throw std::runtime_error("FIG undefined for zero expected requests");
    return params.beta[0] * std::sqrt(a * r) + params.beta[1] * dd +
           params.beta[2] * std::sqrt(a / r) + params.beta[3];
}

namespace {

// Solve the normal equations X'X b = X'y by Gaussian elimination with
// partial pivoting; dimensions here are at most 4.
std::vector<double> least_squares(const std::vector<std::vector<double>>& design,
                                  const std::vector<double>& target) {
    const std::size_t p = design.front().size();
    std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
    for (std::size_t row = 0; row < design.size(); ++row) {
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) a[i][j] += design[row][i] * design[row][j];
            a[i][p] += design[row][i] * target[row];
        }
    }
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < p; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (std::abs(a[piv][col]) < 1e-12) {
            throw std::runtime_error("rank-deficient design matrix");
        }
        std::swap(a[col], a[piv]);
        for (std::size_t r = 0; r < p; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= p; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> beta(p);
    for (std::size_t i = 0; i < p; ++i) beta[i] = a[i][p] / a[i][i];
    return beta;
}

}  // namespace

EstimatorParams fit_estimator(EstimatorKind kind,
                              const std::vector<std::pair<DistrictStats, double>>& training) {
    const std::size_t n_params = (kind == EstimatorKind::BD) ? 1 : 4;
    if (training.size() < n_params) throw std::invalid_argument("too few training rows");

    std::vector<std::vector<double>> design;
    std::vector<double> target;
    for (const auto& [st, cost] : training) {
        if (kind == EstimatorKind::BD) {
            // 2 Delta_d is a fixed offset, not a fitted coefficient
            design.push_back({std::sqrt(st.total_area * st.expected_requests)});
            target.push_back(cost - 2.0 * st.avg_depot_distance);
        } else {
            if (st.expected_requests <= 0.0) {
                throw std::runtime_error("FIG undefined for zero expected requests");
            }
            design.push_back({std::sqrt(st.total_area * st.expected_requests),
                              st.avg_depot_distance,
                              std::sqrt(st.total_area / st.expected_requests), 1.0});
            target.push_back(cost);
        }
    }

    EstimatorParams params;
    params.kind = kind;
    params.beta = least_squares(design, target);
    params.n_rows = training.size();
    double sse = 0.0;
    for (const auto& [st, cost] : training) {
        const double e = estimate_cost(params, st) - cost;
        sse += e * e;
    }
    params.fit_rmse = std::sqrt(sse / training.size());
    return params;
}

using nlohmann::json;

void save_estimator(const EstimatorParams& params, const std::string& path) {
    json doc = {{"kind", params.kind == EstimatorKind::BD ? "BD" : "FIG"},
                {"beta", params.beta},
                {"fit_rmse", params.fit_rmse},
                {"n_rows", params.n_rows}};
    std::ofstream out(path);
    out << doc.dump(2) << "\n";
}

EstimatorParams load_estimator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc;
    in >> doc;
    EstimatorParams params;
    params.kind = doc.at("kind") == "BD" ? EstimatorKind::BD : EstimatorKind::FIG;
    params.beta = doc.at("beta").get<std::vector<double>>();
    params.fit_rmse = doc.value("fit_rmse", 0.0);
    params.n_rows = doc.value("n_rows", std::size_t{0});
    return params;
}

CostOracle make_estimator_oracle(EstimatorParams params, const Instance& instance,
                                 int n_samples, std::uint64_t seed) {
    auto cache = std::make_shared<std::map<std::vector<int>, double>>();
    return [params = std::move(params), &instance, n_samples, seed, cache](
               const std::vector<int>& district) {
        std::vector<int> key = district;
        std::sort(key.begin(), key.end());
        if (auto it = cache->find(key); it != cache->end()) return it->second;
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (int v : key) h = splitmix64(h ^ static_cast<std::uint64_t>(v));
        Rng rng = Rng(seed).substream(h);
        const double cost = estimate_cost(params, district_stats(key, instance, n_samples, rng));
        (*cache)[std::move(key)] = cost;
        return cost;
    };
}

}  // namespace districtnet
