#include "districtnet/structlearn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "districtnet/demand.hpp"
#include "districtnet/parallel.hpp"

namespace districtnet {

double learning_rate_at(const TrainConfig& config, int epoch) {
    const double lr = config.initial_lr *
                      std::pow(config.lr_decay, epoch / config.lr_decay_every);
    return std::max(lr, config.lr_floor);
}

MomentVector construct_target(const DistrictingSolution& lambda_bar, const Instance& instance,
                              int n_samples, Rng& rng) {
    const std::size_t m = instance.num_edges();
    auto adj = instance.graph.adjacency();

    // per district: the induced edge list
    std::vector<std::vector<int>> district_edges(lambda_bar.districts.size());
    for (std::size_t e = 0; e < m; ++e) {
        auto [u, v] = instance.graph.edges[e];
        if (lambda_bar.assignment[u] == lambda_bar.assignment[v]) {
            district_edges[lambda_bar.assignment[u]].push_back(static_cast<int>(e));
        }
    }

    MomentVector out;
    out.counts.assign(m, 0);
    out.n_samples = n_samples;

    std::vector<int> parent(instance.num_vertices());
    for (std::size_t d = 0; d < lambda_bar.districts.size(); ++d) {
        const auto& dist = lambda_bar.districts[d];
        const auto& edges = district_edges[d];
        std::vector<std::size_t> order(edges.size());
        std::vector<double> w(edges.size());
        for (int sample = 0; sample < n_samples; ++sample) {
            for (auto& x : w) x = rng.uniform();
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });
            // Kruskal inside the district
            for (int v : dist) parent[v] = v;
            auto find = [&](int x) {
                while (parent[x] != x) x = parent[x] = parent[parent[x]];
                return x;
            };
            int merges = 0;
            for (std::size_t oi : order) {
                const int e = edges[oi];
                const int a = find(instance.graph.edges[e].first);
                const int b = find(instance.graph.edges[e].second);
                if (a != b) {
                    parent[a] = b;
                    ++out.counts[e];
                    ++merges;
                }
            }
            if (merges != static_cast<int>(dist.size()) - 1) {
                throw std::runtime_error("target district has a disconnected induced subgraph");
            }
        }
    }

    out.mu.resize(m);
    for (std::size_t e = 0; e < m; ++e) {
        out.mu[e] = static_cast<double>(out.counts[e]) / n_samples;
    }
    return out;
}

CmstSolver default_cmst_solver(int exact_cap, Rng rng) {
    auto state = std::make_shared<Rng>(rng);
    return [exact_cap, state](const std::vector<double>& theta,
                              const Instance& inst) -> CmstSolution {
        if (static_cast<int>(inst.num_vertices()) <= exact_cap) {
            return exact_cmst(theta, inst, exact_cap);
        }
        Rng sub = state->substream(state->engine()());
        auto init = initial_solution(theta, inst, sub);
        IlsBudget budget{20, 5.0};
        auto sol = ils(std::move(init), cmst_cost_oracle(theta, inst), inst, budget, sub);
        // rebuild the edge-indicator form from the districts
        CmstSolution y;
        y.y.assign(inst.num_edges(), 0);
        for (const auto& d : sol.districts) {
            std::uint32_t mask = 0;
            for (int v : d) mask |= 1u << v;
            double w;
            std::vector<int> tree;
            if (!max_spanning_tree(mask, theta, inst, &w, &tree)) {
                throw std::runtime_error("heuristic produced a disconnected district");
            }
            y.objective += w;
            for (int e : tree) y.y[e] = 1;
            y.subtrees.push_back(d);
        }
        std::sort(y.subtrees.begin(), y.subtrees.end());
        return y;
    };
}

MomentVector perturbed_maximizer(const std::vector<double>& theta, const Instance& instance,
                                 double epsilon, int num_samples, const CmstSolver& solver,
                                 Rng& rng) {
    if (epsilon <= 0.0 || num_samples < 1) {
        throw std::invalid_argument("epsilon must be > 0 and M >= 1");
    }
    const std::size_t m = instance.num_edges();
    MomentVector out;
    out.counts.assign(m, 0);
    out.n_samples = num_samples;
    std::vector<double> perturbed(m);
    for (int s = 0; s < num_samples; ++s) {
        for (std::size_t e = 0; e < m; ++e) {
            perturbed[e] = theta[e] + epsilon * rng.normal(0.0, 1.0);
        }
        CmstSolution sol;
        try {
            sol = solver(perturbed, instance);
        } catch (const std::exception& ex) {
            throw std::runtime_error("perturbed solve " + std::to_string(s) +
                                     " failed: " + ex.what());
        }
        for (std::size_t e = 0; e < m; ++e) out.counts[e] += sol.y[e];
    }
    out.mu.resize(m);
    for (std::size_t e = 0; e < m; ++e) {
        out.mu[e] = static_cast<double>(out.counts[e]) / num_samples;
    }
    return out;
}

std::vector<double> fy_gradient(const std::vector<double>& theta, const MomentVector& mu_bar,
                                const Instance& instance, double epsilon, int num_samples,
                                const CmstSolver& solver, Rng& rng) {
    auto avg = perturbed_maximizer(theta, instance, epsilon, num_samples, solver, rng);
    std::vector<double> grad(theta.size());
    for (std::size_t e = 0; e < theta.size(); ++e) grad[e] = avg.mu[e] - mu_bar.mu[e];
    return grad;
}

GnnParams train(const std::vector<TrainRow>& dataset, const TrainConfig& config, Rng& rng) {
    return train_from(GnnParams::init(config.seed), dataset, config, rng);
}

GnnParams train_from(GnnParams params, const std::vector<TrainRow>& dataset,
                     const TrainConfig& config, Rng& rng) {
    if (dataset.empty()) throw std::invalid_argument("empty training dataset");

    // standardize edge features over the whole dataset
    std::vector<double> fsum(kFeatureDim, 0.0), fsq(kFeatureDim, 0.0);
    std::size_t n_edges = 0;
    for (const auto& row : dataset) {
        for (const auto& f : row.instance.edge_features) {
            for (int i = 0; i < kFeatureDim; ++i) {
                fsum[i] += f[i];
                fsq[i] += f[i] * f[i];
            }
            ++n_edges;
        }
    }
    for (int i = 0; i < kFeatureDim; ++i) {
        params.feat_mean[i] = fsum[i] / n_edges;
        const double var = fsq[i] / n_edges - params.feat_mean[i] * params.feat_mean[i];
        params.feat_scale[i] = var > 1e-12 ? std::sqrt(var) : 1.0;
    }

    // targets are computed once and cached
    std::vector<MomentVector> targets(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        Rng sub = rng.substream(0x7a00 + i);
        try {
            targets[i] = construct_target(dataset[i].target, dataset[i].instance,
                                          config.target_samples, sub);
        } catch (const std::exception& ex) {
            throw std::runtime_error("target for row " + std::to_string(i) +
                                     " is infeasible: " + ex.what());
        }
    }

    CmstSolver solver = default_cmst_solver(config.exact_cap, rng.substream(0xc0de));

    std::ofstream log;
    if (!config.log_path.empty()) {
        log.open(config.log_path);
        log << "epoch,surrogate_loss,lr,wall_time_s\n";
    }
    const auto start = std::chrono::steady_clock::now();

    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng = rng.substream(0x5f);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr = learning_rate_at(config, epoch);
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[shuffle_rng.uniform_index(i)]);
        }
        double surrogate = 0.0;
        for (std::size_t i : order) {
            GnnCache cache;
            auto theta = gnn_forward(params, dataset[i].instance, &cache);
            Rng sub = rng.substream(splitmix64((epoch + 1) * 1000003ULL + i));
            auto grad_theta = fy_gradient(theta, targets[i], dataset[i].instance,
                                          config.epsilon, config.perturbation_samples,
                                          solver, sub);
            for (std::size_t e = 0; e < theta.size(); ++e) {
                surrogate += theta[e] * grad_theta[e];
            }
            auto grads = gnn_backward(params, dataset[i].instance, cache, grad_theta);
            add_scaled_weights(params, grads, -lr);
        }
        surrogate /= static_cast<double>(dataset.size());
        if (log.is_open()) {
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            log << epoch << "," << surrogate << "," << lr << "," << secs << "\n";
        }
        if (!config.checkpoint_dir.empty() && (epoch + 1) % 10 == 0) {
            save_gnn(params, config.checkpoint_dir + "/checkpoint_" +
                                 std::to_string(epoch + 1) + ".json");
        }
    }
    return params;
}

DistrictingSolution exact_training_target(const Instance& instance, int scenario_count,
                                          Rng& rng, int cap) {
    const int n = static_cast<int>(instance.num_vertices());
    if (n > cap) {
        throw std::invalid_argument(
            "instance exceeds the exact enumeration cap; generate a heuristic target instead");
    }
    Rng scen_rng = rng.substream(0x5ce);
    const auto scenarios = sample_scenarios(instance, scenario_count, scen_rng);

    auto masks = enumerate_connected_subsets(instance, instance.min_size, instance.max_size);
    std::vector<double> costs(masks.size());
    parallel_for(masks.size(), [&](std::size_t i) {
        costs[i] = district_cost_mc(mask_to_vertices(masks[i]), instance, scenarios);
    });

    std::vector<int> chosen;
    double value;
    if (!best_partition(masks, costs, n, instance.num_districts, /*maximize=*/false,
                        instance.min_size, instance.max_size, &chosen, &value)) {
        throw std::runtime_error("no feasible districting for the given bounds");
    }
    std::vector<std::vector<int>> districts;
    for (int idx : chosen) districts.push_back(mask_to_vertices(masks[idx]));
    DistrictingSolution sol = make_districting(std::move(districts), instance.num_vertices());
    sol.objective = value;
    sol.seed = rng.seed();
    return sol;
}

}  // namespace districtnet
