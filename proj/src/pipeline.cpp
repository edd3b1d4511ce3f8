#include "districtnet/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "districtnet/geo.hpp"
#include "districtnet/parallel.hpp"
#include "districtnet/structlearn.hpp"

namespace districtnet {

using json = nlohmann::json;

namespace {

// Kruskal-merge initials can be dead ends: a district holding interior leaf
// vertices cannot shed them through single-node relocations, so no ILS run
// from that start ever reaches feasibility. Restart from randomly re-weighted
// spanning forests until one does.
DistrictingSolution solve_heuristic(const std::vector<double>& theta, const CostOracle& oracle,
                                    const Instance& instance, IlsBudget budget, Rng& rng) {
    auto init = initial_solution(theta, instance, rng);
    auto sol = ils(std::move(init), oracle, instance, budget, rng);
    std::vector<double> jitter(theta.size());
    for (int attempt = 0; attempt < 20 && !sol.feasible; ++attempt) {
        for (auto& x : jitter) x = rng.uniform();
        auto restart = initial_solution(jitter, instance, rng);
        auto cand = ils(std::move(restart), oracle, instance, budget, rng);
        if (cand.feasible) sol = std::move(cand);
    }
    sol.seed = rng.seed();
    return sol;
}

}  // namespace

DistrictingSolution solve_districtnet(const Instance& instance, const GnnParams& params,
                                      IlsBudget budget, Rng& rng) {
    const auto theta = gnn_forward(params, instance);
    return solve_heuristic(theta, cmst_cost_oracle(theta, instance), instance, budget, rng);
}

DistrictingSolution solve_with_estimator(const Instance& instance, const CostOracle& oracle,
                                         IlsBudget budget, Rng& rng) {
    const std::vector<double> theta(instance.num_edges(), 1.0);
    return solve_heuristic(theta, oracle, instance, budget, rng);
}

double reock(const std::vector<int>& district, const Instance& instance) {
    double area = 0.0;
    std::vector<Point> boundary;
    for (int v : district) {
        const auto& bu = instance.graph.units[v];
        area += bu.area;
        boundary.insert(boundary.end(), bu.polygon.begin(), bu.polygon.end());
    }
    Rng rng(0x2e0c);  // fixed stream: the shuffle inside Welzl must be replayable
    const Circle c = min_enclosing_circle(std::move(boundary), rng);
    const double circle_area = 3.14159265358979323846 * c.radius * c.radius;
    return circle_area > 0.0 ? area / circle_area : 1.0;
}

double mean_reock(const DistrictingSolution& solution, const Instance& instance) {
    if (solution.districts.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& d : solution.districts) sum += reock(d, instance);
    return sum / static_cast<double>(solution.districts.size());
}

std::uint64_t scenario_hash(const std::vector<Scenario>& scenarios) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ULL;
    };
    mix(scenarios.size());
    for (const auto& s : scenarios) {
        for (const auto& reqs : s.requests) {
            mix(reqs.size());
            for (const auto& p : reqs) {
                std::uint64_t bx, by;
                static_assert(sizeof(double) == sizeof(std::uint64_t));
                std::memcpy(&bx, &p.x, 8);
                std::memcpy(&by, &p.y, 8);
                mix(bx);
                mix(by);
            }
        }
    }
    return h;
}

EvaluationReport evaluate(const std::vector<std::pair<std::string, DistrictingSolution>>& solutions,
                          const Instance& instance, const std::vector<Scenario>& scenarios,
                          const std::string& reference, double exact_cost) {
    EvaluationReport report;
    report.instance_id = instance.graph.name;
    report.seed = instance.seed;
    report.scenario_hash = scenario_hash(scenarios);
    report.exact_cost = exact_cost;
    report.reference = reference.empty() && !solutions.empty() ? solutions.front().first
                                                               : reference;
    for (const auto& [name, sol] : solutions) {
        MethodResult r;
        r.method = name;
        for (const auto& d : sol.districts) {
            r.cost_km += district_cost_mc(d, instance, scenarios);
        }
        r.reock_mean = mean_reock(sol, instance);
        r.feasible = sol.feasible;
        r.wall_ms = sol.wall_time_ms;
        if (exact_cost > 0.0) {
            r.gap_pct = 100.0 * (r.cost_km - exact_cost) / exact_cost;
        }
        report.methods.push_back(std::move(r));
    }
    double ref_cost = 0.0;
    for (const auto& r : report.methods) {
        if (r.method == report.reference) ref_cost = r.cost_km;
    }
    if (ref_cost > 0.0) {
        for (auto& r : report.methods) {
            r.rel_cost_pct = 100.0 * (r.cost_km - ref_cost) / ref_cost;
        }
    }
    return report;
}

DistrictingSolution exact_districting(const Instance& instance, const CostOracle& oracle,
                                      int cap) {
    const int n = static_cast<int>(instance.num_vertices());
    if (n > cap) throw std::invalid_argument("exact_districting: instance above the exact cap");
    auto masks = enumerate_connected_subsets(instance, instance.min_size, instance.max_size);
    std::vector<double> costs(masks.size());
    for (std::size_t i = 0; i < masks.size(); ++i) {
        costs[i] = oracle(mask_to_vertices(masks[i]));
    }
    std::vector<int> chosen;
    double value;
    if (!best_partition(masks, costs, n, instance.num_districts, /*maximize=*/false,
                        instance.min_size, instance.max_size, &chosen, &value)) {
        throw std::runtime_error("exact_districting: no feasible partition");
    }
    std::vector<std::vector<int>> districts;
    for (int idx : chosen) districts.push_back(mask_to_vertices(masks[idx]));
    auto sol = make_districting(std::move(districts), instance.num_vertices());
    sol.objective = value;
    sol.seed = instance.seed;
    return sol;
}

// ---------------------------------------------------------------------------

BenchmarkConfig load_benchmark_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    json j = json::parse(in);
    BenchmarkConfig c;
    const std::map<std::string, std::function<void(const json&)>> setters = {
        {"seed", [&](const json& v) { c.seed = v.get<std::uint64_t>(); }},
        {"train_count", [&](const json& v) { c.train_count = v.get<int>(); }},
        {"test_count", [&](const json& v) { c.test_count = v.get<int>(); }},
        {"n_units", [&](const json& v) { c.n_units = v.get<int>(); }},
        {"target_size", [&](const json& v) { c.target_size = v.get<int>(); }},
        {"pool_cities", [&](const json& v) { c.pool_cities = v.get<int>(); }},
        {"pool_city_units", [&](const json& v) { c.pool_city_units = v.get<int>(); }},
        {"target_scenarios", [&](const json& v) { c.target_scenarios = v.get<int>(); }},
        {"delta_samples", [&](const json& v) { c.delta_samples = v.get<int>(); }},
        {"epochs", [&](const json& v) { c.epochs = v.get<int>(); }},
        {"perturbation_samples", [&](const json& v) { c.perturbation_samples = v.get<int>(); }},
        {"epsilon", [&](const json& v) { c.epsilon = v.get<double>(); }},
        {"target_samples", [&](const json& v) { c.target_samples = v.get<int>(); }},
        {"predgnn_epochs", [&](const json& v) { c.predgnn_epochs = v.get<long long>(); }},
        {"ils_iterations", [&](const json& v) { c.ils_iterations = v.get<long long>(); }},
        {"ils_seconds", [&](const json& v) { c.ils_seconds = v.get<double>(); }},
        {"jobs", [&](const json& v) { c.jobs = v.get<unsigned>(); }},
        {"methods", [&](const json& v) { c.methods = v.get<std::vector<std::string>>(); }},
        {"reference", [&](const json& v) { c.reference = v.get<std::string>(); }},
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto s = setters.find(it.key());
        if (s == setters.end()) {
            throw std::runtime_error("unknown config key: " + it.key());
        }
        s->second(it.value());
    }
    return c;
}

std::string benchmark_config_json(const BenchmarkConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["train_count"] = c.train_count;
    j["test_count"] = c.test_count;
    j["n_units"] = c.n_units;
    j["target_size"] = c.target_size;
    j["pool_cities"] = c.pool_cities;
    j["pool_city_units"] = c.pool_city_units;
    j["target_scenarios"] = c.target_scenarios;
    j["delta_samples"] = c.delta_samples;
    j["epochs"] = c.epochs;
    j["perturbation_samples"] = c.perturbation_samples;
    j["epsilon"] = c.epsilon;
    j["target_samples"] = c.target_samples;
    j["predgnn_epochs"] = c.predgnn_epochs;
    j["ils_iterations"] = c.ils_iterations;
    j["ils_seconds"] = c.ils_seconds;
    j["jobs"] = c.jobs;
    j["methods"] = c.methods;
    j["reference"] = c.reference;
    return j.dump();  // nlohmann sorts object keys, so this is canonical
}

std::uint64_t config_hash(const std::string& canonical_json) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_json) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

struct EnumeratedInstance {
    std::vector<Scenario> scenarios;
    std::vector<std::uint32_t> masks;
    std::vector<double> costs;                        // MC cost per mask
    std::unordered_map<std::uint32_t, std::size_t> index;
    DistrictingSolution exact;                        // min-cost partition
};

std::uint32_t district_mask(const std::vector<int>& district) {
    std::uint32_t m = 0;
    for (int v : district) m |= 1u << v;
    return m;
}

EnumeratedInstance enumerate_instance(const Instance& inst, int scenario_count, Rng scen_rng,
                                      unsigned jobs) {
    EnumeratedInstance e;
    e.scenarios = sample_scenarios(inst, scenario_count, scen_rng);
    e.masks = enumerate_connected_subsets(inst, inst.min_size, inst.max_size);
    e.costs.resize(e.masks.size());
    parallel_for(e.masks.size(), [&](std::size_t i) {
        e.costs[i] = district_cost_mc(mask_to_vertices(e.masks[i]), inst, e.scenarios);
    }, jobs);
    for (std::size_t i = 0; i < e.masks.size(); ++i) e.index[e.masks[i]] = i;

    std::vector<int> chosen;
    double value;
    if (!best_partition(e.masks, e.costs, static_cast<int>(inst.num_vertices()),
                        inst.num_districts, /*maximize=*/false, inst.min_size, inst.max_size,
                        &chosen, &value)) {
        throw std::runtime_error("instance has no feasible districting");
    }
    std::vector<std::vector<int>> districts;
    for (int idx : chosen) districts.push_back(mask_to_vertices(e.masks[idx]));
    e.exact = make_districting(std::move(districts), inst.num_vertices());
    e.exact.objective = value;
    return e;
}

// MC cost of a solution via the precomputed per-district table.
double table_cost(const DistrictingSolution& sol, const EnumeratedInstance& e,
                  const Instance& inst) {
    double total = 0.0;
    for (const auto& d : sol.districts) {
        auto it = e.index.find(district_mask(d));
        total += it != e.index.end() ? e.costs[it->second]
                                     : district_cost_mc(d, inst, e.scenarios);
    }
    return total;
}

// Not every sampled subgraph admits a partition into k connected, size-bounded
// districts; redraw from a derived substream until one does.
Instance sample_feasible_instance(const std::vector<CityGraph>& pool,
                                  const BenchmarkConfig& config, const Rng& master,
                                  std::uint64_t stream) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Rng r = master.substream(stream + 1000000ULL * attempt);
        Instance inst = generate_training_instance(pool, config.n_units,
                                                   config.target_size, r);
        if (has_feasible_partition(inst)) return inst;
    }
    throw std::runtime_error("could not sample a feasible instance");
}

}  // namespace

bool has_feasible_partition(const Instance& inst) {
    auto masks = enumerate_connected_subsets(inst, inst.min_size, inst.max_size);
    std::vector<double> weights(masks.size(), 0.0);
    std::vector<int> chosen;
    double value;
    return best_partition(masks, weights, static_cast<int>(inst.num_vertices()),
                          inst.num_districts, /*maximize=*/false, inst.min_size,
                          inst.max_size, &chosen, &value);
}

std::vector<EvaluationReport> run_benchmark(const BenchmarkConfig& config,
                                            const std::string& out_dir) {
    Rng master(config.seed);
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    for (const auto& m : config.methods) {
        static const std::vector<std::string> known{"districtnet", "bd", "fig",
                                                    "predgnn", "avgtsp", "exact"};
        if (std::find(known.begin(), known.end(), m) == known.end()) {
            throw std::runtime_error("unknown method: " + m);
        }
    }
    if (config.methods.empty()) {
        std::vector<EvaluationReport> empty;
        if (!out_dir.empty()) write_reports(empty, config, out_dir);
        return empty;
    }

    // city pool shared by train and test sampling
    std::vector<CityGraph> pool;
    Rng pool_rng = master.substream(1);
    for (int i = 0; i < config.pool_cities; ++i) {
        pool.push_back(synth_city(config.pool_city_units, pool_rng));
        pool.back().name = "pool_" + std::to_string(i);
    }

    std::vector<Instance> train_instances(config.train_count);
    std::vector<Instance> test_instances(config.test_count);
    for (int i = 0; i < config.train_count; ++i) {
        train_instances[i] = sample_feasible_instance(pool, config, master, 100 + i);
        train_instances[i].graph.name = "train_" + std::to_string(i);
        train_instances[i].seed = config.seed;
    }
    for (int i = 0; i < config.test_count; ++i) {
        test_instances[i] = sample_feasible_instance(pool, config, master, 200 + i);
        test_instances[i].graph.name = "test_" + std::to_string(i);
        test_instances[i].seed = config.seed;
    }

    auto wants = [&](const std::string& m) {
        return std::find(config.methods.begin(), config.methods.end(), m) !=
               config.methods.end();
    };

    // enumerate every training instance once; the per-district costs feed the
    // exact targets and all estimator fits
    std::vector<EnumeratedInstance> train_enum(train_instances.size());
    for (std::size_t i = 0; i < train_instances.size(); ++i) {
        train_enum[i] = enumerate_instance(train_instances[i], config.target_scenarios,
                                           master.substream(300 + i), config.jobs);
    }
    std::fprintf(stderr, "[benchmark] training targets ready (%.1fs)\n", elapsed());

    GnnParams gnn;
    if (wants("districtnet")) {
        std::vector<TrainRow> rows;
        for (std::size_t i = 0; i < train_instances.size(); ++i) {
            rows.push_back({train_instances[i], train_enum[i].exact});
        }
        TrainConfig tc;
        tc.epochs = config.epochs;
        tc.perturbation_samples = config.perturbation_samples;
        tc.epsilon = config.epsilon;
        tc.target_samples = config.target_samples;
        tc.seed = config.seed;
        Rng train_rng = master.substream(400);
        gnn = train(rows, tc, train_rng);
        std::fprintf(stderr, "[benchmark] gnn trained (%.1fs)\n", elapsed());
    }

    EstimatorParams bd_params, fig_params;
    PredGnnParams pred_params;
    if (wants("bd") || wants("fig") || wants("predgnn")) {
        std::vector<std::pair<DistrictStats, double>> stat_rows;
        std::vector<PredGnnTrainRow> pred_rows;
        for (std::size_t i = 0; i < train_instances.size(); ++i) {
            const auto& e = train_enum[i];
            std::vector<DistrictStats> stats(e.masks.size());
            parallel_for(e.masks.size(), [&](std::size_t m) {
                Rng r = master.substream(splitmix64(0x57a7 + i * 4096 + m));
                stats[m] = district_stats(mask_to_vertices(e.masks[m]), train_instances[i],
                                          config.delta_samples, r);
            }, config.jobs);
            for (std::size_t m = 0; m < e.masks.size(); ++m) {
                stat_rows.emplace_back(stats[m], e.costs[m]);
                pred_rows.push_back({&train_instances[i], mask_to_vertices(e.masks[m]),
                                     e.costs[m]});
            }
        }
        if (wants("bd")) bd_params = fit_estimator(EstimatorKind::BD, stat_rows);
        if (wants("fig")) fig_params = fit_estimator(EstimatorKind::FIG, stat_rows);
        if (wants("predgnn")) {
            PredGnnConfig pc;
            pc.max_epochs = config.predgnn_epochs;
            pc.seed = config.seed;
            pred_params = fit_predgnn(pred_rows, pc);
        }
        std::fprintf(stderr, "[benchmark] estimators fitted (%.1fs)\n", elapsed());
    }

    const IlsBudget budget{config.ils_iterations, config.ils_seconds};
    std::vector<EvaluationReport> reports(test_instances.size());

    parallel_for(test_instances.size(), [&](std::size_t i) {
        const Instance& inst = test_instances[i];
        auto e = enumerate_instance(inst, config.target_scenarios,
                                    master.substream(500 + i), 1);

        std::vector<std::pair<std::string, DistrictingSolution>> sols;
        for (const auto& method : config.methods) {
            Rng r = master.substream(splitmix64(0xe0a1 + i * 64) ^ config_hash(method));
            DistrictingSolution sol;
            if (method == "districtnet") {
                sol = solve_districtnet(inst, gnn, budget, r);
            } else if (method == "bd" || method == "fig") {
                auto oracle = make_estimator_oracle(method == "bd" ? bd_params : fig_params,
                                                    inst, config.delta_samples,
                                                    r.substream(1).seed());
                sol = solve_with_estimator(inst, oracle, budget, r);
            } else if (method == "predgnn") {
                CostOracle oracle = [&pred_params, &inst](const std::vector<int>& d) {
                    return predgnn_cost(pred_params, inst, d);
                };
                sol = solve_with_estimator(inst, oracle, budget, r);
            } else if (method == "avgtsp") {
                CostOracle oracle = [&inst](const std::vector<int>& d) {
                    return avg_tsp_cost(d, inst);
                };
                sol = solve_with_estimator(inst, oracle, budget, r);
            } else if (method == "exact") {
                sol = e.exact;
            } else {
                throw std::runtime_error("unknown method: " + method);
            }
            sols.emplace_back(method, std::move(sol));
        }

        EvaluationReport rep;
        rep.instance_id = inst.graph.name;
        rep.seed = config.seed;
        rep.scenario_hash = scenario_hash(e.scenarios);
        rep.reference = config.reference;
        rep.exact_cost = e.exact.objective;
        for (auto& [name, sol] : sols) {
            MethodResult r;
            r.method = name;
            r.cost_km = table_cost(sol, e, inst);
            r.gap_pct = 100.0 * (r.cost_km - e.exact.objective) / e.exact.objective;
            r.reock_mean = mean_reock(sol, inst);
            r.feasible = sol.feasible;
            rep.methods.push_back(std::move(r));
        }
        double ref_cost = 0.0;
        for (const auto& r : rep.methods) {
            if (r.method == rep.reference) ref_cost = r.cost_km;
        }
        if (ref_cost > 0.0) {
            for (auto& r : rep.methods) {
                r.rel_cost_pct = 100.0 * (r.cost_km - ref_cost) / ref_cost;
            }
        }
        reports[i] = std::move(rep);
    }, config.jobs);
    std::fprintf(stderr, "[benchmark] evaluation done (%.1fs)\n", elapsed());

    if (!out_dir.empty()) write_reports(reports, config, out_dir);
    return reports;
}

std::vector<std::pair<std::string, double>> mean_gaps(
    const std::vector<EvaluationReport>& reports) {
    std::vector<std::string> order;
    std::map<std::string, std::pair<double, int>> acc;
    for (const auto& rep : reports) {
        for (const auto& r : rep.methods) {
            if (r.gap_pct <= -0.5) continue;  // gap unknown (sentinel -1)
            if (!acc.count(r.method)) order.push_back(r.method);
            auto& [sum, n] = acc[r.method];
            sum += r.gap_pct;
            ++n;
        }
    }
    std::vector<std::pair<std::string, double>> out;
    for (const auto& m : order) {
        out.emplace_back(m, acc[m].first / acc[m].second);
    }
    return out;
}

void write_reports(const std::vector<EvaluationReport>& reports,
                   const BenchmarkConfig& config, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::string cfg_json = benchmark_config_json(config);
    const std::uint64_t chash = config_hash(cfg_json);

    auto sorted = reports;
    std::sort(sorted.begin(), sorted.end(),
              [](const EvaluationReport& a, const EvaluationReport& b) {
                  return a.instance_id < b.instance_id;
              });

    char buf[64];
    std::ofstream csv(out_dir + "/report.csv");
    csv << "instance_id,method,seed,cost_km,rel_cost_pct,gap_pct,reock_mean,feasible,wall_ms\n";
    for (const auto& rep : sorted) {
        for (const auto& r : rep.methods) {
            // wall_ms is written as 0: report files must be byte-stable across reruns
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%.6f", r.cost_km, r.rel_cost_pct,
                          r.gap_pct, r.reock_mean);
            csv << rep.instance_id << "," << r.method << "," << rep.seed << "," << buf << ","
                << (r.feasible ? 1 : 0) << ",0\n";
        }
    }
    csv.close();

    json j;
    j["config"] = json::parse(cfg_json);
    j["config_hash"] = chash;
    j["reports"] = json::array();
    for (const auto& rep : sorted) {
        json jr;
        jr["instance_id"] = rep.instance_id;
        jr["seed"] = rep.seed;
        jr["scenario_hash"] = rep.scenario_hash;
        jr["reference"] = rep.reference;
        jr["exact_cost"] = rep.exact_cost;
        jr["methods"] = json::array();
        for (const auto& r : rep.methods) {
            json jm;
            jm["method"] = r.method;
            jm["cost_km"] = r.cost_km;
            jm["rel_cost_pct"] = r.rel_cost_pct;
            jm["gap_pct"] = r.gap_pct;
            jm["reock_mean"] = r.reock_mean;
            jm["feasible"] = r.feasible;
            jr["methods"].push_back(jm);
        }
        j["reports"].push_back(jr);
    }
    json agg = json::array();
    for (const auto& [m, g] : mean_gaps(sorted)) {
        agg.push_back({{"method", m}, {"mean_gap_pct", g}});
    }
    j["aggregate"] = agg;
    std::ofstream(out_dir + "/report.json") << j.dump(2) << "\n";
}

}  // namespace districtnet
