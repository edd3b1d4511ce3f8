#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "districtnet/cmst.hpp"
#include "districtnet/demand.hpp"
#include "districtnet/estimators.hpp"
#include "districtnet/geo.hpp"
#include "districtnet/gnn.hpp"
#include "districtnet/pipeline.hpp"
#include "districtnet/structlearn.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace districtnet;

namespace {

// every artifact carries the hash of the producing config plus the master seed
void stamp_json_file(const std::string& path, std::uint64_t hash, std::uint64_t seed) {
    std::ifstream in(path);
    json doc;
    in >> doc;
    in.close();
    doc["config_hash"] = hash;
    doc["master_seed"] = seed;
    std::ofstream out(path);
    out << doc.dump(2) << "\n";
}

void stamp_csv_file(const std::string& path, std::uint64_t hash, std::uint64_t seed) {
    std::ifstream in(path);
    std::stringstream body;
    body << in.rdbuf();
    in.close();
    std::ofstream out(path);
    out << "# config_hash=" << hash << " master_seed=" << seed << "\n" << body.str();
}

std::uint64_t hash_of(const json& config) { return config_hash(config.dump()); }

int cmd_generate(std::uint64_t seed, const std::string& out, int count, int n_units,
                 int target_size, int pool_cities, int pool_city_units, int scenarios,
                 int cap) {
    json cfg = {{"command", "generate"}, {"seed", seed},        {"count", count},
                {"n_units", n_units},    {"target_size", target_size},
                {"pool_cities", pool_cities}, {"pool_city_units", pool_city_units},
                {"scenarios", scenarios}, {"cap", cap}};
    const std::uint64_t h = hash_of(cfg);
    fs::create_directories(out);

    Rng master(seed);
    std::vector<CityGraph> pool;
    Rng pool_rng = master.substream(1);
    for (int i = 0; i < pool_cities; ++i) pool.push_back(synth_city(pool_city_units, pool_rng));

    json manifest = {{"config", cfg}, {"config_hash", h}, {"master_seed", seed},
                     {"rows", json::array()}};
    for (int i = 0; i < count; ++i) {
        Instance inst = [&] {
            // redraw until the instance admits a feasible districting
            for (int attempt = 0; attempt < 1000; ++attempt) {
                Rng r = master.substream(100 + i + 1000000ULL * attempt);
                Instance cand = generate_training_instance(pool, n_units, target_size, r);
                if (static_cast<int>(cand.num_vertices()) > cap ||
                    has_feasible_partition(cand)) {
                    return cand;
                }
            }
            throw std::runtime_error("could not sample a feasible instance");
        }();
        inst.graph.name = "instance_" + std::to_string(i);
        inst.seed = seed;
        const std::string inst_file = "instance_" + std::to_string(i) + ".json";
        save_instance(inst, out + "/" + inst_file);
        stamp_json_file(out + "/" + inst_file, h, seed);

        json row = {{"id", i}, {"instance", inst_file}};
        if (static_cast<int>(inst.num_vertices()) <= cap) {
            Rng tr = master.substream(300 + i);
            auto target = exact_training_target(inst, scenarios, tr, cap);
            const std::string tgt_file = "target_" + std::to_string(i) + ".json";
            save_solution(target, out + "/" + tgt_file);
            stamp_json_file(out + "/" + tgt_file, h, seed);
            row["target"] = tgt_file;
        } else {
            row["error"] = "instance exceeds the exact target cap";
        }
        manifest["rows"].push_back(row);
    }
    std::ofstream(out + "/manifest.json") << manifest.dump(2) << "\n";
    return 0;
}

int cmd_train(std::uint64_t seed, const std::string& data, const std::string& out, int epochs,
              int samples, double epsilon, int target_samples, const std::string& resume) {
    json cfg = {{"command", "train"},   {"seed", seed},       {"epochs", epochs},
                {"samples", samples},   {"epsilon", epsilon}, {"target_samples", target_samples}};
    const std::uint64_t h = hash_of(cfg);
    fs::create_directories(out);

    std::vector<TrainRow> rows;
    std::vector<int> missing;
    for (int i = 0;; ++i) {
        const std::string inst_path = data + "/instance_" + std::to_string(i) + ".json";
        if (!fs::exists(inst_path)) break;
        const std::string tgt_path = data + "/target_" + std::to_string(i) + ".json";
        if (!fs::exists(tgt_path)) {
            missing.push_back(i);
            continue;
        }
        rows.push_back({load_instance(inst_path), load_solution(tgt_path)});
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "missing targets for instance ids:";
        for (int id : missing) msg << " " << id;
        throw std::runtime_error(msg.str());
    }
    if (rows.empty()) throw std::runtime_error("no instances found in " + data);

    TrainConfig tc;
    tc.epochs = epochs;
    tc.perturbation_samples = samples;
    tc.epsilon = epsilon;
    tc.target_samples = target_samples;
    tc.seed = seed;
    tc.log_path = out + "/train_log.csv";
    Rng rng(seed);
    GnnParams params;
    if (!resume.empty()) {
        // continue training from a checkpoint instead of a fresh init
        params = load_gnn(resume);
        params = train_from(params, rows, tc, rng);
    } else {
        params = train(rows, tc, rng);
    }
    save_gnn(params, out + "/model.json");
    stamp_json_file(out + "/model.json", h, seed);
    stamp_csv_file(out + "/train_log.csv", h, seed);
    return 0;
}

int cmd_solve(std::uint64_t seed, const std::string& instance_path, const std::string& model,
              const std::string& estimator, const std::string& method, const std::string& out,
              long long iterations, double seconds, bool export_geojson,
              bool fail_on_infeasible) {
    json cfg = {{"command", "solve"},   {"seed", seed},   {"model", model},
                {"estimator", estimator}, {"method", method}, {"iterations", iterations},
                {"seconds", seconds}};
    const std::uint64_t h = hash_of(cfg);
    fs::create_directories(out);

    Instance inst = load_instance(instance_path);
    Rng rng(seed);
    IlsBudget budget{iterations, seconds};
    DistrictingSolution sol;
    if (!model.empty()) {
        sol = solve_districtnet(inst, load_gnn(model), budget, rng);
    } else if (!estimator.empty()) {
        auto oracle = make_estimator_oracle(load_estimator(estimator), inst, 200, seed);
        sol = solve_with_estimator(inst, oracle, budget, rng);
    } else if (method == "avgtsp") {
        CostOracle oracle = [&inst](const std::vector<int>& d) { return avg_tsp_cost(d, inst); };
        sol = solve_with_estimator(inst, oracle, budget, rng);
    } else {
        throw std::runtime_error("pass --model, --estimator, or --method avgtsp");
    }
    sol.wall_time_ms = 0.0;  // keep the output file byte-stable across reruns
    sol.seed = seed;
    save_solution(sol, out + "/solution.json");
    stamp_json_file(out + "/solution.json", h, seed);
    if (export_geojson) {
        save_geojson(inst.graph, out + "/solution.geojson", &sol.assignment);
        stamp_json_file(out + "/solution.geojson", h, seed);
    }
    if (!sol.feasible) {
        std::cerr << "warning: solution violates size bounds\n";
        if (fail_on_infeasible) return 2;
    }
    return 0;
}

int cmd_benchmark(std::uint64_t seed, const std::string& config_path, const std::string& out,
                  unsigned jobs) {
    BenchmarkConfig bc;
    if (!config_path.empty()) bc = load_benchmark_config(config_path);
    bc.seed = seed;
    if (jobs) bc.jobs = jobs;
    auto reports = run_benchmark(bc, out);
    for (const auto& rep : reports) {
        for (const auto& r : rep.methods) {
            if (!r.feasible) return 2;
        }
    }
    return 0;
}

int cmd_evaluate(std::uint64_t seed, const std::string& instance_path,
                 const std::vector<std::string>& solution_args, int scenarios,
                 const std::string& reference, const std::string& out) {
    json cfg = {{"command", "evaluate"}, {"seed", seed},
                {"scenarios", scenarios}, {"reference", reference}};
    const std::uint64_t h = hash_of(cfg);
    fs::create_directories(out);

    Instance inst = load_instance(instance_path);
    std::vector<std::pair<std::string, DistrictingSolution>> sols;
    for (const auto& arg : solution_args) {
        auto eq = arg.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("--solution expects name=path, got " + arg);
        }
        sols.emplace_back(arg.substr(0, eq), load_solution(arg.substr(eq + 1)));
    }
    Rng rng(seed);
    auto scen = sample_scenarios(inst, scenarios, rng);
    auto report = evaluate(sols, inst, scen, reference);

    json j = {{"config", cfg},
              {"config_hash", h},
              {"master_seed", seed},
              {"instance_id", report.instance_id},
              {"scenario_hash", report.scenario_hash},
              {"reference", report.reference},
              {"methods", json::array()}};
    for (const auto& r : report.methods) {
        j["methods"].push_back({{"method", r.method},
                                {"cost_km", r.cost_km},
                                {"rel_cost_pct", r.rel_cost_pct},
                                {"reock_mean", r.reock_mean},
                                {"feasible", r.feasible}});
    }
    std::ofstream(out + "/evaluation.json") << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"districtnet: learned districting on city graphs"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    std::string out = ".";
    unsigned jobs = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "master seed (required, no wall-clock seeding)")
            ->required();
        sub->add_option("--out", out, "output directory")->required();
    };

    // generate
    auto* gen = app.add_subcommand("generate", "emit synthetic instances and exact targets");
    int count = 5, n_units = 12, target_size = 3, pool_cities = 3, pool_city_units = 30;
    int scenarios = 100, cap = 16;
    add_common(gen);
    gen->add_option("--count", count);
    gen->add_option("--n-units", n_units);
    gen->add_option("--target-size", target_size);
    gen->add_option("--pool-cities", pool_cities);
    gen->add_option("--pool-city-units", pool_city_units);
    gen->add_option("--scenarios", scenarios);
    gen->add_option("--cap", cap);

    // train
    auto* trn = app.add_subcommand("train", "train the edge scorer on instances + targets");
    std::string data, resume;
    int epochs = 100, samples = 20, target_samples = 1000;
    double epsilon = 1.0;
    add_common(trn);
    trn->add_option("--data", data)->required();
    trn->add_option("--epochs", epochs);
    trn->add_option("--samples", samples, "perturbation samples per gradient");
    trn->add_option("--epsilon", epsilon);
    trn->add_option("--target-samples", target_samples);
    trn->add_option("--resume", resume, "checkpoint to continue from");

    // solve
    auto* slv = app.add_subcommand("solve", "solve one instance");
    std::string instance_path, model, estimator, method;
    long long iterations = 100;
    double seconds = 3600.0;
    bool export_geojson = false, fail_on_infeasible = false;
    add_common(slv);
    slv->add_option("--instance", instance_path)->required();
    slv->add_option("--model", model, "trained edge-scorer checkpoint");
    slv->add_option("--estimator", estimator, "fitted estimator params");
    slv->add_option("--method", method, "built-in oracle (avgtsp)");
    slv->add_option("--iterations", iterations);
    slv->add_option("--seconds", seconds);
    slv->add_flag("--geojson", export_geojson, "also export a colored GeoJSON");
    slv->add_flag("--fail-on-infeasible", fail_on_infeasible);

    // benchmark
    auto* bmk = app.add_subcommand("benchmark", "train, solve, and report on a full protocol");
    std::string bench_config;
    add_common(bmk);
    bmk->add_option("--config", bench_config);
    bmk->add_option("--jobs", jobs, "parallel solves (0 = hardware)");

    // evaluate
    auto* evl = app.add_subcommand("evaluate", "paired Monte Carlo evaluation of solutions");
    std::vector<std::string> solution_args;
    std::string reference;
    int eval_scenarios = 100;
    add_common(evl);
    evl->add_option("--instance", instance_path)->required();
    evl->add_option("--solution", solution_args, "name=path, repeatable")->required();
    evl->add_option("--scenarios", eval_scenarios);
    evl->add_option("--reference", reference);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return cmd_generate(seed, out, count, n_units, target_size, pool_cities,
                                pool_city_units, scenarios, cap);
        }
        if (trn->parsed()) {
            return cmd_train(seed, data, out, epochs, samples, epsilon, target_samples, resume);
        }
        if (slv->parsed()) {
            return cmd_solve(seed, instance_path, model, estimator, method, out, iterations,
                             seconds, export_geojson, fail_on_infeasible);
        }
        if (bmk->parsed()) return cmd_benchmark(seed, bench_config, out, jobs);
        if (evl->parsed()) {
            return cmd_evaluate(seed, instance_path, solution_args, eval_scenarios, reference,
                                out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
