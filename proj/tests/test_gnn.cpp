#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "districtnet/gnn.hpp"
#include "districtnet/geo.hpp"
#include "helpers.hpp"

using namespace districtnet;

namespace {

GnnParams zeroed(std::uint64_t seed) {
    GnnParams p = GnnParams::init(seed);
    auto flat = flatten_weights(p);
    std::fill(flat.begin(), flat.end(), 0.0);
    unflatten_weights(p, flat);
    return p;
}

double loss_at(const GnnParams& p, const Instance& inst, const std::vector<double>& g) {
    auto theta = gnn_forward(p, inst);
    double v = 0;
    for (std::size_t e = 0; e < theta.size(); ++e) v += theta[e] * g[e];
    return v;
}

}  // namespace

TEST_CASE("zero weights produce zero scores") {
    Instance inst = helpers::grid_instance(2, 3, 3, 8000);
    auto theta = gnn_forward(zeroed(1), inst);
    REQUIRE(theta.size() == inst.num_edges());
    for (double t : theta) CHECK(t == doctest::Approx(0.0));
}

TEST_CASE("forward is deterministic and equivariant on symmetric edges") {
    // 1x3 path with identical units: edges (0,1) and (1,2) are isomorphic
    Instance inst = helpers::grid_instance(1, 3, 3, 8000);
    inst.graph.depot = {1.5, 0.5};  // symmetric depot
    inst.graph.update_depot_distances();
    inst.edge_features = compute_features(inst.graph);
    GnnParams p = GnnParams::init(7);
    auto t1 = gnn_forward(p, inst);
    auto t2 = gnn_forward(p, inst);
    CHECK(t1 == t2);  // bit identical
    CHECK(t1[0] == doctest::Approx(t1[1]).epsilon(1e-12));
}

TEST_CASE("backward matches central finite differences") {
    for (int s = 0; s < 5; ++s) {
        Rng rng(100 + s);
        auto g = synth_city(5, rng);  // ~5-8 edges
        Instance inst = make_instance(std::move(g), 2);
        GnnParams p = GnnParams::init(200 + s);
        std::vector<double> grad_theta;
        for (std::size_t e = 0; e < inst.num_edges(); ++e) {
            grad_theta.push_back(rng.normal(0, 1));
        }
        GnnCache cache;
        gnn_forward(p, inst, &cache);
        GnnParams grads = gnn_backward(p, inst, cache, grad_theta);
        auto flat_g = flatten_weights(grads);
        auto flat_p = flatten_weights(p);

        // norm-wise gradcheck: ||fd - g|| / (||fd|| + ||g||) over sampled params
        const double h = 1e-5;
        double diff2 = 0, fd2 = 0, g2 = 0;
        for (std::size_t i = 0; i < flat_p.size(); i += 37) {  // sample parameters
            auto pp = flat_p;
            pp[i] += h;
            GnnParams p_hi = p;
            unflatten_weights(p_hi, pp);
            pp[i] -= 2 * h;
            GnnParams p_lo = p;
            unflatten_weights(p_lo, pp);
            double fd = (loss_at(p_hi, inst, grad_theta) - loss_at(p_lo, inst, grad_theta)) /
                        (2 * h);
            diff2 += (fd - flat_g[i]) * (fd - flat_g[i]);
            fd2 += fd * fd;
            g2 += flat_g[i] * flat_g[i];
        }
        double rel = std::sqrt(diff2) / (std::sqrt(fd2) + std::sqrt(g2));
        CHECK(rel < 1e-4);
    }
}

TEST_CASE("backward is linear in the output gradient") {
    Rng rng(9);
    auto g = synth_city(5, rng);
    Instance inst = make_instance(std::move(g), 2);
    GnnParams p = GnnParams::init(3);
    std::vector<double> g1, g2, g12;
    for (std::size_t e = 0; e < inst.num_edges(); ++e) {
        g1.push_back(rng.normal(0, 1));
        g2.push_back(rng.normal(0, 1));
        g12.push_back(g1.back() + g2.back());
    }
    GnnCache c1, c2, c3;
    gnn_forward(p, inst, &c1);
    gnn_forward(p, inst, &c2);
    gnn_forward(p, inst, &c3);
    auto f1 = flatten_weights(gnn_backward(p, inst, c1, g1));
    auto f2 = flatten_weights(gnn_backward(p, inst, c2, g2));
    auto f12 = flatten_weights(gnn_backward(p, inst, c3, g12));
    for (std::size_t i = 0; i < f1.size(); ++i) {
        CHECK(f12[i] == doctest::Approx(f1[i] + f2[i]).epsilon(1e-9));
    }

    std::vector<double> zeros(inst.num_edges(), 0.0);
    GnnCache cz;
    gnn_forward(p, inst, &cz);
    for (double v : flatten_weights(gnn_backward(p, inst, cz, zeros))) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("gnn params round trip bit-exactly") {
    GnnParams p = GnnParams::init(55);
    p.feat_mean[0] = 1.5;
    p.feat_scale[0] = 2.5;
    std::string path = (std::filesystem::temp_directory_path() / "gnn_rt.json").string();
    save_gnn(p, path);
    auto back = load_gnn(path);
    CHECK(flatten_weights(back) == flatten_weights(p));
    CHECK(back.feat_mean == p.feat_mean);
    CHECK(back.feat_scale == p.feat_scale);

    Instance inst = helpers::grid_instance(2, 3, 3, 8000);
    CHECK(gnn_forward(p, inst) == gnn_forward(back, inst));
}

TEST_CASE("predgnn invariances") {
    Instance inst = helpers::grid_instance(2, 3, 3, 8000);
    PredGnnParams p = PredGnnParams::init(4);
    CHECK(predgnn_cost(p, inst, {0, 1, 3}) ==
          doctest::Approx(predgnn_cost(p, inst, {3, 0, 1})).epsilon(1e-12));

    PredGnnParams zero_head = p;
    std::fill(zero_head.head2.a.begin(), zero_head.head2.a.end(), 0.0);
    zero_head.head2_b[0] = 1.25;
    zero_head.target_mean = 0.0;
    zero_head.target_scale = 1.0;
    CHECK(predgnn_cost(zero_head, inst, {0, 1}) == doctest::Approx(1.25));
}

TEST_CASE("fit_predgnn fits constant targets and beats the constant predictor") {
    Instance inst = helpers::grid_instance(2, 3, 3, 8000);
    std::vector<PredGnnTrainRow> rows;
    Rng rng(6);
    for (int i = 0; i < 30; ++i) {
        std::vector<int> d = {static_cast<int>(rng.uniform_index(6))};
        rows.push_back({&inst, d, 5.0});
    }
    PredGnnConfig cfg;
    cfg.max_epochs = 300;
    cfg.early_stop_window = 100;
    cfg.seed = 1;
    auto p = fit_predgnn(rows, cfg);
    for (const auto& row : rows) {
        CHECK(predgnn_cost(p, inst, row.district) == doctest::Approx(5.0).epsilon(0.01));
    }

    // varying targets: beat the constant predictor in-sample
    std::vector<PredGnnTrainRow> rows2;
    double mean = 0;
    for (int i = 0; i < 40; ++i) {
        std::vector<int> d;
        int start = static_cast<int>(rng.uniform_index(5));
        d = {start, start + 1};
        double y = 3.0 + 2.0 * start + rng.normal(0, 0.05);
        rows2.push_back({&inst, d, y});
        mean += y;
    }
    mean /= rows2.size();
    PredGnnConfig cfg2;
    cfg2.max_epochs = 1500;
    cfg2.early_stop_window = 500;
    cfg2.seed = 2;
    auto p2 = fit_predgnn(rows2, cfg2);
    double mse_fit = 0, mse_const = 0;
    for (const auto& row : rows2) {
        double pred = predgnn_cost(p2, inst, row.district);
        mse_fit += (pred - row.true_cost) * (pred - row.true_cost);
        mse_const += (mean - row.true_cost) * (mean - row.true_cost);
    }
    CHECK(mse_fit < mse_const);
}
