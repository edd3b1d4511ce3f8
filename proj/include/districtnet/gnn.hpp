#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "districtnet/graph.hpp"
#include "districtnet/rng.hpp"

namespace districtnet {

struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a;  // row-major

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

inline constexpr int kHidden = 64;
inline constexpr int kConvLayers = 3;

/// Edge scorer: 3 message-passing layers on the line graph (Leaky ReLU),
/// then a 64-64-64-32-1 dense head with a linear output.
struct GnnParams {
    std::array<Mat, kConvLayers> conv_w0;  // self weights (first layer projects 7 -> 64)
    std::array<Mat, kConvLayers> conv_w1;  // neighbor-mean weights
    std::array<Mat, 4> head_w;
    std::array<std::vector<double>, 4> head_b;
    // per-feature standardization applied before the first layer
    std::array<double, kFeatureDim> feat_mean{};
    std::array<double, kFeatureDim> feat_scale{1, 1, 1, 1, 1, 1, 1};

    static GnnParams init(std::uint64_t seed);
};

/// Forward intermediates cached for the matching backward call.
struct GnnCache {
    const Instance* instance = nullptr;
    std::vector<std::vector<int>> edge_neighbors;  // line-graph adjacency
    // per conv layer: inputs h^(l) and pre-activations z^(l), per edge
    std::vector<std::vector<std::vector<double>>> conv_in, conv_z;
    // per head layer: inputs, per edge
    std::vector<std::vector<std::vector<double>>> head_in;
};

/// theta = per-edge scalar scores.
std::vector<double> gnn_forward(const GnnParams& params, const Instance& instance,
                                GnnCache* cache = nullptr);

/// Reverse-mode gradients of theta' grad_theta w.r.t. all parameters.
/// Requires the cache produced by gnn_forward on the same instance.
GnnParams gnn_backward(const GnnParams& params, const Instance& instance,
                       const GnnCache& cache, const std::vector<double>& grad_theta);

/// Flat views over the trainable weights (normalization excluded), used by
/// the optimizer and the finite-difference checks.
std::vector<double> flatten_weights(const GnnParams& params);
void unflatten_weights(GnnParams& params, const std::vector<double>& flat);
void add_scaled_weights(GnnParams& params, const GnnParams& grads, double scale);

void save_gnn(const GnnParams& params, const std::string& path);
GnnParams load_gnn(const std::string& path);

// ---------------------------------------------------------------------------
// PredGNN: supervised district-cost regressor on node features.

inline constexpr int kPredFeatureDim = 8;
inline constexpr int kPredEmbedDim = 1028;

struct PredGnnParams {
    std::array<Mat, 4> conv_w1;  // self
    std::array<Mat, 4> conv_w2;  // neighbor sum
    Mat head1;                   // 1028 -> 100
    std::vector<double> head1_b;
    Mat head2;                   // 100 -> 1
    std::vector<double> head2_b;
    std::array<double, kPredFeatureDim> feat_mean{};
    std::array<double, kPredFeatureDim> feat_scale{1, 1, 1, 1, 1, 1, 1, 1};
    double target_mean = 0.0;
    double target_scale = 1.0;

    static PredGnnParams init(std::uint64_t seed);
};

/// Cost of a district: node features with an inclusion indicator over the
/// whole instance graph, 4 GraphConv layers (ReLU, neighbor sum), mean
/// aggregation, dense head.
double predgnn_cost(const PredGnnParams& params, const Instance& instance,
                    const std::vector<int>& district);

struct PredGnnConfig {
    int batch_size = 64;
    double learning_rate = 1e-4;
    long long max_epochs = 10000;
    double early_stop_delta = 1e-4;
    long long early_stop_window = 1000;
    std::uint64_t seed = 0;
};

struct PredGnnTrainRow {
    const Instance* instance;
    std::vector<int> district;
    double true_cost;
};

PredGnnParams fit_predgnn(const std::vector<PredGnnTrainRow>& training,
                          const PredGnnConfig& config);

void save_predgnn(const PredGnnParams& params, const std::string& path);
PredGnnParams load_predgnn(const std::string& path);

}  // namespace districtnet
