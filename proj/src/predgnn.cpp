#include "districtnet/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace districtnet {

namespace {

constexpr int kPredLayerDims[5] = {kPredFeatureDim, 64, 64, 64, kPredEmbedDim};
constexpr int kPredHeadHidden = 100;

double relu(double x) { return x > 0 ? x : 0.0; }

void glorot(Mat& m, Rng& rng) {
    const double bound = std::sqrt(6.0 / (m.rows + m.cols));
    for (auto& x : m.a) x = rng.uniform(-bound, bound);
}

void matvec(const Mat& w, const std::vector<double>& x, std::vector<double>& y) {
    y.assign(w.rows, 0.0);
    for (int r = 0; r < w.rows; ++r) {
        const double* row = w.a.data() + static_cast<std::size_t>(r) * w.cols;
        double s = 0.0;
        for (int c = 0; c < w.cols; ++c) s += row[c] * x[c];
        y[r] = s;
    }
}

void matvec_t_add(const Mat& w, const std::vector<double>& dz, std::vector<double>& y) {
    for (int r = 0; r < w.rows; ++r) {
        const double d = dz[r];
        if (d == 0.0) continue;
        const double* row = w.a.data() + static_cast<std::size_t>(r) * w.cols;
        for (int c = 0; c < w.cols; ++c) y[c] += row[c] * d;
    }
}

void outer_add(Mat& dw, const std::vector<double>& dz, const std::vector<double>& x) {
    for (int r = 0; r < dw.rows; ++r) {
        const double d = dz[r];
        if (d == 0.0) continue;
        double* row = dw.a.data() + static_cast<std::size_t>(r) * dw.cols;
        for (int c = 0; c < dw.cols; ++c) row[c] += d * x[c];
    }
}

std::vector<std::array<double, kPredFeatureDim>> node_features(
    const Instance& inst, const std::vector<int>& district) {
    std::vector<char> in_district(inst.num_vertices(), 0);
    for (int v : district) in_district[v] = 1;
    std::vector<std::array<double, kPredFeatureDim>> feats(inst.num_vertices());
    for (std::size_t i = 0; i < inst.num_vertices(); ++i) {
        const auto& u = inst.graph.units[i];
        const double p = static_cast<double>(u.population);
        feats[i] = {p, std::sqrt(p), u.area, std::sqrt(u.area), u.perimeter,
                    u.density(), u.depot_distance, static_cast<double>(in_district[i])};
    }
    return feats;
}

struct PredCache {
    std::vector<std::vector<std::vector<double>>> conv_in;  // [layer][node][dim]
    std::vector<std::vector<double>> conv_out;              // [node][1028]
    std::vector<double> embed;                              // mean, 1028
    std::vector<double> head1_out;                          // relu, 100
};

/// Standardized-scale prediction.
double pred_forward(const PredGnnParams& p, const Instance& inst,
                    const std::vector<int>& district, PredCache* cache) {
    auto adj = inst.graph.adjacency();
    const std::size_t n = inst.num_vertices();
    auto feats = node_features(inst, district);

    std::vector<std::vector<double>> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i].resize(kPredFeatureDim);
        for (int f = 0; f < kPredFeatureDim; ++f) {
            x[i][f] = (feats[i][f] - p.feat_mean[f]) / p.feat_scale[f];
        }
    }

    std::vector<double> self, nb_sum_w;
    for (int l = 0; l < 4; ++l) {
        if (cache) cache->conv_in.push_back(x);
        const int in_dim = kPredLayerDims[l];
        std::vector<std::vector<double>> next(n);
        std::vector<double> nb_sum(in_dim);
        for (std::size_t i = 0; i < n; ++i) {
            nb_sum.assign(in_dim, 0.0);
            for (int j : adj[i]) {
                for (int f = 0; f < in_dim; ++f) nb_sum[f] += x[j][f];
            }
            matvec(p.conv_w1[l], x[i], self);
            matvec(p.conv_w2[l], nb_sum, nb_sum_w);
            next[i].resize(self.size());
            for (std::size_t f = 0; f < self.size(); ++f) {
                next[i][f] = relu(self[f] + nb_sum_w[f]);
            }
        }
        x = std::move(next);
    }
    if (cache) cache->conv_out = x;

    std::vector<double> embed(kPredEmbedDim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (int f = 0; f < kPredEmbedDim; ++f) embed[f] += x[i][f];
    }
    for (double& v : embed) v /= static_cast<double>(n);
    if (cache) cache->embed = embed;

    std::vector<double> h1;
    matvec(p.head1, embed, h1);
    for (std::size_t f = 0; f < h1.size(); ++f) h1[f] = relu(h1[f] + p.head1_b[f]);
    if (cache) cache->head1_out = h1;

    double out = p.head2_b[0];
    for (int f = 0; f < kPredHeadHidden; ++f) out += p.head2.at(0, f) * h1[f];
    return out;
}

void pred_backward(const PredGnnParams& p, const Instance& inst, const PredCache& cache,
                   double dout, PredGnnParams& grads) {
    auto adj = inst.graph.adjacency();
    const std::size_t n = inst.num_vertices();

    // head
    std::vector<double> dz2 = {dout};
    outer_add(grads.head2, dz2, cache.head1_out);
    grads.head2_b[0] += dout;
    std::vector<double> dh1(kPredHeadHidden, 0.0);
    matvec_t_add(p.head2, dz2, dh1);
    for (int f = 0; f < kPredHeadHidden; ++f) {
        dh1[f] *= cache.head1_out[f] > 0 ? 1.0 : 0.0;
    }
    outer_add(grads.head1, dh1, cache.embed);
    for (int f = 0; f < kPredHeadHidden; ++f) grads.head1_b[f] += dh1[f];

    std::vector<double> dembed(kPredEmbedDim, 0.0);
    matvec_t_add(p.head1, dh1, dembed);

    // mean aggregation
    std::vector<std::vector<double>> dx(n, std::vector<double>(kPredEmbedDim));
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int f = 0; f < kPredEmbedDim; ++f) dx[i][f] = inv_n * dembed[f];
    }

    // conv layers
    for (int l = 3; l >= 0; --l) {
        const int in_dim = kPredLayerDims[l];
        const auto& inputs = cache.conv_in[l];
        const auto& outputs = (l == 3) ? cache.conv_out : cache.conv_in[l + 1];
        std::vector<std::vector<double>> dz(n);
        for (std::size_t i = 0; i < n; ++i) {
            dz[i].resize(dx[i].size());
            for (std::size_t f = 0; f < dx[i].size(); ++f) {
                dz[i][f] = dx[i][f] * (outputs[i][f] > 0 ? 1.0 : 0.0);
            }
        }
        std::vector<std::vector<double>> dprev(n, std::vector<double>(in_dim, 0.0));
        std::vector<double> nb_sum(in_dim), back(in_dim);
        for (std::size_t i = 0; i < n; ++i) {
            nb_sum.assign(in_dim, 0.0);
            for (int j : adj[i]) {
                for (int f = 0; f < in_dim; ++f) nb_sum[f] += inputs[j][f];
            }
            outer_add(grads.conv_w1[l], dz[i], inputs[i]);
            outer_add(grads.conv_w2[l], dz[i], nb_sum);
            matvec_t_add(p.conv_w1[l], dz[i], dprev[i]);
            back.assign(in_dim, 0.0);
            matvec_t_add(p.conv_w2[l], dz[i], back);
            for (int j : adj[i]) {
                for (int f = 0; f < in_dim; ++f) dprev[j][f] += back[f];
            }
        }
        dx = std::move(dprev);
    }
}

std::vector<double*> weight_ptrs(PredGnnParams& p) {
    std::vector<double*> out;
    auto add = [&](std::vector<double>& v) {
        for (auto& x : v) out.push_back(&x);
    };
    for (int l = 0; l < 4; ++l) {
        add(p.conv_w1[l].a);
        add(p.conv_w2[l].a);
    }
    add(p.head1.a);
    add(p.head1_b);
    add(p.head2.a);
    add(p.head2_b);
    return out;
}

}  // namespace

PredGnnParams PredGnnParams::init(std::uint64_t seed) {
    Rng rng(seed);
    PredGnnParams p;
    for (int l = 0; l < 4; ++l) {
        p.conv_w1[l] = Mat(kPredLayerDims[l + 1], kPredLayerDims[l]);
        p.conv_w2[l] = Mat(kPredLayerDims[l + 1], kPredLayerDims[l]);
        glorot(p.conv_w1[l], rng);
        glorot(p.conv_w2[l], rng);
    }
    p.head1 = Mat(kPredHeadHidden, kPredEmbedDim);
    p.head1_b.assign(kPredHeadHidden, 0.0);
    p.head2 = Mat(1, kPredHeadHidden);
    p.head2_b.assign(1, 0.0);
    glorot(p.head1, rng);
    glorot(p.head2, rng);
    return p;
}

double predgnn_cost(const PredGnnParams& params, const Instance& instance,
                    const std::vector<int>& district) {
    const double std_pred = pred_forward(params, instance, district, nullptr);
    return std_pred * params.target_scale + params.target_mean;
}

PredGnnParams fit_predgnn(const std::vector<PredGnnTrainRow>& training,
                          const PredGnnConfig& config) {
    if (training.empty()) throw std::invalid_argument("empty training set");
    PredGnnParams params = PredGnnParams::init(config.seed);

    // standardize inputs and targets over the training set
    std::vector<double> fsum(kPredFeatureDim, 0.0), fsq(kPredFeatureDim, 0.0);
    std::size_t n_nodes = 0;
    double tsum = 0.0, tsq = 0.0;
    for (const auto& row : training) {
        for (const auto& f : node_features(*row.instance, row.district)) {
            for (int i = 0; i < kPredFeatureDim; ++i) {
                fsum[i] += f[i];
                fsq[i] += f[i] * f[i];
            }
            ++n_nodes;
        }
        tsum += row.true_cost;
        tsq += row.true_cost * row.true_cost;
    }
    for (int i = 0; i < kPredFeatureDim; ++i) {
        params.feat_mean[i] = fsum[i] / n_nodes;
        const double var = fsq[i] / n_nodes - params.feat_mean[i] * params.feat_mean[i];
        params.feat_scale[i] = var > 1e-12 ? std::sqrt(var) : 1.0;
    }
    params.target_mean = tsum / training.size();
    const double tvar = tsq / training.size() - params.target_mean * params.target_mean;
    params.target_scale = tvar > 1e-12 ? std::sqrt(tvar) : 1.0;

    // Adam
    auto wp = weight_ptrs(params);
    std::vector<double> m(wp.size(), 0.0), v(wp.size(), 0.0);
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    long long step = 0;

    Rng rng = Rng(config.seed).substream(1);
    std::vector<std::size_t> order(training.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<double> epoch_losses;
    for (long long epoch = 0; epoch < config.max_epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.uniform_index(i)]);
        }
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
            PredGnnParams grads = PredGnnParams::init(0);
            for (auto p : weight_ptrs(grads)) *p = 0.0;
            for (std::size_t r = start; r < end; ++r) {
                const auto& row = training[order[r]];
                PredCache cache;
                const double pred = pred_forward(params, *row.instance, row.district, &cache);
                const double target =
                    (row.true_cost - params.target_mean) / params.target_scale;
                const double err = pred - target;
                epoch_loss += err * err;
                pred_backward(params, *row.instance, cache, 2.0 * err / (end - start), grads);
            }
            ++step;
            auto gp = weight_ptrs(grads);
            const double corr1 = 1.0 - std::pow(b1, static_cast<double>(step));
            const double corr2 = 1.0 - std::pow(b2, static_cast<double>(step));
            for (std::size_t i = 0; i < wp.size(); ++i) {
                m[i] = b1 * m[i] + (1 - b1) * *gp[i];
                v[i] = b2 * v[i] + (1 - b2) * (*gp[i]) * (*gp[i]);
                *wp[i] -= config.learning_rate * (m[i] / corr1) /
                          (std::sqrt(v[i] / corr2) + eps);
            }
        }
        epoch_losses.push_back(epoch_loss / training.size());
        const std::size_t w = static_cast<std::size_t>(config.early_stop_window);
        if (epoch_losses.size() > w) {
            const double then = epoch_losses[epoch_losses.size() - 1 - w];
            const double now = epoch_losses.back();
            if (std::abs(then - now) < config.early_stop_delta) break;
        }
    }
    return params;
}

using nlohmann::json;

void save_predgnn(const PredGnnParams& params, const std::string& path) {
    PredGnnParams copy = params;
    auto wp = weight_ptrs(copy);
    std::vector<double> flat;
    flat.reserve(wp.size());
    for (auto p : wp) flat.push_back(*p);
    json doc = {{"arch", "predgnn-v1"},
                {"weights", flat},
                {"feat_mean", params.feat_mean},
                {"feat_scale", params.feat_scale},
                {"target_mean", params.target_mean},
                {"target_scale", params.target_scale}};
    std::ofstream out(path);
    out << doc.dump() << "\n";
}

PredGnnParams load_predgnn(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc;
    in >> doc;
    if (doc.value("arch", "") != "predgnn-v1") {
        throw std::runtime_error("unknown model file format: " + path);
    }
    PredGnnParams p = PredGnnParams::init(0);
    auto flat = doc.at("weights").get<std::vector<double>>();
    auto wp = weight_ptrs(p);
    if (flat.size() != wp.size()) throw std::runtime_error("weight count mismatch");
    for (std::size_t i = 0; i < wp.size(); ++i) *wp[i] = flat[i];
    auto fm = doc.at("feat_mean").get<std::vector<double>>();
    auto fs = doc.at("feat_scale").get<std::vector<double>>();
    std::copy(fm.begin(), fm.end(), p.feat_mean.begin());
    std::copy(fs.begin(), fs.end(), p.feat_scale.begin());
    p.target_mean = doc.at("target_mean");
    p.target_scale = doc.at("target_scale");
    return p;
}

}  // namespace districtnet
