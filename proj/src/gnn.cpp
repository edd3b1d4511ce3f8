#include "districtnet/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace districtnet {

namespace {

constexpr double kLeakySlope = 0.01;

double lrelu(double x) { return x > 0 ? x : kLeakySlope * x; }
double lrelu_grad_from_out(double out) { return out > 0 ? 1.0 : kLeakySlope; }
double relu(double x) { return x > 0 ? x : 0.0; }
double relu_grad_from_out(double out) { return out > 0 ? 1.0 : 0.0; }

void glorot(Mat& m, Rng& rng) {
    const double bound = std::sqrt(6.0 / (m.rows + m.cols));
    for (auto& x : m.a) x = rng.uniform(-bound, bound);
}

// y = W x
void matvec(const Mat& w, const std::vector<double>& x, std::vector<double>& y) {
    y.assign(w.rows, 0.0);
    for (int r = 0; r < w.rows; ++r) {
        const double* row = w.a.data() + static_cast<std::size_t>(r) * w.cols;
        double s = 0.0;
        for (int c = 0; c < w.cols; ++c) s += row[c] * x[c];
        y[r] = s;
    }
}

// y += W' dz
void matvec_t_add(const Mat& w, const std::vector<double>& dz, std::vector<double>& y) {
    for (int r = 0; r < w.rows; ++r) {
        const double* row = w.a.data() + static_cast<std::size_t>(r) * w.cols;
        const double d = dz[r];
        if (d == 0.0) continue;
        for (int c = 0; c < w.cols; ++c) y[c] += row[c] * d;
    }
}

// dW += dz x'
void outer_add(Mat& dw, const std::vector<double>& dz, const std::vector<double>& x) {
    for (int r = 0; r < dw.rows; ++r) {
        double* row = dw.a.data() + static_cast<std::size_t>(r) * dw.cols;
        const double d = dz[r];
        if (d == 0.0) continue;
        for (int c = 0; c < dw.cols; ++c) row[c] += d * x[c];
    }
}

std::vector<std::vector<int>> line_graph_neighbors(const Instance& inst) {
    const std::size_t n = inst.num_vertices();
    std::vector<std::vector<int>> incident(n);
    for (std::size_t e = 0; e < inst.num_edges(); ++e) {
        incident[inst.graph.edges[e].first].push_back(static_cast<int>(e));
        incident[inst.graph.edges[e].second].push_back(static_cast<int>(e));
    }
    std::vector<std::vector<int>> nbrs(inst.num_edges());
    for (std::size_t e = 0; e < inst.num_edges(); ++e) {
        auto [u, v] = inst.graph.edges[e];
        for (int f : incident[u]) {
            if (f != static_cast<int>(e)) nbrs[e].push_back(f);
        }
        for (int f : incident[v]) {
            if (f != static_cast<int>(e)) nbrs[e].push_back(f);
        }
    }
    return nbrs;
}

}  // namespace

GnnParams GnnParams::init(std::uint64_t seed) {
    Rng rng(seed);
    GnnParams p;
    for (int l = 0; l < kConvLayers; ++l) {
        const int in = (l == 0) ? kFeatureDim : kHidden;
        p.conv_w0[l] = Mat(kHidden, in);
        p.conv_w1[l] = Mat(kHidden, in);
        glorot(p.conv_w0[l], rng);
        glorot(p.conv_w1[l], rng);
    }
    const int head_dims[5] = {kHidden, 64, 64, 32, 1};
    for (int i = 0; i < 4; ++i) {
        p.head_w[i] = Mat(head_dims[i + 1], head_dims[i]);
        glorot(p.head_w[i], rng);
        p.head_b[i].assign(head_dims[i + 1], 0.0);
    }
    return p;
}

std::vector<double> gnn_forward(const GnnParams& params, const Instance& instance,
                                GnnCache* cache) {
    const std::size_t m = instance.num_edges();
    auto nbrs = line_graph_neighbors(instance);

    std::vector<std::vector<double>> h(m);
    for (std::size_t e = 0; e < m; ++e) {
        h[e].resize(kFeatureDim);
        for (int i = 0; i < kFeatureDim; ++i) {
            h[e][i] = (instance.edge_features[e][i] - params.feat_mean[i]) /
                      params.feat_scale[i];
        }
    }

    if (cache) {
        cache->instance = &instance;
        cache->edge_neighbors = nbrs;
        cache->conv_in.clear();
        cache->conv_z.clear();
        cache->head_in.clear();
    }

    std::vector<double> tmp, msg, mean;
    for (int l = 0; l < kConvLayers; ++l) {
        if (cache) cache->conv_in.push_back(h);
        std::vector<std::vector<double>> next(m);
        std::vector<std::vector<double>> zs;
        if (cache) zs.resize(m);
        for (std::size_t e = 0; e < m; ++e) {
            const int in_dim = params.conv_w0[l].cols;
            mean.assign(in_dim, 0.0);
            if (!nbrs[e].empty()) {
                for (int f : nbrs[e]) {
                    for (int i = 0; i < in_dim; ++i) mean[i] += h[f][i];
                }
                const double inv = 1.0 / nbrs[e].size();
                for (int i = 0; i < in_dim; ++i) mean[i] *= inv;
            }
            matvec(params.conv_w0[l], h[e], tmp);
            matvec(params.conv_w1[l], mean, msg);
            std::vector<double> z(kHidden);
            for (int i = 0; i < kHidden; ++i) z[i] = tmp[i] + msg[i];
            if (cache) zs[e] = z;
            next[e].resize(kHidden);
            for (int i = 0; i < kHidden; ++i) next[e][i] = lrelu(z[i]);
        }
        if (cache) cache->conv_z.push_back(std::move(zs));
        h = std::move(next);
    }

    std::vector<double> theta(m);
    for (int layer = 0; layer < 4; ++layer) {
        if (cache) cache->head_in.push_back(h);
        std::vector<std::vector<double>> next(m);
        for (std::size_t e = 0; e < m; ++e) {
            matvec(params.head_w[layer], h[e], tmp);
            next[e].resize(tmp.size());
            for (std::size_t i = 0; i < tmp.size(); ++i) {
                const double z = tmp[i] + params.head_b[layer][i];
                next[e][i] = (layer < 3) ? lrelu(z) : z;
            }
        }
        h = std::move(next);
    }
    for (std::size_t e = 0; e < m; ++e) theta[e] = h[e][0];
    return theta;
}

GnnParams gnn_backward(const GnnParams& params, const Instance& instance,
                       const GnnCache& cache, const std::vector<double>& grad_theta) {
    if (cache.instance != &instance) {
        throw std::invalid_argument("cache does not match the instance");
    }
    const std::size_t m = instance.num_edges();
    if (grad_theta.size() != m) throw std::invalid_argument("grad_theta size mismatch");

    GnnParams g;
    for (int l = 0; l < kConvLayers; ++l) {
        g.conv_w0[l] = Mat(params.conv_w0[l].rows, params.conv_w0[l].cols);
        g.conv_w1[l] = Mat(params.conv_w1[l].rows, params.conv_w1[l].cols);
    }
    for (int i = 0; i < 4; ++i) {
        g.head_w[i] = Mat(params.head_w[i].rows, params.head_w[i].cols);
        g.head_b[i].assign(params.head_b[i].size(), 0.0);
    }

    // head backward
    std::vector<std::vector<double>> dh(m, std::vector<double>(1));
    for (std::size_t e = 0; e < m; ++e) dh[e][0] = grad_theta[e];
    for (int layer = 3; layer >= 0; --layer) {
        const auto& inputs = cache.head_in[layer];
        // layer output = input of layer+1 (or theta itself for the last layer)
        std::vector<std::vector<double>> dprev(m, std::vector<double>(params.head_w[layer].cols, 0.0));
        for (std::size_t e = 0; e < m; ++e) {
            std::vector<double> dz = dh[e];
            if (layer < 3) {
                const auto& out = cache.head_in[layer + 1][e];
                for (std::size_t i = 0; i < dz.size(); ++i) dz[i] *= lrelu_grad_from_out(out[i]);
            }
            outer_add(g.head_w[layer], dz, inputs[e]);
            for (std::size_t i = 0; i < dz.size(); ++i) g.head_b[layer][i] += dz[i];
            matvec_t_add(params.head_w[layer], dz, dprev[e]);
        }
        dh = std::move(dprev);
    }

    // conv backward
    for (int l = kConvLayers - 1; l >= 0; --l) {
        const auto& inputs = cache.conv_in[l];
        const auto& zs = cache.conv_z[l];
        const int in_dim = params.conv_w0[l].cols;
        std::vector<std::vector<double>> dz(m, std::vector<double>(kHidden));
        for (std::size_t e = 0; e < m; ++e) {
            for (int i = 0; i < kHidden; ++i) {
                dz[e][i] = dh[e][i] * (zs[e][i] > 0 ? 1.0 : kLeakySlope);
            }
        }
        std::vector<std::vector<double>> dprev(m, std::vector<double>(in_dim, 0.0));
        std::vector<double> mean(in_dim);
        for (std::size_t e = 0; e < m; ++e) {
            const auto& nbrs = cache.edge_neighbors[e];
            mean.assign(in_dim, 0.0);
            if (!nbrs.empty()) {
                for (int f : nbrs) {
                    for (int i = 0; i < in_dim; ++i) mean[i] += inputs[f][i];
                }
                const double inv = 1.0 / nbrs.size();
                for (int i = 0; i < in_dim; ++i) mean[i] *= inv;
            }
            outer_add(g.conv_w0[l], dz[e], inputs[e]);
            outer_add(g.conv_w1[l], dz[e], mean);
            matvec_t_add(params.conv_w0[l], dz[e], dprev[e]);
            // scatter the mean term: each neighbor f of e receives 1/|N(e)| W1' dz_e
            if (!nbrs.empty()) {
                std::vector<double> back(in_dim, 0.0);
                matvec_t_add(params.conv_w1[l], dz[e], back);
                const double inv = 1.0 / nbrs.size();
                for (int f : nbrs) {
                    for (int i = 0; i < in_dim; ++i) dprev[f][i] += inv * back[i];
                }
            }
        }
        dh = std::move(dprev);
    }
    return g;
}

std::vector<double> flatten_weights(const GnnParams& p) {
    std::vector<double> flat;
    for (int l = 0; l < kConvLayers; ++l) {
        flat.insert(flat.end(), p.conv_w0[l].a.begin(), p.conv_w0[l].a.end());
        flat.insert(flat.end(), p.conv_w1[l].a.begin(), p.conv_w1[l].a.end());
    }
    for (int i = 0; i < 4; ++i) {
        flat.insert(flat.end(), p.head_w[i].a.begin(), p.head_w[i].a.end());
        flat.insert(flat.end(), p.head_b[i].begin(), p.head_b[i].end());
    }
    return flat;
}

void unflatten_weights(GnnParams& p, const std::vector<double>& flat) {
    std::size_t pos = 0;
    auto take = [&](std::vector<double>& dst) {
        std::copy(flat.begin() + pos, flat.begin() + pos + dst.size(), dst.begin());
        pos += dst.size();
    };
    for (int l = 0; l < kConvLayers; ++l) {
        take(p.conv_w0[l].a);
        take(p.conv_w1[l].a);
    }
    for (int i = 0; i < 4; ++i) {
        take(p.head_w[i].a);
        take(p.head_b[i]);
    }
    if (pos != flat.size()) throw std::invalid_argument("flat weight size mismatch");
}

void add_scaled_weights(GnnParams& p, const GnnParams& g, double scale) {
    for (int l = 0; l < kConvLayers; ++l) {
        for (std::size_t i = 0; i < p.conv_w0[l].a.size(); ++i) {
            p.conv_w0[l].a[i] += scale * g.conv_w0[l].a[i];
        }
        for (std::size_t i = 0; i < p.conv_w1[l].a.size(); ++i) {
            p.conv_w1[l].a[i] += scale * g.conv_w1[l].a[i];
        }
    }
    for (int i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < p.head_w[i].a.size(); ++j) {
            p.head_w[i].a[j] += scale * g.head_w[i].a[j];
        }
        for (std::size_t j = 0; j < p.head_b[i].size(); ++j) {
            p.head_b[i][j] += scale * g.head_b[i][j];
        }
    }
}

using nlohmann::json;

void save_gnn(const GnnParams& params, const std::string& path) {
    json doc = {{"arch", "edge-scorer-v1"},
                {"weights", flatten_weights(params)},
                {"feat_mean", params.feat_mean},
                {"feat_scale", params.feat_scale}};
    std::ofstream out(path);
    out << doc.dump() << "\n";
}

GnnParams load_gnn(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc;
    in >> doc;
    if (doc.value("arch", "") != "edge-scorer-v1") {
        throw std::runtime_error("unknown model file format: " + path);
    }
    GnnParams p = GnnParams::init(0);
    unflatten_weights(p, doc.at("weights").get<std::vector<double>>());
    auto fm = doc.at("feat_mean").get<std::vector<double>>();
    auto fs = doc.at("feat_scale").get<std::vector<double>>();
    std::copy(fm.begin(), fm.end(), p.feat_mean.begin());
    std::copy(fs.begin(), fs.end(), p.feat_scale.begin());
    return p;
}

}  // namespace districtnet
