#include "hidam/reference.hpp"

#include <algorithm>
#include <cmath>

#include "hidam/path_enum.hpp"

namespace hidam::ref {

namespace {

using Vec = std::vector<double>;

Vec project_node(const Bcn& g, const FeatureScaler& scaler, const ModelParams& params,
                 std::size_t type, std::uint32_t row) {
    const Matrix& w = params.params[params.node_proj[type]].value;
    Vec x(w.cols);
    scaler.apply_node(g, type, row, x.data());
    Vec h(w.rows, 0.0);
    for (std::size_t r = 0; r < w.rows; ++r)
        for (std::size_t c = 0; c < w.cols; ++c) h[r] += w.at(r, c) * x[c];
    return h;
}

Vec project_link(const Bcn& g, const FeatureScaler& scaler, const ModelParams& params,
                 std::size_t type, std::uint32_t row) {
    if (params.link_is_emb[type]) return params.params[params.link_proj[type]].value.data;
    const Matrix& w = params.params[params.link_proj[type]].value;
    Vec x(w.cols);
    scaler.apply_link(g, type, row, x.data());
    Vec h(w.rows, 0.0);
    for (std::size_t r = 0; r < w.rows; ++r)
        for (std::size_t c = 0; c < w.cols; ++c) h[r] += w.at(r, c) * x[c];
    return h;
}

Vec softmax(const Vec& s) {
    const double mx = *std::max_element(s.begin(), s.end());
    Vec w(s.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        w[i] = std::exp(s[i] - mx);
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return w;
}

}  // namespace

double score_node(const Bcn& g, const FeatureScaler& scaler, const ModelParams& params,
                  const ModelConfig& cfg, std::uint32_t u, std::uint64_t seed) {
    const std::size_t d = cfg.dim;
    const std::size_t company = g.company_type();
    const Vec h_u = project_node(g, scaler, params, company, u);

    std::vector<Vec> z_per_path;
    for (std::size_t pi = 0; pi < cfg.metapaths.size(); ++pi) {
        const MetaPathSpec& spec = cfg.metapaths[pi];
        const std::size_t L = spec.intermediate_length();
        const auto instances = enumerate_path_instances(g, u, spec, cfg.neighbor_cap,
                                                        instance_seed(seed, u, pi));
        Vec pre(d, 0.0);
        if (instances.empty()) {
            pre = h_u;
        } else {
            const Matrix& a = params.params[params.inst_attn[pi]].value;
            const Matrix& mix = params.params[params.inst_mix[pi]].value;
            std::vector<Vec> neighbor_part;  // [h_v || h_path], (L+1)d each
            Vec scores;
            for (const PathInstance& inst : instances) {
                Vec part((L + 1) * d, 0.0);
                const Vec h_v = project_node(g, scaler, params, company, inst.terminal);
                std::copy(h_v.begin(), h_v.end(), part.begin());
                for (std::size_t e = 0; e < L; ++e) {
                    Vec h_m = e % 2 == 0
                                  ? project_link(g, scaler, params, spec.steps[e / 2].link_type,
                                                 inst.elems[e])
                                  : project_node(g, scaler, params, spec.node_seq[e / 2 + 1],
                                                 inst.elems[e]);
                    std::copy(h_m.begin(), h_m.end(), part.begin() + (1 + e) * d);
                }
                double s = 0.0;
                for (std::size_t j = 0; j < d; ++j)
                    s += a.data[j] * (h_u[j] > 0 ? h_u[j] : cfg.attn_slope * h_u[j]);
                for (std::size_t j = 0; j < (L + 1) * d; ++j)
                    s += a.data[d + j] * (part[j] > 0 ? part[j] : cfg.attn_slope * part[j]);
                scores.push_back(s);
                neighbor_part.push_back(std::move(part));
            }
            const Vec alpha = softmax(scores);
            Vec ctx((L + 1) * d, 0.0);
            for (std::size_t i = 0; i < instances.size(); ++i)
                for (std::size_t j = 0; j < ctx.size(); ++j)
                    ctx[j] += alpha[i] * neighbor_part[i][j];
            for (std::size_t r = 0; r < d; ++r) {
                double acc = h_u[r];
                for (std::size_t c = 0; c < ctx.size(); ++c) acc += mix.at(r, c) * ctx[c];
                pre[r] = acc;
            }
        }
        Vec phi(d);
        for (std::size_t j = 0; j < d; ++j)
            phi[j] = pre[j] > 0 ? pre[j] : std::expm1(pre[j]);
        double norm = 0.0;
        for (double v : phi) norm += v * v;
        norm = std::max(std::sqrt(norm), 1e-12);
        Vec z(d);
        for (std::size_t j = 0; j < d; ++j) z[j] = phi[j] / norm;
        z_per_path.push_back(std::move(z));
    }

    // Semantic fusion.
    const Matrix& a_sem = params.params[params.sem_attn].value;
    const std::size_t sdim = cfg.semantic_dim > 0 ? cfg.semantic_dim : d;
    Vec sem_scores;
    for (const Vec& z : z_per_path) {
        Vec t(sdim, 0.0);
        if (cfg.semantic_dim > 0) {
            const Matrix& ws = params.params[params.sem_proj].value;
            for (std::size_t r = 0; r < sdim; ++r)
                for (std::size_t c = 0; c < d; ++c) t[r] += ws.at(r, c) * z[c];
        } else {
            t = z;
        }
        double s = 0.0;
        for (std::size_t j = 0; j < sdim; ++j) s += a_sem.data[j] * std::tanh(t[j]);
        sem_scores.push_back(s);
    }
    const Vec beta = softmax(sem_scores);
    Vec q(d, 0.0);
    for (std::size_t pi = 0; pi < z_per_path.size(); ++pi)
        for (std::size_t j = 0; j < d; ++j) q[j] += beta[pi] * z_per_path[pi][j];

    // MLP head.
    const Matrix& w1 = params.params[params.mlp_w1].value;
    const Matrix& b1 = params.params[params.mlp_b1].value;
    const Matrix& w2 = params.params[params.mlp_w2].value;
    double logit = params.params[params.mlp_b2].value.data[0];
    for (std::size_t r = 0; r < cfg.mlp_hidden; ++r) {
        double acc = b1.data[r];
        for (std::size_t c = 0; c < d; ++c) acc += w1.at(r, c) * q[c];
        logit += w2.data[r] * std::max(acc, 0.0);
    }
    return 1.0 / (1.0 + std::exp(-logit));
}

std::vector<double> score_batch(const Bcn& g, const FeatureScaler& scaler,
                                const ModelParams& params, const ModelConfig& cfg,
                                const std::vector<std::uint32_t>& targets, std::uint64_t seed) {
    std::vector<double> out;
    out.reserve(targets.size());
    for (std::uint32_t u : targets) out.push_back(score_node(g, scaler, params, cfg, u, seed));
    return out;
}

}  // namespace hidam::ref
