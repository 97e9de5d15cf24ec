#include "hidam/forward.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "hidam/primitives.hpp"
#include "hidam/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hidam {

namespace {

constexpr std::size_t kBackwardBlock = 16;
constexpr double kProbClamp = 1e-12;

struct EntityRef {
    bool is_link;
    std::size_t type;
    std::uint32_t row;
};

EntityRef unpack_key(std::uint64_t key) {
    return {(key >> 48) != 0, static_cast<std::size_t>((key >> 32) & 0xffff),
            static_cast<std::uint32_t>(key & 0xffffffffu)};
}

// Accumulates dL/dh per entity touched by one target.
class EntityGradAccum {
public:
    explicit EntityGradAccum(std::size_t dim) : dim_(dim) {}

    void clear() {
        slot_.clear();
        touched_.clear();
    }

    double* at(int ent) {
        auto [it, inserted] = slot_.emplace(ent, touched_.size());
        if (inserted) {
            touched_.push_back(ent);
            if (storage_.size() < touched_.size() * dim_) storage_.resize(touched_.size() * dim_);
            std::fill_n(storage_.data() + it->second * dim_, dim_, 0.0);
        }
        return storage_.data() + it->second * dim_;
    }

    const std::vector<int>& touched() const { return touched_; }
    const double* slot(std::size_t i) const { return storage_.data() + i * dim_; }

private:
    std::size_t dim_;
    std::unordered_map<int, std::size_t> slot_;
    std::vector<int> touched_;
    std::vector<double> storage_;
};

std::vector<Matrix> make_grad_buffer(const ModelParams& params) {
    std::vector<Matrix> buf;
    buf.reserve(params.params.size());
    for (const Parameter& p : params.params) buf.emplace_back(p.value.rows, p.value.cols);
    return buf;
}

}  // namespace

std::uint64_t entity_key(bool is_link, std::size_t type, std::uint32_t row) {
    return (static_cast<std::uint64_t>(is_link ? 1 : 0) << 48) |
           (static_cast<std::uint64_t>(type & 0xffff) << 32) | row;
}

std::uint64_t instance_seed(std::uint64_t seed, std::uint32_t node, std::size_t path_index) {
    return seed_mix(seed_mix(seed, node + 1), path_index + 1);
}

ForwardTrace forward_batch(const Bcn& g, const FeatureScaler& scaler, const ModelParams& params,
                           const ModelConfig& cfg, const std::vector<std::uint32_t>& targets,
                           std::uint64_t seed) {
    cfg.validate();
    const std::size_t d = cfg.dim;
    const std::size_t n_paths = cfg.metapaths.size();
    const std::size_t company = g.company_type();

    ForwardTrace trace;
    trace.seed = seed;
    trace.targets.resize(targets.size());
    trace.scores.resize(targets.size());

    // Stage 1: sample path instances per (target, meta-path).
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(targets.size()); ++ti) {
        TargetTrace& tt = trace.targets[ti];
        tt.node = targets[ti];
        tt.paths.resize(n_paths);
        for (std::size_t pi = 0; pi < n_paths; ++pi) {
            tt.paths[pi].instances = enumerate_path_instances(
                g, tt.node, cfg.metapaths[pi], cfg.neighbor_cap,
                instance_seed(seed, tt.node, pi));
        }
    }

    // Stage 2: dense entity table over everything the batch touches.
    std::unordered_map<std::uint64_t, int> ent_index;
    auto intern = [&](bool is_link, std::size_t type, std::uint32_t row) {
        const std::uint64_t key = entity_key(is_link, type, row);
        auto [it, inserted] = ent_index.emplace(key, static_cast<int>(trace.ent_keys.size()));
        if (inserted) trace.ent_keys.push_back(key);
        return it->second;
    };
    for (TargetTrace& tt : trace.targets) {
        tt.self_ent = intern(false, company, tt.node);
        for (std::size_t pi = 0; pi < n_paths; ++pi) {
            const MetaPathSpec& spec = cfg.metapaths[pi];
            PathTrace& pt = tt.paths[pi];
            pt.terminal_ent.reserve(pt.instances.size());
            pt.elem_ent.reserve(pt.instances.size());
            for (const PathInstance& inst : pt.instances) {
                pt.terminal_ent.push_back(intern(false, company, inst.terminal));
                std::vector<int> elems(inst.elems.size());
                for (std::size_t e = 0; e < inst.elems.size(); ++e) {
                    if (e % 2 == 0)
                        elems[e] = intern(true, spec.steps[e / 2].link_type, inst.elems[e]);
                    else
                        elems[e] = intern(false, spec.node_seq[e / 2 + 1], inst.elems[e]);
                }
                pt.elem_ent.push_back(std::move(elems));
            }
        }
    }

    // Stage 3: project each entity once.
    const std::size_t n_ent = trace.ent_keys.size();
    trace.ent_x.resize(n_ent);
    trace.ent_h = Matrix(n_ent, d);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t ei = 0; ei < static_cast<std::int64_t>(n_ent); ++ei) {
        const EntityRef ref = unpack_key(trace.ent_keys[ei]);
        double* h = trace.ent_h.row_ptr(ei);
        if (ref.is_link && params.link_is_emb[ref.type]) {
            const Matrix& emb = params.params[params.link_proj[ref.type]].value;
            std::copy(emb.data.begin(), emb.data.end(), h);
            continue;
        }
        const Matrix& w = ref.is_link ? params.params[params.link_proj[ref.type]].value
                                      : params.params[params.node_proj[ref.type]].value;
        std::vector<double>& x = trace.ent_x[ei];
        x.resize(w.cols);
        if (ref.is_link)
            scaler.apply_link(g, ref.type, ref.row, x.data());
        else
            scaler.apply_node(g, ref.type, ref.row, x.data());
        linear_forward(w, x.data(), h);
    }

    // Stage 4: hierarchical fusion and the MLP head, per target.
#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        std::vector<double> concat, weights;
        std::vector<Group> one_group(1);
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 8)
#endif
        for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(targets.size()); ++ti) {
            TargetTrace& tt = trace.targets[ti];
            const double* h_u = trace.ent_h.row_ptr(tt.self_ent);

            for (std::size_t pi = 0; pi < n_paths; ++pi) {
                PathTrace& pt = tt.paths[pi];
                const std::size_t L = cfg.metapaths[pi].intermediate_length();
                pt.pre.assign(d, 0.0);
                if (pt.instances.empty()) {
                    // Vanishing-sum fallback: the fused output reduces to the
                    // node's own projected features.
                    std::copy(h_u, h_u + d, pt.pre.begin());
                } else {
                    const Matrix& a = params.params[params.inst_attn[pi]].value;
                    const Matrix& mix = params.params[params.inst_mix[pi]].value;
                    const std::size_t n_inst = pt.instances.size();
                    pt.scores.resize(n_inst);
                    concat.resize((L + 2) * d);
                    for (std::size_t i = 0; i < n_inst; ++i) {
                        std::copy(h_u, h_u + d, concat.begin());
                        const double* h_v = trace.ent_h.row_ptr(pt.terminal_ent[i]);
                        std::copy(h_v, h_v + d, concat.begin() + d);
                        for (std::size_t e = 0; e < L; ++e) {
                            const double* h_m = trace.ent_h.row_ptr(pt.elem_ent[i][e]);
                            std::copy(h_m, h_m + d, concat.begin() + (2 + e) * d);
                        }
                        double s = 0.0;
                        for (std::size_t j = 0; j < (L + 2) * d; ++j)
                            s += a.data[j] * leaky_relu(concat[j], cfg.attn_slope);
                        pt.scores[i] = s;
                    }
                    one_group[0] = {0, n_inst};
                    softmax_groups(pt.scores, one_group, pt.alpha);

                    pt.ctx.assign((L + 1) * d, 0.0);
                    for (std::size_t i = 0; i < n_inst; ++i) {
                        const double w = pt.alpha[i];
                        axpy(w, trace.ent_h.row_ptr(pt.terminal_ent[i]), pt.ctx.data(), d);
                        for (std::size_t e = 0; e < L; ++e)
                            axpy(w, trace.ent_h.row_ptr(pt.elem_ent[i][e]),
                                 pt.ctx.data() + (1 + e) * d, d);
                    }
                    linear_forward(mix, pt.ctx.data(), pt.pre.data());
                    for (std::size_t j = 0; j < d; ++j) pt.pre[j] += h_u[j];
                }
                pt.phi.resize(d);
                for (std::size_t j = 0; j < d; ++j) pt.phi[j] = elu(pt.pre[j]);
                pt.z.resize(d);
                pt.phi_norm = l2_normalize(pt.phi.data(), pt.z.data(), d);
            }

            // Semantic-level fusion across meta-paths.
            const Matrix& a_sem = params.params[params.sem_attn].value;
            const std::size_t sdim = cfg.semantic_dim > 0 ? cfg.semantic_dim : d;
            tt.sem_t.assign(n_paths * sdim, 0.0);
            tt.sem_scores.resize(n_paths);
            for (std::size_t pi = 0; pi < n_paths; ++pi) {
                double* t = tt.sem_t.data() + pi * sdim;
                if (cfg.semantic_dim > 0) {
                    linear_forward(params.params[params.sem_proj].value,
                                   tt.paths[pi].z.data(), t);
                    for (std::size_t j = 0; j < sdim; ++j) t[j] = tanh_act(t[j]);
                } else {
                    for (std::size_t j = 0; j < sdim; ++j) t[j] = tanh_act(tt.paths[pi].z[j]);
                }
                tt.sem_scores[pi] = dot(a_sem.data.data(), t, sdim);
            }
            one_group[0] = {0, n_paths};
            softmax_groups(tt.sem_scores, one_group, tt.beta);
            tt.q.assign(d, 0.0);
            for (std::size_t pi = 0; pi < n_paths; ++pi)
                axpy(tt.beta[pi], tt.paths[pi].z.data(), tt.q.data(), d);

            // MLP head.
            tt.mlp_pre.resize(cfg.mlp_hidden);
            linear_forward(params.params[params.mlp_w1].value, tt.q.data(), tt.mlp_pre.data());
            const Matrix& b1 = params.params[params.mlp_b1].value;
            for (std::size_t j = 0; j < cfg.mlp_hidden; ++j) tt.mlp_pre[j] += b1.data[j];
            tt.mlp_act.resize(cfg.mlp_hidden);
            for (std::size_t j = 0; j < cfg.mlp_hidden; ++j) tt.mlp_act[j] = relu(tt.mlp_pre[j]);
            tt.logit = dot(params.params[params.mlp_w2].value.data.data(), tt.mlp_act.data(),
                           cfg.mlp_hidden) +
                       params.params[params.mlp_b2].value.data[0];
            tt.yhat = sigmoid(tt.logit);
            trace.scores[ti] = tt.yhat;
        }
    }
    return trace;
}

double bce_loss_sum(const std::vector<double>& yhat, const std::vector<std::uint8_t>& labels,
                    double pos_weight) {
    if (yhat.size() != labels.size())
        throw std::invalid_argument("bce_loss_sum: score/label size mismatch");
    double loss = 0.0;
    for (std::size_t i = 0; i < yhat.size(); ++i) {
        if (labels[i] > 1)
            throw std::invalid_argument("bce_loss_sum: label outside {0,1} at index " +
                                        std::to_string(i));
        const double p = std::clamp(yhat[i], kProbClamp, 1.0 - kProbClamp);
        loss += labels[i] ? -pos_weight * std::log(p) : -std::log(1.0 - p);
    }
    return loss;
}

void backward_batch(const Bcn& g, const FeatureScaler& scaler, ModelParams& params,
                    const ModelConfig& cfg, const ForwardTrace& trace,
                    const std::vector<std::uint8_t>& labels, double pos_weight) {
    if (trace.targets.size() != labels.size())
        throw std::invalid_argument("backward_batch: trace/label size mismatch");
    params.zero_grads();
    const std::size_t d = cfg.dim;
    const std::size_t n_paths = cfg.metapaths.size();
    const std::size_t n_targets = trace.targets.size();
    const std::size_t n_blocks = (n_targets + kBackwardBlock - 1) / kBackwardBlock;

    std::vector<std::vector<Matrix>> block_grads(n_blocks);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t bi = 0; bi < static_cast<std::int64_t>(n_blocks); ++bi) {
        std::vector<Matrix>& gbuf = block_grads[bi];
        gbuf = make_grad_buffer(params);
        EntityGradAccum dh(d);
        std::vector<double> dq(d), dz(n_paths * d), dpre(d), dctx, dalpha, dscore, scratch;
        const std::size_t lo = bi * kBackwardBlock;
        const std::size_t hi = std::min(n_targets, lo + kBackwardBlock);

        for (std::size_t ti = lo; ti < hi; ++ti) {
            const TargetTrace& tt = trace.targets[ti];
            if (labels[ti] > 1)
                throw std::invalid_argument("backward_batch: label outside {0,1}");
            const double y = labels[ti] ? 1.0 : 0.0;
            const double w = labels[ti] ? pos_weight : 1.0;
            dh.clear();

            // Head: summed BCE through the clamp and sigmoid.
            const double p = tt.yhat;
            const double pc = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
            double dlogit = 0.0;
            if (p > kProbClamp && p < 1.0 - kProbClamp)
                dlogit = w * (pc - y) / (pc * (1.0 - pc)) * p * (1.0 - p);

            gbuf[params.mlp_b2].data[0] += dlogit;
            const Matrix& w2 = params.params[params.mlp_w2].value;
            std::fill(dq.begin(), dq.end(), 0.0);
            scratch.assign(cfg.mlp_hidden, 0.0);
            for (std::size_t j = 0; j < cfg.mlp_hidden; ++j) {
                gbuf[params.mlp_w2].data[j] += dlogit * tt.mlp_act[j];
                scratch[j] = dlogit * w2.data[j] * relu_grad(tt.mlp_pre[j]);
                gbuf[params.mlp_b1].data[j] += scratch[j];
            }
            linear_backward(params.params[params.mlp_w1].value, tt.q.data(), scratch.data(),
                            gbuf[params.mlp_w1], dq.data());

            // Semantic fusion backward.
            const std::size_t sdim = cfg.semantic_dim > 0 ? cfg.semantic_dim : d;
            const Matrix& a_sem = params.params[params.sem_attn].value;
            std::fill(dz.begin(), dz.end(), 0.0);
            dalpha.assign(n_paths, 0.0);
            for (std::size_t pi = 0; pi < n_paths; ++pi) {
                axpy(tt.beta[pi], dq.data(), dz.data() + pi * d, d);
                dalpha[pi] = dot(dq.data(), tt.paths[pi].z.data(), d);
            }
            dscore.assign(n_paths, 0.0);
            std::vector<Group> one_group{{0, n_paths}};
            softmax_groups_backward(tt.beta, one_group, dalpha, dscore);
            for (std::size_t pi = 0; pi < n_paths; ++pi) {
                const double* t = tt.sem_t.data() + pi * sdim;
                for (std::size_t j = 0; j < sdim; ++j)
                    gbuf[params.sem_attn].data[j] += dscore[pi] * t[j];
                // through tanh
                scratch.assign(sdim, 0.0);
                for (std::size_t j = 0; j < sdim; ++j)
                    scratch[j] = dscore[pi] * a_sem.data[j] * tanh_grad_from_out(t[j]);
                if (cfg.semantic_dim > 0) {
                    linear_backward(params.params[params.sem_proj].value, tt.paths[pi].z.data(),
                                    scratch.data(), gbuf[params.sem_proj], dz.data() + pi * d);
                } else {
                    for (std::size_t j = 0; j < d; ++j) dz[pi * d + j] += scratch[j];
                }
            }

            // Instance fusion backward per meta-path.
            for (std::size_t pi = 0; pi < n_paths; ++pi) {
                const PathTrace& pt = tt.paths[pi];
                const std::size_t L = cfg.metapaths[pi].intermediate_length();
                std::fill(dpre.begin(), dpre.end(), 0.0);
                scratch.assign(d, 0.0);
                l2_normalize_backward(pt.z.data(), pt.phi_norm, dz.data() + pi * d,
                                      scratch.data(), d);
                for (std::size_t j = 0; j < d; ++j) dpre[j] = scratch[j] * elu_grad(pt.pre[j]);
                axpy(1.0, dpre.data(), dh.at(tt.self_ent), d);  // residual

                if (pt.instances.empty()) continue;
                const Matrix& a = params.params[params.inst_attn[pi]].value;
                const Matrix& mix = params.params[params.inst_mix[pi]].value;
                const std::size_t n_inst = pt.instances.size();

                dctx.assign((L + 1) * d, 0.0);
                linear_backward(mix, pt.ctx.data(), dpre.data(), gbuf[params.inst_mix[pi]],
                                dctx.data());

                dalpha.assign(n_inst, 0.0);
                for (std::size_t i = 0; i < n_inst; ++i) {
                    double acc = dot(dctx.data(), trace.ent_h.row_ptr(pt.terminal_ent[i]), d);
                    for (std::size_t e = 0; e < L; ++e)
                        acc += dot(dctx.data() + (1 + e) * d,
                                   trace.ent_h.row_ptr(pt.elem_ent[i][e]), d);
                    dalpha[i] = acc;
                }
                dscore.assign(n_inst, 0.0);
                one_group[0] = {0, n_inst};
                softmax_groups_backward(pt.alpha, one_group, dalpha, dscore);

                for (std::size_t i = 0; i < n_inst; ++i) {
                    // through the weighted sum
                    axpy(pt.alpha[i], dctx.data(), dh.at(pt.terminal_ent[i]), d);
                    for (std::size_t e = 0; e < L; ++e)
                        axpy(pt.alpha[i], dctx.data() + (1 + e) * d,
                             dh.at(pt.elem_ent[i][e]), d);
                    // through the score: segments of [h_u || h_v || h_path]
                    const double ds = dscore[i];
                    auto score_seg = [&](const double* h, std::size_t off, double* dest) {
                        for (std::size_t j = 0; j < d; ++j) {
                            gbuf[params.inst_attn[pi]].data[off + j] +=
                                ds * leaky_relu(h[j], cfg.attn_slope);
                            dest[j] += ds * a.data[off + j] *
                                       leaky_relu_grad(h[j], cfg.attn_slope);
                        }
                    };
                    score_seg(trace.ent_h.row_ptr(tt.self_ent), 0, dh.at(tt.self_ent));
                    score_seg(trace.ent_h.row_ptr(pt.terminal_ent[i]), d,
                              dh.at(pt.terminal_ent[i]));
                    for (std::size_t e = 0; e < L; ++e)
                        score_seg(trace.ent_h.row_ptr(pt.elem_ent[i][e]), (2 + e) * d,
                                  dh.at(pt.elem_ent[i][e]));
                }
            }

            // Feature transformation backward per touched entity.
            for (std::size_t s = 0; s < dh.touched().size(); ++s) {
                const int ent = dh.touched()[s];
                const double* grad_h = dh.slot(s);
                const EntityRef ref = unpack_key(trace.ent_keys[ent]);
                if (ref.is_link && params.link_is_emb[ref.type]) {
                    axpy(1.0, grad_h, gbuf[params.link_proj[ref.type]].data.data(), d);
                    continue;
                }
                const int pidx =
                    ref.is_link ? params.link_proj[ref.type] : params.node_proj[ref.type];
                outer_add(gbuf[pidx], grad_h, trace.ent_x[ent].data());
            }
        }
    }

    // Ordered reduction keeps gradients bit-identical for any thread count.
    for (std::size_t bi = 0; bi < n_blocks; ++bi)
        for (std::size_t p = 0; p < params.params.size(); ++p)
            for (std::size_t i = 0; i < params.params[p].grad.size(); ++i)
                params.params[p].grad.data[i] += block_grads[bi][p].data[i];
}

std::vector<PathExplanation> explain_node(const Bcn& g, const FeatureScaler& scaler,
                                          const ModelParams& params, const ModelConfig& cfg,
                                          std::uint32_t u, std::size_t k, std::uint64_t seed) {
    const ForwardTrace trace = forward_batch(g, scaler, params, cfg, {u}, seed);
    const TargetTrace& tt = trace.targets.front();
    std::vector<PathExplanation> out;
    for (std::size_t pi = 0; pi < cfg.metapaths.size(); ++pi) {
        PathExplanation ex;
        ex.metapath = cfg.metapaths[pi].name;
        ex.beta = tt.beta[pi];
        const PathTrace& pt = tt.paths[pi];
        std::vector<std::size_t> order(pt.instances.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return pt.alpha[a] > pt.alpha[b];
        });
        for (std::size_t i = 0; i < std::min(k, order.size()); ++i)
            ex.top_instances.emplace_back(pt.instances[order[i]].terminal, pt.alpha[order[i]]);
        out.push_back(std::move(ex));
    }
    return out;
}

}  // namespace hidam
