#include "hidam/model.hpp"

#include <stdexcept>

#include "hidam/primitives.hpp"
#include "hidam/rng.hpp"

namespace hidam {

void ModelConfig::validate() const {
    if (dim < 1) throw std::invalid_argument("ModelConfig: dim must be >= 1");
    if (mlp_hidden < 1) throw std::invalid_argument("ModelConfig: mlp_hidden must be >= 1");
    if (neighbor_cap < 1) throw std::invalid_argument("ModelConfig: neighbor_cap must be >= 1");
    if (metapaths.empty()) throw std::invalid_argument("ModelConfig: no meta-paths configured");
    if (imputation != "standardize" && imputation != "zero")
        throw std::invalid_argument("ModelConfig: unknown imputation policy '" + imputation + "'");
}

ModelParams ModelParams::init(const Schema& schema, const ModelConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    ModelParams p;
    const std::size_t d = cfg.dim;
    std::uint64_t idx = 0;
    auto add = [&](const std::string& name, std::size_t rows, std::size_t cols) {
        p.params.emplace_back(name, xavier_init(rows, cols, seed_mix(seed, idx++)));
        return static_cast<int>(p.params.size() - 1);
    };

    for (const NodeTypeDef& nt : schema.node_types) {
        // Attribute-less node types would get a shared embedding like links,
        // but the default schema always carries node attributes.
        if (nt.attr_count == 0)
            throw std::invalid_argument("ModelParams: node type '" + nt.name +
                                        "' has no attributes");
        p.node_proj.push_back(add("node_proj/" + nt.name, d, nt.attr_count));
    }
    for (const LinkTypeDef& lt : schema.link_types) {
        if (lt.attr_count == 0) {
            p.link_proj.push_back(add("link_emb/" + lt.name, d, 1));
            p.link_is_emb.push_back(1);
        } else {
            p.link_proj.push_back(add("link_proj/" + lt.name, d, lt.attr_count));
            p.link_is_emb.push_back(0);
        }
    }
    for (const MetaPathSpec& mp : cfg.metapaths) {
        const std::size_t L = mp.intermediate_length();
        p.inst_attn.push_back(add("inst_attn/" + mp.name, (L + 2) * d, 1));
        p.inst_mix.push_back(add("inst_mix/" + mp.name, d, (L + 1) * d));
    }
    if (cfg.semantic_dim > 0) {
        p.sem_proj = add("sem_proj", cfg.semantic_dim, d);
        p.sem_attn = add("sem_attn", cfg.semantic_dim, 1);
    } else {
        p.sem_attn = add("sem_attn", d, 1);
    }
    p.mlp_w1 = add("mlp/W1", cfg.mlp_hidden, d);
    p.mlp_b1 = add("mlp/b1", cfg.mlp_hidden, 1);
    p.mlp_w2 = add("mlp/w2", cfg.mlp_hidden, 1);
    p.mlp_b2 = add("mlp/b2", 1, 1);
    return p;
}

void ModelParams::zero_grads() {
    for (Parameter& p : params) p.grad.zero();
}

std::size_t ModelParams::total_values() const {
    std::size_t n = 0;
    for (const Parameter& p : params) n += p.value.size();
    return n;
}

}  // namespace hidam
