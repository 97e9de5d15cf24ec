#pragma once
// Model configuration and trainable parameter set.
//
// Parameter layout, in canonical order:
//   node_proj/<type>   d x d_A projection per node type
//   link_proj/<type>   d x d_R projection per attributed link type, or
//   link_emb/<type>    learned d-vector per attribute-less link type
//   inst_attn/<path>   (L+2)d attention vector per meta-path
//   inst_mix/<path>    d x (L+1)d mixing matrix per meta-path
//   sem_proj           d_s x d projection (only when semantic_dim > 0)
//   sem_attn           preference vector, d_s or d
//   mlp/W1 mlp/b1 mlp/w2 mlp/b2

#include <cstdint>
#include <string>
#include <vector>

#include "hidam/optim.hpp"
#include "hidam/schema.hpp"

namespace hidam {

struct ModelConfig {
    std::size_t dim = 64;          // shared embedding size d
    std::size_t mlp_hidden = 64;
    std::size_t neighbor_cap = 20; // sampled path instances per (node, meta-path)
    double attn_slope = 0.2;       // LeakyReLU slope in the instance score
    std::size_t semantic_dim = 0;  // 0: preference vector acts on R^d directly
    std::string imputation = "standardize";
    std::vector<MetaPathSpec> metapaths;

    void validate() const;
};

struct ModelParams {
    std::vector<Parameter> params;

    // Indices into params.
    std::vector<int> node_proj;            // per node type
    std::vector<int> link_proj;            // per link type (projection or embedding)
    std::vector<std::uint8_t> link_is_emb; // 1 when the type has no attributes
    std::vector<int> inst_attn;            // per meta-path
    std::vector<int> inst_mix;
    int sem_proj = -1;
    int sem_attn = -1;
    int mlp_w1 = -1, mlp_b1 = -1, mlp_w2 = -1, mlp_b2 = -1;

    static ModelParams init(const Schema& schema, const ModelConfig& cfg, std::uint64_t seed);

    void zero_grads();
    std::size_t total_values() const;
};

}  // namespace hidam
