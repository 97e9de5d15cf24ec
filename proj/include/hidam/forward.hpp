#pragma once
// Batch forward and backward passes over target companies.
//
// Pipeline per batch: sample path instances per (target, meta-path), project
// every touched entity once into the shared d-dimensional space, fuse
// instances per meta-path under instance-level attention, fuse meta-paths
// under semantic attention, score through the MLP head.
//
// Targets are independent, so the forward runs parallel over them. The
// backward accumulates per-parameter gradients in fixed-size target blocks
// that are reduced in block order, which keeps results independent of the
// OpenMP thread count.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hidam/bcn.hpp"
#include "hidam/model.hpp"
#include "hidam/path_enum.hpp"
#include "hidam/scaler.hpp"

namespace hidam {

// Per (target, meta-path) activations kept for the backward pass.
struct PathTrace {
    std::vector<PathInstance> instances;
    std::vector<int> terminal_ent;            // entity index per instance
    std::vector<std::vector<int>> elem_ent;   // entity indices per instance element
    std::vector<double> scores;               // pre-softmax attention scores
    std::vector<double> alpha;
    std::vector<double> ctx;                  // (L+1)d weighted neighbor sum; empty when no instances
    std::vector<double> pre;                  // h_u + W_mix * ctx
    std::vector<double> phi;                  // activation of pre
    std::vector<double> z;                    // L2-normalized output
    double phi_norm = 0.0;                    // unclamped ||phi||
};

struct TargetTrace {
    std::uint32_t node = 0;
    int self_ent = -1;
    std::vector<PathTrace> paths;
    std::vector<double> sem_t;       // tanh outputs, paths x sdim flattened
    std::vector<double> sem_scores;
    std::vector<double> beta;
    std::vector<double> q;
    std::vector<double> mlp_pre;
    std::vector<double> mlp_act;
    double logit = 0.0;
    double yhat = 0.0;
};

struct ForwardTrace {
    std::vector<std::uint64_t> ent_keys;
    std::vector<std::vector<double>> ent_x;   // scaled inputs; empty for embedded links
    Matrix ent_h;                             // entity count x d
    std::vector<TargetTrace> targets;
    std::vector<double> scores;               // one default probability per target
    std::uint64_t seed = 0;
};

// Entity keys pack (is_link, type, row) so nodes and links share one table.
std::uint64_t entity_key(bool is_link, std::size_t type, std::uint32_t row);

// Sampling seed for one (target, meta-path) slot; depends only on the node
// and path so batch composition does not affect per-node scores.
std::uint64_t instance_seed(std::uint64_t seed, std::uint32_t node, std::size_t path_index);

ForwardTrace forward_batch(const Bcn& g, const FeatureScaler& scaler, const ModelParams& params,
                           const ModelConfig& cfg, const std::vector<std::uint32_t>& targets,
                           std::uint64_t seed);

// Summed binary cross-entropy; probabilities clamped to [1e-12, 1 - 1e-12]
// before the logs. pos_weight scales the positive-class terms.
double bce_loss_sum(const std::vector<double>& yhat, const std::vector<std::uint8_t>& labels,
                    double pos_weight = 1.0);

// Accumulates dLoss/dParam for the summed BCE into params. Grads are zeroed
// first; parameters the batch never touches end up with zero grad.
void backward_batch(const Bcn& g, const FeatureScaler& scaler, ModelParams& params,
                    const ModelConfig& cfg, const ForwardTrace& trace,
                    const std::vector<std::uint8_t>& labels, double pos_weight = 1.0);

struct PathExplanation {
    std::string metapath;
    double beta = 0.0;
    std::vector<std::pair<std::uint32_t, double>> top_instances;  // (terminal row, alpha)
};

// Semantic weights and the top-k path instances by attention for one node.
std::vector<PathExplanation> explain_node(const Bcn& g, const FeatureScaler& scaler,
                                          const ModelParams& params, const ModelConfig& cfg,
                                          std::uint32_t u, std::size_t k, std::uint64_t seed);

}  // namespace hidam
