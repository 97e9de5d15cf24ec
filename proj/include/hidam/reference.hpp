#pragma once
// Straight-line serial reference for the model forward pass. Recomputes every
// projection on demand, no entity caching, no batching, no OpenMP. Kept as
// the comparison baseline for the batched kernels and for the benchmark.

#include <cstdint>
#include <vector>

#include "hidam/bcn.hpp"
#include "hidam/forward.hpp"
#include "hidam/model.hpp"
#include "hidam/scaler.hpp"

namespace hidam::ref {

// Default probability for one target company. Instance sampling matches
// forward_batch (same per-node seed derivation), the math is recomputed
// naively.
double score_node(const Bcn& g, const FeatureScaler& scaler, const ModelParams& params,
                  const ModelConfig& cfg, std::uint32_t u, std::uint64_t seed);

// Scores a whole batch one node at a time.
std::vector<double> score_batch(const Bcn& g, const FeatureScaler& scaler,
                                const ModelParams& params, const ModelConfig& cfg,
                                const std::vector<std::uint32_t>& targets, std::uint64_t seed);

}  // namespace hidam::ref
