#pragma once
// Binary model checkpoints.
//
// Layout: magic "HIDM" | version (u32 LE) | config length (u32 LE) + UTF-8
// config JSON | tensor count (u32 LE) | per tensor: name length (u32 LE) +
// name bytes, rank (u32 LE), dims (u32 LE each), payload of 8-byte
// little-endian floats. Round trips are bit-exact.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hidam/matrix.hpp"
#include "hidam/model.hpp"
#include "hidam/scaler.hpp"
#include "hidam/schema.hpp"

namespace hidam {

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::string& path, const std::string& config_json,
                     const std::vector<std::pair<std::string, const Matrix*>>& tensors);

struct RawCheckpoint {
    std::string config_json;
    std::vector<std::pair<std::string, Matrix>> tensors;

    const Matrix* find(const std::string& name) const;
};

RawCheckpoint load_checkpoint(const std::string& path);

// Everything needed to score a graph with a trained model.
struct ModelBundle {
    ModelConfig config;  // metapaths resolved against the schema at load
    ModelParams params;
    FeatureScaler scaler;
    std::uint64_t train_seed = 0;
    double best_val_auc = 0.0;
    double best_val_ks = 0.0;
    std::size_t best_epoch = 0;
};

void save_model(const std::string& path, const Schema& schema, const ModelBundle& bundle);

// Rebuilds the parameter set against `schema`; every tensor the layout
// expects must be present with matching shape.
ModelBundle load_model(const std::string& path, const Schema& schema);

}  // namespace hidam
