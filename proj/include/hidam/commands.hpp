#pragma once
// Command implementations behind the CLI subcommands. Returning the process
// exit code lets tests drive the exact pipelines the binary runs.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hidam/model.hpp"
#include "hidam/synthgen.hpp"
#include "hidam/train.hpp"

namespace hidam {

// Coverage and missing-rate reports; writes <out_prefix>.coverage.csv and
// <out_prefix>.missing.csv.
int cmd_stats(const std::string& manifest_path, const std::string& out_prefix);

// Generates a dataset and a ready-to-train manifest under out_dir. The
// ground-truth risk sidecar is written for analysis but never referenced by
// the manifest.
int cmd_synth(const SynthConfig& cfg, const std::string& out_dir);

// Trains on the manifest's labeled set; writes the best-model checkpoint and
// an epoch history file "<out>.history.csv" (or history_path when given).
int cmd_train(const std::string& manifest_path, ModelConfig model_cfg, TrainConfig train_cfg,
              const std::string& out_checkpoint, const std::string& history_path = "");

// Scores target ids (all companies when empty) with a saved model. Unknown
// ids are listed on stderr, skipped, and force a nonzero exit.
int cmd_predict(const std::string& checkpoint_path, const std::string& manifest_path,
                const std::vector<std::string>& target_ids, const std::string& out_path,
                std::optional<std::uint64_t> seed_override = std::nullopt);

// Semantic weights and top-k instance attention per target; writes
// <out_prefix>.beta.csv and <out_prefix>.alpha.csv.
int cmd_explain(const std::string& checkpoint_path, const std::string& manifest_path,
                const std::vector<std::string>& target_ids, std::size_t top_k,
                const std::string& out_prefix,
                std::optional<std::uint64_t> seed_override = std::nullopt);

// One train/eval cycle per grid setting with a shared seed; emits
// param,value,auc,ks rows.
int cmd_sweep(const std::string& manifest_path, const ModelConfig& model_cfg,
              const TrainConfig& train_cfg, const std::vector<std::size_t>& dims,
              const std::vector<std::size_t>& semantic_dims, const std::string& out_path);

}  // namespace hidam
