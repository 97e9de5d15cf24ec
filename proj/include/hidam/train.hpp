#pragma once
// Dataset splitting, the epoch loop with early stopping, and evaluation.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hidam/bcn.hpp"
#include "hidam/forward.hpp"
#include "hidam/model.hpp"
#include "hidam/scaler.hpp"

namespace hidam {

struct LabeledExample {
    std::string id;
    std::uint32_t row = 0;  // company row in the graph
    std::uint8_t label = 0;
    std::optional<double> timestamp;
};

struct LabeledSet {
    std::vector<LabeledExample> items;

    bool has_timestamps() const;
    double positive_rate() const;
};

struct TrainConfig {
    std::size_t batch_size = 512;
    double lr = 1e-3;
    double weight_decay = 0.01;
    std::size_t patience = 50;       // early-stop epochs without improvement
    std::size_t max_epochs = 200;
    std::uint64_t seed = 42;
    double val_fraction = 0.2;
    double pos_weight = 1.0;         // optional positive-class weight, off by default

    void validate() const;
};

// Temporal split when every item has a timestamp (earliest (1-f) fraction
// trains), else a seeded stratified random split. A side with zero positives
// is recorded as a warning, not an error.
std::pair<LabeledSet, LabeledSet> split(const LabeledSet& set, double val_fraction,
                                        std::uint64_t seed,
                                        std::vector<std::string>* warnings = nullptr);

struct EpochStats {
    std::size_t epoch = 0;
    double mean_loss = 0.0;
    double val_auc = 0.0;
    double val_ks = 0.0;
};

struct MetricsReport {
    double best_val_auc = 0.0;
    double best_val_ks = 0.0;
    std::size_t best_epoch = 0;
    double positive_rate = 0.0;
    std::size_t sample_count = 0;
    std::vector<EpochStats> history;
};

struct TrainResult {
    ModelParams params;      // best-validation-AUC snapshot
    FeatureScaler scaler;
    MetricsReport report;
};

// Evaluation always samples neighbors with the master seed, so scores are
// reproducible from a saved model regardless of the epoch that produced it.
std::pair<double, double> evaluate(const Bcn& g, const FeatureScaler& scaler,
                                   const ModelParams& params, const ModelConfig& cfg,
                                   const LabeledSet& set, std::uint64_t seed,
                                   std::vector<double>* scores_out = nullptr);

TrainResult train(const Bcn& g, const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                  const LabeledSet& labeled, std::vector<std::string>* warnings = nullptr);

}  // namespace hidam
