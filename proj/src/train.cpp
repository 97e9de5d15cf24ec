#include "hidam/train.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hidam/metrics.hpp"
#include "hidam/rng.hpp"

namespace hidam {

bool LabeledSet::has_timestamps() const {
    if (items.empty()) return false;
    for (const LabeledExample& e : items)
        if (!e.timestamp.has_value()) return false;
    return true;
}

double LabeledSet::positive_rate() const {
    if (items.empty()) return 0.0;
    std::size_t pos = 0;
    for (const LabeledExample& e : items) pos += e.label;
    return static_cast<double>(pos) / static_cast<double>(items.size());
}

void TrainConfig::validate() const {
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (patience < 1) throw std::invalid_argument("TrainConfig: patience must be >= 1");
    if (val_fraction <= 0.0 || val_fraction >= 1.0)
        throw std::invalid_argument("TrainConfig: val_fraction must be in (0,1)");
    if (max_epochs < 1) throw std::invalid_argument("TrainConfig: max_epochs must be >= 1");
}

std::pair<LabeledSet, LabeledSet> split(const LabeledSet& set, double val_fraction,
                                        std::uint64_t seed, std::vector<std::string>* warnings) {
    if (set.items.empty()) throw std::invalid_argument("split: empty labeled set");
    if (val_fraction <= 0.0 || val_fraction >= 1.0)
        throw std::invalid_argument("split: fraction must be in (0,1)");
    const std::size_t n = set.items.size();
    LabeledSet train, val;

    if (set.has_timestamps()) {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (*set.items[a].timestamp != *set.items[b].timestamp)
                return *set.items[a].timestamp < *set.items[b].timestamp;
            return set.items[a].id < set.items[b].id;
        });
        std::size_t n_val = static_cast<std::size_t>(
            std::llround(static_cast<double>(n) * val_fraction));
        n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
        for (std::size_t i = 0; i < n; ++i)
            (i < n - n_val ? train : val).items.push_back(set.items[order[i]]);
    } else {
        // Stratified by label, seeded.
        Rng rng(seed_mix(seed, 0x73706c6974));  // "split"
        for (std::uint8_t cls : {std::uint8_t{0}, std::uint8_t{1}}) {
            std::vector<std::size_t> idx;
            for (std::size_t i = 0; i < n; ++i)
                if (set.items[i].label == cls) idx.push_back(i);
            if (idx.empty()) continue;
            rng.shuffle(idx);
            std::size_t n_val = static_cast<std::size_t>(
                std::llround(static_cast<double>(idx.size()) * val_fraction));
            n_val = std::min(n_val, idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i)
                (i < n_val ? val : train).items.push_back(set.items[idx[i]]);
        }
        if (train.items.empty() || val.items.empty())
            throw std::invalid_argument("split: a side came out empty; adjust the fraction");
    }

    if (warnings) {
        auto count_pos = [](const LabeledSet& s) {
            std::size_t p = 0;
            for (const LabeledExample& e : s.items) p += e.label;
            return p;
        };
        if (count_pos(train) == 0) warnings->push_back("split: training side has zero positives");
        if (count_pos(val) == 0) warnings->push_back("split: validation side has zero positives");
    }
    return {std::move(train), std::move(val)};
}

std::pair<double, double> evaluate(const Bcn& g, const FeatureScaler& scaler,
                                   const ModelParams& params, const ModelConfig& cfg,
                                   const LabeledSet& set, std::uint64_t seed,
                                   std::vector<double>* scores_out) {
    std::vector<std::uint32_t> rows;
    std::vector<std::uint8_t> labels;
    rows.reserve(set.items.size());
    for (const LabeledExample& e : set.items) {
        rows.push_back(e.row);
        labels.push_back(e.label);
    }
    const ForwardTrace trace = forward_batch(g, scaler, params, cfg, rows, seed);
    if (scores_out) *scores_out = trace.scores;
    return {auc(trace.scores, labels), ks(trace.scores, labels)};
}

TrainResult train(const Bcn& g, const ModelConfig& model_cfg, const TrainConfig& train_cfg,
                  const LabeledSet& labeled, std::vector<std::string>* warnings) {
    model_cfg.validate();
    train_cfg.validate();
    for (const LabeledExample& e : labeled.items)
        if (e.row >= g.companies().count())
            throw std::invalid_argument("train: labeled id '" + e.id +
                                        "' is not a company row in the graph");

    auto [train_set, val_set] = split(labeled, train_cfg.val_fraction, train_cfg.seed, warnings);
    {
        std::size_t val_pos = 0;
        for (const LabeledExample& e : val_set.items) val_pos += e.label;
        if (val_pos == 0 || val_pos == val_set.items.size())
            throw std::invalid_argument(
                "train: validation side is single-class, AUC-based model selection "
                "needs both labels");
    }

    std::vector<std::uint32_t> train_rows;
    for (const LabeledExample& e : train_set.items) train_rows.push_back(e.row);
    const FeatureScaler scaler = FeatureScaler::fit(g, train_rows, model_cfg.imputation);

    ModelParams params = ModelParams::init(g.schema(), model_cfg, train_cfg.seed);
    AdamState adam;
    adam.reset(params.params);

    TrainResult result;
    result.scaler = scaler;
    result.report.sample_count = labeled.items.size();
    result.report.positive_rate = labeled.positive_rate();

    ModelParams best = params;
    double best_auc = -1.0, best_ks = 0.0;
    std::size_t best_epoch = 0, since_best = 0;

    std::vector<std::size_t> order(train_set.items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 1; epoch <= train_cfg.max_epochs; ++epoch) {
        Rng shuffle_rng(seed_mix(train_cfg.seed, 0x65706f6368, epoch));  // "epoch"
        shuffle_rng.shuffle(order);
        // Neighbor sampling reseeded per epoch from the master seed.
        const std::uint64_t epoch_seed = seed_mix(train_cfg.seed, 0x73616d706c65, epoch);

        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += train_cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + train_cfg.batch_size);
            std::vector<std::uint32_t> rows;
            std::vector<std::uint8_t> labels;
            rows.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) {
                rows.push_back(train_set.items[order[i]].row);
                labels.push_back(train_set.items[order[i]].label);
            }
            const ForwardTrace trace =
                forward_batch(g, scaler, params, model_cfg, rows, epoch_seed);
            const double batch_loss =
                bce_loss_sum(trace.scores, labels, train_cfg.pos_weight);
            if (!std::isfinite(batch_loss))
                throw std::runtime_error("train: non-finite loss at epoch " +
                                         std::to_string(epoch) + ", batch starting at " +
                                         std::to_string(start));
            loss_sum += batch_loss;
            backward_batch(g, scaler, params, model_cfg, trace, labels, train_cfg.pos_weight);
            adam_step(params.params, adam, train_cfg.lr, train_cfg.weight_decay);
        }

        const auto [val_auc, val_ks] =
            evaluate(g, scaler, params, model_cfg, val_set, train_cfg.seed);
        result.report.history.push_back(
            {epoch, loss_sum / static_cast<double>(order.size()), val_auc, val_ks});

        if (val_auc > best_auc) {
            best_auc = val_auc;
            best_ks = val_ks;
            best_epoch = epoch;
            best = params;
            since_best = 0;
        } else {
            since_best += 1;
            if (since_best >= train_cfg.patience) break;
        }
    }

    result.params = std::move(best);
    result.report.best_val_auc = best_auc;
    result.report.best_val_ks = best_ks;
    result.report.best_epoch = best_epoch;
    return result;
}

}  // namespace hidam
