#pragma once
// Synthetic Banking Company Network generator. Produces schema-conformant
// graphs with configurable structure, attribute missingness and a planted
// default-contagion signal along chosen views, so every experiment runs
// without proprietary data.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hidam/bcn.hpp"
#include "hidam/graph_stats.hpp"
#include "hidam/schema.hpp"
#include "hidam/train.hpp"

namespace hidam {

struct SynthConfig {
    std::size_t companies = 1000;
    std::size_t persons = 400;
    std::size_t industries = 8;

    std::size_t company_attrs = 16;
    std::size_t person_attrs = 4;
    std::size_t industry_attrs = 6;
    std::size_t transfer_attrs = 3;
    std::size_t updown_attrs = 2;
    std::size_t control_attrs = 2;
    std::size_t invest_attrs = 2;

    double transfer_mean_out = 2.0;    // Poisson mean; targets drawn toward hubs
    double transfer_hub_sigma = 1.2;   // log-normal spread of hub weights
    double invest_mean_out = 0.5;
    double updown_mean_out = 2.0;
    double control_skew = 1.0;         // person weight spread; >0 lets one person control several

    double gamma_fund = 0.0;
    double gamma_equity = 0.0;
    double gamma_industry = 0.0;

    double base_rate = 0.025;
    double noise_std = 0.5;            // idiosyncratic risk not visible in attributes

    // Feature sets over company attribute columns with per-set missing-rate
    // targets; columns are split contiguously across the sets.
    std::vector<std::pair<std::string, double>> missing_targets = {
        {"profile", 0.10}, {"credit", 0.30}, {"solvency", 0.55}, {"operation", 0.20}};

    std::uint64_t seed = 1;

    void validate() const;
};

struct SynthDataset {
    Bcn graph;
    LabeledSet labels;                  // every company, with timestamps
    std::vector<double> latent_risk;    // ground truth per company row
    std::vector<FeatureSet> feature_sets;
    std::vector<MetaPathSpec> metapaths;
};

SynthDataset generate(const SynthConfig& cfg);

struct ViewLift {
    std::string view;
    bool lift_defined = false;
    double lift_pct = 0.0;       // default proportion lift, with vs without default neighbors
    double rate_with = 0.0;      // default rate among companies with a default neighbor
    double rate_without = 0.0;
    std::size_t n_with = 0;
    std::size_t n_without = 0;
    bool share_defined = false;
    double default_share = 0.0;  // of default companies with neighbors, share having default neighbors
};

// The two group statistics per view: default-proportion lift between
// companies with and without default meta-path neighbors, and the share of
// default companies whose neighbors include another default.
std::vector<ViewLift> measure_lift(const Bcn& g, const LabeledSet& labels,
                                   const std::vector<MetaPathSpec>& specs);

}  // namespace hidam
