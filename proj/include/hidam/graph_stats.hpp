#pragma once
// Exploratory graph statistics: relation coverage over target companies and
// attribute missing rates before/after meta-path neighbor fill.

#include <string>
#include <vector>

#include "hidam/bcn.hpp"
#include "hidam/path_enum.hpp"

namespace hidam {

// Named group of company attribute columns.
struct FeatureSet {
    std::string name;
    std::vector<std::size_t> columns;
};

// Fraction of company nodes incident to at least one link of the type.
// Throws when the graph has zero companies or the type is unknown.
double coverage_stats(const Bcn& g, const std::string& link_type);

struct MissingRateRow {
    std::string feature_set;
    double self_rate = 0.0;              // mean per-company fraction of masked values
    std::vector<double> by_view;         // after fill by each view's neighbors
    double all_views = 0.0;              // after fill by neighbors from every view
};

struct MissingRateTable {
    std::vector<std::string> views;      // column order for by_view
    std::vector<MissingRateRow> rows;
};

// An attribute counts as present when it is present on the company or on any
// meta-path neighbor in the view grouping. Neighbor sets are uncapped.
MissingRateTable missing_rate_stats(const Bcn& g, const std::vector<FeatureSet>& feature_sets,
                                    const std::vector<MetaPathSpec>& specs);

}  // namespace hidam
