#pragma once
// Per-column standardization with zero-fill of missing values, so a missing
// attribute sits at the column mean. Company statistics are fit on the
// training companies only; other entity types use all rows.

#include <cstdint>
#include <string>
#include <vector>

#include "hidam/bcn.hpp"

namespace hidam {

struct FeatureScaler {
    // "standardize": (x - mean) * inv_std then zero-fill.
    // "zero": plain zero-fill of missing values, attributes untouched.
    std::string policy = "standardize";
    std::vector<std::vector<double>> node_mean, node_inv_std;  // per node type
    std::vector<std::vector<double>> link_mean, link_inv_std;  // per link type

    static FeatureScaler fit(const Bcn& g, const std::vector<std::uint32_t>& train_companies,
                             const std::string& policy = "standardize");

    void apply_node(const Bcn& g, std::size_t type, std::uint32_t row, double* out) const;
    void apply_link(const Bcn& g, std::size_t type, std::uint32_t row, double* out) const;
};

}  // namespace hidam
