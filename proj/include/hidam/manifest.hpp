#pragma once
// Dataset manifest: one JSON file tying together schema, tables, labels,
// meta-path configuration and feature-set column groupings.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hidam/bcn.hpp"
#include "hidam/graph_stats.hpp"
#include "hidam/schema.hpp"
#include "hidam/train.hpp"

namespace hidam {

struct DatasetManifest {
    std::string schema_path;
    std::vector<std::pair<std::string, std::string>> node_tables;  // type name -> path
    std::vector<std::pair<std::string, std::string>> link_tables;
    std::string labels_path;  // may be empty (prediction-only graphs)
    std::string metapaths_path;
    std::vector<std::pair<std::string, std::vector<std::string>>> feature_sets;  // name -> columns
    std::uint64_t seed = 0;
    std::string base_dir;  // directory of the manifest file, set on load

    std::string resolve(const std::string& path) const;
};

DatasetManifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const DatasetManifest& manifest);

struct Dataset {
    Bcn graph;
    LabeledSet labels;
    std::vector<FeatureSet> feature_sets;
    std::vector<MetaPathSpec> metapaths;
};

// Loads and validates everything the manifest references. Label ids must
// resolve to target-type rows; feature-set columns must name company
// attribute columns.
Dataset load_dataset(const DatasetManifest& manifest);

}  // namespace hidam
