#pragma once
// Delimited-text readers and writers for node/link/label tables and the
// schema and meta-path configuration formats. Lines starting with '#' are
// comments; every writer emits a "# seed=<n>" header so outputs are
// self-describing. Empty fields are missing values.

#include <cstdint>
#include <string>
#include <vector>

#include "hidam/bcn.hpp"
#include "hidam/schema.hpp"
#include "hidam/train.hpp"

namespace hidam {

// Generic delimited file: comment lines, a header row, then data rows.
struct DelimitedFile {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

DelimitedFile read_delimited(const std::string& path);
std::vector<std::string> split_fields(const std::string& line);

// Node tables: header "id,<attr...>".
std::pair<std::vector<NodeRow>, std::vector<std::string>> read_node_table(
    const std::string& path, std::size_t expected_attrs, const std::string& type_name);
void write_node_table(const std::string& path, const NodeTable& table, std::uint64_t seed);

// Link tables: header "src,dst,<attr...>".
std::pair<std::vector<LinkRow>, std::vector<std::string>> read_link_table(
    const std::string& path, std::size_t expected_attrs, const std::string& type_name);
void write_link_table(const std::string& path, const Bcn& g, std::size_t link_type,
                      std::uint64_t seed);

// Labels: header "id,label[,timestamp]".
LabeledSet read_labels(const std::string& path);
void write_labels(const std::string& path, const LabeledSet& labels, std::uint64_t seed);

// Schema file: "target <type>", "node <name> <attrs>",
// "link <name> <src> <dst> <attrs> <directed|undirected>".
Schema read_schema_file(const std::string& path);
void write_schema_file(const std::string& path, const Schema& schema, std::uint64_t seed);

// Meta-path file: one per line, "<name> <view> <link:fwd|rev>...".
std::vector<MetaPathSpec> read_metapath_file(const std::string& path, const Schema& schema);
void write_metapath_file(const std::string& path, const Schema& schema,
                         const std::vector<MetaPathSpec>& specs, std::uint64_t seed);

std::string format_double(double v);

}  // namespace hidam
