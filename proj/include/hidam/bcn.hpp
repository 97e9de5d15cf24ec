#pragma once
// Immutable attributed typed graph. Built once by build_graph, then safely
// shared across concurrent readers.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hidam/matrix.hpp"
#include "hidam/schema.hpp"

namespace hidam {

struct NodeRow {
    std::string id;
    std::vector<std::optional<double>> attrs;  // nullopt = missing
};

struct LinkRow {
    std::string src;
    std::string dst;
    std::vector<std::optional<double>> attrs;
};

struct NodeTable {
    std::vector<std::string> ids;
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<std::string> attr_names;
    Matrix attrs;                      // ids.size() x attr_count
    std::vector<std::uint8_t> missing; // same shape, 1 = missing

    std::size_t count() const { return ids.size(); }
    bool is_missing(std::uint32_t row, std::size_t col) const {
        return missing[row * attrs.cols + col] != 0;
    }
};

struct LinkTable {
    std::vector<std::uint32_t> src;  // row indices into the source node table
    std::vector<std::uint32_t> dst;
    std::vector<std::string> attr_names;
    Matrix attrs;                      // link count x attr_count
    std::vector<std::uint8_t> missing;

    // CSR adjacency in both directions; values are link row indices.
    std::vector<std::uint32_t> fwd_offsets, fwd_links;  // keyed by src node
    std::vector<std::uint32_t> rev_offsets, rev_links;  // keyed by dst node

    std::size_t count() const { return src.size(); }
    bool is_missing(std::uint32_t row, std::size_t col) const {
        return missing[row * attrs.cols + col] != 0;
    }
};

class Bcn {
public:
    const Schema& schema() const { return schema_; }
    const NodeTable& nodes(std::size_t type) const { return nodes_[type]; }
    const LinkTable& links(std::size_t type) const { return links_[type]; }
    std::size_t node_type_count() const { return nodes_.size(); }
    std::size_t link_type_count() const { return links_.size(); }

    std::size_t company_type() const { return company_type_; }
    const NodeTable& companies() const { return nodes_[company_type_]; }

    std::size_t total_nodes() const;
    std::size_t total_links() const;

    // Resolve an external id within a node type; -1 if absent.
    std::int64_t find_node(std::size_t type, const std::string& id) const;

    friend Bcn build_graph(const Schema& schema,
                           const std::unordered_map<std::string, std::vector<NodeRow>>& node_tables,
                           const std::unordered_map<std::string, std::vector<LinkRow>>& link_tables,
                           std::unordered_map<std::string, std::vector<std::string>> attr_names);

private:
    Schema schema_;
    std::vector<NodeTable> nodes_;
    std::vector<LinkTable> links_;
    std::size_t company_type_ = 0;
};

// Validates tables against the schema and builds bidirectional adjacency.
// Unknown type names, duplicate ids, dangling endpoints and attribute arity
// mismatches abort with the offending record identified. attr_names may
// carry per-type column names keyed "node:<type>" / "link:<type>".
Bcn build_graph(const Schema& schema,
                const std::unordered_map<std::string, std::vector<NodeRow>>& node_tables,
                const std::unordered_map<std::string, std::vector<LinkRow>>& link_tables,
                std::unordered_map<std::string, std::vector<std::string>> attr_names = {});

}  // namespace hidam
