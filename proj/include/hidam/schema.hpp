#pragma once
// Typed-graph schema and meta-path templates.
//
// A schema declares node types (name, attribute count) and link types
// (name, endpoints, attribute count, directed flag). One node type is the
// borrower/target type; meta-paths start and end there.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace hidam {

struct NodeTypeDef {
    std::string name;
    std::size_t attr_count = 0;
};

struct LinkTypeDef {
    std::string name;
    std::string src_type;
    std::string dst_type;
    std::size_t attr_count = 0;
    bool directed = true;
};

struct Schema {
    std::vector<NodeTypeDef> node_types;
    std::vector<LinkTypeDef> link_types;
    std::string target_type = "Company";

    int node_type_index(const std::string& name) const;
    int link_type_index(const std::string& name) const;
    int target_type_index() const { return node_type_index(target_type); }

    // Unique names, endpoints resolve, target type declared, undirected
    // link types have equal endpoint types. Throws on violation.
    void validate() const;
};

struct MetaPathStep {
    std::size_t link_type = 0;
    bool forward = true;
};

struct MetaPathSpec {
    std::string name;
    std::string view;  // fund / equity / industry grouping tag
    std::vector<MetaPathStep> steps;
    std::vector<std::size_t> node_seq;  // node type per position, steps.size() + 1 entries

    // Count of intermediate elements between the two end nodes:
    // alternating link, node, ..., link.
    std::size_t intermediate_length() const { return 2 * steps.size() - 1; }
};

// Builds and type-checks a meta-path: each step's entry node type must match
// the previous exit, and both ends must be the schema's target type.
// Steps are given as (link type name, forward flag).
MetaPathSpec make_metapath(const Schema& schema, const std::string& name,
                           const std::string& view,
                           const std::vector<std::pair<std::string, bool>>& steps);

// The Company/Person/Industry schema with the five relation types. Attribute
// counts are configurable; the default sizes are desk-scale.
Schema default_bcn_schema(std::size_t company_attrs = 16, std::size_t person_attrs = 4,
                          std::size_t industry_attrs = 6, std::size_t transfer_attrs = 3,
                          std::size_t updown_attrs = 2, std::size_t control_attrs = 2,
                          std::size_t invest_attrs = 2);

// The six-path catalog over fund/equity/industry views:
// CtC, CtCtC, CcPcC, CiC, CbIbC, CbIuIbC.
std::vector<MetaPathSpec> default_metapaths(const Schema& schema);

}  // namespace hidam
