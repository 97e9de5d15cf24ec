#include "hidam/schema.hpp"

#include <stdexcept>
#include <unordered_set>

namespace hidam {

int Schema::node_type_index(const std::string& name) const {
    for (std::size_t i = 0; i < node_types.size(); ++i)
        if (node_types[i].name == name) return static_cast<int>(i);
    return -1;
}

int Schema::link_type_index(const std::string& name) const {
    for (std::size_t i = 0; i < link_types.size(); ++i)
        if (link_types[i].name == name) return static_cast<int>(i);
    return -1;
}

void Schema::validate() const {
    std::unordered_set<std::string> seen;
    for (const NodeTypeDef& nt : node_types) {
        if (!seen.insert(nt.name).second)
            throw std::invalid_argument("schema: duplicate node type '" + nt.name + "'");
    }
    seen.clear();
    for (const LinkTypeDef& lt : link_types) {
        if (!seen.insert(lt.name).second)
            throw std::invalid_argument("schema: duplicate link type '" + lt.name + "'");
        if (node_type_index(lt.src_type) < 0)
            throw std::invalid_argument("schema: link '" + lt.name +
                                        "' references unknown node type '" + lt.src_type + "'");
        if (node_type_index(lt.dst_type) < 0)
            throw std::invalid_argument("schema: link '" + lt.name +
                                        "' references unknown node type '" + lt.dst_type + "'");
        if (!lt.directed && lt.src_type != lt.dst_type)
            throw std::invalid_argument("schema: undirected link '" + lt.name +
                                        "' must join equal node types");
    }
    if (node_type_index(target_type) < 0)
        throw std::invalid_argument("schema: target node type '" + target_type +
                                    "' is not declared");
}

MetaPathSpec make_metapath(const Schema& schema, const std::string& name,
                           const std::string& view,
                           const std::vector<std::pair<std::string, bool>>& steps) {
    if (steps.empty()) throw std::invalid_argument("metapath '" + name + "': no steps");
    MetaPathSpec spec;
    spec.name = name;
    spec.view = view;
    const int target = schema.target_type_index();
    std::size_t cur = static_cast<std::size_t>(target);
    spec.node_seq.push_back(cur);
    for (const auto& [link_name, forward] : steps) {
        const int lt = schema.link_type_index(link_name);
        if (lt < 0)
            throw std::invalid_argument("metapath '" + name + "': unknown link type '" +
                                        link_name + "'");
        const LinkTypeDef& def = schema.link_types[static_cast<std::size_t>(lt)];
        const std::size_t from =
            static_cast<std::size_t>(schema.node_type_index(forward ? def.src_type : def.dst_type));
        const std::size_t to =
            static_cast<std::size_t>(schema.node_type_index(forward ? def.dst_type : def.src_type));
        if (from != cur)
            throw std::invalid_argument("metapath '" + name + "': step '" + link_name +
                                        "' does not continue from node type '" +
                                        schema.node_types[cur].name + "'");
        spec.steps.push_back({static_cast<std::size_t>(lt), forward});
        spec.node_seq.push_back(to);
        cur = to;
    }
    if (cur != static_cast<std::size_t>(target))
        throw std::invalid_argument("metapath '" + name + "': must end at node type '" +
                                    schema.target_type + "'");
    return spec;
}

Schema default_bcn_schema(std::size_t company_attrs, std::size_t person_attrs,
                          std::size_t industry_attrs, std::size_t transfer_attrs,
                          std::size_t updown_attrs, std::size_t control_attrs,
                          std::size_t invest_attrs) {
    Schema s;
    s.node_types = {{"Company", company_attrs}, {"Person", person_attrs},
                    {"Industry", industry_attrs}};
    s.link_types = {{"transfer", "Company", "Company", transfer_attrs, true},
                    {"belong", "Company", "Industry", 0, true},
                    {"updownstream", "Industry", "Industry", updown_attrs, true},
                    {"control", "Person", "Company", control_attrs, true},
                    {"invest", "Company", "Company", invest_attrs, true}};
    s.target_type = "Company";
    s.validate();
    return s;
}

std::vector<MetaPathSpec> default_metapaths(const Schema& schema) {
    return {
        make_metapath(schema, "CtC", "fund", {{"transfer", true}}),
        make_metapath(schema, "CtCtC", "fund", {{"transfer", true}, {"transfer", true}}),
        make_metapath(schema, "CcPcC", "equity", {{"control", false}, {"control", true}}),
        make_metapath(schema, "CiC", "equity", {{"invest", true}}),
        make_metapath(schema, "CbIbC", "industry", {{"belong", true}, {"belong", false}}),
        make_metapath(schema, "CbIuIbC", "industry",
                      {{"belong", true}, {"updownstream", true}, {"belong", false}}),
    };
}

}  // namespace hidam
