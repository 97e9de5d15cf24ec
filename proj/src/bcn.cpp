#include "hidam/bcn.hpp"

#include <stdexcept>

namespace hidam {

namespace {

void build_csr(std::size_t node_count, const std::vector<std::uint32_t>& key,
               std::vector<std::uint32_t>& offsets, std::vector<std::uint32_t>& out_links) {
    offsets.assign(node_count + 1, 0);
    for (std::uint32_t k : key) offsets[k + 1] += 1;
    for (std::size_t i = 1; i <= node_count; ++i) offsets[i] += offsets[i - 1];
    out_links.resize(key.size());
    std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::uint32_t link = 0; link < key.size(); ++link)
        out_links[cursor[key[link]]++] = link;
}

}  // namespace

std::size_t Bcn::total_nodes() const {
    std::size_t n = 0;
    for (const NodeTable& t : nodes_) n += t.count();
    return n;
}

std::size_t Bcn::total_links() const {
    std::size_t n = 0;
    for (const LinkTable& t : links_) n += t.count();
    return n;
}

std::int64_t Bcn::find_node(std::size_t type, const std::string& id) const {
    const auto& idx = nodes_[type].index;
    auto it = idx.find(id);
    return it == idx.end() ? -1 : static_cast<std::int64_t>(it->second);
}

Bcn build_graph(const Schema& schema,
                const std::unordered_map<std::string, std::vector<NodeRow>>& node_tables,
                const std::unordered_map<std::string, std::vector<LinkRow>>& link_tables,
                std::unordered_map<std::string, std::vector<std::string>> attr_names) {
    schema.validate();
    for (const auto& [name, rows] : node_tables)
        if (schema.node_type_index(name) < 0)
            throw std::invalid_argument("build_graph: unknown node type '" + name + "'");
    for (const auto& [name, rows] : link_tables)
        if (schema.link_type_index(name) < 0)
            throw std::invalid_argument("build_graph: unknown link type '" + name + "'");

    Bcn g;
    g.schema_ = schema;
    g.company_type_ = static_cast<std::size_t>(schema.target_type_index());

    g.nodes_.resize(schema.node_types.size());
    for (std::size_t t = 0; t < schema.node_types.size(); ++t) {
        const NodeTypeDef& def = schema.node_types[t];
        NodeTable& table = g.nodes_[t];
        auto it = node_tables.find(def.name);
        const std::vector<NodeRow> empty_nodes;
        const std::vector<NodeRow>& rows = it == node_tables.end() ? empty_nodes : it->second;
        table.attrs = Matrix(rows.size(), def.attr_count);
        table.missing.assign(rows.size() * def.attr_count, 0);
        table.ids.reserve(rows.size());
        auto names_it = attr_names.find("node:" + def.name);
        if (names_it != attr_names.end()) {
            if (names_it->second.size() != def.attr_count)
                throw std::invalid_argument("build_graph: node type '" + def.name +
                                            "' header has wrong attribute count");
            table.attr_names = std::move(names_it->second);
        } else {
            for (std::size_t c = 0; c < def.attr_count; ++c)
                table.attr_names.push_back("a" + std::to_string(c));
        }
        for (std::uint32_t r = 0; r < rows.size(); ++r) {
            const NodeRow& row = rows[r];
            if (!table.index.emplace(row.id, r).second)
                throw std::invalid_argument("build_graph: duplicate " + def.name + " id '" +
                                            row.id + "'");
            if (row.attrs.size() != def.attr_count)
                throw std::invalid_argument("build_graph: " + def.name + " '" + row.id + "' has " +
                                            std::to_string(row.attrs.size()) + " attributes, " +
                                            "schema declares " + std::to_string(def.attr_count));
            table.ids.push_back(row.id);
            for (std::size_t c = 0; c < def.attr_count; ++c) {
                if (row.attrs[c].has_value())
                    table.attrs.at(r, c) = *row.attrs[c];
                else
                    table.missing[r * def.attr_count + c] = 1;
            }
        }
    }

    g.links_.resize(schema.link_types.size());
    for (std::size_t t = 0; t < schema.link_types.size(); ++t) {
        const LinkTypeDef& def = schema.link_types[t];
        LinkTable& table = g.links_[t];
        auto it = link_tables.find(def.name);
        const std::vector<LinkRow> empty_links;
        const std::vector<LinkRow>& rows = it == link_tables.end() ? empty_links : it->second;
        const NodeTable& src_table = g.nodes_[schema.node_type_index(def.src_type)];
        const NodeTable& dst_table = g.nodes_[schema.node_type_index(def.dst_type)];
        table.attrs = Matrix(rows.size(), def.attr_count);
        table.missing.assign(rows.size() * def.attr_count, 0);
        auto names_it = attr_names.find("link:" + def.name);
        if (names_it != attr_names.end()) {
            if (names_it->second.size() != def.attr_count)
                throw std::invalid_argument("build_graph: link type '" + def.name +
                                            "' header has wrong attribute count");
            table.attr_names = std::move(names_it->second);
        } else {
            for (std::size_t c = 0; c < def.attr_count; ++c)
                table.attr_names.push_back("a" + std::to_string(c));
        }
        for (std::uint32_t r = 0; r < rows.size(); ++r) {
            const LinkRow& row = rows[r];
            auto s = src_table.index.find(row.src);
            if (s == src_table.index.end())
                throw std::invalid_argument("build_graph: " + def.name + " link references absent " +
                                            def.src_type + " id '" + row.src + "'");
            auto d = dst_table.index.find(row.dst);
            if (d == dst_table.index.end())
                throw std::invalid_argument("build_graph: " + def.name + " link references absent " +
                                            def.dst_type + " id '" + row.dst + "'");
            if (row.attrs.size() != def.attr_count)
                throw std::invalid_argument("build_graph: " + def.name + " link " +
                                            row.src + "->" + row.dst + " has " +
                                            std::to_string(row.attrs.size()) + " attributes, " +
                                            "schema declares " + std::to_string(def.attr_count));
            table.src.push_back(s->second);
            table.dst.push_back(d->second);
            for (std::size_t c = 0; c < def.attr_count; ++c) {
                if (row.attrs[c].has_value())
                    table.attrs.at(r, c) = *row.attrs[c];
                else
                    table.missing[r * def.attr_count + c] = 1;
            }
        }
        build_csr(src_table.count(), table.src, table.fwd_offsets, table.fwd_links);
        build_csr(dst_table.count(), table.dst, table.rev_offsets, table.rev_links);
    }
    return g;
}

}  // namespace hidam
