#include "hidam/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "hidam/table_io.hpp"

namespace hidam {

using nlohmann::json;

std::string DatasetManifest::resolve(const std::string& path) const {
    if (path.empty() || path.front() == '/' || base_dir.empty()) return path;
    return base_dir + "/" + path;
}

DatasetManifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("manifest '" + path + "': " + e.what());
    }
    DatasetManifest m;
    const std::size_t slash = path.find_last_of('/');
    m.base_dir = slash == std::string::npos ? "." : path.substr(0, slash);
    try {
        m.schema_path = j.at("schema").get<std::string>();
        for (const auto& [key, value] : j.at("nodes").items())
            m.node_tables.emplace_back(key, value.get<std::string>());
        for (const auto& [key, value] : j.at("links").items())
            m.link_tables.emplace_back(key, value.get<std::string>());
        if (j.contains("labels")) m.labels_path = j.at("labels").get<std::string>();
        m.metapaths_path = j.at("metapaths").get<std::string>();
        if (j.contains("feature_sets"))
            for (const auto& [key, value] : j.at("feature_sets").items())
                m.feature_sets.emplace_back(key, value.get<std::vector<std::string>>());
        if (j.contains("seed")) m.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw std::runtime_error("manifest '" + path + "': " + e.what());
    }
    return m;
}

void write_manifest(const std::string& path, const DatasetManifest& manifest) {
    json j;
    j["schema"] = manifest.schema_path;
    j["nodes"] = json::object();
    for (const auto& [type, file] : manifest.node_tables) j["nodes"][type] = file;
    j["links"] = json::object();
    for (const auto& [type, file] : manifest.link_tables) j["links"][type] = file;
    if (!manifest.labels_path.empty()) j["labels"] = manifest.labels_path;
    j["metapaths"] = manifest.metapaths_path;
    if (!manifest.feature_sets.empty()) {
        j["feature_sets"] = json::object();
        for (const auto& [name, cols] : manifest.feature_sets) j["feature_sets"][name] = cols;
    }
    j["seed"] = manifest.seed;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest '" + path + "'");
    out << j.dump(2) << "\n";
}

Dataset load_dataset(const DatasetManifest& manifest) {
    const Schema schema = read_schema_file(manifest.resolve(manifest.schema_path));

    std::unordered_map<std::string, std::vector<NodeRow>> node_rows;
    std::unordered_map<std::string, std::vector<LinkRow>> link_rows;
    std::unordered_map<std::string, std::vector<std::string>> attr_names;
    for (const auto& [type, file] : manifest.node_tables) {
        const int t = schema.node_type_index(type);
        if (t < 0)
            throw std::runtime_error("manifest: node table for undeclared type '" + type + "'");
        auto [rows, names] = read_node_table(manifest.resolve(file),
                                             schema.node_types[t].attr_count, type);
        node_rows[type] = std::move(rows);
        attr_names["node:" + type] = std::move(names);
    }
    for (const auto& [type, file] : manifest.link_tables) {
        const int t = schema.link_type_index(type);
        if (t < 0)
            throw std::runtime_error("manifest: link table for undeclared type '" + type + "'");
        auto [rows, names] = read_link_table(manifest.resolve(file),
                                             schema.link_types[t].attr_count, type);
        link_rows[type] = std::move(rows);
        attr_names["link:" + type] = std::move(names);
    }

    Dataset ds;
    ds.graph = build_graph(schema, node_rows, link_rows, std::move(attr_names));
    ds.metapaths = read_metapath_file(manifest.resolve(manifest.metapaths_path), schema);

    if (!manifest.labels_path.empty()) {
        ds.labels = read_labels(manifest.resolve(manifest.labels_path));
        for (LabeledExample& e : ds.labels.items) {
            const std::int64_t row = ds.graph.find_node(ds.graph.company_type(), e.id);
            if (row < 0)
                throw std::runtime_error("labels: id '" + e.id + "' is not a " +
                                         schema.target_type + " node");
            e.row = static_cast<std::uint32_t>(row);
        }
    }

    const NodeTable& companies = ds.graph.companies();
    for (const auto& [name, cols] : manifest.feature_sets) {
        FeatureSet fs;
        fs.name = name;
        for (const std::string& col : cols) {
            const auto it =
                std::find(companies.attr_names.begin(), companies.attr_names.end(), col);
            if (it == companies.attr_names.end())
                throw std::runtime_error("manifest: feature set '" + name +
                                         "' references unknown company column '" + col + "'");
            fs.columns.push_back(
                static_cast<std::size_t>(it - companies.attr_names.begin()));
        }
        ds.feature_sets.push_back(std::move(fs));
    }
    return ds;
}

}  // namespace hidam
