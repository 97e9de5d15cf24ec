#include "hidam/table_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hidam {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& path, std::size_t line, const std::string& field) {
    double v = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        parse_fail(path, line, "expected a number, got '" + field + "'");
    return v;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

}  // namespace

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

DelimitedFile read_delimited(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    DelimitedFile file;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            file.comments.push_back(line);
            continue;
        }
        if (!have_header) {
            file.header = split_fields(line);
            have_header = true;
        } else {
            auto fields = split_fields(line);
            if (fields.size() != file.header.size())
                parse_fail(path, lineno,
                           "expected " + std::to_string(file.header.size()) + " fields, got " +
                               std::to_string(fields.size()));
            file.rows.push_back(std::move(fields));
        }
    }
    if (!have_header) parse_fail(path, lineno, "missing header row");
    return file;
}

std::pair<std::vector<NodeRow>, std::vector<std::string>> read_node_table(
    const std::string& path, std::size_t expected_attrs, const std::string& type_name) {
    const DelimitedFile file = read_delimited(path);
    if (file.header.empty() || file.header[0] != "id")
        throw std::runtime_error(path + ": node table header must start with 'id'");
    if (file.header.size() != expected_attrs + 1)
        throw std::runtime_error(path + ": node type '" + type_name + "' declares " +
                                 std::to_string(expected_attrs) + " attributes, header has " +
                                 std::to_string(file.header.size() - 1));
    std::vector<NodeRow> rows;
    rows.reserve(file.rows.size());
    for (std::size_t r = 0; r < file.rows.size(); ++r) {
        NodeRow row;
        row.id = file.rows[r][0];
        for (std::size_t c = 1; c < file.rows[r].size(); ++c) {
            const std::string& f = file.rows[r][c];
            if (f.empty())
                row.attrs.push_back(std::nullopt);
            else
                row.attrs.push_back(parse_number(path, r + 1, f));
        }
        rows.push_back(std::move(row));
    }
    return {std::move(rows), {file.header.begin() + 1, file.header.end()}};
}

void write_node_table(const std::string& path, const NodeTable& table, std::uint64_t seed) {
    std::ofstream out = open_out(path);
    out << "# seed=" << seed << "\n";
    out << "id";
    for (const std::string& name : table.attr_names) out << ',' << name;
    out << "\n";
    for (std::size_t r = 0; r < table.count(); ++r) {
        out << table.ids[r];
        for (std::size_t c = 0; c < table.attrs.cols; ++c) {
            out << ',';
            if (!table.is_missing(static_cast<std::uint32_t>(r), c))
                out << format_double(table.attrs.at(r, c));
        }
        out << "\n";
    }
}

std::pair<std::vector<LinkRow>, std::vector<std::string>> read_link_table(
    const std::string& path, std::size_t expected_attrs, const std::string& type_name) {
    const DelimitedFile file = read_delimited(path);
    if (file.header.size() < 2 || file.header[0] != "src" || file.header[1] != "dst")
        throw std::runtime_error(path + ": link table header must start with 'src,dst'");
    if (file.header.size() != expected_attrs + 2)
        throw std::runtime_error(path + ": link type '" + type_name + "' declares " +
                                 std::to_string(expected_attrs) + " attributes, header has " +
                                 std::to_string(file.header.size() - 2));
    std::vector<LinkRow> rows;
    rows.reserve(file.rows.size());
    for (std::size_t r = 0; r < file.rows.size(); ++r) {
        LinkRow row;
        row.src = file.rows[r][0];
        row.dst = file.rows[r][1];
        for (std::size_t c = 2; c < file.rows[r].size(); ++c) {
            const std::string& f = file.rows[r][c];
            if (f.empty())
                row.attrs.push_back(std::nullopt);
            else
                row.attrs.push_back(parse_number(path, r + 1, f));
        }
        rows.push_back(std::move(row));
    }
    return {std::move(rows), {file.header.begin() + 2, file.header.end()}};
}

void write_link_table(const std::string& path, const Bcn& g, std::size_t link_type,
                      std::uint64_t seed) {
    const LinkTable& table = g.links(link_type);
    const LinkTypeDef& def = g.schema().link_types[link_type];
    const NodeTable& src_table = g.nodes(g.schema().node_type_index(def.src_type));
    const NodeTable& dst_table = g.nodes(g.schema().node_type_index(def.dst_type));
    std::ofstream out = open_out(path);
    out << "# seed=" << seed << "\n";
    out << "src,dst";
    for (const std::string& name : table.attr_names) out << ',' << name;
    out << "\n";
    for (std::size_t r = 0; r < table.count(); ++r) {
        out << src_table.ids[table.src[r]] << ',' << dst_table.ids[table.dst[r]];
        for (std::size_t c = 0; c < table.attrs.cols; ++c) {
            out << ',';
            if (!table.is_missing(static_cast<std::uint32_t>(r), c))
                out << format_double(table.attrs.at(r, c));
        }
        out << "\n";
    }
}

LabeledSet read_labels(const std::string& path) {
    const DelimitedFile file = read_delimited(path);
    const bool with_ts = file.header.size() == 3 && file.header[2] == "timestamp";
    if (!(file.header.size() == 2 || with_ts) || file.header[0] != "id" ||
        file.header[1] != "label")
        throw std::runtime_error(path + ": labels header must be 'id,label[,timestamp]'");
    LabeledSet set;
    for (std::size_t r = 0; r < file.rows.size(); ++r) {
        LabeledExample e;
        e.id = file.rows[r][0];
        const double label = parse_number(path, r + 1, file.rows[r][1]);
        if (label != 0.0 && label != 1.0)
            parse_fail(path, r + 1, "label must be 0 or 1, got '" + file.rows[r][1] + "'");
        e.label = label != 0.0;
        if (with_ts && !file.rows[r][2].empty())
            e.timestamp = parse_number(path, r + 1, file.rows[r][2]);
        set.items.push_back(std::move(e));
    }
    return set;
}

void write_labels(const std::string& path, const LabeledSet& labels, std::uint64_t seed) {
    std::ofstream out = open_out(path);
    out << "# seed=" << seed << "\n";
    const bool with_ts = labels.has_timestamps();
    out << (with_ts ? "id,label,timestamp" : "id,label") << "\n";
    for (const LabeledExample& e : labels.items) {
        out << e.id << ',' << static_cast<int>(e.label);
        if (with_ts) out << ',' << format_double(*e.timestamp);
        out << "\n";
    }
}

Schema read_schema_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    Schema schema;
    schema.target_type.clear();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string kind;
        ss >> kind;
        if (kind == "target") {
            ss >> schema.target_type;
        } else if (kind == "node") {
            NodeTypeDef def;
            ss >> def.name >> def.attr_count;
            if (ss.fail()) parse_fail(path, lineno, "expected 'node <name> <attr_count>'");
            schema.node_types.push_back(std::move(def));
        } else if (kind == "link") {
            LinkTypeDef def;
            std::string direction;
            ss >> def.name >> def.src_type >> def.dst_type >> def.attr_count >> direction;
            if (ss.fail() || (direction != "directed" && direction != "undirected"))
                parse_fail(path, lineno,
                           "expected 'link <name> <src> <dst> <attr_count> <directed|undirected>'");
            def.directed = direction == "directed";
            schema.link_types.push_back(std::move(def));
        } else {
            parse_fail(path, lineno, "unknown schema entry '" + kind + "'");
        }
    }
    if (schema.target_type.empty()) schema.target_type = "Company";
    schema.validate();
    return schema;
}

void write_schema_file(const std::string& path, const Schema& schema, std::uint64_t seed) {
    std::ofstream out = open_out(path);
    out << "# seed=" << seed << "\n";
    out << "target " << schema.target_type << "\n";
    for (const NodeTypeDef& nt : schema.node_types)
        out << "node " << nt.name << ' ' << nt.attr_count << "\n";
    for (const LinkTypeDef& lt : schema.link_types)
        out << "link " << lt.name << ' ' << lt.src_type << ' ' << lt.dst_type << ' '
            << lt.attr_count << ' ' << (lt.directed ? "directed" : "undirected") << "\n";
}

std::vector<MetaPathSpec> read_metapath_file(const std::string& path, const Schema& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<MetaPathSpec> specs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string name, view, step;
        ss >> name >> view;
        if (ss.fail()) parse_fail(path, lineno, "expected '<name> <view> <steps...>'");
        std::vector<std::pair<std::string, bool>> steps;
        while (ss >> step) {
            const std::size_t colon = step.find(':');
            if (colon == std::string::npos)
                parse_fail(path, lineno, "step '" + step + "' must be '<link>:<fwd|rev>'");
            const std::string dir = step.substr(colon + 1);
            if (dir != "fwd" && dir != "rev")
                parse_fail(path, lineno, "step direction must be fwd or rev, got '" + dir + "'");
            steps.emplace_back(step.substr(0, colon), dir == "fwd");
        }
        try {
            specs.push_back(make_metapath(schema, name, view, steps));
        } catch (const std::exception& e) {
            parse_fail(path, lineno, e.what());
        }
    }
    if (specs.empty()) throw std::runtime_error(path + ": no meta-paths defined");
    return specs;
}

void write_metapath_file(const std::string& path, const Schema& schema,
                         const std::vector<MetaPathSpec>& specs, std::uint64_t seed) {
    std::ofstream out = open_out(path);
    out << "# seed=" << seed << "\n";
    out << "# <name> <view> <link:fwd|rev>...\n";
    for (const MetaPathSpec& spec : specs) {
        out << spec.name << ' ' << spec.view;
        for (const MetaPathStep& step : spec.steps)
            out << ' ' << schema.link_types[step.link_type].name << ':'
                << (step.forward ? "fwd" : "rev");
        out << "\n";
    }
}

}  // namespace hidam
