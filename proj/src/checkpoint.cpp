#include "hidam/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace hidam {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'H', 'I', 'D', 'M'};

void write_u32(std::ostream& out, std::uint32_t v) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(bytes, 4);
}

std::uint32_t read_u32(std::istream& in, const std::string& path) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    if (!in) throw std::runtime_error("checkpoint '" + path + "': truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
    return v;
}

void write_f64(std::ostream& out, double v) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, 8);
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(bytes, 8);
}

double read_f64(std::istream& in, const std::string& path) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    if (!in) throw std::runtime_error("checkpoint '" + path + "': truncated");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    double v = 0.0;
    std::memcpy(&v, &bits, 8);
    return v;
}

std::string metapath_step_text(const Schema& schema, const MetaPathStep& step) {
    return schema.link_types[step.link_type].name + (step.forward ? ":fwd" : ":rev");
}

}  // namespace

const Matrix* RawCheckpoint::find(const std::string& name) const {
    for (const auto& [n, m] : tensors)
        if (n == name) return &m;
    return nullptr;
}

void save_checkpoint(const std::string& path, const std::string& config_json,
                     const std::vector<std::pair<std::string, const Matrix*>>& tensors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint '" + path + "'");
    out.write(kMagic, 4);
    write_u32(out, kCheckpointVersion);
    write_u32(out, static_cast<std::uint32_t>(config_json.size()));
    out.write(config_json.data(), static_cast<std::streamsize>(config_json.size()));
    write_u32(out, static_cast<std::uint32_t>(tensors.size()));
    for (const auto& [name, m] : tensors) {
        write_u32(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_u32(out, 2);
        write_u32(out, static_cast<std::uint32_t>(m->rows));
        write_u32(out, static_cast<std::uint32_t>(m->cols));
        for (double v : m->data) write_f64(out, v);
    }
    if (!out) throw std::runtime_error("checkpoint '" + path + "': write failed");
}

RawCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint '" + path + "'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("checkpoint '" + path + "': bad magic, not a model file");
    const std::uint32_t version = read_u32(in, path);
    if (version != kCheckpointVersion)
        throw std::runtime_error("checkpoint '" + path + "': format version " +
                                 std::to_string(version) + " unsupported, expected " +
                                 std::to_string(kCheckpointVersion));
    RawCheckpoint ck;
    const std::uint32_t config_len = read_u32(in, path);
    ck.config_json.resize(config_len);
    in.read(ck.config_json.data(), config_len);
    if (!in) throw std::runtime_error("checkpoint '" + path + "': truncated config");
    const std::uint32_t n_tensors = read_u32(in, path);
    for (std::uint32_t t = 0; t < n_tensors; ++t) {
        const std::uint32_t name_len = read_u32(in, path);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        const std::uint32_t rank = read_u32(in, path);
        if (rank != 2)
            throw std::runtime_error("checkpoint '" + path + "': tensor '" + name +
                                     "' has unsupported rank");
        const std::uint32_t rows = read_u32(in, path);
        const std::uint32_t cols = read_u32(in, path);
        Matrix m(rows, cols);
        for (double& v : m.data) v = read_f64(in, path);
        ck.tensors.emplace_back(std::move(name), std::move(m));
    }
    return ck;
}

void save_model(const std::string& path, const Schema& schema, const ModelBundle& bundle) {
    json j;
    j["dim"] = bundle.config.dim;
    j["mlp_hidden"] = bundle.config.mlp_hidden;
    j["neighbor_cap"] = bundle.config.neighbor_cap;
    j["attn_slope"] = bundle.config.attn_slope;
    j["semantic_dim"] = bundle.config.semantic_dim;
    j["imputation"] = bundle.config.imputation;
    j["metapaths"] = json::array();
    for (const MetaPathSpec& spec : bundle.config.metapaths) {
        json p;
        p["name"] = spec.name;
        p["view"] = spec.view;
        p["steps"] = json::array();
        for (const MetaPathStep& step : spec.steps)
            p["steps"].push_back(metapath_step_text(schema, step));
        j["metapaths"].push_back(std::move(p));
    }
    j["train_seed"] = bundle.train_seed;
    j["metrics"] = {{"best_val_auc", bundle.best_val_auc},
                    {"best_val_ks", bundle.best_val_ks},
                    {"best_epoch", bundle.best_epoch}};

    std::vector<std::pair<std::string, const Matrix*>> tensors;
    for (const Parameter& p : bundle.params.params) tensors.emplace_back(p.name, &p.value);

    // Scaler statistics ride along as named tensors. The reserve keeps the
    // pointers stored in `tensors` stable.
    std::vector<Matrix> scaler_mats;
    scaler_mats.reserve(2 * (schema.node_types.size() + schema.link_types.size()));
    auto add_stats = [&](const std::string& prefix, const std::vector<double>& mean,
                         const std::vector<double>& inv_std) {
        Matrix m(1, mean.size());
        m.data = mean;
        scaler_mats.push_back(std::move(m));
        Matrix s(1, inv_std.size());
        s.data = inv_std;
        scaler_mats.push_back(std::move(s));
        const std::size_t base = scaler_mats.size() - 2;
        tensors.emplace_back(prefix + "/mean", &scaler_mats[base]);
        tensors.emplace_back(prefix + "/inv_std", &scaler_mats[base + 1]);
    };
    for (std::size_t t = 0; t < schema.node_types.size(); ++t)
        add_stats("scaler/node/" + schema.node_types[t].name, bundle.scaler.node_mean[t],
                  bundle.scaler.node_inv_std[t]);
    for (std::size_t t = 0; t < schema.link_types.size(); ++t)
        add_stats("scaler/link/" + schema.link_types[t].name, bundle.scaler.link_mean[t],
                  bundle.scaler.link_inv_std[t]);

    save_checkpoint(path, j.dump(), tensors);
}

ModelBundle load_model(const std::string& path, const Schema& schema) {
    const RawCheckpoint ck = load_checkpoint(path);
    json j;
    try {
        j = json::parse(ck.config_json);
    } catch (const json::exception& e) {
        throw std::runtime_error("checkpoint '" + path + "': bad config block: " + e.what());
    }
    ModelBundle bundle;
    try {
        bundle.config.dim = j.at("dim").get<std::size_t>();
        bundle.config.mlp_hidden = j.at("mlp_hidden").get<std::size_t>();
        bundle.config.neighbor_cap = j.at("neighbor_cap").get<std::size_t>();
        bundle.config.attn_slope = j.at("attn_slope").get<double>();
        bundle.config.semantic_dim = j.at("semantic_dim").get<std::size_t>();
        bundle.config.imputation = j.at("imputation").get<std::string>();
        for (const json& p : j.at("metapaths")) {
            std::vector<std::pair<std::string, bool>> steps;
            for (const json& s : p.at("steps")) {
                const std::string text = s.get<std::string>();
                const std::size_t colon = text.find(':');
                steps.emplace_back(text.substr(0, colon), text.substr(colon + 1) == "fwd");
            }
            bundle.config.metapaths.push_back(make_metapath(
                schema, p.at("name").get<std::string>(), p.at("view").get<std::string>(), steps));
        }
        bundle.train_seed = j.at("train_seed").get<std::uint64_t>();
        bundle.best_val_auc = j.at("metrics").at("best_val_auc").get<double>();
        bundle.best_val_ks = j.at("metrics").at("best_val_ks").get<double>();
        bundle.best_epoch = j.at("metrics").at("best_epoch").get<std::size_t>();
    } catch (const json::exception& e) {
        throw std::runtime_error("checkpoint '" + path + "': config field missing: " + e.what());
    }

    bundle.params = ModelParams::init(schema, bundle.config, 0);
    for (Parameter& p : bundle.params.params) {
        const Matrix* m = ck.find(p.name);
        if (!m)
            throw std::runtime_error("checkpoint '" + path + "': tensor '" + p.name +
                                     "' missing");
        if (!m->same_shape(p.value))
            throw std::runtime_error("checkpoint '" + path + "': tensor '" + p.name +
                                     "' has shape " + std::to_string(m->rows) + "x" +
                                     std::to_string(m->cols) + ", expected " +
                                     std::to_string(p.value.rows) + "x" +
                                     std::to_string(p.value.cols));
        p.value = *m;
        p.grad.zero();
    }

    bundle.scaler.policy = bundle.config.imputation;
    bundle.scaler.node_mean.resize(schema.node_types.size());
    bundle.scaler.node_inv_std.resize(schema.node_types.size());
    bundle.scaler.link_mean.resize(schema.link_types.size());
    bundle.scaler.link_inv_std.resize(schema.link_types.size());
    auto read_stats = [&](const std::string& prefix, std::vector<double>& mean,
                          std::vector<double>& inv_std) {
        const Matrix* m = ck.find(prefix + "/mean");
        const Matrix* s = ck.find(prefix + "/inv_std");
        if (!m || !s)
            throw std::runtime_error("checkpoint '" + path + "': scaler tensors for '" + prefix +
                                     "' missing");
        mean = m->data;
        inv_std = s->data;
    };
    for (std::size_t t = 0; t < schema.node_types.size(); ++t)
        read_stats("scaler/node/" + schema.node_types[t].name, bundle.scaler.node_mean[t],
                   bundle.scaler.node_inv_std[t]);
    for (std::size_t t = 0; t < schema.link_types.size(); ++t)
        read_stats("scaler/link/" + schema.link_types[t].name, bundle.scaler.link_mean[t],
                   bundle.scaler.link_inv_std[t]);
    return bundle;
}

}  // namespace hidam
