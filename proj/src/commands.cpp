#include "hidam/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "hidam/checkpoint.hpp"
#include "hidam/forward.hpp"
#include "hidam/manifest.hpp"
#include "hidam/metrics.hpp"
#include "hidam/table_io.hpp"

namespace hidam {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

// View tag of a link type, taken from the first meta-path that traverses it.
std::string view_of_link(const std::vector<MetaPathSpec>& specs, std::size_t link_type) {
    for (const MetaPathSpec& spec : specs)
        for (const MetaPathStep& step : spec.steps)
            if (step.link_type == link_type) return spec.view;
    return "-";
}

struct ResolvedTargets {
    std::vector<std::uint32_t> rows;
    std::vector<std::string> unknown;
};

ResolvedTargets resolve_targets(const Bcn& g, const std::vector<std::string>& ids) {
    ResolvedTargets rt;
    if (ids.empty()) {
        for (std::uint32_t r = 0; r < g.companies().count(); ++r) rt.rows.push_back(r);
        return rt;
    }
    for (const std::string& id : ids) {
        const std::int64_t row = g.find_node(g.company_type(), id);
        if (row < 0)
            rt.unknown.push_back(id);
        else
            rt.rows.push_back(static_cast<std::uint32_t>(row));
    }
    return rt;
}

}  // namespace

int cmd_stats(const std::string& manifest_path, const std::string& out_prefix) {
    const DatasetManifest manifest = read_manifest(manifest_path);
    const Dataset ds = load_dataset(manifest);

    {
        std::ofstream out = open_out(out_prefix + ".coverage.csv");
        out << "# seed=" << manifest.seed << "\n";
        out << "relation,view,coverage\n";
        for (std::size_t t = 0; t < ds.graph.link_type_count(); ++t) {
            const std::string& name = ds.graph.schema().link_types[t].name;
            out << name << ',' << view_of_link(ds.metapaths, t) << ','
                << format_double(coverage_stats(ds.graph, name)) << "\n";
        }
    }
    {
        const MissingRateTable table =
            missing_rate_stats(ds.graph, ds.feature_sets, ds.metapaths);
        std::ofstream out = open_out(out_prefix + ".missing.csv");
        out << "# seed=" << manifest.seed << "\n";
        out << "feature_set,self";
        for (const std::string& v : table.views) out << ',' << v;
        out << ",all\n";
        for (const MissingRateRow& row : table.rows) {
            out << row.feature_set << ',' << format_double(row.self_rate);
            for (double v : row.by_view) out << ',' << format_double(v);
            out << ',' << format_double(row.all_views) << "\n";
        }
    }
    std::cout << "stats written to " << out_prefix << ".coverage.csv and " << out_prefix
              << ".missing.csv\n";
    return 0;
}

int cmd_synth(const SynthConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const SynthDataset ds = generate(cfg);
    const Schema& schema = ds.graph.schema();

    write_schema_file(out_dir + "/schema.txt", schema, cfg.seed);
    write_metapath_file(out_dir + "/metapaths.txt", schema, ds.metapaths, cfg.seed);
    write_labels(out_dir + "/labels.csv", ds.labels, cfg.seed);

    DatasetManifest manifest;
    manifest.schema_path = "schema.txt";
    manifest.metapaths_path = "metapaths.txt";
    manifest.labels_path = "labels.csv";
    manifest.seed = cfg.seed;
    for (std::size_t t = 0; t < schema.node_types.size(); ++t) {
        const std::string file = "nodes_" + schema.node_types[t].name + ".csv";
        write_node_table(out_dir + "/" + file, ds.graph.nodes(t), cfg.seed);
        manifest.node_tables.emplace_back(schema.node_types[t].name, file);
    }
    for (std::size_t t = 0; t < schema.link_types.size(); ++t) {
        const std::string file = "links_" + schema.link_types[t].name + ".csv";
        write_link_table(out_dir + "/" + file, ds.graph, t, cfg.seed);
        manifest.link_tables.emplace_back(schema.link_types[t].name, file);
    }
    const NodeTable& companies = ds.graph.companies();
    for (const FeatureSet& fs : ds.feature_sets) {
        std::vector<std::string> cols;
        for (std::size_t c : fs.columns) cols.push_back(companies.attr_names[c]);
        manifest.feature_sets.emplace_back(fs.name, std::move(cols));
    }
    write_manifest(out_dir + "/manifest.json", manifest);

    // Analysis-only sidecar; deliberately not referenced by the manifest.
    {
        std::ofstream out = open_out(out_dir + "/ground_truth.csv");
        out << "# seed=" << cfg.seed << "\n";
        out << "id,latent_risk\n";
        for (std::uint32_t i = 0; i < companies.count(); ++i)
            out << companies.ids[i] << ',' << format_double(ds.latent_risk[i]) << "\n";
    }
    std::cout << "synthetic dataset written to " << out_dir << " (" << companies.count()
              << " companies, positive rate " << ds.labels.positive_rate() << ")\n";
    return 0;
}

int cmd_train(const std::string& manifest_path, ModelConfig model_cfg, TrainConfig train_cfg,
              const std::string& out_checkpoint, const std::string& history_path) {
    const DatasetManifest manifest = read_manifest(manifest_path);
    const Dataset ds = load_dataset(manifest);
    if (ds.labels.items.empty())
        throw std::runtime_error("train: manifest has no labels file");
    model_cfg.metapaths = ds.metapaths;
    model_cfg.validate();

    std::vector<std::string> warnings;
    const TrainResult result = train(ds.graph, model_cfg, train_cfg, ds.labels, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

    ModelBundle bundle;
    bundle.config = model_cfg;
    bundle.params = result.params;
    bundle.scaler = result.scaler;
    bundle.train_seed = train_cfg.seed;
    bundle.best_val_auc = result.report.best_val_auc;
    bundle.best_val_ks = result.report.best_val_ks;
    bundle.best_epoch = result.report.best_epoch;
    save_model(out_checkpoint, ds.graph.schema(), bundle);

    const std::string hist =
        history_path.empty() ? out_checkpoint + ".history.csv" : history_path;
    std::ofstream out = open_out(hist);
    out << "# seed=" << train_cfg.seed << "\n";
    out << "epoch,loss,val_auc,val_ks\n";
    for (const EpochStats& e : result.report.history)
        out << e.epoch << ',' << format_double(e.mean_loss) << ',' << format_double(e.val_auc)
            << ',' << format_double(e.val_ks) << "\n";

    std::cout << "best epoch " << result.report.best_epoch << ": val AUC "
              << result.report.best_val_auc << ", val KS " << result.report.best_val_ks
              << " (checkpoint " << out_checkpoint << ")\n";
    return 0;
}

int cmd_predict(const std::string& checkpoint_path, const std::string& manifest_path,
                const std::vector<std::string>& target_ids, const std::string& out_path,
                std::optional<std::uint64_t> seed_override) {
    const DatasetManifest manifest = read_manifest(manifest_path);
    const Dataset ds = load_dataset(manifest);
    const ModelBundle bundle = load_model(checkpoint_path, ds.graph.schema());
    const std::uint64_t seed = seed_override.value_or(bundle.train_seed);

    const ResolvedTargets targets = resolve_targets(ds.graph, target_ids);
    for (const std::string& id : targets.unknown)
        std::cerr << "predict: unknown company id '" << id << "' skipped\n";

    const ForwardTrace trace =
        forward_batch(ds.graph, bundle.scaler, bundle.params, bundle.config, targets.rows, seed);

    std::ofstream out = open_out(out_path);
    out << "# seed=" << seed << "\n";
    out << "id,score\n";
    const NodeTable& companies = ds.graph.companies();
    for (std::size_t i = 0; i < targets.rows.size(); ++i)
        out << companies.ids[targets.rows[i]] << ',' << format_double(trace.scores[i]) << "\n";
    std::cout << "scored " << targets.rows.size() << " companies into " << out_path << "\n";
    return targets.unknown.empty() ? 0 : 1;
}

int cmd_explain(const std::string& checkpoint_path, const std::string& manifest_path,
                const std::vector<std::string>& target_ids, std::size_t top_k,
                const std::string& out_prefix, std::optional<std::uint64_t> seed_override) {
    const DatasetManifest manifest = read_manifest(manifest_path);
    const Dataset ds = load_dataset(manifest);
    const ModelBundle bundle = load_model(checkpoint_path, ds.graph.schema());
    const std::uint64_t seed = seed_override.value_or(bundle.train_seed);

    const ResolvedTargets targets = resolve_targets(ds.graph, target_ids);
    for (const std::string& id : targets.unknown)
        std::cerr << "explain: unknown company id '" << id << "' skipped\n";

    std::ofstream beta_out = open_out(out_prefix + ".beta.csv");
    std::ofstream alpha_out = open_out(out_prefix + ".alpha.csv");
    beta_out << "# seed=" << seed << "\n";
    beta_out << "node_id,metapath,beta\n";
    alpha_out << "# seed=" << seed << "\n";
    alpha_out << "node_id,metapath,neighbor_id,alpha\n";

    const NodeTable& companies = ds.graph.companies();
    for (std::uint32_t row : targets.rows) {
        const auto report =
            explain_node(ds.graph, bundle.scaler, bundle.params, bundle.config, row, top_k, seed);
        for (const PathExplanation& ex : report) {
            beta_out << companies.ids[row] << ',' << ex.metapath << ','
                     << format_double(ex.beta) << "\n";
            for (const auto& [terminal, alpha] : ex.top_instances)
                alpha_out << companies.ids[row] << ',' << ex.metapath << ','
                          << companies.ids[terminal] << ',' << format_double(alpha) << "\n";
        }
    }
    std::cout << "explanations for " << targets.rows.size() << " companies written to "
              << out_prefix << ".beta.csv / .alpha.csv\n";
    return targets.unknown.empty() ? 0 : 1;
}

int cmd_sweep(const std::string& manifest_path, const ModelConfig& model_cfg,
              const TrainConfig& train_cfg, const std::vector<std::size_t>& dims,
              const std::vector<std::size_t>& semantic_dims, const std::string& out_path) {
    const DatasetManifest manifest = read_manifest(manifest_path);
    const Dataset ds = load_dataset(manifest);
    if (ds.labels.items.empty())
        throw std::runtime_error("sweep: manifest has no labels file");

    std::ofstream out = open_out(out_path);
    out << "# seed=" << train_cfg.seed << "\n";
    out << "param,value,auc,ks\n";
    auto run_one = [&](const std::string& param, std::size_t value, ModelConfig cfg) {
        cfg.metapaths = ds.metapaths;
        cfg.validate();
        const TrainResult result = train(ds.graph, cfg, train_cfg, ds.labels);
        out << param << ',' << value << ',' << format_double(result.report.best_val_auc) << ','
            << format_double(result.report.best_val_ks) << "\n";
        std::cout << param << '=' << value << ": val AUC " << result.report.best_val_auc
                  << ", val KS " << result.report.best_val_ks << "\n";
    };
    for (std::size_t dim : dims) {
        ModelConfig cfg = model_cfg;
        cfg.dim = dim;
        run_one("dim", dim, cfg);
    }
    for (std::size_t sdim : semantic_dims) {
        ModelConfig cfg = model_cfg;
        cfg.semantic_dim = sdim;
        run_one("semantic_dim", sdim, cfg);
    }
    return 0;
}

}  // namespace hidam
