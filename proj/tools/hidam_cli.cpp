// hidam: heterogeneous-graph default prediction toolkit.
// Subcommands: stats, synth, train, predict, explain, sweep.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hidam/commands.hpp"

namespace {

// Target ids come either from repeated --id flags or one id per line in a file.
std::vector<std::string> gather_targets(const std::vector<std::string>& ids,
                                        const std::string& file) {
    std::vector<std::string> out = ids;
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw std::runtime_error("cannot open target file '" + file + "'");
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty() && line[0] != '#') out.push_back(line);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"HIDAM default-prediction toolkit over banking company networks"};
    app.require_subcommand(1);

    std::string manifest, out, checkpoint, history, targets_file;
    std::vector<std::string> target_ids;
    std::uint64_t seed = 42;
    bool seed_given = false;

    hidam::ModelConfig model_cfg;
    hidam::TrainConfig train_cfg;
    hidam::SynthConfig synth_cfg;

    auto add_model_flags = [&](CLI::App* cmd) {
        cmd->add_option("--dim", model_cfg.dim, "embedding dimension");
        cmd->add_option("--hidden", model_cfg.mlp_hidden, "MLP hidden dimension");
        cmd->add_option("--cap", model_cfg.neighbor_cap, "sampled instances per meta-path");
        cmd->add_option("--semantic-dim", model_cfg.semantic_dim,
                        "semantic attention dimension (0 disables the projection)");
        cmd->add_option("--attn-slope", model_cfg.attn_slope, "LeakyReLU slope in scores");
        cmd->add_option("--imputation", model_cfg.imputation, "standardize or zero");
    };
    auto add_train_flags = [&](CLI::App* cmd) {
        cmd->add_option("--batch", train_cfg.batch_size, "batch size");
        cmd->add_option("--lr", train_cfg.lr, "learning rate");
        cmd->add_option("--wd", train_cfg.weight_decay, "weight decay");
        cmd->add_option("--patience", train_cfg.patience, "early-stop patience in epochs");
        cmd->add_option("--max-epochs", train_cfg.max_epochs, "epoch limit");
        cmd->add_option("--val-fraction", train_cfg.val_fraction, "validation fraction");
        cmd->add_option("--pos-weight", train_cfg.pos_weight, "positive-class loss weight");
    };

    CLI::App* stats = app.add_subcommand("stats", "coverage and missing-rate reports");
    stats->add_option("--manifest", manifest, "dataset manifest")->required();
    stats->add_option("--out", out, "output prefix")->required();

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--out", out, "output directory")->required();
    synth->add_option("--companies", synth_cfg.companies, "company count");
    synth->add_option("--persons", synth_cfg.persons, "person count");
    synth->add_option("--industries", synth_cfg.industries, "industry count");
    synth->add_option("--company-attrs", synth_cfg.company_attrs, "company attribute count");
    synth->add_option("--gamma-fund", synth_cfg.gamma_fund, "fund-view contagion strength");
    synth->add_option("--gamma-equity", synth_cfg.gamma_equity, "equity-view contagion strength");
    synth->add_option("--gamma-industry", synth_cfg.gamma_industry,
                      "industry-view contagion strength");
    synth->add_option("--base-rate", synth_cfg.base_rate, "default rate to calibrate to");
    synth->add_option("--noise-std", synth_cfg.noise_std, "idiosyncratic risk noise");
    synth->add_option("--transfer-mean-out", synth_cfg.transfer_mean_out,
                      "mean transfer out-degree");
    synth->add_option("--invest-mean-out", synth_cfg.invest_mean_out, "mean invest out-degree");

    CLI::App* train = app.add_subcommand("train", "train a model from a manifest");
    train->add_option("--manifest", manifest, "dataset manifest")->required();
    train->add_option("--out", out, "checkpoint output path")->required();
    train->add_option("--history", history, "epoch history path (default <out>.history.csv)");
    add_model_flags(train);
    add_train_flags(train);

    CLI::App* predict = app.add_subcommand("predict", "score companies with a saved model");
    predict->add_option("--checkpoint", checkpoint, "model checkpoint")->required();
    predict->add_option("--manifest", manifest, "dataset manifest")->required();
    predict->add_option("--out", out, "scores output path")->required();
    predict->add_option("--id", target_ids, "target company id (repeatable)");
    predict->add_option("--targets", targets_file, "file with one target id per line");

    std::size_t top_k = 5;
    CLI::App* explain = app.add_subcommand("explain", "attention report for target companies");
    explain->add_option("--checkpoint", checkpoint, "model checkpoint")->required();
    explain->add_option("--manifest", manifest, "dataset manifest")->required();
    explain->add_option("--out", out, "output prefix")->required();
    explain->add_option("--id", target_ids, "target company id (repeatable)");
    explain->add_option("--targets", targets_file, "file with one target id per line");
    explain->add_option("--top-k", top_k, "instances reported per meta-path");

    std::vector<std::size_t> sweep_dims, sweep_sdims;
    CLI::App* sweep = app.add_subcommand("sweep", "train/eval over a parameter grid");
    sweep->add_option("--manifest", manifest, "dataset manifest")->required();
    sweep->add_option("--out", out, "metric table output path")->required();
    sweep->add_option("--dims", sweep_dims, "embedding dimensions to sweep");
    sweep->add_option("--semantic-dims", sweep_sdims, "semantic attention dimensions to sweep");
    add_model_flags(sweep);
    add_train_flags(sweep);

    for (CLI::App* cmd : {stats, synth, train, predict, explain, sweep})
        cmd->add_option("--seed", seed, "seed")->each([&](const std::string&) {
            seed_given = true;
        });

    CLI11_PARSE(app, argc, argv);

    try {
        if (stats->parsed()) return hidam::cmd_stats(manifest, out);
        if (synth->parsed()) {
            if (seed_given) synth_cfg.seed = seed;
            return hidam::cmd_synth(synth_cfg, out);
        }
        if (train->parsed()) {
            if (seed_given) train_cfg.seed = seed;
            return hidam::cmd_train(manifest, model_cfg, train_cfg, out, history);
        }
        if (predict->parsed()) {
            std::optional<std::uint64_t> s;
            if (seed_given) s = seed;
            return hidam::cmd_predict(checkpoint, manifest,
                                      gather_targets(target_ids, targets_file), out, s);
        }
        if (explain->parsed()) {
            std::optional<std::uint64_t> s;
            if (seed_given) s = seed;
            return hidam::cmd_explain(checkpoint, manifest,
                                      gather_targets(target_ids, targets_file), top_k, out, s);
        }
        if (sweep->parsed()) {
            if (seed_given) train_cfg.seed = seed;
            if (sweep_dims.empty() && sweep_sdims.empty())
                throw std::runtime_error("sweep: give --dims and/or --semantic-dims");
            return hidam::cmd_sweep(manifest, model_cfg, train_cfg, sweep_dims, sweep_sdims, out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
