#include "hidam/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "hidam/path_enum.hpp"
#include "hidam/rng.hpp"

namespace hidam {

namespace {

std::size_t poisson(Rng& rng, double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    std::size_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= rng.uniform();
    } while (p > limit);
    return k - 1;
}

// Draw an index proportional to weights via the cumulative table.
std::size_t weighted_pick(Rng& rng, const std::vector<double>& cumulative) {
    const double x = rng.uniform() * cumulative.back();
    return static_cast<std::size_t>(
        std::lower_bound(cumulative.begin(), cumulative.end(), x) - cumulative.begin());
}

std::vector<std::optional<double>> normal_attrs(Rng& rng, std::size_t n) {
    std::vector<std::optional<double>> out(n);
    for (auto& v : out) v = rng.normal();
    return out;
}

}  // namespace

void SynthConfig::validate() const {
    if (companies < 1 || persons < 1 || industries < 1)
        throw std::invalid_argument("SynthConfig: counts must be >= 1");
    if (base_rate <= 0.0 || base_rate >= 1.0)
        throw std::invalid_argument("SynthConfig: base_rate must be in (0,1)");
    if (gamma_fund < 0 || gamma_equity < 0 || gamma_industry < 0)
        throw std::invalid_argument("SynthConfig: contagion strengths must be >= 0");
    for (const auto& [name, rate] : missing_targets)
        if (rate < 0.0 || rate > 1.0)
            throw std::invalid_argument("SynthConfig: missing-rate target for '" + name +
                                        "' outside [0,1]");
    if (company_attrs < missing_targets.size())
        throw std::invalid_argument("SynthConfig: fewer company attributes than feature sets");
    if (gamma_fund > 0 && transfer_mean_out <= 0.0)
        throw std::invalid_argument("SynthConfig: fund contagion requested with zero transfer density");
    if (gamma_equity > 0 && control_skew <= 0.0 && invest_mean_out <= 0.0)
        throw std::invalid_argument("SynthConfig: equity contagion requested with no equity links");
}

SynthDataset generate(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(seed_mix(cfg.seed, 0x73796e7468));  // "synth"

    const Schema schema =
        default_bcn_schema(cfg.company_attrs, cfg.person_attrs, cfg.industry_attrs,
                           cfg.transfer_attrs, cfg.updown_attrs, cfg.control_attrs,
                           cfg.invest_attrs);

    std::unordered_map<std::string, std::vector<NodeRow>> nodes;
    std::unordered_map<std::string, std::vector<LinkRow>> links;

    auto& industries = nodes["Industry"];
    for (std::size_t i = 0; i < cfg.industries; ++i)
        industries.push_back({"I" + std::to_string(i), normal_attrs(rng, cfg.industry_attrs)});
    auto& persons = nodes["Person"];
    for (std::size_t i = 0; i < cfg.persons; ++i)
        persons.push_back({"P" + std::to_string(i), normal_attrs(rng, cfg.person_attrs)});
    auto& companies = nodes["Company"];
    for (std::size_t i = 0; i < cfg.companies; ++i)
        companies.push_back({"C" + std::to_string(i), normal_attrs(rng, cfg.company_attrs)});

    // Industry chain: a few up/downstream partners per industry.
    auto& updown = links["updownstream"];
    for (std::size_t i = 0; i < cfg.industries; ++i) {
        const std::size_t deg = poisson(rng, cfg.updown_mean_out);
        for (std::size_t k = 0; k < deg && cfg.industries > 1; ++k) {
            std::size_t j = rng.below(cfg.industries - 1);
            if (j >= i) ++j;
            updown.push_back({"I" + std::to_string(i), "I" + std::to_string(j),
                              normal_attrs(rng, cfg.updown_attrs)});
        }
    }

    // One industry per company.
    auto& belong = links["belong"];
    std::vector<std::size_t> company_industry(cfg.companies);
    for (std::size_t i = 0; i < cfg.companies; ++i) {
        company_industry[i] = rng.below(cfg.industries);
        belong.push_back({"C" + std::to_string(i), "I" + std::to_string(company_industry[i]), {}});
    }

    // One controller per company; skewed person weights let one person
    // control several companies, as in the real coverage pattern.
    auto& control = links["control"];
    {
        std::vector<double> cum(cfg.persons);
        double acc = 0.0;
        for (std::size_t i = 0; i < cfg.persons; ++i) {
            acc += std::exp(cfg.control_skew * rng.normal());
            cum[i] = acc;
        }
        for (std::size_t i = 0; i < cfg.companies; ++i) {
            const std::size_t p = weighted_pick(rng, cum);
            control.push_back({"P" + std::to_string(p), "C" + std::to_string(i),
                               normal_attrs(rng, cfg.control_attrs)});
        }
    }

    // Transfers: heavy-tailed in-degree via hub weights.
    auto& transfer = links["transfer"];
    {
        std::vector<double> cum(cfg.companies);
        double acc = 0.0;
        for (std::size_t i = 0; i < cfg.companies; ++i) {
            acc += std::exp(cfg.transfer_hub_sigma * rng.normal());
            cum[i] = acc;
        }
        for (std::size_t i = 0; i < cfg.companies; ++i) {
            const std::size_t deg = poisson(rng, cfg.transfer_mean_out);
            for (std::size_t k = 0; k < deg && cfg.companies > 1; ++k) {
                std::size_t j = weighted_pick(rng, cum);
                for (int tries = 0; j == i && tries < 8; ++tries) j = weighted_pick(rng, cum);
                if (j == i) continue;
                transfer.push_back({"C" + std::to_string(i), "C" + std::to_string(j),
                                    normal_attrs(rng, cfg.transfer_attrs)});
            }
        }
    }

    auto& invest = links["invest"];
    for (std::size_t i = 0; i < cfg.companies; ++i) {
        const std::size_t deg = poisson(rng, cfg.invest_mean_out);
        for (std::size_t k = 0; k < deg && cfg.companies > 1; ++k) {
            std::size_t j = rng.below(cfg.companies - 1);
            if (j >= i) ++j;
            invest.push_back({"C" + std::to_string(i), "C" + std::to_string(j),
                              normal_attrs(rng, cfg.invest_attrs)});
        }
    }

    // Latent risk: hidden linear score over a column subset plus noise.
    const std::size_t risk_cols = (cfg.company_attrs + 1) / 2;
    std::vector<double> risk_w(risk_cols);
    double wnorm = 0.0;
    for (double& w : risk_w) {
        w = rng.normal();
        wnorm += w * w;
    }
    wnorm = std::sqrt(std::max(wnorm, 1e-12));
    for (double& w : risk_w) w /= wnorm;

    std::vector<double> base_risk(cfg.companies);
    for (std::size_t i = 0; i < cfg.companies; ++i) {
        double own = 0.0;
        for (std::size_t c = 0; c < risk_cols; ++c) own += risk_w[c] * *companies[i].attrs[c];
        base_risk[i] = own + cfg.noise_std * rng.normal();
    }

    // Contagion: one mean-propagation pass over each view's meta-path
    // neighbors, using the pre-propagation risks.
    SynthDataset ds;
    ds.metapaths = default_metapaths(schema);
    const Bcn structure = build_graph(schema, nodes, links);
    std::vector<double> risk = base_risk;
    const std::vector<std::pair<std::string, double>> gammas = {
        {"fund", cfg.gamma_fund}, {"equity", cfg.gamma_equity}, {"industry", cfg.gamma_industry}};
    for (const auto& [view, gamma] : gammas) {
        if (gamma == 0.0) continue;
        std::size_t total_neighbors = 0;
        for (std::uint32_t u = 0; u < cfg.companies; ++u) {
            std::vector<std::uint32_t> nb;
            for (const MetaPathSpec& spec : ds.metapaths) {
                if (spec.view != view) continue;
                for (std::uint32_t v : metapath_neighbors(structure, u, spec)) nb.push_back(v);
            }
            std::sort(nb.begin(), nb.end());
            nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
            total_neighbors += nb.size();
            if (nb.empty()) continue;
            double mean = 0.0;
            for (std::uint32_t v : nb) mean += base_risk[v];
            risk[u] += gamma * mean / static_cast<double>(nb.size());
        }
        if (total_neighbors == 0)
            throw std::invalid_argument("generate: contagion planted on view '" + view +
                                        "' but the view has no meta-path neighbors");
    }

    // Threshold-calibrate labels to the base rate.
    std::vector<std::uint32_t> by_risk(cfg.companies);
    for (std::uint32_t i = 0; i < cfg.companies; ++i) by_risk[i] = i;
    std::sort(by_risk.begin(), by_risk.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (risk[a] != risk[b]) return risk[a] > risk[b];
        return a < b;
    });
    std::size_t n_pos = static_cast<std::size_t>(
        std::llround(static_cast<double>(cfg.companies) * cfg.base_rate));
    n_pos = std::clamp<std::size_t>(n_pos, 1, cfg.companies - 1);
    std::vector<std::uint8_t> label(cfg.companies, 0);
    for (std::size_t i = 0; i < n_pos; ++i) label[by_risk[i]] = 1;

    // Mask company attributes toward the per-set targets, correlated within
    // company through a shared propensity factor.
    ds.feature_sets.clear();
    {
        const std::size_t n_sets = cfg.missing_targets.size();
        std::size_t col = 0;
        for (std::size_t s = 0; s < n_sets; ++s) {
            const std::size_t take = cfg.company_attrs / n_sets + (s < cfg.company_attrs % n_sets);
            FeatureSet fs;
            fs.name = cfg.missing_targets[s].first;
            for (std::size_t k = 0; k < take; ++k) fs.columns.push_back(col++);
            ds.feature_sets.push_back(std::move(fs));
        }
        for (std::size_t i = 0; i < cfg.companies; ++i) {
            const double propensity = 1.0 + 0.5 * std::tanh(rng.normal());
            for (std::size_t s = 0; s < n_sets; ++s) {
                const double p = std::min(1.0, cfg.missing_targets[s].second * propensity);
                for (std::size_t c : ds.feature_sets[s].columns)
                    if (rng.uniform() < p) companies[i].attrs[c].reset();
            }
        }
    }

    // Timestamps: a random permutation, so temporal splits are label-neutral.
    std::vector<std::uint32_t> stamp(cfg.companies);
    for (std::uint32_t i = 0; i < cfg.companies; ++i) stamp[i] = i;
    rng.shuffle(stamp);

    ds.graph = build_graph(schema, nodes, links);
    ds.latent_risk = std::move(risk);
    for (std::uint32_t i = 0; i < cfg.companies; ++i)
        ds.labels.items.push_back({"C" + std::to_string(i), i, label[i],
                                   static_cast<double>(stamp[i])});
    return ds;
}

std::vector<ViewLift> measure_lift(const Bcn& g, const LabeledSet& labels,
                                   const std::vector<MetaPathSpec>& specs) {
    std::unordered_map<std::uint32_t, std::uint8_t> label_of;
    for (const LabeledExample& e : labels.items) label_of[e.row] = e.label;

    std::vector<std::string> views;
    for (const MetaPathSpec& s : specs)
        if (std::find(views.begin(), views.end(), s.view) == views.end()) views.push_back(s.view);

    std::vector<ViewLift> out;
    for (const std::string& view : views) {
        ViewLift vl;
        vl.view = view;
        std::size_t def_with = 0, def_without = 0;
        std::size_t defaults_with_nb = 0, defaults_with_def_nb = 0;
        for (const LabeledExample& e : labels.items) {
            bool has_nb = false, has_def_nb = false;
            for (const MetaPathSpec& spec : specs) {
                if (spec.view != view) continue;
                for (std::uint32_t v : metapath_neighbors(g, e.row, spec)) {
                    auto it = label_of.find(v);
                    if (it == label_of.end()) continue;
                    has_nb = true;
                    if (it->second) {
                        has_def_nb = true;
                        break;
                    }
                }
                if (has_def_nb) break;
            }
            if (has_def_nb) {
                vl.n_with += 1;
                def_with += e.label;
            } else {
                vl.n_without += 1;
                def_without += e.label;
            }
            if (e.label && has_nb) {
                defaults_with_nb += 1;
                defaults_with_def_nb += has_def_nb;
            }
        }
        if (vl.n_with > 0 && vl.n_without > 0) {
            vl.rate_with = static_cast<double>(def_with) / static_cast<double>(vl.n_with);
            vl.rate_without = static_cast<double>(def_without) / static_cast<double>(vl.n_without);
            if (vl.rate_without > 0.0) {
                vl.lift_defined = true;
                vl.lift_pct = (vl.rate_with - vl.rate_without) / vl.rate_without * 100.0;
            }
        }
        if (defaults_with_nb > 0) {
            vl.share_defined = true;
            vl.default_share =
                static_cast<double>(defaults_with_def_nb) / static_cast<double>(defaults_with_nb);
        }
        out.push_back(std::move(vl));
    }
    return out;
}

}  // namespace hidam
