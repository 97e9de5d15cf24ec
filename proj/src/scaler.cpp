#include "hidam/scaler.hpp"

#include <cmath>
#include <stdexcept>

namespace hidam {

namespace {

void fit_columns(const Matrix& attrs, const std::vector<std::uint8_t>& missing,
                 const std::vector<std::uint32_t>* rows, std::vector<double>& mean,
                 std::vector<double>& inv_std) {
    const std::size_t cols = attrs.cols;
    mean.assign(cols, 0.0);
    inv_std.assign(cols, 0.0);
    if (cols == 0) return;
    std::vector<double> sum(cols, 0.0), sumsq(cols, 0.0);
    std::vector<std::size_t> count(cols, 0);
    const std::size_t n = rows ? rows->size() : attrs.rows;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t r = rows ? (*rows)[i] : static_cast<std::uint32_t>(i);
        for (std::size_t c = 0; c < cols; ++c) {
            if (missing[r * cols + c]) continue;
            const double v = attrs.at(r, c);
            sum[c] += v;
            sumsq[c] += v * v;
            count[c] += 1;
        }
    }
    for (std::size_t c = 0; c < cols; ++c) {
        if (count[c] == 0) continue;  // fully-missing column stays at zero
        const double m = sum[c] / static_cast<double>(count[c]);
        const double var = std::max(0.0, sumsq[c] / static_cast<double>(count[c]) - m * m);
        const double sd = std::sqrt(var);
        mean[c] = m;
        inv_std[c] = sd < 1e-12 ? 0.0 : 1.0 / sd;  // constant columns carry no signal
    }
}

}  // namespace

FeatureScaler FeatureScaler::fit(const Bcn& g, const std::vector<std::uint32_t>& train_companies,
                                 const std::string& policy) {
    if (policy != "standardize" && policy != "zero")
        throw std::invalid_argument("FeatureScaler: unknown imputation policy '" + policy + "'");
    FeatureScaler s;
    s.policy = policy;
    s.node_mean.resize(g.node_type_count());
    s.node_inv_std.resize(g.node_type_count());
    s.link_mean.resize(g.link_type_count());
    s.link_inv_std.resize(g.link_type_count());
    if (policy == "zero") {
        for (std::size_t t = 0; t < g.node_type_count(); ++t) {
            s.node_mean[t].assign(g.nodes(t).attrs.cols, 0.0);
            s.node_inv_std[t].assign(g.nodes(t).attrs.cols, 1.0);
        }
        for (std::size_t t = 0; t < g.link_type_count(); ++t) {
            s.link_mean[t].assign(g.links(t).attrs.cols, 0.0);
            s.link_inv_std[t].assign(g.links(t).attrs.cols, 1.0);
        }
        return s;
    }
    for (std::size_t t = 0; t < g.node_type_count(); ++t) {
        const NodeTable& table = g.nodes(t);
        const bool is_company = t == g.company_type();
        fit_columns(table.attrs, table.missing,
                    is_company && !train_companies.empty() ? &train_companies : nullptr,
                    s.node_mean[t], s.node_inv_std[t]);
    }
    for (std::size_t t = 0; t < g.link_type_count(); ++t) {
        const LinkTable& table = g.links(t);
        fit_columns(table.attrs, table.missing, nullptr, s.link_mean[t], s.link_inv_std[t]);
    }
    return s;
}

void FeatureScaler::apply_node(const Bcn& g, std::size_t type, std::uint32_t row,
                               double* out) const {
    const NodeTable& table = g.nodes(type);
    const std::size_t cols = table.attrs.cols;
    for (std::size_t c = 0; c < cols; ++c) {
        out[c] = table.is_missing(row, c)
                     ? 0.0
                     : (table.attrs.at(row, c) - node_mean[type][c]) * node_inv_std[type][c];
    }
}

void FeatureScaler::apply_link(const Bcn& g, std::size_t type, std::uint32_t row,
                               double* out) const {
    const LinkTable& table = g.links(type);
    const std::size_t cols = table.attrs.cols;
    for (std::size_t c = 0; c < cols; ++c) {
        out[c] = table.is_missing(row, c)
                     ? 0.0
                     : (table.attrs.at(row, c) - link_mean[type][c]) * link_inv_std[type][c];
    }
}

}  // namespace hidam
