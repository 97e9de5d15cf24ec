#include "hidam/graph_stats.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hidam {

double coverage_stats(const Bcn& g, const std::string& link_type) {
    const int lt = g.schema().link_type_index(link_type);
    if (lt < 0) throw std::invalid_argument("coverage_stats: unknown link type '" + link_type + "'");
    const std::size_t n_companies = g.companies().count();
    if (n_companies == 0)
        throw std::invalid_argument("coverage_stats: graph has no " + g.schema().target_type +
                                    " nodes");
    const LinkTypeDef& def = g.schema().link_types[static_cast<std::size_t>(lt)];
    const LinkTable& table = g.links(static_cast<std::size_t>(lt));
    const bool src_is_company =
        g.schema().node_type_index(def.src_type) == static_cast<int>(g.company_type());
    const bool dst_is_company =
        g.schema().node_type_index(def.dst_type) == static_cast<int>(g.company_type());

    std::vector<std::uint8_t> touched(n_companies, 0);
    for (std::size_t i = 0; i < table.count(); ++i) {
        if (src_is_company) touched[table.src[i]] = 1;
        if (dst_is_company) touched[table.dst[i]] = 1;
    }
    std::size_t covered = 0;
    for (std::uint8_t t : touched) covered += t;
    return static_cast<double>(covered) / static_cast<double>(n_companies);
}

MissingRateTable missing_rate_stats(const Bcn& g, const std::vector<FeatureSet>& feature_sets,
                                    const std::vector<MetaPathSpec>& specs) {
    const NodeTable& companies = g.companies();
    const std::size_t n = companies.count();
    const std::size_t n_cols = companies.attrs.cols;
    if (n == 0) throw std::invalid_argument("missing_rate_stats: graph has no companies");
    for (const FeatureSet& fs : feature_sets) {
        if (fs.columns.empty())
            throw std::invalid_argument("missing_rate_stats: feature set '" + fs.name +
                                        "' is empty");
        for (std::size_t c : fs.columns)
            if (c >= n_cols)
                throw std::invalid_argument("missing_rate_stats: feature set '" + fs.name +
                                            "' column out of range");
    }

    MissingRateTable table;
    for (const MetaPathSpec& s : specs)
        if (std::find(table.views.begin(), table.views.end(), s.view) == table.views.end())
            table.views.push_back(s.view);
    const std::size_t n_views = table.views.size();

    // present[v * n_cols + c] per company: 1 when observed on the company or
    // any neighbor in that view; slot n_views is the all-views grouping.
    // Integer count accumulation keeps the result independent of thread
    // scheduling.
    const std::size_t groups = n_views + 1;
    std::vector<std::size_t> missing_count(feature_sets.size() * (groups + 1), 0);

#ifdef _OPENMP
#pragma omp parallel
#endif
    {
        std::vector<std::uint8_t> present(groups * n_cols);
        std::vector<std::size_t> local(missing_count.size(), 0);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (std::int64_t ui = 0; ui < static_cast<std::int64_t>(n); ++ui) {
            const std::uint32_t u = static_cast<std::uint32_t>(ui);
            std::fill(present.begin(), present.end(), 0);
            for (std::size_t c = 0; c < n_cols; ++c) {
                if (!companies.is_missing(u, c))
                    for (std::size_t gidx = 0; gidx < groups; ++gidx)
                        present[gidx * n_cols + c] = 1;
            }
            for (std::size_t si = 0; si < specs.size(); ++si) {
                const std::size_t view =
                    std::find(table.views.begin(), table.views.end(), specs[si].view) -
                    table.views.begin();
                for (std::uint32_t v : metapath_neighbors(g, u, specs[si])) {
                    for (std::size_t c = 0; c < n_cols; ++c) {
                        if (!companies.is_missing(v, c)) {
                            present[view * n_cols + c] = 1;
                            present[n_views * n_cols + c] = 1;
                        }
                    }
                }
            }
            for (std::size_t f = 0; f < feature_sets.size(); ++f) {
                const FeatureSet& fs = feature_sets[f];
                std::size_t self_missing = 0;
                for (std::size_t c : fs.columns) self_missing += companies.is_missing(u, c);
                local[f * (groups + 1)] += self_missing;
                for (std::size_t gidx = 0; gidx < groups; ++gidx) {
                    std::size_t still_missing = 0;
                    for (std::size_t c : fs.columns)
                        still_missing += present[gidx * n_cols + c] == 0;
                    local[f * (groups + 1) + 1 + gidx] += still_missing;
                }
            }
        }
#ifdef _OPENMP
#pragma omp critical
#endif
        for (std::size_t i = 0; i < missing_count.size(); ++i) missing_count[i] += local[i];
    }

    for (std::size_t f = 0; f < feature_sets.size(); ++f) {
        const double denom = static_cast<double>(n * feature_sets[f].columns.size());
        MissingRateRow row;
        row.feature_set = feature_sets[f].name;
        row.self_rate = static_cast<double>(missing_count[f * (groups + 1)]) / denom;
        for (std::size_t v = 0; v < n_views; ++v)
            row.by_view.push_back(
                static_cast<double>(missing_count[f * (groups + 1) + 1 + v]) / denom);
        row.all_views =
            static_cast<double>(missing_count[f * (groups + 1) + 1 + n_views]) / denom;
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace hidam
