#include "hidam/path_enum.hpp"

#include <algorithm>
#include <stdexcept>

#include "hidam/rng.hpp"

namespace hidam {

namespace {

struct Walker {
    const Bcn& g;
    const MetaPathSpec& spec;
    std::uint32_t root;
    const std::function<void(const PathInstance&)>& visit;
    PathInstance scratch;

    void expand(std::size_t depth, std::uint32_t node) {
        if (depth == spec.steps.size()) {
            if (node == root) return;  // a node is never its own meta-path neighbor
            scratch.terminal = node;
            visit(scratch);
            return;
        }
        const MetaPathStep& step = spec.steps[depth];
        const LinkTable& lt = g.links(step.link_type);
        const bool directed = g.schema().link_types[step.link_type].directed;
        const bool last = depth + 1 == spec.steps.size();

        auto follow = [&](const std::vector<std::uint32_t>& offsets,
                          const std::vector<std::uint32_t>& link_ids,
                          const std::vector<std::uint32_t>& other_end) {
            for (std::uint32_t i = offsets[node]; i < offsets[node + 1]; ++i) {
                const std::uint32_t link = link_ids[i];
                scratch.elems.push_back(link);
                if (!last) scratch.elems.push_back(other_end[link]);
                expand(depth + 1, other_end[link]);
                scratch.elems.pop_back();
                if (!last) scratch.elems.pop_back();
            }
        };

        if (!directed) {
            follow(lt.fwd_offsets, lt.fwd_links, lt.dst);
            follow(lt.rev_offsets, lt.rev_links, lt.src);
        } else if (step.forward) {
            follow(lt.fwd_offsets, lt.fwd_links, lt.dst);
        } else {
            follow(lt.rev_offsets, lt.rev_links, lt.src);
        }
    }
};

}  // namespace

void for_each_path_instance(const Bcn& g, std::uint32_t u, const MetaPathSpec& spec,
                            const std::function<void(const PathInstance&)>& visit) {
    const std::size_t root_type = spec.node_seq.front();
    if (u >= g.nodes(root_type).count())
        throw std::invalid_argument("path enumeration: node " + std::to_string(u) +
                                    " is not a valid " +
                                    g.schema().node_types[root_type].name + " row");
    Walker w{g, spec, u, visit, {}};
    w.scratch.root = u;
    w.scratch.elems.reserve(spec.intermediate_length());
    w.expand(0, u);
}

std::vector<PathInstance> enumerate_path_instances(const Bcn& g, std::uint32_t u,
                                                   const MetaPathSpec& spec, std::size_t cap,
                                                   std::uint64_t seed) {
    if (cap < 1) throw std::invalid_argument("enumerate_path_instances: cap must be >= 1");
    std::vector<PathInstance> out;
    if (cap == kUncapped) {
        for_each_path_instance(g, u, spec, [&](const PathInstance& p) { out.push_back(p); });
        return out;
    }
    // Reservoir sampling (algorithm R) over the depth-first stream.
    Rng rng(seed);
    std::size_t seen = 0;
    out.reserve(std::min<std::size_t>(cap, 64));
    for_each_path_instance(g, u, spec, [&](const PathInstance& p) {
        if (seen < cap) {
            out.push_back(p);
        } else {
            const std::uint64_t j = rng.below(seen + 1);
            if (j < cap) out[j] = p;
        }
        ++seen;
    });
    return out;
}

std::vector<std::uint32_t> metapath_neighbors(const Bcn& g, std::uint32_t u,
                                              const MetaPathSpec& spec) {
    std::vector<std::uint32_t> terminals;
    for_each_path_instance(g, u, spec,
                           [&](const PathInstance& p) { terminals.push_back(p.terminal); });
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    return terminals;
}

}  // namespace hidam
