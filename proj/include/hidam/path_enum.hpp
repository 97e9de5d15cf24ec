#pragma once
// Meta-path instance enumeration and sampling over a Bcn.

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "hidam/bcn.hpp"
#include "hidam/schema.hpp"

namespace hidam {

// One realization of a meta-path rooted at `root`. `elems` holds the L
// intermediate row indices in path order, alternating link, node, ..., link:
// elems[2i] is a link of steps[i]'s type, elems[2i+1] the node at
// node_seq[i+1]. Terminal self-paths (terminal == root) are never produced.
struct PathInstance {
    std::uint32_t root = 0;
    std::uint32_t terminal = 0;
    std::vector<std::uint32_t> elems;

    bool operator==(const PathInstance& o) const {
        return root == o.root && terminal == o.terminal && elems == o.elems;
    }
};

inline constexpr std::size_t kUncapped = std::numeric_limits<std::size_t>::max();

// Streams every instance of `spec` rooted at company row `u` in depth-first
// order. The visitor receives a scratch instance that must be copied to be
// kept. Throws if u is out of range for the spec's root type.
void for_each_path_instance(const Bcn& g, std::uint32_t u, const MetaPathSpec& spec,
                            const std::function<void(const PathInstance&)>& visit);

// Depth-first expansion with uniform sampling without replacement: when the
// instance count exceeds `cap`, a seeded reservoir keeps exactly `cap` of
// them, deterministically in (graph, u, spec, cap, seed).
std::vector<PathInstance> enumerate_path_instances(const Bcn& g, std::uint32_t u,
                                                   const MetaPathSpec& spec, std::size_t cap,
                                                   std::uint64_t seed);

// Distinct terminal nodes over all (uncapped) instances, sorted ascending.
std::vector<std::uint32_t> metapath_neighbors(const Bcn& g, std::uint32_t u,
                                              const MetaPathSpec& spec);

}  // namespace hidam
