#pragma once

#include <vector>

#include "sf/util.hpp"

namespace sf {

/// Undirected capacitated graph for min-cut queries. Capacities are
/// non-negative integers fitting 128 bits.
struct CutGraph {
    int n = 0;
    struct CutEdge {
        int u;
        int v;
        u128 cap;
    };
    std::vector<CutEdge> edges;

    int add_edge(int u, int v, u128 cap) {
        edges.push_back({u, v, cap});
        return (int)edges.size() - 1;
    }
};

struct MinCutResult {
    u128 value = 0;
    std::vector<int> cut_edges;     // ids into CutGraph::edges, sorted
    std::vector<bool> source_side;  // deterministic: residual reachability from s
};

/// Exact max-flow / min-cut (Dinic). The cut is extracted as the edges
/// leaving the set of vertices reachable from s in the residual network.
/// Throws InputError when s == t.
MinCutResult min_cut(const CutGraph& g, int s, int t);

}  // namespace sf
