#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sf/errors.hpp"
#include "sf/util.hpp"

namespace sf {

/// Edge weight in abstract cost units. External instances require w >= 1 on
/// every edge; internal transforms (vertex-cover preprocessing) may create
/// w == 0. Weights are capped at 2^32 per edge so that every sum or threshold
/// product in the toolkit fits in 128 bits.
using Weight = u64;
constexpr Weight kMaxEdgeWeight = (u64(1) << 32);

/// Sum of edge weights; exact (no rounding anywhere in the toolkit).
using Cost = u64;

struct Edge {
    int u;
    int v;
    Weight w;
};

/// Unordered demand pair, stored with s < t.
struct Demand {
    int s;
    int t;

    friend bool operator==(const Demand& a, const Demand& b) {
        return a.s == b.s && a.t == b.t;
    }
    friend bool operator<(const Demand& a, const Demand& b) {
        return a.s != b.s ? a.s < b.s : a.t < b.t;
    }
};

/// A Steiner Forest instance: weighted undirected simple graph plus demand
/// pairs. Immutable after construction; safe to share across solver runs.
/// Vertex ids are 0-based internally; the SFP text format is 1-based.
struct Instance {
    int n = 0;
    std::vector<Edge> edges;      // normalized u < v, sorted, no duplicates
    std::vector<Demand> demands;  // normalized s < t, sorted, no duplicates
    std::vector<std::string> labels;  // optional per-vertex names

    /// Terminal set: union of demand endpoints.
    std::vector<int> terminals() const;
    std::vector<bool> terminal_mask() const;

    std::vector<int> degrees() const;

    /// Adjacency as (neighbor, edge id) lists.
    std::vector<std::vector<std::pair<int, int>>> adjacency() const;

    Cost total_weight() const;
};

/// Normalizes edge/demand order and checks all Instance invariants:
/// ids in range, no self-loops, no duplicate edges or demands, and
/// (when require_positive_weights) w >= 1 and w <= 2^32 on every edge.
/// Throws InputError on violation.
Instance make_instance(int n, std::vector<Edge> edges, std::vector<Demand> demands,
                       std::vector<std::string> labels = {},
                       bool require_positive_weights = true);

/// A solution candidate: a set of edge ids into an Instance. Kept sorted.
struct Forest {
    std::vector<int> edge_ids;

    static Forest of(std::vector<int> ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        return Forest{std::move(ids)};
    }
    bool contains(int e) const {
        return std::binary_search(edge_ids.begin(), edge_ids.end(), e);
    }
    std::size_t size() const { return edge_ids.size(); }
};

struct Evaluation {
    Cost cost = 0;
    bool feasible = false;
    std::vector<Demand> violations;  // every unsatisfied demand
    bool acyclic = true;             // warning-grade: optima are forests
};

/// Exact cost and feasibility of a forest against an instance. Feasible iff
/// every demand pair is connected in the subgraph spanned by the forest
/// edges. Throws InputError on an edge id out of range.
Evaluation evaluate_solution(const Instance& inst, const Forest& f);

/// Partition of the terminals by connectivity in the demand graph. Two
/// terminals share a group iff they are connected through demand pairs.
struct DemandGroups {
    std::vector<std::vector<int>> groups;  // each sorted; groups sorted by first element
    std::vector<int> group_of;             // vertex id -> group index, -1 for non-terminals
};

DemandGroups demand_groups(const Instance& inst);

/// Connected components of the instance graph (ignoring demands).
std::vector<int> graph_components(const Instance& inst);

/// True iff every demand has both endpoints in one graph component.
bool demands_connected(const Instance& inst);

}  // namespace sf
