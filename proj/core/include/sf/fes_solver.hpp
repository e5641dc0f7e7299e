#pragma once

#include <iosfwd>
#include <vector>

#include "sf/instance.hpp"

namespace sf {

/// Non-tree edges of a minimum-weight spanning forest (Kruskal with edge-id
/// tie-break). Size m - n + c for c graph components.
std::vector<int> feedback_edge_set(const Instance& inst);

/// Backbone of the feedback-edge-set solver: special vertices (degree >= 3
/// or incident to a feedback edge) and the maximal paths between them.
struct TopologySkeleton {
    std::vector<int> feedback_edges;  // H, edge ids
    std::vector<bool> special;

    struct TopoEdge {
        int u, v;                    // special endpoints; u == v for lassos
        std::vector<int> inner;      // internal vertices, path order u -> v
        std::vector<int> edge_ids;   // |inner| + 1 edges in path order
        Cost total_weight = 0;
    };
    std::vector<TopoEdge> topo_edges;

    int special_count() const;
    int degree3_count(const Instance& inst) const;
};

/// Requires minimum degree >= 2 at every non-isolated vertex (throws
/// InputError on a degree-1 vertex). Every edge lands in exactly one
/// topo-edge; feedback edges without internal vertices form their own.
TopologySkeleton build_skeleton(const Instance& inst);

/// Minimum-cost solution of a two-pole instance (a union of internally
/// disjoint c1..c2 paths with demands between internal vertices of distinct
/// paths) among solutions keeping c1 and c2 in different components.
/// Degree-2 Steiner vertices are merged away, then the complement of a
/// minimum cut under w'(e) = N - w(e) (N = total edge weight, demand edges
/// at n^2*N) is returned.
Forest solve_two_pole(const Instance& inst, int c1, int c2);

/// Exact optimum parameterized by feedback edge set size: exhaustive Rule 3,
/// skeleton construction, a guess per subset of fully-used topo-edges, the
/// case analysis on the rest, and a min-cut subproblem per class pair.
/// Throws InfeasibleError when no solution exists.
Forest solve_fes(const Instance& inst);

/// Debug dump of a skeleton (1-based vertex ids).
void write_skeleton(const TopologySkeleton& sk, std::ostream& out);

}  // namespace sf
