#pragma once

#include "sf/instance.hpp"
#include "sf/rational.hpp"

namespace sf {

enum class ReductionKind { Rule3Deletion, Contraction, EdgeRemoval };

/// One replayable reduction step, in ids of the reduction's input instance.
struct ReductionStep {
    ReductionKind kind;
    int vertex = -1;  // deleted vertex (rule 3)
    int edge = -1;    // forced edge (rule 3, -1 if none), contracted or removed edge
};

using ReductionTrace = std::vector<ReductionStep>;

/// A reduced instance together with everything needed to lift a solution of
/// the reduced instance back to the input instance.
struct Reduction {
    Instance original;
    Instance reduced;
    std::vector<int> edge_origin;   // reduced edge id -> original edge id
    std::vector<int> vertex_image;  // original vertex -> reduced vertex, -1 if gone
    ReductionTrace trace;
    Cost spent = 0;  // forced cost already paid (rule 3)
};

/// Exhaustive degree-1 elimination: a degree-1 non-terminal is deleted; a
/// degree-1 terminal forces its unique edge, whose cost is recorded in
/// `spent`, and its demands move to the neighbor (trivial demands dropped).
/// The reduced instance has no degree-1 vertices.
Reduction apply_rule3(const Instance& inst);

/// Aspect-ratio reduction: computes a 2-approximation F2, removes every
/// edge heavier than cost(F2), contracts every edge lighter than
/// (eps/2n)*cost(F2) (exact cross-multiplied comparison, n = input vertex
/// count), rewrites terminals and demands onto contracted vertices and drops
/// trivial demands. The remaining max/min edge-weight ratio is at most
/// 2n/eps. Throws InfeasibleError when a demand spans graph components.
Reduction reduce_aspect_ratio(const Instance& inst, const Rat& eps);

/// Replays a reduction in reverse on a solution of the reduced instance:
/// forced rule-3 edges are re-added, and a contracted edge is re-added
/// exactly when the solution is infeasible at its uncontraction point.
/// Returns a forest over the reduction's input instance.
Forest lift_solution(const Forest& reduced_solution, const Reduction& red);

/// Largest remaining edge weight over smallest, as an exact pair; nullopt
/// when fewer than one edge remains.
std::optional<std::pair<Weight, Weight>> weight_extremes(const Instance& inst);

}  // namespace sf
