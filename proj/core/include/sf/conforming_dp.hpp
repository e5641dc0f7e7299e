#pragma once

#include <optional>

#include "sf/instance.hpp"
#include "sf/partition.hpp"
#include "sf/tree_decomposition.hpp"

namespace sf {

struct ConformingResult {
    Cost cost = 0;
    Forest forest;
};

/// Minimum-cost feasible Steiner Forest conforming to the supplied per-bag
/// partition sets: at every bag with active terminals, the partition of the
/// active terminals by the solution's connected components must equal one of
/// the supplied partitions. Bags without active terminals are unconstrained.
///
/// Requires a nice decomposition with every terminal in at least one leaf
/// bag, and family ground sets matching the active sets exactly (throws
/// InputError otherwise). Returns nullopt when no conforming feasible
/// solution exists.
///
/// The dynamic program runs over states of the form (partition of the
/// engaged bag vertices into partial-component pieces, a committed
/// final-component color per piece, promised colors for not-yet-connected
/// bag terminals, and the color charged to each class of the partition
/// chosen at the node). Distinct colors never merge; completeness comes
/// from branching over color assignments when a component is first
/// committed. Cost ties break toward the lexicographically smallest edge
/// set.
std::optional<ConformingResult> solve_conforming(const Instance& inst,
                                                 const TreeDecomposition& td,
                                                 const PartitionFamily& fam);

}  // namespace sf
