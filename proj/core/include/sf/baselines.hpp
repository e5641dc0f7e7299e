#pragma once

#include <optional>

#include "sf/instance.hpp"
#include "sf/partition.hpp"
#include "sf/tree_decomposition.hpp"

namespace sf {

/// Primal-dual 2-approximation: uniform dual growth on active components
/// (components holding a terminal with an unsatisfied demand), edges
/// admitted at zero slack, then a reverse-delete pass. Dual growth is
/// simulated exactly in rational arithmetic. Throws InfeasibleError when a
/// demand spans graph components.
Forest two_approx_primal_dual(const Instance& inst);

struct BruteForceResult {
    Cost cost = 0;
    Forest forest;
};

constexpr int kBruteForceEdgeCap = 24;
constexpr int kBruteForceConformingEdgeCap = 18;

/// Exact optimum by enumeration of all 2^m edge subsets; ties broken by the
/// lexicographically smallest edge-id set. Guarded at m <= 24 (throws
/// ResourceError beyond). Throws InfeasibleError when no subset is feasible.
BruteForceResult brute_force_opt(const Instance& inst);

/// Exact minimum over feasible edge subsets whose induced active-terminal
/// partition at every bag with active terminals matches some supplied
/// partition. Guarded at m <= 18. Returns nullopt when no conforming
/// feasible subset exists.
std::optional<BruteForceResult> brute_force_conforming(const Instance& inst,
                                                       const TreeDecomposition& td,
                                                       const PartitionFamily& fam);

}  // namespace sf
