#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sf/instance.hpp"
#include "sf/tree_decomposition.hpp"

namespace sf {

/// Partition of a set of terminal ids into disjoint non-empty blocks.
/// Canonical form: each block sorted, blocks ordered by first element.
struct Partition {
    std::vector<std::vector<int>> blocks;

    static Partition canonical(std::vector<std::vector<int>> blocks);

    /// Ground set (sorted union of blocks).
    std::vector<int> ground() const;

    /// Index of the block containing t, or -1.
    int block_of(int t) const;

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.blocks == b.blocks;
    }
    friend bool operator<(const Partition& a, const Partition& b) {
        return a.blocks < b.blocks;
    }

    std::string str() const;  // "a,b|c" with 1-based ids
};

/// Partition of `ground` induced by the connected components of a forest:
/// two terminals share a block iff they share a component.
Partition partition_by_components(const std::vector<int>& ground,
                                  const std::vector<int>& component_of);

/// Per-node sets Pi_B of partitions of that node's active terminals.
/// Nodes with no active terminals are unconstrained and normally carry an
/// empty set; an empty set at a node with active terminals makes every
/// solution non-conforming there.
struct PartitionFamily {
    std::vector<std::vector<Partition>> per_node;

    /// p = sum of |Pi_B| over all nodes.
    u64 total_count() const;
};

/// Checks that every partition's ground set equals the node's active set
/// exactly and that blocks are disjoint and non-empty. Throws InputError.
void validate_family(const TreeDecomposition& td, const std::vector<BagContext>& ctxs,
                     const PartitionFamily& fam);

/// One partition per node with active terminals: the partition of A_B by
/// demand group. Terminals of one group must share a component in every
/// feasible solution, so any feasible solution conforms wherever its
/// components never split a group's active set.
PartitionFamily family_trivial(const Instance& inst, const TreeDecomposition& td);

/// PF text fixture format: `PF 1`, then `NODE <id>` followed by one
/// `PART b1,b2|b3` line per partition (1-based terminal ids).
void write_family(const PartitionFamily& fam, std::ostream& out);
std::string write_family_text(const PartitionFamily& fam);
PartitionFamily parse_family(std::istream& in, int node_count);
PartitionFamily parse_family_text(const std::string& text, int node_count);

}  // namespace sf
