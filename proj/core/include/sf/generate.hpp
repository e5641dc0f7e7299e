#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sf/instance.hpp"

namespace sf {

/// 3-CNF formula. Literals are signed 1-based variable indices (DIMACS
/// convention): +v is the positive literal, -v the negated one.
struct Cnf3 {
    int variable_count = 0;
    std::vector<std::vector<int>> clauses;  // each of size 1..3

    /// Optional three-way variable partition; when present the sets have
    /// equal size and every clause holds at most one variable per set.
    struct VarPartition {
        std::vector<int> set_a, set_b, set_c;  // 1-based variable ids
    };
    std::optional<VarPartition> partition;
};

/// Rewrites an arbitrary 3-CNF into an equisatisfiable one whose variables
/// split into three equal sets with at most one variable per set in every
/// clause. Each variable x gains companions x', x'' tied by the implication
/// cycle (x -> x') (x' -> x'') (x'' -> x); clause literals move to the
/// companions as needed, keeping polarity.
Cnf3 tsat3_transform(const Cnf3& cnf);

/// Vertex-id layout of the hardness gadget instance. The instance is
/// unweighted; `budget` is the cost every satisfying assignment realizes.
struct GadgetLayout {
    int padded_n = 0;     // per-set variable count, a power of 4
    int log_n = 0;        // log2(padded_n)
    i64 big_l = 0;        // L = ceil(n / log^2 n)
    int gadget_count = 0; // 3 * log2(n)
    Cost budget = 0;      // B = 2m + 12 L log n

    // vertex ids
    std::vector<std::vector<int>> left;    // [gadget][j], j < 2L
    std::vector<std::vector<int>> right;   // [gadget][j], j < 2L
    std::vector<std::vector<int>> middle;  // [gadget][j'], j' < sqrt(n)
    std::vector<std::pair<int, int>> clause_vertices;  // (c1, c2) per clause

    /// Declared vertex-cover witness: all left, right and middle vertices.
    std::vector<int> cover_witness;

    /// Variable placement: 1-based variable id -> (gadget i, block j, bit alpha).
    struct VarSlot {
        int gadget;
        int block;
        int bit;
    };
    std::vector<VarSlot> slot_of;  // indexed by variable id (0 unused)

    int vertex_count = 0;
};

/// Builds the Steiner Forest instance of the choice-gadget reduction from a
/// partitioned 3-CNF (per-set variable counts are padded with dummies to a
/// power of 4). All edges have weight 1. Demands: one per (left, right)
/// block pair and one per clause vertex pair. Throws InputError when the
/// formula lacks a partition or a clause violates the one-per-set property.
std::pair<Instance, GadgetLayout> sat_to_steiner_forest(const Cnf3& cnf);

struct RoutedSolution {
    Forest forest;
    bool all_clauses_routed = false;
    std::vector<int> unrouted_clauses;  // clause indices with no true literal
};

/// The intended solution for a total assignment (indexed by 1-based variable
/// id; dummies take false): every block pair joins through the middle vertex
/// encoding the block's assignment, every clause routes through its first
/// true literal. Cost is exactly `budget` when the assignment satisfies the
/// formula.
RoutedSolution assignment_to_solution(const Instance& inst, const GadgetLayout& layout,
                                      const std::vector<bool>& assignment);

struct RandomProfile {
    int n = 8;
    int m = 10;
    int demand_count = 3;
    Weight weight_max = 8;
    enum class Target { None, FeedbackEdges, VertexCover } target = Target::None;
    int target_k = 0;
};

/// Deterministic connected random instance from (seed, profile). When a
/// target parameter is set the construction guarantees the bound: a spanning
/// tree plus at most k extra edges (feedback), or all edges incident to a
/// k-vertex cover (vertex cover). Throws InputError on unsatisfiable
/// profiles.
Instance gen_random_bounded(u64 seed, const RandomProfile& profile);

/// DIMACS CNF reader ("p cnf <vars> <clauses>" + clause lines).
Cnf3 parse_dimacs(std::istream& in);
Cnf3 load_dimacs(const std::string& path);

/// Sidecar text for a gadget instance: records the budget, the witness and
/// the variable slots, so external tools can interpret the SFP file.
void write_layout(const GadgetLayout& layout, std::ostream& out);
std::string write_layout_text(const GadgetLayout& layout);

/// Cover check used by tests and the bench harness: true iff every edge has
/// an endpoint in `cover`.
bool is_vertex_cover(const Instance& inst, const std::vector<int>& cover);

}  // namespace sf
