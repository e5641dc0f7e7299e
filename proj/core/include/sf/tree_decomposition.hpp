#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sf/instance.hpp"

namespace sf {

enum class NodeKind { Leaf, Join, Introduce, Forget, Plain };

const char* node_kind_name(NodeKind k);

struct TdNode {
    std::vector<int> bag;  // sorted vertex ids
    int parent = -1;
    std::vector<int> children;
    NodeKind kind = NodeKind::Plain;
};

/// Rooted tree decomposition. Width and height are always recomputed from
/// the node data, never trusted from input. Height counts nodes on the
/// longest root-to-leaf path (a single node has height 1). Immutable by
/// convention after construction.
struct TreeDecomposition {
    std::vector<TdNode> nodes;
    int root = -1;
    bool nice = false;  // claims nice form; verified by validate_td

    int width() const;
    int height() const;
    std::vector<int> preorder() const;   // parents before children
    std::vector<int> postorder() const;  // children before parents
};

struct TdCheck {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Checks the three decomposition properties (vertex coverage, edge
/// coverage, connected vertex traces) plus tree shape, and, when the
/// decomposition is flagged nice, the four node-kind rules. Violations are
/// data, not errors.
TdCheck validate_td(const Instance& inst, const TreeDecomposition& td);

/// Heuristic construction via min-degree elimination ordering with min-fill
/// tie-break (lowest vertex id last). Valid but not necessarily nice; width
/// is at least the treewidth.
TreeDecomposition heuristic_td(const Instance& inst);

/// Converts to nice form of equal width: joins duplicate the parent bag,
/// consecutive bags differ by at most one vertex, children ordered by
/// minimum bag vertex.
TreeDecomposition make_nice(const TreeDecomposition& td);

/// Width and height guarantees of rebalance, exported so callers and tests
/// read the same constants: width <= kRebalanceWidthFactor*(k+1) - 1 and
/// height <= kRebalanceHeightFactor*(k+1)*(1 + log2(n)) for an input of
/// width k on an n-vertex graph.
constexpr int kRebalanceWidthFactor = 4;
constexpr int kRebalanceHeightFactor = 18;

int rebalance_width_bound(int input_width);
i64 rebalance_height_bound(int input_width, int n_vertices);

/// Restructures any valid decomposition into a nice one of logarithmic
/// height by recursive centroid/median splitting of the decomposition tree,
/// meeting the exported width and height bounds above.
TreeDecomposition rebalance(const Instance& inst, const TreeDecomposition& td);

/// Ensures every terminal appears in the bag of at least one leaf node by
/// grafting a join with a forget chain down to a {t} leaf where needed.
/// Width unchanged; input must be nice.
TreeDecomposition push_terminals_to_leaves(const Instance& inst, const TreeDecomposition& td);

/// Per-node context: subtree vertex set and active terminals.
/// A_B = { t : some demand {s,t} has t in V_B and s outside V_B }.
struct BagContext {
    int node = -1;
    std::vector<bool> in_subtree;   // V_B as a mask over vertices
    std::vector<int> active;        // A_B, sorted
};

/// Contexts for all nodes in one bottom-up pass; index by node id.
std::vector<BagContext> bag_contexts(const Instance& inst, const TreeDecomposition& td);

BagContext bag_context(const Instance& inst, const TreeDecomposition& td, int node);

/// Edge ids of E(G down B): edges with both endpoints in V_B but not both
/// in the bag B itself.
std::vector<int> down_edges(const Instance& inst, const TreeDecomposition& td,
                            const BagContext& ctx);

/// TD text format: `TD 1` header, one `NODE <id> <parent|-> <kind> : v1 v2 ...`
/// line per node (1-based vertex ids). Reader/writer round-trip stable.
void write_td(const TreeDecomposition& td, std::ostream& out);
std::string write_td_text(const TreeDecomposition& td);
TreeDecomposition parse_td(std::istream& in);
TreeDecomposition parse_td_text(const std::string& text);
TreeDecomposition load_td(const std::string& path);

/// Import of the bags-plus-tree-edges exchange layout used by treewidth
/// solver competitions ("s td <bags> <width+1> <n>", "b <id> v...", edges).
/// The unrooted tree is rooted at node 1.
TreeDecomposition import_pace_td(std::istream& in);

}  // namespace sf
