#pragma once

#include <optional>

#include "sf/conforming_dp.hpp"
#include "sf/instance.hpp"
#include "sf/partition.hpp"
#include "sf/rational.hpp"
#include "sf/reduce.hpp"
#include "sf/tree_decomposition.hpp"

namespace sf {

/// Parameters of the approximation scheme. The user-facing target eps' is
/// met by running the internal machinery at eps with (1+eps)^2 + eps
/// <= 1 + eps'; eps is the largest value of the form eps'/2^i satisfying
/// that inequality exactly in rational arithmetic.
struct EpasParams {
    Rat eps_target;
    Rat eps_internal;
    int width = 0;       // k of the decomposition actually used
    int height = 0;      // h, in nodes, of that decomposition
    int n_orig = 0;      // vertex count of the original input graph
    Weight w_min = 1;    // smallest edge weight of the reduced instance
};

Rat pick_internal_eps(const Rat& eps_target);

/// Lazily cached single-source shortest-path distances with deterministic
/// lowest-id predecessor ties.
class DistOracle {
public:
    explicit DistOracle(const Instance& inst);

    static constexpr Cost kUnreachable = ~Cost(0);

    Cost dist(int u, int v) const;
    Cost dist_to_set(int u, const std::vector<int>& set) const;

    /// Edge ids of the deterministic shortest u..v path.
    std::vector<int> path_edges(int u, int v) const;

private:
    void ensure(int source) const;

    const Instance* inst_;
    mutable std::vector<std::vector<Cost>> dist_;
    mutable std::vector<std::vector<int>> pred_edge_;
    mutable std::vector<bool> ready_;
};

/// Greedy net over `points` in ascending id order: a point joins the net
/// exactly when its distance to every admitted point exceeds delta. The
/// result packs (pairwise > delta) and covers (everything within delta).
std::vector<int> greedy_delta_net(const std::vector<int>& points, const DistOracle& dist,
                                  const Q128& delta);

/// One block of a per-bag refinement partition, with the provenance the
/// construction assigns it.
struct ZetaBlock {
    std::vector<int> terminals;  // sorted
    enum class Kind { BagSingleton, WholeAnnulus, NetCell } kind;
    int closest_bag_vertex = -1;  // for annulus blocks
    int annulus = -1;             // j with dist in [2^j d, 2^{j+1} d)
    int anchor = -1;              // net point for NetCell blocks
};

struct ZetaPartition {
    int node = -1;
    std::vector<ZetaBlock> blocks;
    Cost d_min = 0;  // min and max distance of A_B \ B from the bag
    Cost d_max = 0;
};

/// Upper bound asserted on |zeta_B|; exported so tests read the same
/// constant: kZetaFactor * max(1,k)^4 * h^2 * (1/eps^2) * max(1, ceil(log2
/// max(2, D/d))).
constexpr int kZetaFactor = 64;
i128 zeta_size_bound(const EpasParams& p, Cost d_min, Cost d_max);

/// The refinement partition of a bag's active terminals: singletons for
/// active terminals inside the bag; the rest split by closest bag vertex
/// and distance annulus, then grouped through a greedy net per annulus --
/// the whole annulus collapses into one block once the net reaches
/// 8 k^2 (k+1) h^2 / eps^2 points, otherwise each net point takes the
/// terminals closest to it.
ZetaPartition zeta_partition(const Instance& inst, const TreeDecomposition& td,
                             const BagContext& ctx, const EpasParams& params,
                             const DistOracle& dist);

constexpr u64 kDefaultSequenceCap = 10'000'000;

/// All partitions of A_B arising from sequences ((S_1,d_1)...(S_l,d_l),rho)
/// with l <= k+1, each S_j a set of at most floor(4k/eps) zeta blocks and
/// d_j a power of two from the weight-relative domain: terminals of an S_j
/// land in the class of j, every other terminal follows the first slot
/// whose union it nearly touches (dist <= (eps/k) d_j); sequences whose
/// placement is not a partition are dismissed, duplicates are deduplicated.
/// Throws ResourceError (naming the node and the count) past the cap.
std::vector<Partition> enumerate_bag_partitions(const Instance& inst,
                                                const ZetaPartition& zeta,
                                                const std::vector<int>& active,
                                                const EpasParams& params,
                                                const DistOracle& dist,
                                                u64 cap = kDefaultSequenceCap);

PartitionFamily enumerate_partition_family(const Instance& inst, const TreeDecomposition& td,
                                           const std::vector<ZetaPartition>& zeta,
                                           const EpasParams& params, const DistOracle& dist,
                                           u64 cap = kDefaultSequenceCap);

/// Test oracle for the charging analysis: exhaustively merges components of
/// `f_star` that share a bag and sit within (eps/kh) * cost-below of one
/// another (giving f_eps), then merges components of f_eps ordered by the
/// depth of their topmost bag within (eps/k) * pow(cost) (giving f_tilde).
/// pow(x) is the largest power of two at most x.
struct MergeSimulation {
    Forest f_eps;
    Forest f_tilde;
};

MergeSimulation simulate_merge_rules(const Instance& inst, const TreeDecomposition& td,
                                     const Forest& f_star, const Rat& eps);

Cost pow2_floor(Cost x);

/// Every stage of the scheme, exposed for verification.
struct EpasRun {
    EpasParams params;
    TreeDecomposition balanced;       // rebalanced decomposition of the input
    Reduction reduction;              // aspect-ratio reduction
    TreeDecomposition dp_td;          // decomposition of the reduced instance
    std::vector<ZetaPartition> zeta;  // per dp_td node
    PartitionFamily family;
    ConformingResult conforming;      // on the reduced instance
    Forest forest;                    // lifted to the input instance
    Cost cost = 0;
};

EpasRun run_epas(const Instance& inst, std::optional<TreeDecomposition> td,
                 const Rat& eps_target, u64 cap = kDefaultSequenceCap);

/// Feasible solution of cost at most (1 + eps_target) * OPT: rebalance,
/// aspect-ratio reduction, refinement partitions, sequence enumeration,
/// conforming DP, lift.
Forest solve_epas(const Instance& inst, std::optional<TreeDecomposition> td,
                  const Rat& eps_target, u64 cap = kDefaultSequenceCap);

}  // namespace sf
