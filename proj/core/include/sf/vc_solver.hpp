#pragma once

#include <optional>

#include "sf/conforming_dp.hpp"
#include "sf/instance.hpp"

namespace sf {

struct CoverCertificate {
    std::vector<int> cover;  // sorted vertex ids
    int size() const { return (int)cover.size(); }
};

/// Throws InputError unless every edge of `inst` has an endpoint in the
/// cover.
void validate_cover(const Instance& inst, const CoverCertificate& cert);

/// Greedy 2-approximate cover via a maximal matching (both endpoints of
/// every matched edge).
CoverCertificate greedy_cover(const Instance& inst);

struct CoverPreprocess {
    Instance preprocessed;
    CoverCertificate cert;       // the original cover, still valid
    int original_n = 0;          // vertices >= original_n are helpers
    std::vector<int> helper_of;  // helper vertex -> replaced terminal
};

/// Moves every terminal out of the cover: a cover terminal t becomes a
/// Steiner vertex and a fresh vertex takes over its terminal role through a
/// zero-cost edge; demands are rewritten accordingly.
CoverPreprocess cover_preprocess(const Instance& inst, const CoverCertificate& cert);

/// The group-structured nice decomposition: per demand group one singleton
/// leaf per terminal under a forget node, joined binarily; the Steiner
/// vertices form one more such tree; the cover is added to every bag. The
/// family holds the single one-block partition at every node whose subtree
/// terminals form a proper subset of one group. Width is at most the cover
/// size; terminals appear in leaf bags only. Throws InputError when a
/// terminal is still in the cover.
std::pair<TreeDecomposition, PartitionFamily> build_vc_decomposition(
    const Instance& inst, const CoverCertificate& cert);

/// Exact optimum parameterized by vertex cover size: preprocess, build the
/// decomposition and family, run the conforming DP, lift (helper edges
/// dropped). Without a certificate a greedy cover is used. Throws
/// InfeasibleError when no solution exists.
Forest solve_vc(const Instance& inst, std::optional<CoverCertificate> cert = std::nullopt);

}  // namespace sf
