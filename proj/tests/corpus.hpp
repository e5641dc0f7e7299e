#pragma once

#include <vector>

#include <set>

#include "sf/baselines.hpp"
#include "sf/generate.hpp"
#include "sf/instance.hpp"

namespace sf::testing {

/// Triangle with weights 1-2:1, 2-3:1, 1-3:3 and the demand {1,3}
/// (1-based in the drawing, 0-based here). Optimum cost 2.
inline Instance triangle() {
    return make_instance(3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 3}}, {{0, 2}});
}

/// Seeded corpus of small connected instances for oracle comparisons.
/// Feedback edge set sizes stay at most 6 (m <= n - 1 + 6).
inline std::vector<Instance> small_corpus(int count, u64 seed0 = 1000,
                                          int n_max = 9, int m_max = 14,
                                          Weight w_max = 8, int demands_max = 4) {
    std::vector<Instance> out;
    u64 seed = seed0;
    while ((int)out.size() < count) {
        SplitMix64 rng(seed++);
        RandomProfile p;
        p.n = (int)rng.next_in(3, n_max);
        i64 cap = std::min<i64>({(i64)p.n * (p.n - 1) / 2, (i64)m_max, (i64)p.n - 1 + 6});
        p.m = (int)rng.next_in(p.n - 1, cap);
        i64 dcap = std::min<i64>((i64)p.n * (p.n - 1) / 2, demands_max);
        p.demand_count = (int)rng.next_in(1, dcap);
        p.weight_max = w_max;
        out.push_back(gen_random_bounded(rng.next(), p));
    }
    return out;
}

/// All partitions of `ground` (Bell enumeration; small sets only).
inline std::vector<Partition> all_partitions(const std::vector<int>& ground) {
    std::vector<Partition> out;
    std::vector<int> assign(ground.size(), 0);
    auto emit = [&]() {
        int blocks = 0;
        for (int a : assign) blocks = std::max(blocks, a + 1);
        std::vector<std::vector<int>> bs(blocks);
        for (std::size_t i = 0; i < ground.size(); ++i) bs[assign[i]].push_back(ground[i]);
        out.push_back(Partition::canonical(std::move(bs)));
    };
    auto rec = [&](auto&& self, std::size_t i, int used) -> void {
        if (i == ground.size()) {
            emit();
            return;
        }
        for (int b = 0; b <= used; ++b) {
            assign[i] = b;
            self(self, i + 1, std::max(used, b + 1));
        }
    };
    if (ground.empty()) return out;
    rec(rec, 0, 0);
    return out;
}

/// Random valid family: at every constrained node, up to `per_bag`
/// partitions of A_B drawn from the full Bell enumeration.
inline PartitionFamily random_family(const Instance& inst, const TreeDecomposition& td,
                                     SplitMix64& rng, int per_bag = 3) {
    auto ctxs = bag_contexts(inst, td);
    PartitionFamily fam;
    fam.per_node.resize(td.nodes.size());
    for (int x = 0; x < (int)td.nodes.size(); ++x) {
        if (ctxs[x].active.empty()) continue;
        auto all = all_partitions(ctxs[x].active);
        int take = (int)rng.next_in(1, per_bag);
        std::set<Partition> chosen;
        for (int i = 0; i < take; ++i) chosen.insert(all[rng.next_below(all.size())]);
        fam.per_node[x].assign(chosen.begin(), chosen.end());
    }
    return fam;
}

}  // namespace sf::testing
