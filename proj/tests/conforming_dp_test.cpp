#include <doctest.h>

#include <map>
#include <set>

#include "corpus.hpp"
#include "sf/conforming_dp.hpp"

using namespace sf;

namespace {

TreeDecomposition ready_td(const Instance& inst) {
    return push_terminals_to_leaves(inst, make_nice(heuristic_td(inst)));
}

/// Family with the single one-block partition {A_B} wherever A_B is
/// non-empty.
PartitionFamily one_block_family(const Instance& inst, const TreeDecomposition& td) {
    auto ctxs = bag_contexts(inst, td);
    PartitionFamily fam;
    fam.per_node.resize(td.nodes.size());
    for (int x = 0; x < (int)td.nodes.size(); ++x)
        if (!ctxs[x].active.empty())
            fam.per_node[x].push_back(Partition::canonical({ctxs[x].active}));
    return fam;
}

}  // namespace

TEST_CASE("conforming DP matches the unconstrained optimum under one-block families") {
    Instance inst = testing::triangle();
    TreeDecomposition td = ready_td(inst);
    auto fam = one_block_family(inst, td);
    auto res = solve_conforming(inst, td, fam);
    REQUIRE(res.has_value());
    CHECK(res->cost == 2);
    auto oracle = brute_force_conforming(inst, td, fam);
    REQUIRE(oracle.has_value());
    CHECK(oracle->cost == 2);
}

TEST_CASE("conforming DP separates forced blocks") {
    // 4-cycle, all weights 2, demands {1,2} and {3,4} (1-based); forcing the
    // two demand groups apart keeps cost 4 via the two demand edges
    Instance inst = make_instance(4, {{0, 1, 2}, {1, 2, 2}, {2, 3, 2}, {0, 3, 2}},
                                  {{0, 1}, {2, 3}});
    TreeDecomposition td = ready_td(inst);
    auto ctxs = bag_contexts(inst, td);
    auto groups = demand_groups(inst);
    PartitionFamily fam;
    fam.per_node.resize(td.nodes.size());
    for (int x = 0; x < (int)td.nodes.size(); ++x) {
        if (ctxs[x].active.empty()) continue;
        std::map<int, std::vector<int>> split;
        for (int t : ctxs[x].active) split[groups.group_of[t]].push_back(t);
        std::vector<std::vector<int>> blocks;
        for (auto& [g, m] : split) blocks.push_back(m);
        fam.per_node[x].push_back(Partition::canonical(std::move(blocks)));
    }
    auto res = solve_conforming(inst, td, fam);
    REQUIRE(res.has_value());
    CHECK(res->cost == 4);
    auto oracle = brute_force_conforming(inst, td, fam);
    REQUIRE(oracle.has_value());
    CHECK(oracle->cost == res->cost);
}

TEST_CASE("an empty partition set at an active bag is infeasible") {
    Instance inst = testing::triangle();
    // root {0,1,2} with a {0}-leaf: terminal 0 is active at the leaf
    TreeDecomposition td;
    td.nodes.resize(3);
    td.nodes[0].bag = {0, 1, 2};
    td.nodes[1].bag = {0, 1, 2};
    td.nodes[2].bag = {0};
    td.nodes[1].parent = td.nodes[2].parent = 0;
    td.nodes[0].children = {1, 2};
    td.nodes[0].kind = NodeKind::Join;
    td.nodes[1].kind = NodeKind::Leaf;
    td.nodes[2].kind = NodeKind::Leaf;
    td.root = 0;
    td.nice = false;  // {0} is a join child with a different bag
    TreeDecomposition nice = push_terminals_to_leaves(inst, make_nice(td));
    REQUIRE(validate_td(inst, nice).ok);
    auto ctxs = bag_contexts(inst, nice);
    bool has_active = false;
    for (const auto& c : ctxs) has_active |= !c.active.empty();
    REQUIRE(has_active);
    PartitionFamily fam;
    fam.per_node.resize(nice.nodes.size());  // all empty
    CHECK_FALSE(solve_conforming(inst, nice, fam).has_value());
    CHECK_FALSE(brute_force_conforming(inst, nice, fam).has_value());
}

TEST_CASE("family_trivial groups active terminals by demand group") {
    Instance inst = make_instance(5, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}},
                                  {{0, 2}, {3, 4}});
    TreeDecomposition td = ready_td(inst);
    auto fam = family_trivial(inst, td);
    auto ctxs = bag_contexts(inst, td);
    validate_family(td, ctxs, fam);
    auto groups = demand_groups(inst);
    for (int x = 0; x < (int)td.nodes.size(); ++x) {
        if (ctxs[x].active.empty()) {
            CHECK(fam.per_node[x].empty());
            continue;
        }
        REQUIRE(fam.per_node[x].size() == 1);
        for (const auto& block : fam.per_node[x][0].blocks) {
            // one block never mixes demand groups
            for (int t : block) CHECK(groups.group_of[t] == groups.group_of[block[0]]);
        }
    }
}

TEST_CASE("oracle equivalence on random instances and random families") {
    int trials = 0, infeasible_seen = 0;
    SplitMix64 famrng(4242);
    for (const auto& inst : testing::small_corpus(120, 60601)) {
        TreeDecomposition td = ready_td(inst);
        auto fam = testing::random_family(inst, td, famrng);
        auto dp = solve_conforming(inst, td, fam);
        auto oracle = brute_force_conforming(inst, td, fam);
        REQUIRE(dp.has_value() == oracle.has_value());
        if (dp) {
            CHECK(dp->cost == oracle->cost);
            Evaluation ev = evaluate_solution(inst, dp->forest);
            CHECK(ev.feasible);
            CHECK(ev.cost == dp->cost);
            // conformity rechecked from the returned forest's components
            auto ctxs = bag_contexts(inst, td);
            UnionFind uf(inst.n);
            for (int e : dp->forest.edge_ids) uf.unite(inst.edges[e].u, inst.edges[e].v);
            std::vector<int> comp(inst.n);
            for (int v = 0; v < inst.n; ++v) comp[v] = uf.find(v);
            for (int x = 0; x < (int)td.nodes.size(); ++x) {
                if (ctxs[x].active.empty()) continue;
                Partition induced = partition_by_components(ctxs[x].active, comp);
                bool allowed = false;
                for (const auto& pi : fam.per_node[x]) allowed |= pi == induced;
                CHECK(allowed);
            }
        } else {
            ++infeasible_seen;
        }
        ++trials;
    }
    CHECK(trials == 120);
    CHECK(infeasible_seen > 0);  // random families do produce infeasible cases
}

TEST_CASE("enlarging a partition set never increases the cost") {
    SplitMix64 famrng(777);
    for (const auto& inst : testing::small_corpus(40, 11011)) {
        TreeDecomposition td = ready_td(inst);
        auto ctxs = bag_contexts(inst, td);
        auto fam = testing::random_family(inst, td, famrng, 2);
        auto grown = fam;
        for (int x = 0; x < (int)td.nodes.size(); ++x) {
            if (ctxs[x].active.empty()) continue;
            auto all = testing::all_partitions(ctxs[x].active);
            std::set<Partition> merged(grown.per_node[x].begin(), grown.per_node[x].end());
            merged.insert(all[famrng.next_below(all.size())]);
            grown.per_node[x].assign(merged.begin(), merged.end());
        }
        auto base = solve_conforming(inst, td, fam);
        auto wide = solve_conforming(inst, td, grown);
        if (base) {
            REQUIRE(wide.has_value());
            CHECK(wide->cost <= base->cost);
        }
    }
}

TEST_CASE("with every partition allowed the DP equals the unconstrained optimum") {
    SplitMix64 rng(1);
    for (const auto& inst : testing::small_corpus(30, 355113)) {
        TreeDecomposition td = ready_td(inst);
        auto ctxs = bag_contexts(inst, td);
        PartitionFamily fam;
        fam.per_node.resize(td.nodes.size());
        for (int x = 0; x < (int)td.nodes.size(); ++x)
            if (!ctxs[x].active.empty()) fam.per_node[x] = testing::all_partitions(ctxs[x].active);
        auto dp = solve_conforming(inst, td, fam);
        REQUIRE(dp.has_value());
        CHECK(dp->cost == brute_force_opt(inst).cost);
    }
    (void)rng;
}

TEST_CASE("PF fixtures round-trip and drive the DP") {
    Instance inst = make_instance(4, {{0, 1, 2}, {1, 2, 2}, {2, 3, 2}, {0, 3, 2}},
                                  {{0, 1}, {2, 3}});
    TreeDecomposition td = ready_td(inst);
    auto ctxs = bag_contexts(inst, td);
    // fixture text: the demand-group split wherever terminals are active
    auto groups = demand_groups(inst);
    PartitionFamily fam;
    fam.per_node.resize(td.nodes.size());
    for (int x = 0; x < (int)td.nodes.size(); ++x) {
        if (ctxs[x].active.empty()) continue;
        std::map<int, std::vector<int>> split;
        for (int t : ctxs[x].active) split[groups.group_of[t]].push_back(t);
        std::vector<std::vector<int>> blocks;
        for (auto& [g, m] : split) blocks.push_back(m);
        fam.per_node[x].push_back(Partition::canonical(std::move(blocks)));
    }
    std::string text = write_family_text(fam);
    PartitionFamily parsed = parse_family_text(text, (int)td.nodes.size());
    CHECK(write_family_text(parsed) == text);
    auto direct = solve_conforming(inst, td, fam);
    auto via_text = solve_conforming(inst, td, parsed);
    REQUIRE(direct.has_value());
    REQUIRE(via_text.has_value());
    CHECK(direct->cost == via_text->cost);
}

TEST_CASE("zero-weight edges are handled exactly") {
    // internal transforms may add zero-cost edges; optimality must not drift
    SplitMix64 famrng(31415);
    u64 seed = 271;
    int done = 0;
    while (done < 30) {
        SplitMix64 rng(seed++);
        RandomProfile p;
        p.n = (int)rng.next_in(3, 7);
        p.m = (int)rng.next_in(p.n - 1, std::min<i64>(10, (i64)p.n * (p.n - 1) / 2));
        p.demand_count = (int)rng.next_in(1, 3);
        p.weight_max = 5;
        Instance base = gen_random_bounded(rng.next(), p);
        std::vector<Edge> edges = base.edges;
        for (auto& e : edges)
            if (rng.next() % 3 == 0) e.w = 0;
        Instance inst = make_instance(base.n, edges, base.demands, {},
                                      /*require_positive_weights=*/false);
        TreeDecomposition td = ready_td(inst);
        auto fam = testing::random_family(inst, td, famrng);
        auto dp = solve_conforming(inst, td, fam);
        auto oracle = brute_force_conforming(inst, td, fam);
        REQUIRE(dp.has_value() == oracle.has_value());
        if (dp) CHECK(dp->cost == oracle->cost);
        ++done;
    }
}

TEST_CASE("conforming DP rejects bad inputs") {
    Instance inst = testing::triangle();
    TreeDecomposition rough = heuristic_td(inst);
    PartitionFamily fam;
    fam.per_node.resize(rough.nodes.size());
    CHECK_THROWS_AS(solve_conforming(inst, rough, fam), InputError);

    TreeDecomposition td = ready_td(inst);
    PartitionFamily bad;
    bad.per_node.resize(td.nodes.size());
    bad.per_node[0].push_back(Partition::canonical({{0, 1, 2}}));  // wrong ground set
    CHECK_THROWS_AS(solve_conforming(inst, td, bad), InputError);
}
