#include <doctest.h>

#include <set>

#include "corpus.hpp"
#include "sf/epas.hpp"

using namespace sf;

TEST_CASE("internal eps satisfies the compounding inequality") {
    // (1+e)^2 + e <= 1 + e', maximal of the form e'/2^i
    CHECK(pick_internal_eps(Rat(1, 1)) == Rat(1, 4));
    CHECK(pick_internal_eps(Rat(1, 2)) == Rat(1, 8));
    for (Rat target : {Rat(1, 1), Rat(1, 2), Rat(1, 4), Rat(3, 7)}) {
        Rat e = pick_internal_eps(target);
        i128 a = e.num, b = e.den;
        i128 lhs = ((a + b) * (a + b) + a * b) * target.den;
        i128 rhs = (i128)b * b * (target.num + target.den);
        CHECK(lhs <= rhs);
    }
}

TEST_CASE("pow2_floor matches the examples") {
    CHECK(pow2_floor(5) == 4);
    CHECK(pow2_floor(8) == 8);
    CHECK(pow2_floor(1) == 1);
}

TEST_CASE("greedy net on collinear points") {
    // vertices on a line at positions 0, 1, 2, 5
    Instance inst = make_instance(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 3}}, {});
    DistOracle dist(inst);
    CHECK(greedy_delta_net({0, 1, 2, 3}, dist, Q128(1, 1)) == std::vector<int>{0, 2, 3});
    CHECK(greedy_delta_net({0, 1, 2, 3}, dist, Q128(0, 1)) == std::vector<int>{0, 1, 2, 3});
    CHECK(greedy_delta_net({0, 1, 2, 3}, dist, Q128(100, 1)) == std::vector<int>{0});
}

TEST_CASE("greedy net packs and covers on random metrics") {
    for (u64 seed = 0; seed < 200; ++seed) {
        SplitMix64 rng(seed * 77 + 5);
        RandomProfile p;
        p.n = (int)rng.next_in(4, 16);
        p.m = (int)rng.next_in(p.n - 1, std::min<i64>(2 * p.n, (i64)p.n * (p.n - 1) / 2));
        p.demand_count = 1;
        p.weight_max = 16;
        Instance inst = gen_random_bounded(rng.next(), p);
        DistOracle dist(inst);
        std::vector<int> pts;
        for (int v = 0; v < inst.n; ++v)
            if (rng.next() & 1) pts.push_back(v);
        if (pts.empty()) continue;
        Q128 delta((i64)rng.next_in(0, 24), 2);
        auto net = greedy_delta_net(pts, dist, delta);
        for (std::size_t i = 0; i < net.size(); ++i)
            for (std::size_t j = i + 1; j < net.size(); ++j)
                CHECK((i128)dist.dist(net[i], net[j]) * delta.den > delta.num);  // packing
        for (int q : pts) {
            bool covered = false;
            for (int v : net)
                if ((i128)dist.dist(q, v) * delta.den <= delta.num) covered = true;
            CHECK(covered);  // covering
        }
    }
}

TEST_CASE("zeta keeps bag-resident terminals as singletons") {
    Instance inst = testing::triangle();
    TreeDecomposition td;
    td.nodes.resize(1);
    td.nodes[0].bag = {0, 1, 2};
    td.root = 0;
    BagContext ctx;
    ctx.node = 0;
    ctx.in_subtree.assign(3, true);
    ctx.active = {0, 2};
    EpasParams params;
    params.eps_internal = Rat(1, 2);
    params.width = 2;
    params.height = 1;
    params.n_orig = 3;
    DistOracle dist(inst);
    ZetaPartition zp = zeta_partition(inst, td, ctx, params, dist);
    REQUIRE(zp.blocks.size() == 2);
    for (const auto& b : zp.blocks) {
        CHECK(b.kind == ZetaBlock::Kind::BagSingleton);
        CHECK(b.terminals.size() == 1);
    }
}

TEST_CASE("a dense far cluster collapses into one whole-annulus block") {
    // star: center 0, 200 equidistant leaves, pairwise leaf distance 2;
    // k=1, h=3, eps=1 puts the collapse threshold at 8*1*2*9 = 144
    int leaves = 200;
    std::vector<Edge> edges;
    std::vector<Demand> demands;
    for (int i = 1; i <= leaves; ++i) edges.push_back({0, i, 1});
    for (int i = 1; i <= leaves; ++i) demands.push_back({0, i});
    Instance inst = make_instance(leaves + 1, std::move(edges), std::move(demands));
    TreeDecomposition td;
    td.nodes.resize(1);
    td.nodes[0].bag = {0};
    td.root = 0;
    BagContext ctx;
    ctx.node = 0;
    ctx.in_subtree.assign(inst.n, true);
    for (int i = 1; i <= leaves; ++i) ctx.active.push_back(i);
    EpasParams params;
    params.eps_internal = Rat(1, 1);
    params.width = 1;
    params.height = 3;
    params.n_orig = inst.n;
    DistOracle dist(inst);
    ZetaPartition zp = zeta_partition(inst, td, ctx, params, dist);
    REQUIRE(zp.blocks.size() == 1);
    CHECK(zp.blocks[0].kind == ZetaBlock::Kind::WholeAnnulus);
    CHECK(zp.blocks[0].terminals.size() == (std::size_t)leaves);
}

TEST_CASE("close terminal pairs share a net cell") {
    // terminals 2 and 3 at distance 1 from each other, both ~8 from the bag
    Instance inst = make_instance(
        4, {{0, 1, 8}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}}, {{0, 2}, {0, 3}});
    TreeDecomposition td;
    td.nodes.resize(1);
    td.nodes[0].bag = {0};
    td.root = 0;
    BagContext ctx;
    ctx.node = 0;
    ctx.in_subtree.assign(4, true);
    ctx.active = {2, 3};
    EpasParams params;
    params.eps_internal = Rat(1, 1);
    params.width = 1;
    params.height = 2;
    params.n_orig = 4;
    DistOracle dist(inst);
    // net radius (1/2)*9 covers the distance-1 pair: one cell
    ZetaPartition zp = zeta_partition(inst, td, ctx, params, dist);
    REQUIRE(zp.blocks.size() == 1);
    CHECK(zp.blocks[0].terminals == std::vector<int>{2, 3});
}

TEST_CASE("single-block zeta collapses enumeration to the one-block partition") {
    Instance inst = make_instance(
        4, {{0, 1, 8}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}}, {{0, 2}, {0, 3}});
    TreeDecomposition td;
    td.nodes.resize(1);
    td.nodes[0].bag = {0};
    td.root = 0;
    BagContext ctx;
    ctx.node = 0;
    ctx.in_subtree.assign(4, true);
    ctx.active = {2, 3};
    EpasParams params;
    params.eps_internal = Rat(1, 1);
    params.width = 1;
    params.height = 2;
    params.n_orig = 4;
    params.w_min = 1;
    DistOracle dist(inst);
    ZetaPartition zp = zeta_partition(inst, td, ctx, params, dist);
    REQUIRE(zp.blocks.size() == 1);
    auto pis = enumerate_bag_partitions(inst, zp, ctx.active, params, dist);
    REQUIRE(pis.size() == 1);
    CHECK(pis[0] == Partition::canonical({{2, 3}}));
}

TEST_CASE("enumeration cap raises a resource error naming the node") {
    Instance inst = make_instance(
        4, {{0, 1, 8}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}}, {{0, 2}, {0, 3}});
    TreeDecomposition td;
    td.nodes.resize(1);
    td.nodes[0].bag = {0};
    td.root = 0;
    BagContext ctx;
    ctx.node = 0;
    ctx.in_subtree.assign(4, true);
    ctx.active = {2, 3};
    EpasParams params;
    params.eps_internal = Rat(1, 1);
    params.width = 1;
    params.height = 2;
    params.n_orig = 4;
    DistOracle dist(inst);
    ZetaPartition zp = zeta_partition(inst, td, ctx, params, dist);
    CHECK_THROWS_AS(enumerate_bag_partitions(inst, zp, ctx.active, params, dist, 1),
                    ResourceError);
}

TEST_CASE("merge simulator leaves single components alone") {
    Instance inst = testing::triangle();
    TreeDecomposition td = make_nice(heuristic_td(inst));
    Forest f = brute_force_opt(inst).forest;
    MergeSimulation sim = simulate_merge_rules(inst, td, f, Rat(1, 2));
    CHECK(sim.f_eps.edge_ids == f.edge_ids);
    CHECK(sim.f_tilde.edge_ids == f.edge_ids);
}

TEST_CASE("touching components merge under rule 1") {
    // two demand components joined by a zero-length bridge
    Instance inst = make_instance(
        5, {{0, 1, 3}, {1, 2, 0}, {2, 3, 3}, {3, 4, 5}}, {{0, 1}, {2, 3}},
        {}, /*require_positive_weights=*/false);
    TreeDecomposition td = make_nice(heuristic_td(inst));
    Forest f_star = Forest::of({0, 2});  // components {0-1} and {2-3}
    MergeSimulation sim = simulate_merge_rules(inst, td, f_star, Rat(1, 4));
    // dist = 0 <= any threshold: merged via the zero edge
    UnionFind uf(inst.n);
    for (int e : sim.f_eps.edge_ids) uf.unite(inst.edges[e].u, inst.edges[e].v);
    CHECK(uf.same(0, 3));
}

TEST_CASE("merge simulator respects the charging bounds on the corpus") {
    for (const auto& inst : testing::small_corpus(40, 13331)) {
        TreeDecomposition td = make_nice(heuristic_td(inst));
        Forest f_star = brute_force_opt(inst).forest;
        Cost star_cost = evaluate_solution(inst, f_star).cost;
        for (Rat eps : {Rat(1, 1), Rat(1, 2)}) {
            MergeSimulation sim = simulate_merge_rules(inst, td, f_star, eps);
            Cost eps_cost = evaluate_solution(inst, sim.f_eps).cost;
            Cost tilde_cost = evaluate_solution(inst, sim.f_tilde).cost;
            // cost(F_eps) <= (1+eps) cost(F*), cost(F~) <= (1+eps) cost(F_eps)
            CHECK((i128)eps_cost * eps.den <= (i128)star_cost * (eps.den + eps.num));
            CHECK((i128)tilde_cost * eps.den <= (i128)eps_cost * (eps.den + eps.num));
        }
    }
}

TEST_CASE("solve_epas meets the guarantee on the triangle") {
    Instance inst = testing::triangle();
    Forest f = solve_epas(inst, std::nullopt, Rat(1, 1));
    Evaluation ev = evaluate_solution(inst, f);
    CHECK(ev.feasible);
    CHECK(ev.cost <= 4);  // (1+1) * OPT with OPT = 2
    CHECK(ev.cost == 2);  // single demand group: exact
}

TEST_CASE("solve_epas stays within (1+eps) of the optimum on the corpus") {
    int runs = 0;
    for (const auto& inst : testing::small_corpus(25, 271828, 8, 12)) {
        Cost opt = brute_force_opt(inst).cost;
        for (Rat target : {Rat(1, 1), Rat(1, 2)}) {
            Forest f = solve_epas(inst, std::nullopt, target);
            Evaluation ev = evaluate_solution(inst, f);
            CHECK(ev.feasible);
            // cost <= (1 + eps') * OPT, exact rational comparison
            CHECK((i128)ev.cost * target.den <= (i128)opt * (target.den + target.num));
            ++runs;
        }
    }
    CHECK(runs == 50);
}

TEST_CASE("single demand group instances solve exactly") {
    int done = 0;
    u64 seed = 33;
    while (done < 10) {
        SplitMix64 rng(seed++);
        RandomProfile p;
        p.n = (int)rng.next_in(4, 7);
        p.m = (int)rng.next_in(p.n - 1, std::min<i64>(10, (i64)p.n * (p.n - 1) / 2));
        p.demand_count = 1;
        p.weight_max = 6;
        Instance base = gen_random_bounded(rng.next(), p);
        // chain demands through one group
        std::vector<Demand> chain;
        for (int v = 0; v + 1 < std::min(base.n, 4); ++v) chain.push_back({v, v + 1});
        Instance inst = make_instance(base.n, base.edges, chain);
        Forest f = solve_epas(inst, std::nullopt, Rat(1, 2));
        Evaluation ev = evaluate_solution(inst, f);
        CHECK(ev.feasible);
        CHECK(ev.cost == brute_force_opt(inst).cost);
        ++done;
    }
}

TEST_CASE("epas handles ladders wider than the random corpus") {
    // ladder graphs have treewidth 2 and force multi-vertex bags
    for (int rungs : {4, 5, 6}) {
        int n = 2 * rungs;
        std::vector<Edge> edges;
        SplitMix64 rng(rungs * 97);
        for (int i = 0; i + 1 < rungs; ++i) {
            edges.push_back({2 * i, 2 * i + 2, (Weight)rng.next_in(1, 9)});
            edges.push_back({2 * i + 1, 2 * i + 3, (Weight)rng.next_in(1, 9)});
        }
        for (int i = 0; i < rungs; ++i)
            edges.push_back({2 * i, 2 * i + 1, (Weight)rng.next_in(1, 9)});
        std::vector<Demand> demands{{0, n - 1}, {1, 2 * (rungs / 2)}};
        Instance inst = make_instance(n, edges, demands);
        Cost opt = brute_force_opt(inst).cost;
        for (Rat target : {Rat(1, 1), Rat(1, 2), Rat(1, 4)}) {
            EpasRun run = run_epas(inst, std::nullopt, target);
            Evaluation ev = evaluate_solution(inst, run.forest);
            CHECK(ev.feasible);
            CHECK((i128)ev.cost * target.den <= (i128)opt * (target.den + target.num));
        }
    }
}

TEST_CASE("epas rejects a non-positive eps and invalid decompositions") {
    Instance inst = testing::triangle();
    CHECK_THROWS_AS(solve_epas(inst, std::nullopt, Rat(0, 1)), InputError);
    TreeDecomposition junk;
    junk.nodes.resize(1);
    junk.nodes[0].bag = {0};  // misses vertices and edges
    junk.root = 0;
    CHECK_THROWS_AS(solve_epas(inst, junk, Rat(1, 1)), InputError);
}
