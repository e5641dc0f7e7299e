#include <doctest.h>

#include "corpus.hpp"
#include "sf/epas.hpp"
#include "sf/fes_solver.hpp"
#include "sf/vc_solver.hpp"

using namespace sf;

TEST_CASE("cover preprocessing moves terminals out of the cover") {
    // triangle with demand {1,3}; cover {1,2} (1-based)
    Instance inst = testing::triangle();
    CoverCertificate cert{{0, 1}};
    CoverPreprocess pre = cover_preprocess(inst, cert);
    // terminal 0 was covered: one helper vertex, one zero-cost edge
    CHECK(pre.preprocessed.n == 4);
    CHECK(pre.helper_of == std::vector<int>{0});
    int zero_edges = 0;
    for (const auto& e : pre.preprocessed.edges) zero_edges += e.w == 0;
    CHECK(zero_edges == 1);
    // demands moved onto the helper
    auto term = pre.preprocessed.terminal_mask();
    CHECK_FALSE(term[0]);
    CHECK(term[3]);
    validate_cover(pre.preprocessed, pre.cert);

    Instance no_cover_terminals = make_instance(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}},
                                                {{1, 2}});
    CoverPreprocess idpre = cover_preprocess(no_cover_terminals, CoverCertificate{{0}});
    CHECK(idpre.preprocessed.n == 4);
    CHECK(idpre.helper_of.empty());
}

TEST_CASE("vc decomposition is nice, narrow and single-partition") {
    Instance inst = make_instance(
        6, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 4, 1}, {1, 5, 1}},
        {{2, 3}, {4, 5}});
    CoverCertificate cert{{0, 1}};
    CoverPreprocess pre = cover_preprocess(inst, cert);
    auto [td, fam] = build_vc_decomposition(pre.preprocessed, pre.cert);
    CHECK(td.nice);
    CHECK(validate_td(pre.preprocessed, td).ok);
    CHECK(td.width() <= (int)cert.cover.size());
    for (const auto& set : fam.per_node) CHECK(set.size() <= 1);
    // terminals only live in leaf bags
    auto term = pre.preprocessed.terminal_mask();
    for (const auto& nd : td.nodes) {
        if (nd.children.empty()) continue;
        for (int v : nd.bag) CHECK_FALSE(term[v]);
    }
    // p stays below the number of non-root group-tree nodes
    auto groups = demand_groups(pre.preprocessed);
    u64 bound = 0;
    for (const auto& g : groups.groups) bound += 3 * g.size() - 2;
    CHECK(fam.total_count() <= bound);
    CHECK(groups.groups.size() <= (std::size_t)pre.preprocessed.n / 2);
}

TEST_CASE("solve_vc matches spec examples") {
    CHECK(evaluate_solution(testing::triangle(),
                            solve_vc(testing::triangle(), CoverCertificate{{0, 1}}))
              .cost == 2);

    Instance cyc = make_instance(4, {{0, 1, 2}, {1, 2, 2}, {2, 3, 2}, {0, 3, 2}},
                                 {{0, 1}, {2, 3}});
    CHECK(evaluate_solution(cyc, solve_vc(cyc, CoverCertificate{{0, 2}})).cost == 4);

    // star: both pairs route through the center
    Instance star = make_instance(5, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}},
                                  {{1, 2}, {3, 4}});
    CHECK(evaluate_solution(star, solve_vc(star, CoverCertificate{{0}})).cost == 4);
}

TEST_CASE("solve_vc equals brute force on random cover-bounded instances") {
    int done = 0;
    u64 seed = 505;
    while (done < 60) {
        SplitMix64 rng(seed++);
        RandomProfile p;
        p.target = RandomProfile::Target::VertexCover;
        p.target_k = (int)rng.next_in(1, 4);
        p.n = (int)rng.next_in(p.target_k + 1, 9);
        i64 cap = std::min<i64>((i64)p.target_k * (p.target_k - 1) / 2 +
                                    (i64)p.target_k * (p.n - p.target_k),
                                14);
        if (cap < p.n - 1) continue;
        p.m = (int)rng.next_in(p.n - 1, cap);
        p.demand_count = (int)rng.next_in(1, 4);
        p.weight_max = 8;
        Instance inst = gen_random_bounded(rng.next(), p);
        std::vector<int> cover;
        for (int v = 0; v < p.target_k; ++v) cover.push_back(v);
        Forest f = solve_vc(inst, CoverCertificate{cover});
        Evaluation ev = evaluate_solution(inst, f);
        CHECK(ev.feasible);
        CHECK(ev.cost == brute_force_opt(inst).cost);
        ++done;
    }
}

TEST_CASE("the optimum conforms to the one-partition family post hoc") {
    for (const auto& inst : testing::small_corpus(25, 2024)) {
        CoverCertificate cert = greedy_cover(inst);
        CoverPreprocess pre = cover_preprocess(inst, cert);
        auto [td, fam] = build_vc_decomposition(pre.preprocessed, pre.cert);
        auto res = solve_conforming(pre.preprocessed, td, fam);
        REQUIRE(res.has_value());
        CHECK(res->cost == brute_force_opt(inst).cost);
        auto ctxs = bag_contexts(pre.preprocessed, td);
        UnionFind uf(pre.preprocessed.n);
        for (int e : res->forest.edge_ids)
            uf.unite(pre.preprocessed.edges[e].u, pre.preprocessed.edges[e].v);
        std::vector<int> comp(pre.preprocessed.n);
        for (int v = 0; v < pre.preprocessed.n; ++v) comp[v] = uf.find(v);
        for (int x = 0; x < (int)td.nodes.size(); ++x) {
            if (ctxs[x].active.empty()) continue;
            REQUIRE(fam.per_node[x].size() == 1);
            CHECK(partition_by_components(ctxs[x].active, comp) == fam.per_node[x][0]);
        }
    }
}

TEST_CASE("solve_vc works with the greedy fallback cover") {
    for (const auto& inst : testing::small_corpus(20, 60)) {
        Forest f = solve_vc(inst);
        Evaluation ev = evaluate_solution(inst, f);
        CHECK(ev.feasible);
        CHECK(ev.cost == brute_force_opt(inst).cost);
    }
}

TEST_CASE("solvers return the empty forest when nothing is demanded") {
    Instance inst = make_instance(4, {{0, 1, 3}, {1, 2, 3}, {2, 3, 3}, {0, 3, 3}}, {});
    CHECK(solve_vc(inst, CoverCertificate{{0, 2}}).edge_ids.empty());
    CHECK(solve_fes(inst).edge_ids.empty());
    CHECK(solve_epas(inst, std::nullopt, Rat(1, 2)).edge_ids.empty());
}

TEST_CASE("solve_vc validates covers and reports infeasibility") {
    Instance inst = testing::triangle();
    CHECK_THROWS_AS(solve_vc(inst, CoverCertificate{{0}}), InputError);
    Instance split = make_instance(4, {{0, 1, 1}, {2, 3, 1}}, {{0, 2}});
    CHECK_THROWS_AS(solve_vc(split, CoverCertificate{{0, 2}}), InfeasibleError);
}
