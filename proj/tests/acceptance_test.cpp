// Acceptance suite: one verdict line per criterion, nonzero exit when any
// fails. Everything here is exact integer/rational arithmetic; seeds are
// fixed so every run sees the same corpus.

#include <chrono>
#include <cstdio>
#include <map>
#include <set>

#include "corpus.hpp"
#include "sf/epas.hpp"
#include "sf/fes_solver.hpp"
#include "sf/reduce.hpp"
#include "sf/vc_solver.hpp"

using namespace sf;
using namespace sf::testing;

namespace {

int failures = 0;

void verdict(int criterion, bool pass, const std::string& what) {
    std::printf("criterion %2d %s: %s\n", criterion, pass ? "PASS" : "FAIL", what.c_str());
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string counts(int ok, int total) {
    return std::to_string(ok) + "/" + std::to_string(total);
}

TreeDecomposition dp_ready(const Instance& inst) {
    return push_terminals_to_leaves(inst, make_nice(heuristic_td(inst)));
}

}  // namespace

// 1. solve_fes == brute_force_opt on >= 300 connected instances, under 60 s.
static void criterion_1(const std::vector<Instance>& corpus) {
    auto start = std::chrono::steady_clock::now();
    int ok = 0, total = 0;
    for (const auto& inst : corpus) {
        ++total;
        Forest f = solve_fes(inst);
        Evaluation ev = evaluate_solution(inst, f);
        if (ev.feasible && ev.cost == brute_force_opt(inst).cost) ++ok;
    }
    double secs = seconds_since(start);
    verdict(1, ok == total && total >= 300 && secs < 60.0,
            "FES oracle equivalence " + counts(ok, total) + " in " +
                std::to_string(secs) + " s");
}

// 2. solve_vc == brute_force_opt where a certified cover of size <= 6 exists.
static void criterion_2(const std::vector<Instance>& corpus) {
    auto start = std::chrono::steady_clock::now();
    int ok = 0, total = 0;
    for (const auto& inst : corpus) {
        CoverCertificate cert = greedy_cover(inst);
        if (cert.size() > 6) continue;
        ++total;
        Forest f = solve_vc(inst, cert);
        Evaluation ev = evaluate_solution(inst, f);
        if (ev.feasible && ev.cost == brute_force_opt(inst).cost) ++ok;
    }
    double secs = seconds_since(start);
    verdict(2, ok == total && total > 0 && secs < 60.0,
            "VC oracle equivalence " + counts(ok, total) + " (cover <= 6) in " +
                std::to_string(secs) + " s");
}

// 3. solve_conforming == brute_force_conforming on >= 200 family pairs.
static void criterion_3(const std::vector<Instance>& corpus) {
    SplitMix64 famrng(90901);
    int ok = 0, total = 0;
    for (const auto& inst : corpus) {
        if (total >= 220) break;
        TreeDecomposition td = dp_ready(inst);
        PartitionFamily fam = random_family(inst, td, famrng);
        ++total;
        auto dp = solve_conforming(inst, td, fam);
        auto oracle = brute_force_conforming(inst, td, fam);
        if (dp.has_value() != oracle.has_value()) continue;
        if (!dp || dp->cost == oracle->cost) ++ok;
    }
    verdict(3, ok == total && total >= 200,
            "conforming DP equivalence " + counts(ok, total) + " family pairs");
}

// 4. EPAS guarantee for eps' in {1, 1/2, 1/4} wherever the width used is <= 2.
static void criterion_4(const std::vector<Instance>& corpus) {
    auto start = std::chrono::steady_clock::now();
    int ok = 0, total = 0;
    for (const auto& inst : corpus) {
        Cost opt = brute_force_opt(inst).cost;
        for (Rat target : {Rat(1, 1), Rat(1, 2), Rat(1, 4)}) {
            EpasRun run = run_epas(inst, std::nullopt, target);
            if (run.params.width > 2) continue;
            ++total;
            Evaluation ev = evaluate_solution(inst, run.forest);
            bool within = (i128)ev.cost * target.den <= (i128)opt * (target.den + target.num);
            if (ev.feasible && within) ++ok;
        }
    }
    double secs = seconds_since(start);
    verdict(4, ok == total && total > 0 && secs < 600.0,
            "EPAS within (1+eps')*OPT on " + counts(ok, total) + " runs (width <= 2) in " +
                std::to_string(secs) + " s");
}

// 5. Merge rules stay within their charging bounds on the whole corpus.
static void criterion_5(const std::vector<Instance>& corpus) {
    int ok = 0, total = 0;
    for (const auto& inst : corpus) {
        TreeDecomposition td = make_nice(heuristic_td(inst));
        Forest f_star = brute_force_opt(inst).forest;
        Cost star = evaluate_solution(inst, f_star).cost;
        for (Rat eps : {Rat(1, 1), Rat(1, 2)}) {
            ++total;
            MergeSimulation sim = simulate_merge_rules(inst, td, f_star, eps);
            Cost ec = evaluate_solution(inst, sim.f_eps).cost;
            Cost tc = evaluate_solution(inst, sim.f_tilde).cost;
            bool first = (i128)ec * eps.den <= (i128)star * (eps.den + eps.num);
            bool second = (i128)tc * eps.den <= (i128)ec * (eps.den + eps.num);
            if (first && second) ++ok;
        }
    }
    verdict(5, ok == total, "charging bounds (rules 1 and 2) on " + counts(ok, total));
}

// 6. Refinement blocks respect f_eps; f_tilde's partitions are enumerated.
static void criterion_6(const std::vector<Instance>& corpus) {
    int refine_ok = 0, conform_ok = 0, total = 0;
    for (const auto& inst : corpus) {
        for (Rat eps : {Rat(1, 1), Rat(1, 2)}) {
            Reduction red = reduce_aspect_ratio(inst, eps);
            const Instance& g = red.reduced;
            if (g.demands.empty()) continue;
            TreeDecomposition td = dp_ready(g);
            if (td.width() > 2) continue;
            ++total;
            EpasParams params;
            params.eps_target = eps;
            params.eps_internal = eps;
            params.width = td.width();
            params.height = td.height();
            params.n_orig = inst.n;
            auto ext = weight_extremes(g);
            params.w_min = ext ? ext->second : 1;

            Forest f_star = brute_force_opt(g).forest;
            MergeSimulation sim = simulate_merge_rules(g, td, f_star, eps);
            UnionFind eps_comp(g.n);
            for (int e : sim.f_eps.edge_ids)
                eps_comp.unite(g.edges[e].u, g.edges[e].v);
            UnionFind tilde_comp(g.n);
            for (int e : sim.f_tilde.edge_ids)
                tilde_comp.unite(g.edges[e].u, g.edges[e].v);

            DistOracle dist(g);
            auto ctxs = bag_contexts(g, td);
            bool refined = true, conforming = true;
            for (int x = 0; x < (int)td.nodes.size(); ++x) {
                if (ctxs[x].active.empty()) continue;
                ZetaPartition zeta = zeta_partition(g, td, ctxs[x], params, dist);
                for (const auto& block : zeta.blocks)
                    for (int t : block.terminals)
                        if (!eps_comp.same(t, block.terminals[0])) refined = false;
                auto pis = enumerate_bag_partitions(g, zeta, ctxs[x].active, params, dist);
                std::vector<int> comp(g.n);
                for (int v = 0; v < g.n; ++v) comp[v] = tilde_comp.find(v);
                Partition induced = partition_by_components(ctxs[x].active, comp);
                if (std::find(pis.begin(), pis.end(), induced) == pis.end())
                    conforming = false;
            }
            if (refined) ++refine_ok;
            if (conforming) ++conform_ok;
        }
    }
    verdict(6, refine_ok == total && conform_ok == total && total > 0,
            "zeta refinement " + counts(refine_ok, total) + ", conformity " +
                counts(conform_ok, total) + " (width <= 2, eps >= 1/2)");
}

// 7. Skeleton bounds, net packing/covering, per-component net sizes.
static void criterion_7(const std::vector<Instance>& corpus) {
    int skel_ok = 0, skel_total = 0;
    for (const auto& inst : corpus) {
        Reduction red = apply_rule3(inst);
        if (red.reduced.edges.empty()) continue;
        ++skel_total;
        TopologySkeleton sk = build_skeleton(red.reduced);
        int k = (int)sk.feedback_edges.size();
        if (sk.degree3_count(red.reduced) <= 2 * k && (int)sk.topo_edges.size() <= 5 * k)
            ++skel_ok;
    }

    int net_trials = 0, net_ok = 0;
    for (u64 seed = 0; seed < 1000; ++seed) {
        SplitMix64 rng(seed * 31 + 7);
        RandomProfile p;
        p.n = (int)rng.next_in(4, 24);
        p.m = (int)rng.next_in(p.n - 1, std::min<i64>(3 * p.n, (i64)p.n * (p.n - 1) / 2));
        p.demand_count = 1;
        p.weight_max = 32;
        Instance inst = gen_random_bounded(rng.next(), p);
        DistOracle dist(inst);
        std::vector<int> pts;
        for (int v = 0; v < inst.n; ++v)
            if (rng.next() % 3) pts.push_back(v);
        if (pts.empty()) continue;
        ++net_trials;
        Q128 delta((i64)rng.next_in(0, 40), (i64)rng.next_in(1, 3));
        auto net = greedy_delta_net(pts, dist, delta);
        bool good = true;
        for (std::size_t i = 0; i < net.size() && good; ++i)
            for (std::size_t j = i + 1; j < net.size(); ++j)
                if (!((i128)dist.dist(net[i], net[j]) * delta.den > delta.num)) good = false;
        for (int q : pts) {
            bool covered = false;
            for (int v : net)
                if ((i128)dist.dist(q, v) * delta.den <= delta.num) covered = true;
            if (!covered) good = false;
        }
        if (good) ++net_ok;
    }

    int comp_nets = 0, comp_nets_ok = 0;
    for (const auto& inst : corpus) {
        TreeDecomposition td = dp_ready(inst);
        int k = std::max(1, td.width());
        auto ctxs = bag_contexts(inst, td);
        DistOracle dist(inst);
        auto comps_forest = brute_force_opt(inst).forest;
        UnionFind uf(inst.n);
        for (int e : comps_forest.edge_ids) uf.unite(inst.edges[e].u, inst.edges[e].v);
        for (Rat eps : {Rat(1, 1), Rat(1, 2)}) {
            i64 cap = (4 * (i64)k * eps.den) / eps.num;
            for (int x = 0; x < (int)td.nodes.size(); ++x) {
                if (ctxs[x].active.empty()) continue;
                // group the bag's active terminals by optimum component
                std::map<int, std::vector<int>> per_comp;
                for (int t : ctxs[x].active) per_comp[uf.find(t)].push_back(t);
                for (auto& [root, terms] : per_comp) {
                    Cost comp_cost = 0;
                    for (int e : comps_forest.edge_ids)
                        if (uf.find(inst.edges[e].u) == root) comp_cost += inst.edges[e].w;
                    if (comp_cost == 0) continue;
                    Q128 radius((i128)eps.num * pow2_floor(comp_cost), (i128)eps.den * k);
                    auto net = greedy_delta_net(terms, dist, radius);
                    ++comp_nets;
                    if ((i64)net.size() <= cap) ++comp_nets_ok;
                }
            }
        }
    }
    verdict(7,
            skel_ok == skel_total && net_ok == net_trials && net_trials >= 900 &&
                comp_nets_ok == comp_nets,
            "skeleton bounds " + counts(skel_ok, skel_total) + ", net properties " +
                counts(net_ok, net_trials) + ", component nets " +
                counts(comp_nets_ok, comp_nets));
}

// 8. Two-pole min-cut solver vs restricted brute force, 100 seeded instances.
static void criterion_8() {
    u64 seed = 8088;
    int ok = 0, total = 0;
    while (total < 100) {
        SplitMix64 rng(seed++);
        int paths = (int)rng.next_in(2, 4);
        std::vector<Edge> edges;
        std::vector<std::vector<int>> inner(paths);
        int next = 2;
        for (int p = 0; p < paths; ++p) {
            int len = (int)rng.next_in(1, 3);
            int prev = 0;
            for (int i = 0; i < len; ++i) {
                inner[p].push_back(next);
                edges.push_back({prev, next, (Weight)rng.next_in(1, 8)});
                prev = next++;
            }
            edges.push_back({prev, 1, (Weight)rng.next_in(1, 8)});
        }
        if (edges.size() > 12) continue;
        std::set<std::pair<int, int>> dset;
        int want = (int)rng.next_in(1, 3);
        for (int i = 0; i < want; ++i) {
            int pa = (int)rng.next_below(paths), pb = (int)rng.next_below(paths);
            if (pa == pb) continue;
            int a = inner[pa][rng.next_below(inner[pa].size())];
            int b = inner[pb][rng.next_below(inner[pb].size())];
            dset.insert({std::min(a, b), std::max(a, b)});
        }
        if (dset.empty()) continue;
        std::vector<Demand> demands;
        for (auto [s, t] : dset) demands.push_back(Demand{s, t});
        Instance inst = make_instance(next, edges, demands);
        ++total;

        Forest f = solve_two_pole(inst, 0, 1);
        Evaluation ev = evaluate_solution(inst, f);
        Cost best = ~Cost(0);
        int m = (int)inst.edges.size();
        for (u64 mask = 0; mask < (u64(1) << m); ++mask) {
            UnionFind uf(inst.n);
            Cost cost = 0;
            for (int e = 0; e < m; ++e)
                if (mask >> e & 1) {
                    uf.unite(inst.edges[e].u, inst.edges[e].v);
                    cost += inst.edges[e].w;
                }
            if (uf.same(0, 1)) continue;
            bool feasible = true;
            for (const auto& d : inst.demands)
                if (!uf.same(d.s, d.t)) feasible = false;
            if (feasible) best = std::min(best, cost);
        }
        UnionFind uf(inst.n);
        for (int e : f.edge_ids) uf.unite(inst.edges[e].u, inst.edges[e].v);
        if (ev.feasible && !uf.same(0, 1) && ev.cost == best) ++ok;
    }
    verdict(8, ok == total, "two-pole min-cut vs restricted brute force " + counts(ok, total));
}

// 9. Rebalance contracts on paths, cycles and the random corpus, up to n=1024.
static void criterion_9(const std::vector<Instance>& corpus) {
    int ok = 0, total = 0;
    auto check = [&](const Instance& inst) {
        ++total;
        TreeDecomposition td = heuristic_td(inst);
        int k = td.width();
        TreeDecomposition bal = rebalance(inst, td);
        bool good = bal.nice && validate_td(inst, bal).ok &&
                    bal.width() <= rebalance_width_bound(k) &&
                    (i64)bal.height() <= rebalance_height_bound(k, inst.n);
        if (good) ++ok;
    };
    for (int n : {64, 256, 1024}) {
        std::vector<Edge> path_edges, cycle_edges;
        for (int v = 0; v + 1 < n; ++v) path_edges.push_back({v, v + 1, 1});
        check(make_instance(n, path_edges, {{0, n - 1}}));
        for (int v = 0; v < n; ++v) cycle_edges.push_back({v, (v + 1) % n, 1});
        check(make_instance(n, cycle_edges, {{0, n / 2}}));
    }
    for (std::size_t i = 0; i < corpus.size(); i += 4) check(corpus[i]);
    verdict(9, ok == total,
            "rebalance width <= " + std::to_string(kRebalanceWidthFactor) +
                "(k+1)-1, height <= " + std::to_string(kRebalanceHeightFactor) +
                "(k+1)(1+log2 n): " + counts(ok, total));
}

// 10. two_approx within factor two of the optimum everywhere.
static void criterion_10(const std::vector<Instance>& corpus) {
    int ok = 0, total = 0;
    for (const auto& inst : corpus) {
        ++total;
        Forest f = two_approx_primal_dual(inst);
        Evaluation ev = evaluate_solution(inst, f);
        if (ev.feasible && ev.cost <= 2 * brute_force_opt(inst).cost) ++ok;
    }
    verdict(10, ok == total, "primal-dual within factor two " + counts(ok, total));
}

// 11. Gadget instances route satisfying assignments at exactly the budget.
static void criterion_11() {
    int ok = 0, total = 0;
    u64 seed = 1111;
    while (total < 25) {
        SplitMix64 rng(seed++);
        Cnf3 psi;
        psi.variable_count = (int)rng.next_in(2, 8);
        int clause_count = (int)rng.next_in(1, 6);
        for (int c = 0; c < clause_count; ++c) {
            std::set<int> vars;
            int width = (int)rng.next_in(1, std::min(3, psi.variable_count));
            while ((int)vars.size() < width)
                vars.insert((int)rng.next_in(1, psi.variable_count));
            std::vector<int> clause;
            for (int v : vars) clause.push_back(rng.next() & 1 ? v : -v);
            psi.clauses.push_back(clause);
        }
        Cnf3 phi = tsat3_transform(psi);
        // exhaustive satisfiability over the transformed variables
        std::vector<bool> witness;
        bool sat = false;
        for (u64 mask = 0; mask < (u64(1) << phi.variable_count) && !sat; ++mask) {
            bool all = true;
            for (const auto& clause : phi.clauses) {
                bool one = false;
                for (int lit : clause) {
                    int var = lit > 0 ? lit : -lit;
                    if ((lit > 0) == bool(mask >> (var - 1) & 1)) one = true;
                }
                if (!one) {
                    all = false;
                    break;
                }
            }
            if (all) {
                sat = true;
                witness.assign(phi.variable_count + 1, false);
                for (int v = 1; v <= phi.variable_count; ++v)
                    witness[v] = mask >> (v - 1) & 1;
            }
        }
        if (!sat) continue;
        ++total;
        auto [inst, layout] = sat_to_steiner_forest(phi);
        RoutedSolution routed = assignment_to_solution(inst, layout, witness);
        Evaluation ev = evaluate_solution(inst, routed.forest);
        bool clause_independent = true;
        std::set<int> clause_vertices;
        for (auto [c1, c2] : layout.clause_vertices) {
            clause_vertices.insert(c1);
            clause_vertices.insert(c2);
        }
        for (const auto& e : inst.edges)
            if (clause_vertices.count(e.u) && clause_vertices.count(e.v))
                clause_independent = false;
        if (routed.all_clauses_routed && ev.feasible && ev.cost == layout.budget &&
            is_vertex_cover(inst, layout.cover_witness) && clause_independent)
            ++ok;
    }
    verdict(11, ok == total && total == 25,
            "gadget routes satisfying assignments at budget " + counts(ok, total));
}

// 12. Aspect-ratio contract: ratio bound and (1+eps)-lifting.
static void criterion_12(const std::vector<Instance>& corpus) {
    int ok = 0, total = 0;
    for (const auto& inst : corpus) {
        for (Rat eps : {Rat(1, 1), Rat(1, 2)}) {
            ++total;
            Reduction red = reduce_aspect_ratio(inst, eps);
            bool ratio_ok = true;
            if (auto ext = weight_extremes(red.reduced)) {
                auto [hi, lo] = *ext;
                ratio_ok = (i128)hi * eps.num <= (i128)lo * 2 * inst.n * eps.den;
            }
            Cost opt = brute_force_opt(inst).cost;
            Forest reduced_best;
            if (!red.reduced.demands.empty())
                reduced_best = brute_force_opt(red.reduced).forest;
            Forest lifted = lift_solution(reduced_best, red);
            Evaluation ev = evaluate_solution(inst, lifted);
            bool lift_ok =
                ev.feasible && (i128)ev.cost * eps.den <= (i128)opt * (eps.den + eps.num);
            if (ratio_ok && lift_ok) ++ok;
        }
    }
    verdict(12, ok == total, "aspect ratio and lifting contract " + counts(ok, total));
}

int main() {
    auto corpus = small_corpus(300, 424242);
    std::printf("corpus: %zu seeded connected instances (n <= 9, m <= 14, w <= 8)\n",
                corpus.size());
    criterion_1(corpus);
    criterion_2(corpus);
    criterion_3(corpus);
    criterion_4(corpus);
    criterion_5(corpus);
    criterion_6(corpus);
    criterion_7(corpus);
    criterion_8();
    criterion_9(corpus);
    criterion_10(corpus);
    criterion_11();
    criterion_12(corpus);
    if (failures) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
