#include "sf/epas.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <set>
#include <string>

#include "sf/baselines.hpp"
#include "sf/errors.hpp"

namespace sf {

Rat pick_internal_eps(const Rat& eps_target) {
    if (!eps_target.positive()) throw InputError("eps must be positive");
    // largest eps'/2^i with (1+eps)^2 + eps <= 1 + eps'
    for (int i = 0;; ++i) {
        Rat eps(eps_target.num, eps_target.den << i);
        i128 a = eps.num, b = eps.den;
        i128 lhs = ((a + b) * (a + b) + a * b) * eps_target.den;
        i128 rhs = (i128)b * b * (eps_target.num + eps_target.den);
        if (lhs <= rhs) return eps;
        if (i > 62) throw InputError("eps target too small to refine");
    }
}

// ---------------------------------------------------------------------------
// distances

DistOracle::DistOracle(const Instance& inst)
    : inst_(&inst), dist_(inst.n), pred_edge_(inst.n), ready_(inst.n, false) {}

void DistOracle::ensure(int source) const {
    if (ready_[source]) return;
    int n = inst_->n;
    auto& dist = dist_[source];
    auto& pred = pred_edge_[source];
    dist.assign(n, kUnreachable);
    pred.assign(n, -1);
    auto adj = inst_->adjacency();
    std::vector<bool> done(n, false);
    dist[source] = 0;
    for (int round = 0; round < n; ++round) {
        int u = -1;
        for (int v = 0; v < n; ++v)
            if (!done[v] && dist[v] != kUnreachable && (u < 0 || dist[v] < dist[u])) u = v;
        if (u < 0) break;
        done[u] = true;
        for (auto [v, e] : adj[u]) {
            Cost nd = dist[u] + inst_->edges[e].w;
            int from_cur = -1;
            if (pred[v] >= 0)
                from_cur = inst_->edges[pred[v]].u == v ? inst_->edges[pred[v]].v
                                                        : inst_->edges[pred[v]].u;
            // lowest-id predecessor on ties keeps the tree deterministic
            if (nd < dist[v] || (nd == dist[v] && from_cur >= 0 && u < from_cur)) {
                dist[v] = nd;
                pred[v] = e;
            }
        }
    }
    ready_[source] = true;
}

Cost DistOracle::dist(int u, int v) const {
    ensure(u);
    return dist_[u][v];
}

Cost DistOracle::dist_to_set(int u, const std::vector<int>& set) const {
    ensure(u);
    Cost best = kUnreachable;
    for (int v : set) best = std::min(best, dist_[u][v]);
    return best;
}

std::vector<int> DistOracle::path_edges(int u, int v) const {
    ensure(u);
    assert(dist_[u][v] != kUnreachable);
    std::vector<int> edges;
    int at = v;
    while (at != u) {
        int e = pred_edge_[u][at];
        assert(e >= 0);
        edges.push_back(e);
        at = inst_->edges[e].u == at ? inst_->edges[e].v : inst_->edges[e].u;
    }
    std::reverse(edges.begin(), edges.end());
    return edges;
}

// ---------------------------------------------------------------------------
// nets and refinement partitions

std::vector<int> greedy_delta_net(const std::vector<int>& points, const DistOracle& dist,
                                  const Q128& delta) {
    std::vector<int> order = points;
    std::sort(order.begin(), order.end());
    std::vector<int> net;
    for (int p : order) {
        bool far = true;
        for (int q : net) {
            // admit p only when dist(p, q) > delta for every net point q
            if ((i128)dist.dist(p, q) * delta.den <= delta.num) {
                far = false;
                break;
            }
        }
        if (far) net.push_back(p);
    }
    return net;
}

i128 zeta_size_bound(const EpasParams& p, Cost d_min, Cost d_max) {
    i128 k = std::max(1, p.width);
    i128 h = std::max(1, p.height);
    i128 log_term = 1;
    if (d_min > 0) {
        i128 ratio_log = 1;
        while ((u128(d_min) << ratio_log) < d_max) ++ratio_log;
        log_term = std::max<i128>(1, ratio_log);
    }
    const Rat& eps = p.eps_internal;
    // kZetaFactor * k^4 h^2 log / eps^2, kept as an exact integer bound
    i128 numerator = (i128)kZetaFactor * k * k * k * k * h * h * log_term * eps.den * eps.den;
    return numerator / ((i128)eps.num * eps.num) + 1;
}

ZetaPartition zeta_partition(const Instance& inst, const TreeDecomposition& td,
                             const BagContext& ctx, const EpasParams& params,
                             const DistOracle& dist) {
    (void)inst;
    ZetaPartition zp;
    zp.node = ctx.node;
    const auto& bag = td.nodes[ctx.node].bag;
    i128 keff = std::max(1, params.width);
    i128 heff = std::max(1, params.height);
    const Rat& eps = params.eps_internal;

    std::vector<int> far;
    for (int t : ctx.active) {
        if (std::binary_search(bag.begin(), bag.end(), t)) {
            ZetaBlock b;
            b.terminals = {t};
            b.kind = ZetaBlock::Kind::BagSingleton;
            zp.blocks.push_back(std::move(b));
        } else {
            far.push_back(t);
        }
    }
    if (far.empty()) return zp;

    // distance to the bag and the closest bag vertex (lowest id on ties)
    std::map<int, std::pair<Cost, int>> to_bag;
    Cost d = DistOracle::kUnreachable, dmax = 0;
    for (int t : far) {
        Cost best = DistOracle::kUnreachable;
        int arg = -1;
        for (int b : bag)
            if (dist.dist(t, b) < best) {
                best = dist.dist(t, b);
                arg = b;
            }
        assert(best != DistOracle::kUnreachable && best > 0);  // d > 0 by definition
        to_bag[t] = {best, arg};
        d = std::min(d, best);
        dmax = std::max(dmax, best);
    }
    zp.d_min = d;
    zp.d_max = dmax;

    // split by closest bag vertex, then by distance annulus
    std::map<std::pair<int, int>, std::vector<int>> annuli;  // (bag vertex, j)
    for (int t : far) {
        auto [dt, b] = to_bag[t];
        int j = 0;
        while ((u128(d) << (j + 1)) <= dt) ++j;  // dt in [2^j d, 2^{j+1} d)
        annuli[{b, j}].push_back(t);
    }
    for (auto& [key, members] : annuli) {
        auto [bvert, j] = key;
        // net radius (eps / (k h)) * 2^j * d
        Q128 radius((i128)eps.num * ((i128)d << j), (i128)eps.den * keff * heff);
        std::vector<int> net = greedy_delta_net(members, dist, radius);
        // whole-annulus collapse at 8 k^2 (k+1) h^2 / eps^2 net points
        bool whole = (i128)net.size() * eps.num * eps.num >=
                     8 * keff * keff * (keff + 1) * heff * heff * eps.den * eps.den;
        if (whole) {
            ZetaBlock b;
            b.terminals = members;
            std::sort(b.terminals.begin(), b.terminals.end());
            b.kind = ZetaBlock::Kind::WholeAnnulus;
            b.closest_bag_vertex = bvert;
            b.annulus = j;
            zp.blocks.push_back(std::move(b));
            continue;
        }
        // one cell per net point: members closest to it, lowest id on ties
        std::map<int, std::vector<int>> cells;
        for (int t : members) {
            Cost best = DistOracle::kUnreachable;
            int arg = -1;
            for (int p : net)
                if (dist.dist(t, p) < best) {
                    best = dist.dist(t, p);
                    arg = p;
                }
            assert(arg >= 0);
            cells[arg].push_back(t);
        }
        for (auto& [anchor, terms] : cells) {
            ZetaBlock b;
            b.terminals = terms;
            std::sort(b.terminals.begin(), b.terminals.end());
            b.kind = ZetaBlock::Kind::NetCell;
            b.closest_bag_vertex = bvert;
            b.annulus = j;
            b.anchor = anchor;
            zp.blocks.push_back(std::move(b));
        }
    }
    assert((i128)zp.blocks.size() <= zeta_size_bound(params, zp.d_min, zp.d_max));
    return zp;
}

// ---------------------------------------------------------------------------
// sequence enumeration

namespace {

std::vector<std::vector<int>> set_partitions(int n) {
    // partitions of {0..n-1} as class-index vectors
    std::vector<std::vector<int>> out;
    std::vector<int> assign(n, 0);
    auto rec = [&](auto&& self, int i, int used) -> void {
        if (i == n) {
            out.push_back(assign);
            return;
        }
        for (int c = 0; c <= used; ++c) {
            assign[i] = c;
            self(self, i + 1, std::max(used, c + 1));
        }
    };
    if (n == 0)
        out.push_back({});
    else
        rec(rec, 0, 0);
    return out;
}

}  // namespace

std::vector<Partition> enumerate_bag_partitions(const Instance& inst,
                                                const ZetaPartition& zeta,
                                                const std::vector<int>& active,
                                                const EpasParams& params,
                                                const DistOracle& dist, u64 cap) {
    (void)inst;
    if (active.empty()) return {};
    int a_count = (int)active.size();
    int b_count = (int)zeta.blocks.size();
    if (b_count > 24)
        throw ResourceError("refinement partition too large at node " +
                            std::to_string(zeta.node));
    const Rat& eps = params.eps_internal;
    i64 keff = std::max(1, params.width);
    int ell_max = params.width + 1;
    i64 s_cap = (4 * keff * eps.den) / eps.num;  // floor(4k / eps)

    // delta domain: powers of two spanning the possible component costs,
    // stated relative to the smallest reduced edge weight (no rescaling)
    int qlo = floor_log2_u64(std::max<Weight>(1, params.w_min));
    i128 hi_num = (i128)2 * params.n_orig * params.n_orig *
                  std::max<Weight>(1, params.w_min) * eps.den;
    int qhi = floor_log2_rat(hi_num, eps.num);
    assert(qhi >= qlo);

    auto idx_of = [&](int t) {
        return (int)(std::lower_bound(active.begin(), active.end(), t) - active.begin());
    };

    // distinct slot choices: the chosen blocks, their terminals, and the
    // terminals the slot can capture through the distance rule, as bitmasks.
    // Slot block sets stay pairwise disjoint across a sequence: the witness
    // sequence always is (its nets live in distinct components, and the
    // refinement keeps every block inside one component), so nothing the
    // guarantee needs is lost.
    struct Slot {
        u64 blocks;
        u64 members;
        u64 reach;
    };
    std::vector<Slot> slots;
    {
        std::set<std::tuple<u64, u64, u64>> seen;
        u64 scanned = 0;
        for (u64 mask = 1; mask < (u64(1) << b_count); ++mask) {
            if (__builtin_popcountll(mask) > s_cap) continue;
            if (++scanned > cap)
                throw ResourceError("sequence enumeration cap exceeded at node " +
                                    std::to_string(zeta.node) + " while listing slots");
            u64 members = 0;
            std::vector<int> union_terms;
            for (int b = 0; b < b_count; ++b)
                if (mask >> b & 1)
                    for (int t : zeta.blocks[b].terminals) {
                        members |= u64(1) << idx_of(t);
                        union_terms.push_back(t);
                    }
            for (int q = qlo; q <= qhi; ++q) {
                // reach rule: dist(t, U) <= (eps/k) * 2^q
                u64 reach = 0;
                for (int i = 0; i < a_count; ++i) {
                    if (members >> i & 1) continue;
                    Cost dt = dist.dist_to_set(active[i], union_terms);
                    if (dt != DistOracle::kUnreachable &&
                        (i128)dt * eps.den * keff <= (i128)eps.num * ((i128)1 << q))
                        reach |= u64(1) << i;
                }
                if (seen.insert({mask, members, reach}).second)
                    slots.push_back(Slot{mask, members, reach});
            }
        }
    }

    // layered walk over sequences: a state records, per active terminal,
    // the slot whose set holds it and the first slot that reaches it
    struct State {
        std::vector<uint8_t> uslot;  // 0xFF = in no slot set
        std::vector<uint8_t> first;  // 0xFF = reached by no slot
        u64 used_blocks = 0;
    };
    auto key_of = [](const State& s) {
        std::string k(s.uslot.begin(), s.uslot.end());
        k.append(s.first.begin(), s.first.end());
        return k;
    };
    std::set<Partition> result;
    u64 counted = 0;
    auto charge = [&](u64 amount) {
        counted += amount;
        if (counted > cap)
            throw ResourceError("sequence enumeration cap exceeded at node " +
                                std::to_string(zeta.node) + " after " +
                                std::to_string(counted) + " candidates");
    };
    std::map<std::string, State> layer;
    State init;
    init.uslot.assign(a_count, 0xFF);
    init.first.assign(a_count, 0xFF);
    layer[key_of(init)] = init;

    for (int j = 0; j < ell_max && !layer.empty(); ++j) {
        std::map<std::string, State> next;
        for (auto& [k, st] : layer) {
            for (const auto& slot : slots) {
                if (slot.blocks & st.used_blocks) continue;  // disjoint sequences
                charge(1);
                State ns = st;
                ns.used_blocks |= slot.blocks;
                for (int i = 0; i < a_count; ++i) {
                    if (slot.members >> i & 1) ns.uslot[i] = (uint8_t)j;
                    if ((slot.reach >> i & 1) && ns.first[i] == 0xFF &&
                        !(slot.members >> i & 1))
                        ns.first[i] = (uint8_t)j;
                }
                next[key_of(ns)] = std::move(ns);
            }
        }
        layer = std::move(next);
        // a sequence may stop at any length 1..k+1
        int ell = j + 1;
        auto rhos = set_partitions(ell);
        for (auto& [k, st] : layer) {
            for (const auto& rho : rhos) {
                charge(1);
                std::vector<std::vector<int>> klass(ell);
                bool ok = true;
                for (int i = 0; i < a_count && ok; ++i) {
                    int cls;
                    if (st.uslot[i] != 0xFF)
                        cls = rho[st.uslot[i]];  // the slot set wins
                    else if (st.first[i] != 0xFF)
                        cls = rho[st.first[i]];
                    else {
                        ok = false;  // unplaced terminal: not a partition
                        continue;
                    }
                    klass[cls].push_back(active[i]);
                }
                if (!ok) continue;
                result.insert(Partition::canonical(std::move(klass)));
            }
        }
    }
    return {result.begin(), result.end()};
}

PartitionFamily enumerate_partition_family(const Instance& inst, const TreeDecomposition& td,
                                           const std::vector<ZetaPartition>& zeta,
                                           const EpasParams& params, const DistOracle& dist,
                                           u64 cap) {
    auto ctxs = bag_contexts(inst, td);
    PartitionFamily fam;
    fam.per_node.resize(td.nodes.size());
    for (int x = 0; x < (int)td.nodes.size(); ++x) {
        if (ctxs[x].active.empty()) continue;
        fam.per_node[x] =
            enumerate_bag_partitions(inst, zeta[x], ctxs[x].active, params, dist, cap);
    }
    return fam;
}

// ---------------------------------------------------------------------------
// merge-rule simulator

Cost pow2_floor(Cost x) {
    assert(x >= 1);
    return Cost(1) << floor_log2_u64(x);
}

namespace {

struct Component {
    std::vector<int> vertices;  // sorted
    std::vector<int> edges;
    Cost cost = 0;
};

std::vector<Component> forest_components(const Instance& inst, const Forest& f) {
    UnionFind uf(inst.n);
    for (int e : f.edge_ids) uf.unite(inst.edges[e].u, inst.edges[e].v);
    std::map<int, Component> by_root;
    for (int e : f.edge_ids) {
        auto& c = by_root[uf.find(inst.edges[e].u)];
        c.edges.push_back(e);
        c.cost += inst.edges[e].w;
        c.vertices.push_back(inst.edges[e].u);
        c.vertices.push_back(inst.edges[e].v);
    }
    std::vector<Component> out;
    for (auto& [root, c] : by_root) {
        std::sort(c.vertices.begin(), c.vertices.end());
        c.vertices.erase(std::unique(c.vertices.begin(), c.vertices.end()), c.vertices.end());
        out.push_back(std::move(c));
    }
    return out;
}

Cost component_distance(const DistOracle& dist, const Component& a, const Component& b,
                        int& best_u, int& best_v) {
    Cost best = DistOracle::kUnreachable;
    best_u = best_v = -1;
    for (int u : a.vertices)
        for (int v : b.vertices) {
            Cost d = dist.dist(u, v);
            if (d < best || (d == best && (u < best_u || (u == best_u && v < best_v)))) {
                best = d;
                best_u = u;
                best_v = v;
            }
        }
    return best;
}

}  // namespace

MergeSimulation simulate_merge_rules(const Instance& inst, const TreeDecomposition& td,
                                     const Forest& f_star, const Rat& eps) {
    DistOracle dist(inst);
    i128 keff = std::max(1, td.width());
    i128 heff = std::max(1, td.height());

    // node order by (depth, id); down-edge sets per node
    auto ctxs = bag_contexts(inst, td);
    std::vector<std::pair<int, int>> by_depth;  // (depth, node)
    {
        std::vector<std::pair<int, int>> stack{{td.root, 1}};
        while (!stack.empty()) {
            auto [x, depth] = stack.back();
            stack.pop_back();
            by_depth.push_back({depth, x});
            for (int c : td.nodes[x].children) stack.push_back({c, depth + 1});
        }
        std::sort(by_depth.begin(), by_depth.end());
    }
    std::vector<std::set<int>> down(td.nodes.size());
    for (int x = 0; x < (int)td.nodes.size(); ++x) {
        auto ids = down_edges(inst, td, ctxs[x]);
        down[x].insert(ids.begin(), ids.end());
    }

    auto comps = forest_components(inst, f_star);
    auto intersects_bag = [&](const Component& c, int node) {
        const auto& bag = td.nodes[node].bag;
        for (int v : c.vertices)
            if (std::binary_search(bag.begin(), bag.end(), v)) return true;
        return false;
    };

    // Rule 1: merge star components sharing a bag when their distance is at
    // most (eps / kh) * cost-below-the-bag of the charged side
    std::set<int> eps_edges(f_star.edge_ids.begin(), f_star.edge_ids.end());
    UnionFind groups((int)comps.size());
    bool fired = true;
    while (fired) {
        fired = false;
        for (auto [depth, node] : by_depth) {
            for (int i = 0; i < (int)comps.size() && !fired; ++i) {
                if (!intersects_bag(comps[i], node)) continue;
                Cost below = 0;
                for (int e : comps[i].edges)
                    if (down[node].count(e)) below += inst.edges[e].w;
                for (int j = 0; j < (int)comps.size() && !fired; ++j) {
                    if (i == j || groups.same(i, j)) continue;
                    if (!intersects_bag(comps[j], node)) continue;
                    int u, v;
                    Cost d = component_distance(dist, comps[i], comps[j], u, v);
                    if (d == DistOracle::kUnreachable) continue;
                    // d <= (eps / kh) * below, cross-multiplied
                    if ((i128)d * eps.den * keff * heff <= (i128)eps.num * below) {
                        for (int e : dist.path_edges(u, v)) eps_edges.insert(e);
                        groups.unite(i, j);
                        fired = true;
                    }
                }
            }
            if (fired) break;
        }
    }
    MergeSimulation sim;
    sim.f_eps = Forest::of({eps_edges.begin(), eps_edges.end()});

    // Rule 2 runs on the merged components, ordered by the depth of the
    // topmost bag each one touches (deeper = lower)
    auto eps_comps = forest_components(inst, sim.f_eps);
    std::vector<int> top_depth(eps_comps.size(), INT32_MAX);
    std::vector<std::set<int>> touching(eps_comps.size());
    for (std::size_t c = 0; c < eps_comps.size(); ++c)
        for (auto [depth, node] : by_depth)
            if (intersects_bag(eps_comps[c], node)) {
                top_depth[c] = std::min(top_depth[c], depth);
                touching[c].insert(node);
            }

    std::set<int> tilde_edges(sim.f_eps.edge_ids.begin(), sim.f_eps.edge_ids.end());
    UnionFind tgroups((int)eps_comps.size());
    fired = true;
    while (fired) {
        fired = false;
        for (int i = 0; i < (int)eps_comps.size() && !fired; ++i) {
            for (int j = 0; j < (int)eps_comps.size() && !fired; ++j) {
                if (i == j || tgroups.same(i, j)) continue;
                // i is the lower (charged) side
                bool share = false;
                for (int node : touching[i])
                    if (touching[j].count(node)) share = true;
                if (!share) continue;
                if (top_depth[i] < top_depth[j]) continue;
                if (top_depth[i] == top_depth[j] &&
                    eps_comps[i].vertices[0] > eps_comps[j].vertices[0])
                    continue;
                int u, v;
                Cost d = component_distance(dist, eps_comps[i], eps_comps[j], u, v);
                if (d == DistOracle::kUnreachable) continue;
                // d <= (eps / k) * pow(cost(i))
                Cost threshold_base = pow2_floor(std::max<Cost>(1, eps_comps[i].cost));
                if ((i128)d * eps.den * keff <= (i128)eps.num * threshold_base) {
                    for (int e : dist.path_edges(u, v)) tilde_edges.insert(e);
                    tgroups.unite(i, j);
                    fired = true;
                }
            }
        }
    }
    sim.f_tilde = Forest::of({tilde_edges.begin(), tilde_edges.end()});
    return sim;
}

// ---------------------------------------------------------------------------
// the full scheme

EpasRun run_epas(const Instance& inst, std::optional<TreeDecomposition> td,
                 const Rat& eps_target, u64 cap) {
    EpasRun run;
    run.params.eps_target = eps_target;
    run.params.eps_internal = pick_internal_eps(eps_target);
    run.params.n_orig = inst.n;

    TreeDecomposition base;
    if (td) {
        auto check = validate_td(inst, *td);
        if (!check.ok)
            throw InputError("supplied decomposition invalid: " + check.violations[0]);
        base = *td;
    } else {
        base = heuristic_td(inst);
    }
    run.balanced = rebalance(inst, base);
    // the enumeration is exponential in the width, so when the plain nice
    // form of the input decomposition is narrower than the rebalanced one
    // (typical at small n, where rebalancing pays its constant-factor width
    // toll without shrinking the height much), prefer it
    TreeDecomposition plain = make_nice(base);
    const TreeDecomposition& working =
        std::make_pair(plain.width(), plain.height()) <
                std::make_pair(run.balanced.width(), run.balanced.height())
            ? plain
            : run.balanced;

    run.reduction = reduce_aspect_ratio(inst, run.params.eps_internal);
    const Instance& reduced = run.reduction.reduced;

    // carry the decomposition through the contraction map, then restore the
    // nice form and the terminals-in-leaves property
    TreeDecomposition mapped = working;
    for (auto& nd : mapped.nodes) {
        for (int& v : nd.bag) v = run.reduction.vertex_image[v];
        std::sort(nd.bag.begin(), nd.bag.end());
        nd.bag.erase(std::unique(nd.bag.begin(), nd.bag.end()), nd.bag.end());
    }
    mapped.nice = false;
    run.dp_td = push_terminals_to_leaves(reduced, make_nice(mapped));
    run.params.width = run.dp_td.width();
    run.params.height = run.dp_td.height();
    auto extremes = weight_extremes(reduced);
    run.params.w_min = extremes ? extremes->second : 1;

    if (reduced.demands.empty()) {
        run.conforming = ConformingResult{};
        run.forest = lift_solution(Forest{}, run.reduction);
        run.cost = evaluate_solution(inst, run.forest).cost;
        return run;
    }

    DistOracle dist(reduced);
    auto ctxs = bag_contexts(reduced, run.dp_td);
    run.zeta.resize(run.dp_td.nodes.size());
    for (int x = 0; x < (int)run.dp_td.nodes.size(); ++x)
        if (!ctxs[x].active.empty())
            run.zeta[x] = zeta_partition(reduced, run.dp_td, ctxs[x], run.params, dist);
    run.family = enumerate_partition_family(reduced, run.dp_td, run.zeta, run.params,
                                            dist, cap);
    auto res = solve_conforming(reduced, run.dp_td, run.family);
    if (!res)
        throw std::logic_error(
            "conforming stage found no solution; the enumerated family misses the witness");
    run.conforming = *res;
    run.forest = lift_solution(run.conforming.forest, run.reduction);
    Evaluation ev = evaluate_solution(inst, run.forest);
    assert(ev.feasible);
    run.cost = ev.cost;
    return run;
}

Forest solve_epas(const Instance& inst, std::optional<TreeDecomposition> td,
                  const Rat& eps_target, u64 cap) {
    return run_epas(inst, std::move(td), eps_target, cap).forest;
}

}  // namespace sf
