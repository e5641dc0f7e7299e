#include "sf/reduce.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sf/baselines.hpp"
#include "sf/errors.hpp"

namespace sf {

namespace {

/// Rebuilds an instance over the surviving vertices of `group_of` (vertices
/// with group_of[v] == v survive as representatives; others merge into their
/// representative; -1 marks deleted). Parallel edges collapse to the minimum
/// weight, lowest original edge id first. Fills edge_origin/vertex_image.
Instance rebuild(const Instance& src, const std::vector<int>& group_of,
                 const std::vector<char>& edge_alive, std::vector<int>& edge_origin,
                 std::vector<int>& vertex_image) {
    vertex_image.assign(src.n, -1);
    int next = 0;
    for (int v = 0; v < src.n; ++v)
        if (group_of[v] == v) vertex_image[v] = next++;
    for (int v = 0; v < src.n; ++v)
        if (group_of[v] >= 0 && group_of[v] != v) vertex_image[v] = vertex_image[group_of[v]];

    std::map<std::pair<int, int>, int> best;  // (u,v) -> original edge id
    for (int e = 0; e < (int)src.edges.size(); ++e) {
        if (!edge_alive[e]) continue;
        int u = vertex_image[src.edges[e].u], v = vertex_image[src.edges[e].v];
        if (u < 0 || v < 0 || u == v) continue;
        if (u > v) std::swap(u, v);
        auto [it, fresh] = best.emplace(std::make_pair(u, v), e);
        if (!fresh) {
            int old = it->second;
            if (src.edges[e].w < src.edges[old].w ||
                (src.edges[e].w == src.edges[old].w && e < old))
                it->second = e;
        }
    }
    std::vector<Edge> edges;
    edge_origin.clear();
    for (auto& [uv, e] : best) {
        edges.push_back(Edge{uv.first, uv.second, src.edges[e].w});
        edge_origin.push_back(e);
    }
    std::set<Demand> demands;
    for (const auto& d : src.demands) {
        int s = vertex_image[d.s], t = vertex_image[d.t];
        if (s < 0 || t < 0 || s == t) continue;
        demands.insert(Demand{std::min(s, t), std::max(s, t)});
    }
    // weights may legitimately be zero here (internal transforms)
    return make_instance(next, std::move(edges), {demands.begin(), demands.end()}, {},
                         /*require_positive_weights=*/false);
}

}  // namespace

Reduction apply_rule3(const Instance& inst) {
    Reduction red;
    red.original = inst;

    std::vector<char> vertex_alive(inst.n, 1), edge_alive(inst.edges.size(), 1);
    std::vector<std::set<int>> incident(inst.n);  // alive edge ids
    for (int e = 0; e < (int)inst.edges.size(); ++e) {
        incident[inst.edges[e].u].insert(e);
        incident[inst.edges[e].v].insert(e);
    }
    std::set<std::pair<int, int>> demands;
    for (const auto& d : inst.demands) demands.insert({d.s, d.t});
    auto has_demand = [&](int v) {
        auto it = demands.lower_bound({v, -1});
        if (it != demands.end() && it->first == v) return true;
        for (const auto& d : demands)
            if (d.second == v) return true;
        return false;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        // rescan from the lowest id after every deletion
        for (int u = 0; u < inst.n && !changed; ++u) {
            if (!vertex_alive[u] || incident[u].size() != 1) continue;
            int e = *incident[u].begin();
            int v = inst.edges[e].u == u ? inst.edges[e].v : inst.edges[e].u;
            ReductionStep step{ReductionKind::Rule3Deletion, u, -1};
            if (has_demand(u)) {
                step.edge = e;
                red.spent += inst.edges[e].w;
                // move u's demands to v, dropping {v,v}
                std::set<std::pair<int, int>> next_demands;
                for (const auto& d : demands) {
                    int s = d.first == u ? v : d.first;
                    int t = d.second == u ? v : d.second;
                    if (s == t) continue;
                    next_demands.insert({std::min(s, t), std::max(s, t)});
                }
                demands = std::move(next_demands);
            }
            vertex_alive[u] = 0;
            edge_alive[e] = 0;
            incident[u].clear();
            incident[v].erase(e);
            red.trace.push_back(step);
            changed = true;
        }
    }

    std::vector<int> group_of(inst.n, -1);
    for (int v = 0; v < inst.n; ++v)
        if (vertex_alive[v]) group_of[v] = v;
    Instance stripped = rebuild(inst, group_of, edge_alive, red.edge_origin, red.vertex_image);
    // demands were rewritten during elimination; map the surviving set
    std::vector<Demand> mapped;
    for (const auto& d : demands) {
        int s = red.vertex_image[d.first], t = red.vertex_image[d.second];
        if (s < 0 || t < 0 || s == t) continue;
        mapped.push_back(Demand{std::min(s, t), std::max(s, t)});
    }
    red.reduced = make_instance(stripped.n, stripped.edges, std::move(mapped), {},
                                /*require_positive_weights=*/false);
    return red;
}

Reduction reduce_aspect_ratio(const Instance& inst, const Rat& eps) {
    if (!eps.positive()) throw InputError("eps must be positive");
    if (!demands_connected(inst))
        throw InfeasibleError("demand spans two graph components");

    Reduction red;
    red.original = inst;

    Forest f2 = two_approx_primal_dual(inst);
    Cost c2 = evaluate_solution(inst, f2).cost;

    std::vector<char> edge_alive(inst.edges.size(), 1);
    // removal: w(e) > cost(F2)
    for (int e = 0; e < (int)inst.edges.size(); ++e) {
        if (inst.edges[e].w > c2) {
            edge_alive[e] = 0;
            red.trace.push_back(ReductionStep{ReductionKind::EdgeRemoval, -1, e});
        }
    }
    // contraction: w(e) < (eps/2n)*cost(F2), exact: w*2n*den < num*c2
    UnionFind uf(inst.n);
    std::vector<int> contract_ids;
    for (int e = 0; e < (int)inst.edges.size(); ++e) {
        if (!edge_alive[e]) continue;
        i128 lhs = (i128)inst.edges[e].w * 2 * inst.n * eps.den;
        i128 rhs = (i128)eps.num * c2;
        if (lhs < rhs) contract_ids.push_back(e);
    }
    std::sort(contract_ids.begin(), contract_ids.end(), [&](int a, int b) {
        int ma = std::min(inst.edges[a].u, inst.edges[a].v);
        int mb = std::min(inst.edges[b].u, inst.edges[b].v);
        if (ma != mb) return ma < mb;
        return a < b;
    });
    for (int e : contract_ids) {
        edge_alive[e] = 0;
        uf.unite(inst.edges[e].u, inst.edges[e].v);
        red.trace.push_back(ReductionStep{ReductionKind::Contraction, -1, e});
    }

    // representative = lowest vertex id in each merged set
    std::vector<int> group_of(inst.n);
    std::vector<int> rep(inst.n, -1);
    for (int v = 0; v < inst.n; ++v) {
        int r = uf.find(v);
        if (rep[r] < 0) rep[r] = v;  // ascending scan: first hit is the minimum
    }
    for (int v = 0; v < inst.n; ++v) group_of[v] = rep[uf.find(v)];

    red.reduced = rebuild(inst, group_of, edge_alive, red.edge_origin, red.vertex_image);
    return red;
}

Forest lift_solution(const Forest& reduced_solution, const Reduction& red) {
    for (int e : reduced_solution.edge_ids)
        if (e < 0 || e >= (int)red.edge_origin.size())
            throw InputError("solution does not match reduction trace");
    std::set<int> lifted;
    for (int e : reduced_solution.edge_ids) lifted.insert(red.edge_origin[e]);

    // forced rule-3 edges always return
    std::vector<int> contractions;
    for (const auto& step : red.trace) {
        if (step.kind == ReductionKind::Rule3Deletion && step.edge >= 0)
            lifted.insert(step.edge);
        if (step.kind == ReductionKind::Contraction) contractions.push_back(step.edge);
    }

    // uncontract in reverse application order; re-add an edge exactly when
    // the solution is infeasible with the remaining contractions virtual
    for (int i = (int)contractions.size() - 1; i >= 0; --i) {
        UnionFind uf(red.original.n);
        for (int j = 0; j < i; ++j)
            uf.unite(red.original.edges[contractions[j]].u,
                     red.original.edges[contractions[j]].v);
        for (int e : lifted) uf.unite(red.original.edges[e].u, red.original.edges[e].v);
        bool feasible = true;
        for (const auto& d : red.original.demands)
            if (!uf.same(d.s, d.t)) {
                feasible = false;
                break;
            }
        if (!feasible) lifted.insert(contractions[i]);
    }
    return Forest::of({lifted.begin(), lifted.end()});
}

std::optional<std::pair<Weight, Weight>> weight_extremes(const Instance& inst) {
    if (inst.edges.empty()) return std::nullopt;
    Weight lo = inst.edges[0].w, hi = inst.edges[0].w;
    for (const auto& e : inst.edges) {
        lo = std::min(lo, e.w);
        hi = std::max(hi, e.w);
    }
    return std::make_pair(hi, lo);
}

}  // namespace sf
