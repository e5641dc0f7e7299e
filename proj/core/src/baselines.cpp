#include "sf/baselines.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "sf/errors.hpp"
#include "sf/rational.hpp"

namespace sf {

namespace {

/// Reduced rational on 128-bit parts for the dual-growth clock. Denominators
/// stay powers of two (growth rates are 1 or 2); the guard trips long before
/// the arithmetic could wrap.
struct Clock {
    i128 num{0};
    i128 den{1};

    static Clock of_int(i64 v) { return {v, 1}; }

    void reduce() {
        while (num % 2 == 0 && den % 2 == 0 && den > 1) {
            num /= 2;
            den /= 2;
        }
        if ((num > 0 ? num : -num) > (i128(1) << 100) || den > (i128(1) << 100))
            throw ResourceError("dual growth clock exceeded exact-precision budget");
    }

    Clock minus(const Clock& o) const {
        Clock r{num * o.den - o.num * den, den * o.den};
        r.reduce();
        return r;
    }
    Clock plus_scaled(const Clock& o, int factor) const {
        Clock r{num * o.den + (i128)factor * o.num * den, den * o.den};
        r.reduce();
        return r;
    }
    Clock div(int factor) const {
        Clock r{num, den * factor};
        r.reduce();
        return r;
    }
    bool lt(const Clock& o) const { return num * o.den < o.num * den; }
    bool is_zero() const { return num == 0; }
};

}  // namespace

Forest two_approx_primal_dual(const Instance& inst) {
    if (!demands_connected(inst))
        throw InfeasibleError("demand spans two graph components");
    if (inst.demands.empty()) return Forest{};

    int m = (int)inst.edges.size();
    UnionFind uf(inst.n);
    std::vector<Clock> load(m, Clock::of_int(0));
    std::vector<char> admitted(m, 0);
    std::vector<int> admission_order;

    auto active_roots = [&]() {
        std::set<int> act;
        for (const auto& d : inst.demands)
            if (!uf.same(d.s, d.t)) {
                act.insert(uf.find(d.s));
                act.insert(uf.find(d.t));
            }
        return act;
    };

    while (true) {
        auto act = active_roots();
        if (act.empty()) break;
        // smallest time at which some cross edge goes tight
        int best_edge = -1;
        Clock best_dt;
        for (int e = 0; e < m; ++e) {
            if (admitted[e]) continue;
            int ru = uf.find(inst.edges[e].u), rv = uf.find(inst.edges[e].v);
            if (ru == rv) continue;
            int rate = (int)act.count(ru) + (int)act.count(rv);
            if (rate == 0) continue;
            Clock slack = Clock::of_int((i64)inst.edges[e].w).minus(load[e]);
            Clock dt = slack.div(rate);
            if (best_edge < 0 || dt.lt(best_dt)) {
                best_edge = e;
                best_dt = dt;
            }
        }
        if (best_edge < 0)
            throw InfeasibleError("dual growth stalled with unsatisfied demands");
        for (int e = 0; e < m; ++e) {
            if (admitted[e]) continue;
            int ru = uf.find(inst.edges[e].u), rv = uf.find(inst.edges[e].v);
            if (ru == rv) continue;
            int rate = (int)act.count(ru) + (int)act.count(rv);
            if (rate) load[e] = load[e].plus_scaled(best_dt, rate);
        }
        admitted[best_edge] = 1;
        admission_order.push_back(best_edge);
        uf.unite(inst.edges[best_edge].u, inst.edges[best_edge].v);
    }

    // reverse delete: drop, in reverse admission order, every edge whose
    // removal keeps all demands connected
    std::vector<char> kept(m, 0);
    for (int e : admission_order) kept[e] = 1;
    for (auto it = admission_order.rbegin(); it != admission_order.rend(); ++it) {
        kept[*it] = 0;
        UnionFind check(inst.n);
        for (int e = 0; e < m; ++e)
            if (kept[e]) check.unite(inst.edges[e].u, inst.edges[e].v);
        bool feasible = true;
        for (const auto& d : inst.demands)
            if (!check.same(d.s, d.t)) {
                feasible = false;
                break;
            }
        if (!feasible) kept[*it] = 1;
    }
    std::vector<int> ids;
    for (int e = 0; e < m; ++e)
        if (kept[e]) ids.push_back(e);
    return Forest::of(std::move(ids));
}

namespace {

struct SubsetScan {
    Cost best_cost = 0;
    std::vector<int> best_edges;
    bool found = false;

    void offer(Cost cost, const std::vector<int>& edges) {
        if (!found || cost < best_cost || (cost == best_cost && edges < best_edges)) {
            found = true;
            best_cost = cost;
            best_edges = edges;
        }
    }
};

}  // namespace

BruteForceResult brute_force_opt(const Instance& inst) {
    int m = (int)inst.edges.size();
    if (m > kBruteForceEdgeCap)
        throw ResourceError("brute_force_opt guarded at m <= " +
                            std::to_string(kBruteForceEdgeCap) + ", got m = " +
                            std::to_string(m));
    SubsetScan scan;
    std::vector<int> edges;
    for (u64 mask = 0; mask < (u64(1) << m); ++mask) {
        UnionFind uf(inst.n);
        Cost cost = 0;
        edges.clear();
        for (int e = 0; e < m; ++e)
            if (mask >> e & 1) {
                uf.unite(inst.edges[e].u, inst.edges[e].v);
                cost += inst.edges[e].w;
                edges.push_back(e);
            }
        if (scan.found && cost > scan.best_cost) continue;
        bool feasible = true;
        for (const auto& d : inst.demands)
            if (!uf.same(d.s, d.t)) {
                feasible = false;
                break;
            }
        if (feasible) scan.offer(cost, edges);
    }
    if (!scan.found) throw InfeasibleError("no feasible edge subset exists");
    return BruteForceResult{scan.best_cost, Forest::of(std::move(scan.best_edges))};
}

std::optional<BruteForceResult> brute_force_conforming(const Instance& inst,
                                                       const TreeDecomposition& td,
                                                       const PartitionFamily& fam) {
    int m = (int)inst.edges.size();
    if (m > kBruteForceConformingEdgeCap)
        throw ResourceError("brute_force_conforming guarded at m <= " +
                            std::to_string(kBruteForceConformingEdgeCap) + ", got m = " +
                            std::to_string(m));
    auto ctxs = bag_contexts(inst, td);
    validate_family(td, ctxs, fam);

    // constrained nodes with a fast membership set each
    struct NodeCheck {
        const std::vector<int>* active;
        std::set<Partition> allowed;
    };
    std::vector<NodeCheck> checks;
    for (int x = 0; x < (int)td.nodes.size(); ++x) {
        if (ctxs[x].active.empty()) continue;
        NodeCheck c;
        c.active = &ctxs[x].active;
        for (const auto& pi : fam.per_node[x]) c.allowed.insert(pi);
        checks.push_back(std::move(c));
    }

    SubsetScan scan;
    std::vector<int> edges, comp(inst.n);
    for (u64 mask = 0; mask < (u64(1) << m); ++mask) {
        UnionFind uf(inst.n);
        Cost cost = 0;
        edges.clear();
        for (int e = 0; e < m; ++e)
            if (mask >> e & 1) {
                uf.unite(inst.edges[e].u, inst.edges[e].v);
                cost += inst.edges[e].w;
                edges.push_back(e);
            }
        if (scan.found && cost > scan.best_cost) continue;
        bool feasible = true;
        for (const auto& d : inst.demands)
            if (!uf.same(d.s, d.t)) {
                feasible = false;
                break;
            }
        if (!feasible) continue;
        for (int v = 0; v < inst.n; ++v) comp[v] = uf.find(v);
        bool conforming = true;
        for (const auto& c : checks) {
            if (c.allowed.empty()) {
                conforming = false;
                break;
            }
            Partition induced = partition_by_components(*c.active, comp);
            if (!c.allowed.count(induced)) {
                conforming = false;
                break;
            }
        }
        if (conforming) scan.offer(cost, edges);
    }
    if (!scan.found) return std::nullopt;
    return BruteForceResult{scan.best_cost, Forest::of(std::move(scan.best_edges))};
}

}  // namespace sf
