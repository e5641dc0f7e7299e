#include "sf/instance.hpp"

#include <map>
#include <set>

namespace sf {

std::vector<int> Instance::terminals() const {
    std::set<int> r;
    for (const auto& d : demands) {
        r.insert(d.s);
        r.insert(d.t);
    }
    return {r.begin(), r.end()};
}

std::vector<bool> Instance::terminal_mask() const {
    std::vector<bool> mask(n, false);
    for (const auto& d : demands) {
        mask[d.s] = true;
        mask[d.t] = true;
    }
    return mask;
}

std::vector<int> Instance::degrees() const {
    std::vector<int> deg(n, 0);
    for (const auto& e : edges) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return deg;
}

std::vector<std::vector<std::pair<int, int>>> Instance::adjacency() const {
    std::vector<std::vector<std::pair<int, int>>> adj(n);
    for (int i = 0; i < (int)edges.size(); ++i) {
        adj[edges[i].u].emplace_back(edges[i].v, i);
        adj[edges[i].v].emplace_back(edges[i].u, i);
    }
    return adj;
}

Cost Instance::total_weight() const {
    Cost s = 0;
    for (const auto& e : edges) s += e.w;
    return s;
}

Instance make_instance(int n, std::vector<Edge> edges, std::vector<Demand> demands,
                       std::vector<std::string> labels, bool require_positive_weights) {
    if (n < 0) throw InputError("negative vertex count");
    for (auto& e : edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw InputError("edge endpoint out of range");
        if (e.u == e.v) throw InputError("self-loop edge");
        if (e.u > e.v) std::swap(e.u, e.v);
        if (require_positive_weights && e.w == 0) throw InputError("non-positive weight");
        if (e.w > kMaxEdgeWeight) throw InputError("edge weight exceeds 2^32 cap");
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
            throw InputError("duplicate edge");
    for (auto& d : demands) {
        if (d.s < 0 || d.s >= n || d.t < 0 || d.t >= n)
            throw InputError("dangling demand id");
        if (d.s == d.t) throw InputError("demand between a vertex and itself");
        if (d.s > d.t) std::swap(d.s, d.t);
    }
    std::sort(demands.begin(), demands.end());
    demands.erase(std::unique(demands.begin(), demands.end()), demands.end());
    if (!labels.empty() && (int)labels.size() != n)
        throw InputError("label list length does not match vertex count");
    return Instance{n, std::move(edges), std::move(demands), std::move(labels)};
}

Evaluation evaluate_solution(const Instance& inst, const Forest& f) {
    Evaluation ev;
    UnionFind uf(inst.n);
    for (int e : f.edge_ids) {
        if (e < 0 || e >= (int)inst.edges.size()) throw InputError("invalid edge reference");
        ev.cost += inst.edges[e].w;
        if (!uf.unite(inst.edges[e].u, inst.edges[e].v)) ev.acyclic = false;
    }
    for (const auto& d : inst.demands)
        if (!uf.same(d.s, d.t)) ev.violations.push_back(d);
    ev.feasible = ev.violations.empty();
    return ev;
}

DemandGroups demand_groups(const Instance& inst) {
    UnionFind uf(inst.n);
    for (const auto& d : inst.demands) uf.unite(d.s, d.t);
    DemandGroups g;
    g.group_of.assign(inst.n, -1);
    std::map<int, std::vector<int>> by_root;
    for (int t : inst.terminals()) by_root[uf.find(t)].push_back(t);
    for (auto& [root, members] : by_root) {
        for (int t : members) g.group_of[t] = (int)g.groups.size();
        g.groups.push_back(std::move(members));
    }
    return g;
}

std::vector<int> graph_components(const Instance& inst) {
    UnionFind uf(inst.n);
    for (const auto& e : inst.edges) uf.unite(e.u, e.v);
    std::vector<int> comp(inst.n);
    std::map<int, int> renumber;
    for (int v = 0; v < inst.n; ++v) {
        int r = uf.find(v);
        auto [it, fresh] = renumber.emplace(r, (int)renumber.size());
        comp[v] = it->second;
    }
    return comp;
}

bool demands_connected(const Instance& inst) {
    auto comp = graph_components(inst);
    for (const auto& d : inst.demands)
        if (comp[d.s] != comp[d.t]) return false;
    return true;
}

}  // namespace sf
