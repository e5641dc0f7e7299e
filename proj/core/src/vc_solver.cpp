#include "sf/vc_solver.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sf/errors.hpp"

namespace sf {

void validate_cover(const Instance& inst, const CoverCertificate& cert) {
    std::vector<bool> in_cover(inst.n, false);
    for (int v : cert.cover) {
        if (v < 0 || v >= inst.n) throw InputError("cover vertex out of range");
        in_cover[v] = true;
    }
    for (const auto& e : inst.edges)
        if (!in_cover[e.u] && !in_cover[e.v])
            throw InputError("set is not a vertex cover: edge " + std::to_string(e.u + 1) +
                             "-" + std::to_string(e.v + 1) + " uncovered");
}

CoverCertificate greedy_cover(const Instance& inst) {
    std::vector<bool> matched(inst.n, false);
    CoverCertificate cert;
    for (const auto& e : inst.edges) {
        if (matched[e.u] || matched[e.v]) continue;
        matched[e.u] = matched[e.v] = true;
        cert.cover.push_back(e.u);
        cert.cover.push_back(e.v);
    }
    std::sort(cert.cover.begin(), cert.cover.end());
    return cert;
}

CoverPreprocess cover_preprocess(const Instance& inst, const CoverCertificate& cert) {
    validate_cover(inst, cert);
    CoverPreprocess out;
    out.cert = cert;
    out.original_n = inst.n;
    std::sort(out.cert.cover.begin(), out.cert.cover.end());

    auto term = inst.terminal_mask();
    std::vector<int> stand_in(inst.n, -1);  // cover terminal -> helper vertex
    int next = inst.n;
    for (int t : out.cert.cover)
        if (term[t]) {
            stand_in[t] = next++;
            out.helper_of.push_back(t);
        }

    std::vector<Edge> edges = inst.edges;
    for (int t = 0; t < inst.n; ++t)
        if (stand_in[t] >= 0) edges.push_back(Edge{t, stand_in[t], 0});
    std::vector<Demand> demands;
    for (const auto& d : inst.demands) {
        int s = stand_in[d.s] >= 0 ? stand_in[d.s] : d.s;
        int t = stand_in[d.t] >= 0 ? stand_in[d.t] : d.t;
        demands.push_back(Demand{std::min(s, t), std::max(s, t)});
    }
    out.preprocessed = make_instance(next, std::move(edges), std::move(demands), {},
                                     /*require_positive_weights=*/false);
    return out;
}

std::pair<TreeDecomposition, PartitionFamily> build_vc_decomposition(
    const Instance& inst, const CoverCertificate& cert) {
    validate_cover(inst, cert);
    std::vector<int> cover = cert.cover;
    std::sort(cover.begin(), cover.end());
    auto term = inst.terminal_mask();
    for (int v : cover)
        if (term[v]) throw InputError("terminal in cover: preprocessing skipped");

    TreeDecomposition td;
    auto add_node = [&](std::vector<int> bag, int parent, NodeKind kind) {
        TdNode nd;
        // the cover joins every bag
        bag.insert(bag.end(), cover.begin(), cover.end());
        std::sort(bag.begin(), bag.end());
        bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
        nd.bag = std::move(bag);
        nd.parent = parent;
        nd.kind = kind;
        int id = (int)td.nodes.size();
        td.nodes.push_back(std::move(nd));
        if (parent >= 0) td.nodes[parent].children.push_back(id);
        return id;
    };

    // one singleton-leaf-plus-forget tree per member set, joined binarily
    auto build_tree = [&](const std::vector<int>& members) {
        std::vector<int> tops;
        for (int t : members) {
            int forget = add_node({}, -1, NodeKind::Forget);
            int leaf = add_node({t}, forget, NodeKind::Leaf);
            (void)leaf;
            tops.push_back(forget);
        }
        while (tops.size() > 1) {
            std::vector<int> next_tops;
            for (std::size_t i = 0; i + 1 < tops.size(); i += 2) {
                int join = add_node({}, -1, NodeKind::Join);
                td.nodes[tops[i]].parent = join;
                td.nodes[join].children.push_back(tops[i]);
                td.nodes[tops[i + 1]].parent = join;
                td.nodes[join].children.push_back(tops[i + 1]);
                next_tops.push_back(join);
            }
            if (tops.size() % 2) next_tops.push_back(tops.back());
            tops = std::move(next_tops);
        }
        return tops[0];
    };

    auto groups = demand_groups(inst);
    std::vector<int> roots;
    for (const auto& g : groups.groups) roots.push_back(build_tree(g));
    std::vector<int> steiner;
    std::vector<bool> in_cover(inst.n, false);
    for (int v : cover) in_cover[v] = true;
    for (int v = 0; v < inst.n; ++v)
        if (!in_cover[v] && !term[v]) steiner.push_back(v);
    if (!steiner.empty()) roots.push_back(build_tree(steiner));
    if (roots.empty()) roots.push_back(add_node({}, -1, NodeKind::Leaf));
    while (roots.size() > 1) {
        std::vector<int> next_roots;
        for (std::size_t i = 0; i + 1 < roots.size(); i += 2) {
            int join = add_node({}, -1, NodeKind::Join);
            td.nodes[roots[i]].parent = join;
            td.nodes[join].children.push_back(roots[i]);
            td.nodes[roots[i + 1]].parent = join;
            td.nodes[join].children.push_back(roots[i + 1]);
            next_roots.push_back(join);
        }
        if (roots.size() % 2) next_roots.push_back(roots.back());
        roots = std::move(next_roots);
    }
    td.root = roots[0];
    td.nodes[td.root].parent = -1;
    td.nice = true;

    // cover vertices never enter or leave: unary steps are leaf->forget
    // pairs over the terminal; joins all carry the plain cover bag
    auto ctxs = bag_contexts(inst, td);
    PartitionFamily fam;
    fam.per_node.resize(td.nodes.size());
    for (int x = 0; x < (int)td.nodes.size(); ++x) {
        if (ctxs[x].active.empty()) continue;
        int g = groups.group_of[ctxs[x].active.front()];
        for (int t : ctxs[x].active)
            assert(groups.group_of[t] == g);  // active sets stay within a group
        (void)g;
        fam.per_node[x].push_back(Partition::canonical({ctxs[x].active}));
    }
    return {std::move(td), std::move(fam)};
}

Forest solve_vc(const Instance& inst, std::optional<CoverCertificate> cert) {
    CoverCertificate cover = cert ? *cert : greedy_cover(inst);
    CoverPreprocess pre = cover_preprocess(inst, cover);
    auto [td, fam] = build_vc_decomposition(pre.preprocessed, pre.cert);
    auto res = solve_conforming(pre.preprocessed, td, fam);
    if (!res) throw InfeasibleError("no feasible Steiner forest exists");

    // drop the zero-cost helper edges and map back
    std::map<std::pair<int, int>, int> orig_edge;
    for (int e = 0; e < (int)inst.edges.size(); ++e)
        orig_edge[{inst.edges[e].u, inst.edges[e].v}] = e;
    std::vector<int> ids;
    for (int e : res->forest.edge_ids) {
        const auto& ed = pre.preprocessed.edges[e];
        if (ed.u >= pre.original_n || ed.v >= pre.original_n) continue;
        auto it = orig_edge.find({ed.u, ed.v});
        assert(it != orig_edge.end());
        ids.push_back(it->second);
    }
    Forest lifted = Forest::of(std::move(ids));
    Evaluation ev = evaluate_solution(inst, lifted);
    assert(ev.feasible && ev.cost == res->cost);
    (void)ev;
    return lifted;
}

}  // namespace sf
