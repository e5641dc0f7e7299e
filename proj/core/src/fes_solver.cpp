#include "sf/fes_solver.hpp"

#include <algorithm>
#include <cassert>
#include <iostream>
#include <map>
#include <numeric>
#include <set>

#include "sf/baselines.hpp"
#include "sf/errors.hpp"
#include "sf/min_cut.hpp"
#include "sf/reduce.hpp"

namespace sf {

std::vector<int> feedback_edge_set(const Instance& inst) {
    std::vector<int> order(inst.edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (inst.edges[a].w != inst.edges[b].w) return inst.edges[a].w < inst.edges[b].w;
        return a < b;
    });
    UnionFind uf(inst.n);
    std::vector<int> fes;
    for (int e : order)
        if (!uf.unite(inst.edges[e].u, inst.edges[e].v)) fes.push_back(e);
    std::sort(fes.begin(), fes.end());
    return fes;
}

int TopologySkeleton::special_count() const {
    int c = 0;
    for (bool s : special) c += s;
    return c;
}

int TopologySkeleton::degree3_count(const Instance& inst) const {
    int c = 0;
    for (int d : inst.degrees()) c += d >= 3;
    return c;
}

TopologySkeleton build_skeleton(const Instance& inst) {
    auto deg = inst.degrees();
    for (int v = 0; v < inst.n; ++v)
        if (deg[v] == 1)
            throw InputError("skeleton needs minimum degree 2 (apply the leaf rule first)");

    TopologySkeleton sk;
    sk.feedback_edges = feedback_edge_set(inst);
    sk.special.assign(inst.n, false);
    for (int v = 0; v < inst.n; ++v)
        if (deg[v] >= 3) sk.special[v] = true;
    for (int e : sk.feedback_edges) {
        sk.special[inst.edges[e].u] = true;
        sk.special[inst.edges[e].v] = true;
    }

    auto adj = inst.adjacency();
    std::vector<char> used(inst.edges.size(), 0);
    for (int s = 0; s < inst.n; ++s) {
        if (!sk.special[s]) continue;
        for (auto [first_nb, first_edge] : adj[s]) {
            if (used[first_edge]) continue;
            TopologySkeleton::TopoEdge te;
            te.u = s;
            int cur = s, edge = first_edge;
            while (true) {
                used[edge] = 1;
                te.edge_ids.push_back(edge);
                te.total_weight += inst.edges[edge].w;
                int next = inst.edges[edge].u == cur ? inst.edges[edge].v : inst.edges[edge].u;
                if (sk.special[next]) {
                    te.v = next;
                    break;
                }
                te.inner.push_back(next);
                // degree-2 interior: step onto the other incident edge
                int forward = adj[next][0].second == edge ? adj[next][1].second
                                                          : adj[next][0].second;
                cur = next;
                edge = forward;
            }
            sk.topo_edges.push_back(std::move(te));
        }
    }
    for (std::size_t e = 0; e < used.size(); ++e)
        assert(used[e]);  // min degree 2 leaves no special-free cycles
    return sk;
}

void write_skeleton(const TopologySkeleton& sk, std::ostream& out) {
    out << "SKELETON 1\n";
    out << "FEEDBACK";
    for (int e : sk.feedback_edges) out << " " << e;
    out << "\nSPECIAL";
    for (int v = 0; v < (int)sk.special.size(); ++v)
        if (sk.special[v]) out << " " << (v + 1);
    out << "\n";
    for (const auto& te : sk.topo_edges) {
        out << "TOPO " << (te.u + 1) << " " << (te.v + 1) << " w=" << te.total_weight
            << " :";
        for (int v : te.inner) out << " " << (v + 1);
        out << "\n";
    }
    out << "END\n";
}

// ---------------------------------------------------------------------------
// two-pole subproblem

namespace {

struct PolePaths {
    struct Path {
        // segs[i] sits between position i and i+1; position 0 is pole a,
        // position segs.size() is pole b
        std::vector<std::pair<Cost, std::vector<int>>> segs;
        std::vector<char> pos_demand;  // per inner position 1..segs.size()-1
    };
    std::vector<Path> paths;
    // demands between (path, inner position) pairs
    std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> demands;
};

std::pair<Cost, std::vector<int>> solve_pole_paths(PolePaths pp, i64 cap_n) {
    // merge demand-free interior positions (degree-2 Steiner vertices)
    std::vector<std::vector<int>> pos_map(pp.paths.size());
    for (std::size_t p = 0; p < pp.paths.size(); ++p) {
        auto& path = pp.paths[p];
        PolePaths::Path merged;
        pos_map[p].assign(path.segs.size() + 1, 0);
        std::pair<Cost, std::vector<int>> acc{0, {}};
        for (std::size_t i = 0; i < path.segs.size(); ++i) {
            acc.first += path.segs[i].first;
            acc.second.insert(acc.second.end(), path.segs[i].second.begin(),
                              path.segs[i].second.end());
            bool at_inner = i + 1 < path.segs.size();
            if (at_inner && path.pos_demand[i + 1]) {
                merged.segs.push_back(std::move(acc));
                merged.pos_demand.push_back(0);  // position fills below
                pos_map[p][i + 1] = (int)merged.segs.size();
                acc = {0, {}};
            } else if (at_inner) {
                pos_map[p][i + 1] = -1;  // merged away
            }
        }
        merged.segs.push_back(std::move(acc));
        path = std::move(merged);
    }

    Cost total = 0;
    for (const auto& path : pp.paths)
        for (const auto& s : path.segs) total += s.first;
    if (total == 0) return {0, {}};

    CutGraph g;
    g.n = 2;
    std::vector<std::vector<int>> node_of(pp.paths.size());
    for (std::size_t p = 0; p < pp.paths.size(); ++p) {
        node_of[p].assign(pp.paths[p].segs.size() + 1, 0);
        node_of[p][0] = 0;
        node_of[p][pp.paths[p].segs.size()] = 1;
        for (std::size_t i = 1; i < pp.paths[p].segs.size(); ++i) node_of[p][i] = g.n++;
    }
    int seg_edges = 0;
    std::vector<std::pair<std::pair<int, int>, int>> seg_of_edge;  // ((path, seg), cut id)
    for (std::size_t p = 0; p < pp.paths.size(); ++p)
        for (std::size_t i = 0; i < pp.paths[p].segs.size(); ++i) {
            int id = g.add_edge(node_of[p][i], node_of[p][i + 1],
                                (u128)(total - pp.paths[p].segs[i].first));
            seg_of_edge.push_back({{(int)p, (int)i}, id});
            ++seg_edges;
        }
    u128 demand_cap = (u128)cap_n * (u128)cap_n * (u128)total;
    for (auto& [a, b] : pp.demands) {
        int na = node_of[a.first][pos_map[a.first][a.second]];
        int nb = node_of[b.first][pos_map[b.first][b.second]];
        g.add_edge(na, nb, demand_cap);
    }

    MinCutResult cut = min_cut(g, 0, 1);
    std::set<int> cut_set(cut.cut_edges.begin(), cut.cut_edges.end());
    for (int e : cut.cut_edges)
        if (e >= seg_edges)
            throw InputError("two-pole reduction: minimum cut selected a demand edge");

    Cost kept_cost = 0;
    std::vector<int> kept;
    for (std::size_t p = 0; p < pp.paths.size(); ++p)
        for (std::size_t i = 0; i < pp.paths[p].segs.size(); ++i) {
            int id = -1;
            for (auto& [key, eid] : seg_of_edge)
                if (key.first == (int)p && key.second == (int)i) id = eid;
            if (cut_set.count(id)) continue;
            kept_cost += pp.paths[p].segs[i].first;
            kept.insert(kept.end(), pp.paths[p].segs[i].second.begin(),
                        pp.paths[p].segs[i].second.end());
        }
    std::sort(kept.begin(), kept.end());
    return {kept_cost, std::move(kept)};
}

}  // namespace

Forest solve_two_pole(const Instance& inst, int c1, int c2) {
    if (c1 == c2 || c1 < 0 || c2 < 0 || c1 >= inst.n || c2 >= inst.n)
        throw InputError("two-pole solver needs two distinct poles");
    auto deg = inst.degrees();
    for (int v = 0; v < inst.n; ++v)
        if (v != c1 && v != c2 && deg[v] != 0 && deg[v] != 2)
            throw InputError("two-pole instance must be a union of pole paths");

    auto adj = inst.adjacency();
    std::vector<char> used(inst.edges.size(), 0);
    PolePaths pp;
    std::map<int, std::pair<int, int>> place;  // inner vertex -> (path, pos)
    for (auto [nb, e0] : adj[c1]) {
        if (used[e0]) continue;
        PolePaths::Path path;
        path.pos_demand.push_back(0);  // position 0 = pole
        int cur = c1, edge = e0, pos = 0;
        while (true) {
            used[edge] = 1;
            path.segs.push_back({inst.edges[edge].w, {edge}});
            int next = inst.edges[edge].u == cur ? inst.edges[edge].v : inst.edges[edge].u;
            ++pos;
            if (next == c2) break;
            if (next == c1) throw InputError("two-pole instance must be a union of pole paths");
            place[next] = {(int)pp.paths.size(), pos};
            path.pos_demand.push_back(0);
            int forward = adj[next][0].second == edge ? adj[next][1].second : adj[next][0].second;
            cur = next;
            edge = forward;
        }
        pp.paths.push_back(std::move(path));
    }
    for (char u : used)
        if (!u) throw InputError("two-pole instance must be a union of pole paths");

    for (const auto& d : inst.demands) {
        auto is_ = place.find(d.s), it_ = place.find(d.t);
        if (is_ == place.end() || it_ == place.end() ||
            is_->second.first == it_->second.first)
            throw InputError("two-pole demands must join internal vertices of distinct paths");
        pp.paths[is_->second.first].pos_demand[is_->second.second] = 1;
        pp.paths[it_->second.first].pos_demand[it_->second.second] = 1;
        pp.demands.push_back({is_->second, it_->second});
    }
    auto [cost, ids] = solve_pole_paths(std::move(pp), inst.n);
    (void)cost;
    return Forest::of(std::move(ids));
}

// ---------------------------------------------------------------------------
// the full solver

namespace {

struct GuessOutcome {
    Cost cost = 0;
    std::vector<int> edges;  // sorted ids into the reduced instance
};

struct GuessSolver {
    const Instance& g;
    const TopologySkeleton& sk;
    std::vector<int> class_of;  // per vertex (meaningful for specials)

    struct WTopo {
        int u, v;
        std::vector<int> inner;
        std::vector<int> edges;
        bool fully = false;
        bool alive = true;  // alive = not fully used and not yet resolved
    };
    std::vector<WTopo> topo;
    std::set<std::pair<int, int>> demands;
    std::set<int> chosen;
    std::map<int, std::pair<int, int>> inner_at;  // vertex -> (topo idx, inner idx)

    GuessSolver(const Instance& gg, const TopologySkeleton& s) : g(gg), sk(s) {}

    static std::pair<int, int> norm(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

    void repoint(int from, int to) {
        std::set<std::pair<int, int>> next;
        for (auto [a, b] : demands) {
            if (a == from) a = to;
            if (b == from) b = to;
            if (a != b) next.insert(norm(a, b));
        }
        demands = std::move(next);
    }

    Cost force_edges(const std::vector<int>& ids, std::size_t lo, std::size_t hi) {
        Cost c = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            chosen.insert(ids[i]);
            c += g.edges[ids[i]].w;
        }
        return c;
    }

    /// Resolves one topo-edge whose endpoints share a class and which is not
    /// fully used: the cheapest deletion point is kept, forced stub edges go
    /// into the solution, and every demand touching the interior disappears.
    void resolve_same_class(WTopo& te) {
        // move external demands onto the endpoint u
        while (true) {
            bool moved = false;
            for (auto [a, b] : demands) {
                bool a_in = inner_at.count(a) && inner_at[a].first == index_of(te);
                bool b_in = inner_at.count(b) && inner_at[b].first == index_of(te);
                int x = a_in ? a : b_in ? b : -1;
                int y = a_in ? b : a;
                if (x < 0) continue;
                bool y_outside = !(y == te.u || y == te.v ||
                                   (inner_at.count(y) && inner_at[y].first == index_of(te)));
                if (!y_outside) continue;
                demands.erase(norm(a, b));
                if (x != te.u) demands.insert(norm(x, te.u));
                if (y != te.u) demands.insert(norm(y, te.u));
                moved = true;
                break;
            }
            if (!moved) break;
        }
        // deleting edge d splits the interior into a stub hanging from u
        // (positions 1..d) and one hanging from v (positions d+1..len-1);
        // the leaf rule then forces, per demand, the edges of its span:
        // within-stub pairs force the edges between them, anything else
        // forces the run from the endpoint's position to its stub's anchor
        int len = (int)te.edges.size();
        std::vector<std::pair<int, int>> pairs;    // positions, lo < hi
        std::vector<int> anchors;                  // positions of outward demands
        for (auto [a, b] : demands) {
            int pa = inner_at.count(a) && inner_at[a].first == index_of(te)
                         ? inner_at[a].second + 1
                         : -1;
            int pb = inner_at.count(b) && inner_at[b].first == index_of(te)
                         ? inner_at[b].second + 1
                         : -1;
            if (pa >= 1 && pb >= 1)
                pairs.emplace_back(std::min(pa, pb), std::max(pa, pb));
            else if (pa >= 1)
                anchors.push_back(pa);
            else if (pb >= 1)
                anchors.push_back(pb);
        }
        auto forced_for = [&](int d, std::vector<char>& force) {
            force.assign(len, 0);
            force[d] = -1;  // deleted, never forced
            auto mark = [&](int lo, int hi) {  // edge indices [lo, hi)
                for (int i = lo; i < hi; ++i)
                    if (force[i] >= 0) force[i] = 1;
            };
            for (int p : anchors) {
                if (p <= d)
                    mark(0, p);  // run to u
                else
                    mark(p, len);  // run to v
            }
            for (auto [p, q] : pairs) {
                if (q <= d || p > d)
                    mark(p, q);  // same stub: just the span
                else {
                    mark(0, p);  // split pair: both runs
                    mark(q, len);
                }
            }
            Cost c = 0;
            for (int i = 0; i < len; ++i)
                if (force[i] == 1) c += g.edges[te.edges[i]].w;
            return c;
        };
        Cost best_cost = 0;
        int best_d = -1;
        std::vector<char> force;
        for (int d = 0; d < len; ++d) {
            Cost c = forced_for(d, force);
            if (best_d < 0 || c < best_cost) {
                best_cost = c;
                best_d = d;
            }
        }
        if (best_d >= 0) {
            forced_for(best_d, force);
            for (int i = 0; i < len; ++i)
                if (force[i] == 1) {
                    chosen.insert(te.edges[i]);
                }
        }
        // interior demands are now satisfied or subsumed by the class
        std::set<std::pair<int, int>> next;
        for (auto [a, b] : demands) {
            bool a_in = inner_at.count(a) && inner_at[a].first == index_of(te);
            bool b_in = inner_at.count(b) && inner_at[b].first == index_of(te);
            if (a_in || b_in) continue;
            next.insert({a, b});
        }
        demands = std::move(next);
        for (int x : te.inner) inner_at.erase(x);
        te.alive = false;
    }

    int index_of(const WTopo& te) const { return (int)(&te - topo.data()); }

    /// Forces the interior run between positions p1 <= p2 (1-based interior
    /// positions) and contracts it onto the vertex at p1.
    void contract_run(WTopo& te, int p1, int p2, int onto_vertex) {
        force_edges(te.edges, p1, p2);  // edges between positions p1..p2
        for (int p = p1; p <= p2; ++p) {
            int x = te.inner[p - 1];
            if (x == onto_vertex) continue;
            repoint(x, onto_vertex);
            inner_at.erase(x);
        }
        std::vector<int> inner2(te.inner.begin(), te.inner.begin() + (p1 - 1));
        if (onto_vertex != te.u && onto_vertex != te.v) inner2.push_back(onto_vertex);
        inner2.insert(inner2.end(), te.inner.begin() + p2, te.inner.end());
        std::vector<int> edges2(te.edges.begin(), te.edges.begin() + p1);
        edges2.insert(edges2.end(), te.edges.begin() + p2, te.edges.end());
        te.inner = std::move(inner2);
        te.edges = std::move(edges2);
        for (int i = 0; i < (int)te.inner.size(); ++i) inner_at[te.inner[i]] = {index_of(te), i};
    }

    /// Forces the prefix from endpoint u (or the suffix from v) up to the
    /// interior position and merges it into the endpoint.
    void contract_to_endpoint(WTopo& te, int pos, bool toward_u) {
        if (toward_u) {
            force_edges(te.edges, 0, pos);
            for (int p = 1; p <= pos; ++p) {
                repoint(te.inner[p - 1], te.u);
                inner_at.erase(te.inner[p - 1]);
            }
            te.inner.erase(te.inner.begin(), te.inner.begin() + pos);
            te.edges.erase(te.edges.begin(), te.edges.begin() + pos);
        } else {
            int len = (int)te.edges.size();
            force_edges(te.edges, pos, len);
            for (int p = pos; p < len; ++p) {
                repoint(te.inner[p - 1], te.v);
                inner_at.erase(te.inner[p - 1]);
            }
            te.inner.erase(te.inner.begin() + (pos - 1), te.inner.end());
            te.edges.erase(te.edges.begin() + pos, te.edges.end());
        }
        for (int i = 0; i < (int)te.inner.size(); ++i) inner_at[te.inner[i]] = {index_of(te), i};
    }

    std::optional<GuessOutcome> run(u64 fully_mask) {
        // rho: classes of special vertices connected by fully used topo-edges
        UnionFind uf(g.n);
        for (int i = 0; i < (int)sk.topo_edges.size(); ++i) {
            const auto& ste = sk.topo_edges[i];
            WTopo wt;
            wt.u = ste.u;
            wt.v = ste.v;
            wt.inner = ste.inner;
            wt.edges = ste.edge_ids;
            wt.fully = (fully_mask >> i) & 1;
            wt.alive = !wt.fully;
            if (wt.fully) {
                uf.unite(wt.u, wt.v);
                for (int e : wt.edges) chosen.insert(e);
            }
            topo.push_back(std::move(wt));
        }
        class_of.resize(g.n);
        for (int v = 0; v < g.n; ++v) class_of[v] = uf.find(v);
        for (int i = 0; i < (int)topo.size(); ++i)
            if (topo[i].alive)
                for (int j = 0; j < (int)topo[i].inner.size(); ++j)
                    inner_at[topo[i].inner[j]] = {i, j};

        // demands onto the skeleton: an endpoint interior to a fully used
        // topo-edge is physically tied to its endpoints
        for (const auto& d : g.demands) {
            int a = d.s, b = d.t;
            for (int* x : {&a, &b}) {
                for (const auto& te : topo)
                    if (te.fully &&
                        std::find(te.inner.begin(), te.inner.end(), *x) != te.inner.end())
                        *x = te.u;
            }
            if (a != b) demands.insert(norm(a, b));
        }

        auto is_special = [&](int v) { return sk.special[v]; };

        // the case analysis, one rewrite at a time
        while (true) {
            // special-special demands resolve against the guess
            bool changed = false;
            for (auto [a, b] : demands) {
                if (!is_special(a) || !is_special(b)) continue;
                if (class_of[a] != class_of[b]) return std::nullopt;
                demands.erase({a, b});
                changed = true;
                break;
            }
            if (changed) continue;
            // same-class topo-edges fall to the deletion rule
            for (auto& te : topo) {
                if (!te.alive || class_of[te.u] != class_of[te.v]) continue;
                resolve_same_class(te);
                changed = true;
                break;
            }
            if (changed) continue;
            // interior demand within one (distinct-class) topo-edge
            for (auto [a, b] : demands) {
                if (!inner_at.count(a) || !inner_at.count(b)) continue;
                auto [ta, pa] = inner_at[a];
                auto [tb, pb] = inner_at[b];
                if (ta != tb) continue;
                demands.erase({a, b});
                int p1 = std::min(pa, pb) + 1, p2 = std::max(pa, pb) + 1;
                contract_run(topo[ta], p1, p2, topo[ta].inner[p1 - 1]);
                changed = true;
                break;
            }
            if (changed) continue;
            // interior-to-special demand: forced toward the matching endpoint
            std::optional<std::pair<int, int>> reject_probe;
            for (auto [a, b] : demands) {
                int w = inner_at.count(a) ? a : b;
                int s = inner_at.count(a) ? b : a;
                if (!inner_at.count(w) || !is_special(s)) continue;
                auto [ti, pos] = inner_at[w];
                auto& te = topo[ti];
                if (class_of[s] == class_of[te.u]) {
                    demands.erase(norm(a, b));
                    demands.insert(norm(te.u, s));  // now special-special, same class
                    contract_to_endpoint(te, pos + 1, /*toward_u=*/true);
                } else if (class_of[s] == class_of[te.v]) {
                    demands.erase(norm(a, b));
                    demands.insert(norm(te.v, s));
                    contract_to_endpoint(te, pos + 1, /*toward_u=*/false);
                } else {
                    reject_probe = {a, b};
                }
                changed = true;
                break;
            }
            if (reject_probe) return std::nullopt;
            if (changed) continue;
            // demands across two topo-edges spanning three or four classes
            for (auto [a, b] : demands) {
                if (!inner_at.count(a) || !inner_at.count(b)) continue;
                auto [ta, pa] = inner_at[a];
                auto [tb, pb] = inner_at[b];
                (void)pa;
                (void)pb;
                assert(ta != tb);
                std::set<int> classes{class_of[topo[ta].u], class_of[topo[ta].v],
                                      class_of[topo[tb].u], class_of[topo[tb].v]};
                if (classes.size() == 4) return std::nullopt;
                if (classes.size() == 3) {
                    int a1 = -1, a2 = -1;
                    for (int x : {topo[ta].u, topo[ta].v})
                        for (int y : {topo[tb].u, topo[tb].v})
                            if (class_of[x] == class_of[y]) {
                                a1 = x;
                                a2 = y;
                            }
                    assert(a1 >= 0);
                    demands.erase(norm(a, b));
                    demands.insert(norm(a, a1));
                    demands.insert(norm(b, a2));
                    changed = true;
                    break;
                }
            }
            if (!changed) break;
        }

        // remaining demands pair up aligned class pairs; each pair reduces to
        // a two-pole instance solved by min cut
        std::set<std::pair<int, int>> pairs;
        for (auto [a, b] : demands) {
            if (!inner_at.count(a) || !inner_at.count(b)) return std::nullopt;
            const auto& ta = topo[inner_at[a].first];
            int ca = class_of[ta.u], cb = class_of[ta.v];
            pairs.insert(norm(ca, cb));
        }
        for (auto [cls_a, cls_b] : pairs) {
            PolePaths pp;
            std::vector<int> member_topos;
            std::map<int, std::pair<int, int>> pole_place;  // vertex -> (path, pos)
            for (int i = 0; i < (int)topo.size(); ++i) {
                auto& te = topo[i];
                if (!te.alive) continue;
                int cu = class_of[te.u], cv = class_of[te.v];
                if (norm(cu, cv) != std::make_pair(cls_a, cls_b)) continue;
                bool forward = cu == cls_a;
                PolePaths::Path path;
                path.pos_demand.assign(te.inner.size() + 1, 0);
                std::vector<int> inner_seq = te.inner;
                std::vector<int> edge_seq = te.edges;
                if (!forward) {
                    std::reverse(inner_seq.begin(), inner_seq.end());
                    std::reverse(edge_seq.begin(), edge_seq.end());
                }
                for (int e : edge_seq) path.segs.push_back({g.edges[e].w, {e}});
                for (int p = 0; p < (int)inner_seq.size(); ++p)
                    pole_place[inner_seq[p]] = {(int)pp.paths.size(), p + 1};
                pp.paths.push_back(std::move(path));
                member_topos.push_back(i);
            }
            std::set<std::pair<int, int>> consumed;
            i64 cap_n = 2;
            for (int i : member_topos) cap_n += (i64)topo[i].inner.size();
            for (auto [a, b] : demands) {
                if (!pole_place.count(a)) continue;
                if (!pole_place.count(b)) return std::nullopt;
                auto pa = pole_place[a], pb = pole_place[b];
                pp.paths[pa.first].pos_demand[pa.second] = 1;
                pp.paths[pb.first].pos_demand[pb.second] = 1;
                pp.demands.push_back({pa, pb});
                consumed.insert({a, b});
            }
            auto [b2, ids] = solve_pole_paths(std::move(pp), cap_n);
            (void)b2;
            for (int e : ids) chosen.insert(e);
            for (auto& d : consumed) demands.erase(d);
            for (int i : member_topos) {
                for (int x : topo[i].inner) inner_at.erase(x);
                topo[i].alive = false;
            }
        }
        if (!demands.empty()) return std::nullopt;

        Forest cand = Forest::of({chosen.begin(), chosen.end()});
        Evaluation ev = evaluate_solution(g, cand);
        if (!ev.feasible) return std::nullopt;
        return GuessOutcome{ev.cost, cand.edge_ids};
    }
};

}  // namespace

Forest solve_fes(const Instance& inst) {
    two_approx_primal_dual(inst);  // feasibility probe, throws when infeasible

    Reduction red = apply_rule3(inst);
    const Instance& g = red.reduced;

    std::optional<GuessOutcome> best;
    if (g.demands.empty()) {
        best = GuessOutcome{};
    } else {
        TopologySkeleton sk = build_skeleton(g);
        int t_count = (int)sk.topo_edges.size();
        if (t_count > 30)
            throw ResourceError("guess enumeration over " + std::to_string(t_count) +
                                " topological edges is out of reach");
        std::vector<int> order(t_count);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (sk.topo_edges[a].total_weight != sk.topo_edges[b].total_weight)
                return sk.topo_edges[a].total_weight > sk.topo_edges[b].total_weight;
            return a < b;
        });

        // guess enumeration: include-first DFS with a fully-used-cost bound
        auto dfs = [&](auto&& self, int depth, u64 mask, Cost acc) -> void {
            if (best && acc > best->cost) return;
            if (depth == t_count) {
                GuessSolver solver(g, sk);
                auto out = solver.run(mask);
                if (out && (!best || out->cost < best->cost ||
                            (out->cost == best->cost && out->edges < best->edges)))
                    best = std::move(out);
                return;
            }
            int te = order[depth];
            self(self, depth + 1, mask | (u64(1) << te),
                 acc + sk.topo_edges[te].total_weight);
            self(self, depth + 1, mask, acc);
        };
        dfs(dfs, 0, 0, 0);
    }
    if (!best) throw InfeasibleError("no feasible Steiner forest exists");

    Forest lifted = lift_solution(Forest::of(best->edges), red);
    Evaluation ev = evaluate_solution(inst, lifted);
    assert(ev.feasible);
    (void)ev;
    return lifted;
}

}  // namespace sf
