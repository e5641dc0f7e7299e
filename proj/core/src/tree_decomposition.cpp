#include "sf/tree_decomposition.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace sf {

const char* node_kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::Leaf: return "leaf";
        case NodeKind::Join: return "join";
        case NodeKind::Introduce: return "introduce";
        case NodeKind::Forget: return "forget";
        case NodeKind::Plain: return "plain";
    }
    return "?";
}

int TreeDecomposition::width() const {
    int w = -1;
    for (const auto& nd : nodes) w = std::max(w, (int)nd.bag.size() - 1);
    return w;
}

int TreeDecomposition::height() const {
    if (nodes.empty() || root < 0) return 0;
    int best = 0;
    // depth counted in nodes
    std::vector<std::pair<int, int>> stack{{root, 1}};
    while (!stack.empty()) {
        auto [x, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        for (int c : nodes[x].children) stack.emplace_back(c, d + 1);
    }
    return best;
}

std::vector<int> TreeDecomposition::preorder() const {
    std::vector<int> order;
    if (root < 0) return order;
    std::vector<int> stack{root};
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        order.push_back(x);
        for (auto it = nodes[x].children.rbegin(); it != nodes[x].children.rend(); ++it)
            stack.push_back(*it);
    }
    return order;
}

std::vector<int> TreeDecomposition::postorder() const {
    auto order = preorder();
    std::reverse(order.begin(), order.end());
    return order;
}

// ---------------------------------------------------------------------------
// validation

TdCheck validate_td(const Instance& inst, const TreeDecomposition& td) {
    TdCheck check;
    auto bad = [&](const std::string& msg) {
        check.ok = false;
        check.violations.push_back(msg);
    };
    if (td.nodes.empty() || td.root < 0 || td.root >= (int)td.nodes.size()) {
        bad("no root node");
        return check;
    }
    if (td.nodes[td.root].parent != -1) bad("root has a parent");
    for (int i = 0; i < (int)td.nodes.size(); ++i) {
        const auto& nd = td.nodes[i];
        for (int c : nd.children) {
            if (c < 0 || c >= (int)td.nodes.size() || td.nodes[c].parent != i)
                bad("node " + std::to_string(i) + ": inconsistent child link");
        }
        if (i != td.root) {
            int p = nd.parent;
            if (p < 0 || p >= (int)td.nodes.size() ||
                std::find(td.nodes[p].children.begin(), td.nodes[p].children.end(), i) ==
                    td.nodes[p].children.end())
                bad("node " + std::to_string(i) + ": inconsistent parent link");
        }
        if (!std::is_sorted(nd.bag.begin(), nd.bag.end()) ||
            std::adjacent_find(nd.bag.begin(), nd.bag.end()) != nd.bag.end())
            bad("node " + std::to_string(i) + ": bag not sorted or has duplicates");
        for (int v : nd.bag)
            if (v < 0 || v >= inst.n) bad("node " + std::to_string(i) + ": bag vertex out of range");
    }
    auto order = td.preorder();
    if ((int)order.size() != (int)td.nodes.size()) {
        bad("tree does not reach every node");
        return check;
    }

    // property 1: vertex coverage
    std::vector<char> seen(inst.n, 0);
    for (const auto& nd : td.nodes)
        for (int v : nd.bag) seen[v] = 1;
    for (int v = 0; v < inst.n; ++v)
        if (!seen[v]) bad("vertex " + std::to_string(v) + " uncovered");

    // property 2: edge coverage
    for (const auto& e : inst.edges) {
        bool covered = false;
        for (const auto& nd : td.nodes) {
            if (std::binary_search(nd.bag.begin(), nd.bag.end(), e.u) &&
                std::binary_search(nd.bag.begin(), nd.bag.end(), e.v)) {
                covered = true;
                break;
            }
        }
        if (!covered)
            bad("edge " + std::to_string(e.u) + "-" + std::to_string(e.v) + " uncovered");
    }

    // property 3: connected traces; each vertex trace has exactly one top
    std::vector<int> tops(inst.n, 0), occurrences(inst.n, 0);
    for (int i = 0; i < (int)td.nodes.size(); ++i) {
        const auto& nd = td.nodes[i];
        for (int v : nd.bag) {
            ++occurrences[v];
            bool parent_has = false;
            if (nd.parent >= 0) {
                const auto& pb = td.nodes[nd.parent].bag;
                parent_has = std::binary_search(pb.begin(), pb.end(), v);
            }
            if (!parent_has) ++tops[v];
        }
    }
    for (int v = 0; v < inst.n; ++v)
        if (occurrences[v] > 0 && tops[v] != 1)
            bad("vertex " + std::to_string(v) + " trace disconnected");

    if (td.nice) {
        for (int i = 0; i < (int)td.nodes.size(); ++i) {
            const auto& nd = td.nodes[i];
            const auto& kids = nd.children;
            std::string where = "node " + std::to_string(i) + ": ";
            switch (nd.kind) {
                case NodeKind::Leaf:
                    if (!kids.empty()) bad(where + "leaf with children");
                    break;
                case NodeKind::Join: {
                    if (kids.size() != 2) {
                        bad(where + "join without two children");
                        break;
                    }
                    if (td.nodes[kids[0]].bag != nd.bag || td.nodes[kids[1]].bag != nd.bag)
                        bad(where + "join children bags differ from parent");
                    break;
                }
                case NodeKind::Introduce:
                case NodeKind::Forget: {
                    if (kids.size() != 1) {
                        bad(where + "unary node without one child");
                        break;
                    }
                    const auto& cb = td.nodes[kids[0]].bag;
                    std::vector<int> only_here, only_child;
                    std::set_difference(nd.bag.begin(), nd.bag.end(), cb.begin(), cb.end(),
                                        std::back_inserter(only_here));
                    std::set_difference(cb.begin(), cb.end(), nd.bag.begin(), nd.bag.end(),
                                        std::back_inserter(only_child));
                    if (nd.kind == NodeKind::Introduce &&
                        !(only_here.size() == 1 && only_child.empty()))
                        bad(where + "introduce node does not add exactly one vertex");
                    if (nd.kind == NodeKind::Forget &&
                        !(only_child.size() == 1 && only_here.empty()))
                        bad(where + "forget node does not drop exactly one vertex");
                    break;
                }
                case NodeKind::Plain:
                    bad(where + "plain node in a nice decomposition");
                    break;
            }
        }
    }
    return check;
}

// ---------------------------------------------------------------------------
// construction helpers

namespace {

void sort_children_deterministically(TreeDecomposition& td) {
    for (auto& nd : td.nodes) {
        std::sort(nd.children.begin(), nd.children.end(), [&](int a, int b) {
            int ma = td.nodes[a].bag.empty() ? INT32_MAX : td.nodes[a].bag.front();
            int mb = td.nodes[b].bag.empty() ? INT32_MAX : td.nodes[b].bag.front();
            if (ma != mb) return ma < mb;
            return a < b;
        });
    }
}

void assign_kinds(TreeDecomposition& td) {
    for (auto& nd : td.nodes) {
        if (nd.children.empty()) {
            nd.kind = NodeKind::Leaf;
        } else if (nd.children.size() == 2) {
            nd.kind = NodeKind::Join;
        } else if (nd.children.size() == 1) {
            const auto& cb = td.nodes[nd.children[0]].bag;
            nd.kind = nd.bag.size() > cb.size() ? NodeKind::Introduce : NodeKind::Forget;
        } else {
            nd.kind = NodeKind::Plain;
        }
    }
}

/// Drops nodes whose bag is a subset of their parent's (children reattach to
/// the parent), to the fixpoint. Keeps validity, can only shrink heights.
TreeDecomposition compress_subset_bags(const TreeDecomposition& td) {
    int n_nodes = (int)td.nodes.size();
    std::vector<int> parent(n_nodes);
    std::vector<char> dead(n_nodes, 0);
    for (int i = 0; i < n_nodes; ++i) parent[i] = td.nodes[i].parent;

    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < n_nodes; ++i) {
            if (dead[i] || parent[i] < 0) continue;
            int p = parent[i];
            while (dead[p]) p = parent[p];
            parent[i] = p;
            const auto& b = td.nodes[i].bag;
            const auto& pb = td.nodes[p].bag;
            if (std::includes(pb.begin(), pb.end(), b.begin(), b.end())) {
                dead[i] = 1;
                changed = true;
            }
        }
    }
    // rebuild
    std::vector<int> remap(n_nodes, -1);
    TreeDecomposition out;
    for (int i = 0; i < n_nodes; ++i) {
        if (dead[i]) continue;
        remap[i] = (int)out.nodes.size();
        TdNode nd;
        nd.bag = td.nodes[i].bag;
        out.nodes.push_back(std::move(nd));
    }
    for (int i = 0; i < n_nodes; ++i) {
        if (dead[i]) continue;
        int p = parent[i];
        while (p >= 0 && dead[p]) p = parent[p];
        int ni = remap[i];
        if (p < 0) {
            out.nodes[ni].parent = -1;
            out.root = ni;
        } else {
            out.nodes[ni].parent = remap[p];
            out.nodes[remap[p]].children.push_back(ni);
        }
    }
    if (out.root < 0 && !out.nodes.empty()) out.root = 0;
    sort_children_deterministically(out);
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// heuristic construction (min-degree, min-fill tie-break)

TreeDecomposition heuristic_td(const Instance& inst) {
    int n = inst.n;
    TreeDecomposition td;
    if (n == 0) {
        td.nodes.push_back(TdNode{});
        td.root = 0;
        td.nodes[0].kind = NodeKind::Leaf;
        return td;
    }
    std::vector<std::set<int>> adj(n);
    for (const auto& e : inst.edges) {
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }
    std::vector<char> eliminated(n, 0);
    std::vector<int> elim_pos(n, -1);
    std::vector<std::vector<int>> bags(n);
    std::vector<int> order;
    order.reserve(n);

    auto fill_count = [&](int v) {
        int fill = 0;
        std::vector<int> nb(adj[v].begin(), adj[v].end());
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j)
                if (!adj[nb[i]].count(nb[j])) ++fill;
        return fill;
    };

    for (int step = 0; step < n; ++step) {
        int best = -1, best_deg = -1, best_fill = -1;
        for (int v = 0; v < n; ++v) {
            if (eliminated[v]) continue;
            int deg = (int)adj[v].size();
            if (best >= 0 && deg > best_deg) continue;
            int fill = (best >= 0 && deg == best_deg && best_fill == 0) ? 1 : fill_count(v);
            if (best < 0 || deg < best_deg || (deg == best_deg && fill < best_fill)) {
                best = v;
                best_deg = deg;
                best_fill = fill;
            }
        }
        int v = best;
        elim_pos[v] = step;
        order.push_back(v);
        bags[v].assign(adj[v].begin(), adj[v].end());
        bags[v].push_back(v);
        std::sort(bags[v].begin(), bags[v].end());
        std::vector<int> nb(adj[v].begin(), adj[v].end());
        for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j) {
                adj[nb[i]].insert(nb[j]);
                adj[nb[j]].insert(nb[i]);
            }
        for (int u : nb) adj[u].erase(v);
        adj[v].clear();
        eliminated[v] = 1;
    }

    // one node per vertex, parented on the earliest-eliminated later neighbor
    td.nodes.resize(n);
    for (int v = 0; v < n; ++v) td.nodes[elim_pos[v]].bag = bags[v];
    std::vector<int> roots;
    for (int v = 0; v < n; ++v) {
        int pos = elim_pos[v];
        int parent_vertex = -1;
        for (int u : bags[v])
            if (u != v && (parent_vertex < 0 || elim_pos[u] < elim_pos[parent_vertex]))
                parent_vertex = u;
        if (parent_vertex < 0) {
            roots.push_back(pos);
        } else {
            td.nodes[pos].parent = elim_pos[parent_vertex];
            td.nodes[elim_pos[parent_vertex]].children.push_back(pos);
        }
    }
    // disconnected graphs give several roots; chain them under the last one
    td.root = roots.back();
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
        td.nodes[roots[i]].parent = td.root;
        td.nodes[td.root].children.push_back(roots[i]);
    }
    td = compress_subset_bags(td);
    assign_kinds(td);
    td.nice = false;
    return td;
}

// ---------------------------------------------------------------------------
// nice form

namespace {

/// Contracts unary parent-child pairs with identical bags. A no-op on nice
/// decompositions (their unary steps always differ by one vertex).
TreeDecomposition contract_equal_unary(const TreeDecomposition& td) {
    TreeDecomposition out = td;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < (int)out.nodes.size(); ++i) {
            auto& nd = out.nodes[i];
            if (nd.children.size() != 1) continue;
            int c = nd.children[0];
            if (out.nodes[c].bag != nd.bag) continue;
            nd.children = out.nodes[c].children;
            for (int gc : nd.children) out.nodes[gc].parent = i;
            out.nodes[c].children.clear();
            out.nodes[c].parent = -2;  // detached
            changed = true;
        }
    }
    // rebuild without detached nodes
    std::vector<int> remap(out.nodes.size(), -1);
    TreeDecomposition clean;
    for (int i = 0; i < (int)out.nodes.size(); ++i) {
        if (out.nodes[i].parent == -2) continue;
        remap[i] = (int)clean.nodes.size();
        TdNode nd;
        nd.bag = out.nodes[i].bag;
        clean.nodes.push_back(std::move(nd));
    }
    for (int i = 0; i < (int)out.nodes.size(); ++i) {
        if (remap[i] < 0) continue;
        int p = out.nodes[i].parent;
        if (p < 0) {
            clean.root = remap[i];
        } else {
            clean.nodes[remap[i]].parent = remap[p];
            clean.nodes[remap[p]].children.push_back(remap[i]);
        }
    }
    return clean;
}

struct NiceBuilder {
    const TreeDecomposition& src;
    std::vector<TdNode> nodes;
    std::vector<std::pair<int, int>> frames;  // (old node, new parent)

    explicit NiceBuilder(const TreeDecomposition& s) : src(s) {}

    int add(std::vector<int> bag, int parent) {
        TdNode nd;
        nd.bag = std::move(bag);
        nd.parent = parent;
        int id = (int)nodes.size();
        nodes.push_back(std::move(nd));
        if (parent >= 0) nodes[parent].children.push_back(id);
        return id;
    }

    /// Intermediate nodes between bag `from` (held by `parent`) and bag `to`
    /// (held by the node the caller will attach); one vertex per step,
    /// ascending ids, drops before gains. Returns the attach parent.
    int chain(int parent, const std::vector<int>& from, const std::vector<int>& to) {
        std::vector<int> drop, gain;
        std::set_difference(from.begin(), from.end(), to.begin(), to.end(),
                            std::back_inserter(drop));
        std::set_difference(to.begin(), to.end(), from.begin(), from.end(),
                            std::back_inserter(gain));
        std::vector<int> cur = from;
        int at = parent;
        int steps = (int)(drop.size() + gain.size());
        int emitted = 0;
        for (int v : drop) {
            if (emitted + 1 >= steps) break;
            cur.erase(std::find(cur.begin(), cur.end(), v));
            at = add(cur, at);
            ++emitted;
        }
        for (int v : gain) {
            if (emitted + 1 >= steps) break;
            cur.insert(std::lower_bound(cur.begin(), cur.end(), v), v);
            at = add(cur, at);
            ++emitted;
        }
        return at;
    }

    /// Hangs `kids` (old node ids) under new node `self` (bag `bag`) as a
    /// binary join structure whose direct children all carry `bag`.
    void attach_half(int self, const std::vector<int>& bag, const std::vector<int>& kids) {
        if (kids.size() == 1) {
            int c = kids[0];
            if (src.nodes[c].bag == bag) {
                frames.emplace_back(c, self);  // the child copy is the join child
            } else {
                int top = add(bag, self);
                int at = chain(top, bag, src.nodes[c].bag);
                frames.emplace_back(c, at);
            }
            return;
        }
        int mid = add(bag, self);
        std::size_t half = kids.size() / 2;
        attach_half(mid, bag, {kids.begin(), kids.begin() + half});
        attach_half(mid, bag, {kids.begin() + half, kids.end()});
    }
};

}  // namespace

TreeDecomposition make_nice(const TreeDecomposition& td) {
    TreeDecomposition src = contract_equal_unary(td);
    sort_children_deterministically(src);

    NiceBuilder b(src);
    int new_root = -1;
    b.frames.emplace_back(src.root, -1);
    while (!b.frames.empty()) {
        auto [old_node, new_parent] = b.frames.back();
        b.frames.pop_back();
        const auto& old = src.nodes[old_node];
        int self = b.add(old.bag, new_parent);
        if (new_parent < 0) new_root = self;
        const auto& kids = old.children;
        if (kids.empty()) continue;
        if (kids.size() == 1) {
            int at = b.chain(self, old.bag, src.nodes[kids[0]].bag);
            b.frames.emplace_back(kids[0], at);
            continue;
        }
        std::size_t half = kids.size() / 2;
        b.attach_half(self, old.bag, {kids.begin(), kids.begin() + half});
        b.attach_half(self, old.bag, {kids.begin() + half, kids.end()});
    }

    TreeDecomposition out;
    out.nodes = std::move(b.nodes);
    out.root = new_root;
    sort_children_deterministically(out);
    assign_kinds(out);
    out.nice = true;
    return out;
}

// ---------------------------------------------------------------------------
// rebalancing

int rebalance_width_bound(int input_width) {
    return kRebalanceWidthFactor * (input_width + 1) - 1;
}

i64 rebalance_height_bound(int input_width, int n_vertices) {
    int log2n = 0;
    while ((i64(1) << (log2n + 1)) <= std::max(1, n_vertices)) ++log2n;
    return (i64)kRebalanceHeightFactor * (input_width + 1) * (1 + log2n);
}

namespace {

/// Tree with at most two children per node, obtained by splitting
/// high-degree nodes into paths of copies with the same bag.
TreeDecomposition binarize(const TreeDecomposition& td) {
    TreeDecomposition out;
    std::vector<int> remap(td.nodes.size(), -1);
    for (int i : td.preorder()) {
        TdNode nd;
        nd.bag = td.nodes[i].bag;
        remap[i] = (int)out.nodes.size();
        out.nodes.push_back(std::move(nd));
        if (td.nodes[i].parent < 0) out.root = remap[i];
    }
    auto link = [&](int parent, int child) {
        out.nodes[child].parent = parent;
        out.nodes[parent].children.push_back(child);
    };
    for (int i : td.preorder()) {
        const auto& kids = td.nodes[i].children;
        int attach = remap[i];
        for (std::size_t j = 0; j < kids.size(); ++j) {
            std::size_t remaining = kids.size() - j;
            if (remaining >= 2 && !out.nodes[attach].children.empty()) {
                TdNode copy;
                copy.bag = out.nodes[attach].bag;
                int cid = (int)out.nodes.size();
                out.nodes.push_back(std::move(copy));
                link(attach, cid);
                attach = cid;
            }
            link(attach, remap[kids[j]]);
        }
    }
    return out;
}

struct Splitter {
    const TreeDecomposition& t;
    std::vector<std::vector<int>> adj;  // undirected tree adjacency
    std::vector<TdNode> out;

    explicit Splitter(const TreeDecomposition& td) : t(td), adj(td.nodes.size()) {
        for (int i = 0; i < (int)td.nodes.size(); ++i)
            if (td.nodes[i].parent >= 0) {
                adj[i].push_back(td.nodes[i].parent);
                adj[td.nodes[i].parent].push_back(i);
            }
    }

    int add_node(std::vector<int> bag, int parent) {
        TdNode nd;
        std::sort(bag.begin(), bag.end());
        bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
        nd.bag = std::move(bag);
        nd.parent = parent;
        int id = (int)out.size();
        out.push_back(std::move(nd));
        if (parent >= 0) out[parent].children.push_back(id);
        return id;
    }

    static std::vector<int> union_bags(std::initializer_list<const std::vector<int>*> bags) {
        std::vector<int> u;
        for (const auto* b : bags) u.insert(u.end(), b->begin(), b->end());
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        return u;
    }

    /// Connected components of `nodes` minus `removed`, as node lists.
    std::vector<std::vector<int>> components(const std::vector<int>& nodes, int removed) {
        std::set<int> in(nodes.begin(), nodes.end());
        in.erase(removed);
        std::vector<std::vector<int>> comps;
        std::set<int> seen;
        for (int s : nodes) {
            if (s == removed || seen.count(s)) continue;
            std::vector<int> comp, stack{s};
            seen.insert(s);
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                comp.push_back(x);
                for (int y : adj[x])
                    if (in.count(y) && !seen.count(y)) {
                        seen.insert(y);
                        stack.push_back(y);
                    }
            }
            comps.push_back(std::move(comp));
        }
        return comps;
    }

    int centroid(const std::vector<int>& nodes) {
        std::set<int> in(nodes.begin(), nodes.end());
        int best = -1, best_load = INT32_MAX;
        for (int c : nodes) {
            int load = 0;
            for (const auto& comp : components(nodes, c)) load = std::max(load, (int)comp.size());
            if (load < best_load || (load == best_load && c < best)) {
                best_load = load;
                best = c;
            }
        }
        return best;
    }

    std::vector<int> bfs_dist(const std::vector<int>& nodes, int from) {
        std::set<int> in(nodes.begin(), nodes.end());
        std::map<int, int> dist;
        std::queue<int> q;
        q.push(from);
        dist[from] = 0;
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (int y : adj[x])
                if (in.count(y) && !dist.count(y)) {
                    dist[y] = dist[x] + 1;
                    q.push(y);
                }
        }
        std::vector<int> d;
        d.reserve(nodes.size());
        for (int x : nodes) d.push_back(dist.count(x) ? dist[x] : INT32_MAX / 4);
        return d;
    }

    /// Meeting point of the three pairwise paths between a, b, c.
    int median3(const std::vector<int>& nodes, int a, int bb, int c) {
        auto da = bfs_dist(nodes, a), db = bfs_dist(nodes, bb), dc = bfs_dist(nodes, c);
        int best = -1;
        long long best_sum = LLONG_MAX;
        for (int i = 0; i < (int)nodes.size(); ++i) {
            long long s = (long long)da[i] + db[i] + dc[i];
            if (s < best_sum || (s == best_sum && nodes[i] < best)) {
                best_sum = s;
                best = nodes[i];
            }
        }
        return best;
    }

    int neighbor_into(int x, const std::vector<int>& comp) {
        std::set<int> in(comp.begin(), comp.end());
        for (int y : adj[x])
            if (in.count(y)) return y;
        return -1;
    }

    /// Recursive build over the connected node set `sub` with at most two
    /// portal nodes; the produced root bag contains all portal bags.
    int build(const std::vector<int>& sub, std::vector<int> portals, int parent) {
        if ((int)sub.size() <= 2) {
            std::vector<int> bag;
            for (int x : sub) bag.insert(bag.end(), t.nodes[x].bag.begin(), t.nodes[x].bag.end());
            return add_node(std::move(bag), parent);
        }
        int c = centroid(sub);
        std::vector<int> root_bag = t.nodes[c].bag;
        for (int p : portals)
            root_bag.insert(root_bag.end(), t.nodes[p].bag.begin(), t.nodes[p].bag.end());
        int self = add_node(std::move(root_bag), parent);

        for (const auto& comp : components(sub, c)) {
            std::vector<int> ports;
            for (int p : portals)
                if (std::find(comp.begin(), comp.end(), p) != comp.end()) ports.push_back(p);
            ports.push_back(neighbor_into(c, comp));
            std::sort(ports.begin(), ports.end());
            ports.erase(std::unique(ports.begin(), ports.end()), ports.end());
            if ((int)ports.size() <= 2) {
                build(comp, ports, self);
            } else {
                // three portals: split once more at their tree median so each
                // sub-component keeps at most two
                int m = median3(comp, ports[0], ports[1], ports[2]);
                std::vector<int> mid_bag = t.nodes[m].bag;
                for (int p : ports)
                    mid_bag.insert(mid_bag.end(), t.nodes[p].bag.begin(), t.nodes[p].bag.end());
                int mid = add_node(std::move(mid_bag), self);
                for (const auto& sub2 : components(comp, m)) {
                    std::vector<int> ports2;
                    for (int p : ports)
                        if (std::find(sub2.begin(), sub2.end(), p) != sub2.end())
                            ports2.push_back(p);
                    ports2.push_back(neighbor_into(m, sub2));
                    std::sort(ports2.begin(), ports2.end());
                    ports2.erase(std::unique(ports2.begin(), ports2.end()), ports2.end());
                    build(sub2, ports2, mid);
                }
            }
        }
        return self;
    }
};

}  // namespace

TreeDecomposition rebalance(const Instance& inst, const TreeDecomposition& td) {
    TreeDecomposition compact = compress_subset_bags(td);
    TreeDecomposition tri = binarize(compact);

    Splitter sp(tri);
    std::vector<int> all(tri.nodes.size());
    std::iota(all.begin(), all.end(), 0);
    int root = sp.build(all, {}, -1);

    TreeDecomposition balanced;
    balanced.nodes = std::move(sp.out);
    balanced.root = root;
    balanced = compress_subset_bags(balanced);
    TreeDecomposition nice = make_nice(balanced);
    (void)inst;
    return nice;
}

// ---------------------------------------------------------------------------
// terminals to leaves

TreeDecomposition push_terminals_to_leaves(const Instance& inst, const TreeDecomposition& td) {
    TreeDecomposition out = td;
    auto in_bag = [&](int node, int v) {
        const auto& b = out.nodes[node].bag;
        return std::binary_search(b.begin(), b.end(), v);
    };
    for (int t : inst.terminals()) {
        bool in_leaf = false;
        for (const auto& nd : out.nodes)
            if (nd.children.empty() &&
                std::binary_search(nd.bag.begin(), nd.bag.end(), t)) {
                in_leaf = true;
                break;
            }
        if (in_leaf) continue;
        // deepest node holding t, lowest id on ties
        int host = -1, host_depth = -1;
        std::vector<std::pair<int, int>> stack{{out.root, 1}};
        while (!stack.empty()) {
            auto [x, d] = stack.back();
            stack.pop_back();
            if (in_bag(x, t) && (d > host_depth || (d == host_depth && x < host))) {
                host = x;
                host_depth = d;
            }
            for (int c : out.nodes[x].children) stack.emplace_back(c, d + 1);
        }
        if (host < 0) throw InputError("terminal missing from every bag");

        // graft: host's parent -> join(bag of host) -> { host, forget chain to {t} }
        int old_parent = out.nodes[host].parent;
        TdNode join;
        join.bag = out.nodes[host].bag;
        join.parent = old_parent;
        join.kind = NodeKind::Join;
        int join_id = (int)out.nodes.size();
        out.nodes.push_back(join);
        if (old_parent >= 0)
            std::replace(out.nodes[old_parent].children.begin(),
                         out.nodes[old_parent].children.end(), host, join_id);
        else
            out.root = join_id;
        out.nodes[host].parent = join_id;
        out.nodes[join_id].children.push_back(host);

        std::vector<int> cur = out.nodes[join_id].bag;
        int at = join_id;
        // chain top carries the join bag, then forgets everything except t
        {
            TdNode top;
            top.bag = cur;
            top.parent = at;
            int id = (int)out.nodes.size();
            out.nodes.push_back(top);
            out.nodes[at].children.push_back(id);
            at = id;
        }
        for (int v : out.nodes[join_id].bag) {
            if (v == t) continue;
            cur.erase(std::find(cur.begin(), cur.end(), v));
            TdNode nd;
            nd.bag = cur;
            nd.parent = at;
            int id = (int)out.nodes.size();
            out.nodes.push_back(nd);
            out.nodes[at].children.push_back(id);
            at = id;
        }
    }
    sort_children_deterministically(out);
    assign_kinds(out);
    out.nice = true;
    return out;
}

// ---------------------------------------------------------------------------
// bag contexts

std::vector<BagContext> bag_contexts(const Instance& inst, const TreeDecomposition& td) {
    std::vector<BagContext> ctx(td.nodes.size());
    for (int x : td.postorder()) {
        ctx[x].node = x;
        ctx[x].in_subtree.assign(inst.n, false);
        for (int c : td.nodes[x].children)
            for (int v = 0; v < inst.n; ++v)
                if (ctx[c].in_subtree[v]) ctx[x].in_subtree[v] = true;
        for (int v : td.nodes[x].bag) ctx[x].in_subtree[v] = true;
        std::set<int> active;
        for (const auto& d : inst.demands) {
            bool s_in = ctx[x].in_subtree[d.s], t_in = ctx[x].in_subtree[d.t];
            if (s_in && !t_in) active.insert(d.s);
            if (t_in && !s_in) active.insert(d.t);
        }
        ctx[x].active.assign(active.begin(), active.end());
    }
    return ctx;
}

BagContext bag_context(const Instance& inst, const TreeDecomposition& td, int node) {
    return bag_contexts(inst, td).at(node);
}

std::vector<int> down_edges(const Instance& inst, const TreeDecomposition& td,
                            const BagContext& ctx) {
    const auto& bag = td.nodes[ctx.node].bag;
    std::vector<int> ids;
    for (int i = 0; i < (int)inst.edges.size(); ++i) {
        const auto& e = inst.edges[i];
        if (!ctx.in_subtree[e.u] || !ctx.in_subtree[e.v]) continue;
        bool u_in = std::binary_search(bag.begin(), bag.end(), e.u);
        bool v_in = std::binary_search(bag.begin(), bag.end(), e.v);
        if (u_in && v_in) continue;
        ids.push_back(i);
    }
    return ids;
}

// ---------------------------------------------------------------------------
// text formats

void write_td(const TreeDecomposition& td, std::ostream& out) {
    out << "TD 1\n";
    for (int i = 0; i < (int)td.nodes.size(); ++i) {
        const auto& nd = td.nodes[i];
        out << "NODE " << i << " ";
        if (nd.parent < 0)
            out << "-";
        else
            out << nd.parent;
        out << " " << node_kind_name(nd.kind) << " :";
        for (int v : nd.bag) out << " " << (v + 1);
        out << "\n";
    }
    out << "END\n";
}

std::string write_td_text(const TreeDecomposition& td) {
    std::ostringstream os;
    write_td(td, os);
    return os.str();
}

TreeDecomposition parse_td(std::istream& in) {
    std::string line;
    bool saw_header = false;
    std::map<int, int> id_map;
    struct Raw {
        int id;
        int parent;  // -1 for root
        std::string kind;
        std::vector<int> bag;
    };
    std::vector<Raw> raws;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#') continue;
        if (!saw_header) {
            int ver;
            if (tok != "TD" || !(ls >> ver) || ver != 1)
                throw InputError("TD line " + std::to_string(lineno) + ": expected 'TD 1'");
            saw_header = true;
        } else if (tok == "NODE") {
            Raw r;
            std::string parent_tok, colon;
            if (!(ls >> r.id >> parent_tok >> r.kind >> colon) || colon != ":")
                throw InputError("TD line " + std::to_string(lineno) + ": bad NODE line");
            r.parent = parent_tok == "-" ? -1 : std::stoi(parent_tok);
            int v;
            while (ls >> v) r.bag.push_back(v - 1);
            id_map.emplace(r.id, (int)raws.size());
            raws.push_back(std::move(r));
        } else if (tok == "END") {
            break;
        } else {
            throw InputError("TD line " + std::to_string(lineno) + ": unknown directive");
        }
    }
    if (raws.empty()) throw InputError("TD: no nodes");
    TreeDecomposition td;
    td.nodes.resize(raws.size());
    bool all_kinds_known = true;
    for (std::size_t i = 0; i < raws.size(); ++i) {
        auto& nd = td.nodes[i];
        nd.bag = raws[i].bag;
        std::sort(nd.bag.begin(), nd.bag.end());
        if (raws[i].parent < 0) {
            nd.parent = -1;
            td.root = (int)i;
        } else {
            auto it = id_map.find(raws[i].parent);
            if (it == id_map.end()) throw InputError("TD: unknown parent id");
            nd.parent = it->second;
            td.nodes[it->second].children.push_back((int)i);
        }
        const std::string& k = raws[i].kind;
        if (k == "leaf") nd.kind = NodeKind::Leaf;
        else if (k == "join") nd.kind = NodeKind::Join;
        else if (k == "introduce") nd.kind = NodeKind::Introduce;
        else if (k == "forget") nd.kind = NodeKind::Forget;
        else if (k == "plain") { nd.kind = NodeKind::Plain; all_kinds_known = false; }
        else throw InputError("TD: unknown node kind '" + k + "'");
    }
    if (td.root < 0) throw InputError("TD: no root node");
    td.nice = all_kinds_known;
    return td;
}

TreeDecomposition parse_td_text(const std::string& text) {
    std::istringstream in(text);
    return parse_td(in);
}

TreeDecomposition load_td(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open decomposition file: " + path);
    std::string head;
    std::streampos pos = in.tellg();
    std::getline(in, head);
    in.seekg(pos);
    if (head.rfind("TD", 0) == 0) return parse_td(in);
    return import_pace_td(in);
}

TreeDecomposition import_pace_td(std::istream& in) {
    std::string line;
    int bags = -1;
    std::map<int, std::vector<int>> raw_bags;
    std::vector<std::pair<int, int>> tree_edges;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok == "c") continue;
        if (tok == "s") {
            std::string td_tok;
            int w1, n;
            if (!(ls >> td_tok >> bags >> w1 >> n) || td_tok != "td")
                throw InputError("PACE TD: bad solution line");
        } else if (tok == "b") {
            int id, v;
            ls >> id;
            auto& bag = raw_bags[id];
            while (ls >> v) bag.push_back(v - 1);
        } else {
            int u = std::stoi(tok), v;
            if (!(ls >> v)) throw InputError("PACE TD: bad tree edge");
            tree_edges.emplace_back(u, v);
        }
    }
    if (bags < 0 || raw_bags.empty()) throw InputError("PACE TD: missing bags");
    std::map<int, int> id_map;
    TreeDecomposition td;
    for (auto& [id, bag] : raw_bags) {
        id_map.emplace(id, (int)td.nodes.size());
        TdNode nd;
        std::sort(bag.begin(), bag.end());
        bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
        nd.bag = bag;
        td.nodes.push_back(std::move(nd));
    }
    std::vector<std::vector<int>> adj(td.nodes.size());
    for (auto [u, v] : tree_edges) {
        if (!id_map.count(u) || !id_map.count(v)) throw InputError("PACE TD: edge on unknown bag");
        adj[id_map[u]].push_back(id_map[v]);
        adj[id_map[v]].push_back(id_map[u]);
    }
    // root at the first declared bag
    td.root = 0;
    std::vector<char> seen(td.nodes.size(), 0);
    std::vector<int> stack{td.root};
    seen[td.root] = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (int y : adj[x])
            if (!seen[y]) {
                seen[y] = 1;
                td.nodes[y].parent = x;
                td.nodes[x].children.push_back(y);
                stack.push_back(y);
            }
    }
    for (char s : seen)
        if (!s) throw InputError("PACE TD: decomposition tree is disconnected");
    sort_children_deterministically(td);
    assign_kinds(td);
    td.nice = false;
    return td;
}

}  // namespace sf
