#include "sf/conforming_dp.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <string>

#include "sf/errors.hpp"

namespace sf {

namespace {

constexpr uint8_t kNone = 0xFF;

/// Partial-solution summary at one node. Engaged bag vertices partition into
/// pieces (traces of partial components). A color names a committed final
/// component: pieces of one color must merge, distinct colors never do.
/// Unengaged bag vertices may carry a promised color. `below` commits the
/// active terminals of the child subtree(s); `active_color` is the outgoing
/// commitment for this node's own active terminals, fixed by the partition
/// chosen here.
struct Work {
    std::vector<uint8_t> piece_of;      // slot -> piece | kNone
    std::vector<uint8_t> piece_color;   // piece -> color | kNone (uncommitted)
    std::vector<uint8_t> promise;       // slot -> color | kNone
    std::vector<uint8_t> below;         // below-terminal index -> color
    std::vector<uint8_t> active_color;  // active-terminal index -> color
    int colors = 0;
    Cost cost = 0;
    std::vector<int> edges;  // sorted edge ids picked in the subtree
};

struct NodePlan {
    std::vector<int> bag;
    std::vector<int> active;       // A_i
    std::vector<int> below_terms;  // union of child active sets, sorted
    std::vector<int> edges_here;   // decided at this node
    std::vector<Demand> entries;   // demands whose endpoints first meet here
    const std::vector<Partition>* partitions = nullptr;
};

int slot_of(const std::vector<int>& bag, int v) {
    auto it = std::lower_bound(bag.begin(), bag.end(), v);
    return it != bag.end() && *it == v ? (int)(it - bag.begin()) : -1;
}

/// Renumbers pieces by first slot and colors by first appearance over
/// (pieces, promises, tail array); drops unreferenced entries. The tail is
/// `below` mid-node and `active_color` for finished states.
void compact(Work& w, bool final_form) {
    std::vector<uint8_t> piece_map(w.piece_color.size(), kNone);
    std::vector<uint8_t> new_piece_color;
    for (auto& p : w.piece_of) {
        if (p == kNone) continue;
        if (piece_map[p] == kNone) {
            piece_map[p] = (uint8_t)new_piece_color.size();
            new_piece_color.push_back(w.piece_color[p]);
        }
        p = piece_map[p];
    }
    w.piece_color = std::move(new_piece_color);

    std::vector<uint8_t> color_map(w.colors, kNone);
    int next = 0;
    auto touch = [&](uint8_t& c) {
        if (c == kNone) return;
        if (color_map[c] == kNone) color_map[c] = (uint8_t)next++;
        c = color_map[c];
    };
    for (auto& c : w.piece_color) touch(c);
    for (auto& c : w.promise) touch(c);
    auto& tail = final_form ? w.active_color : w.below;
    for (auto& c : tail) touch(c);
    if (final_form)
        w.below.clear();
    else
        w.active_color.clear();
    w.colors = next;
}

std::string key_of(const Work& w, bool final_form) {
    std::string k;
    k.reserve(w.piece_of.size() * 2 + w.piece_color.size() + 8);
    auto put = [&](const std::vector<uint8_t>& v) {
        k.push_back((char)(unsigned char)v.size());
        k.append(v.begin(), v.end());
    };
    put(w.piece_of);
    put(w.piece_color);
    put(w.promise);
    put(final_form ? w.active_color : w.below);
    return k;
}

/// Keeps the cheaper of two states, breaking cost ties toward the
/// lexicographically smaller edge set.
bool better(const Work& a, const Work& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.edges < b.edges;
}

void dedup_into(std::map<std::string, Work>& pool, Work w, bool final_form) {
    compact(w, final_form);
    std::string k = key_of(w, final_form);
    auto it = pool.find(k);
    if (it == pool.end() || better(w, it->second)) pool[std::move(k)] = std::move(w);
}

std::vector<Work> drain(std::map<std::string, Work>& pool) {
    std::vector<Work> out;
    out.reserve(pool.size());
    for (auto& [k, w] : pool) out.push_back(std::move(w));
    pool.clear();
    return out;
}

// -- structural steps -------------------------------------------------------

/// Child-final state reshaped for its parent: active commitments become the
/// `below` array; bag layout unchanged for now.
Work as_child_input(const Work& child) {
    Work w = child;
    w.below = w.active_color;
    w.active_color.clear();
    return w;
}

/// Forgets slot `pos`: a promised vertex may not disappear, and a piece
/// losing its last slot retires; retiring a colored piece is legal only when
/// nothing else references the color (other pieces, promises, or a below
/// commitment of a still-active terminal).
bool forget_slot(Work& w, int pos) {
    uint8_t p = w.piece_of[pos];
    if (p == kNone) {
        if (w.promise[pos] != kNone) return false;
    } else {
        bool last = true;
        for (int s = 0; s < (int)w.piece_of.size(); ++s)
            if (s != pos && w.piece_of[s] == p) last = false;
        if (last) {
            uint8_t c = w.piece_color[p];
            if (c != kNone) {
                for (int q = 0; q < (int)w.piece_color.size(); ++q)
                    if (q != (int)p && w.piece_color[q] == c) return false;
                for (uint8_t pc : w.promise)
                    if (pc == c) return false;
                for (uint8_t bc : w.below)
                    if (bc == c) return false;
            }
            w.piece_color[p] = kNone;  // retired; unreferenced after erase
        }
    }
    w.piece_of.erase(w.piece_of.begin() + pos);
    w.promise.erase(w.promise.begin() + pos);
    return true;
}

// -- edge decisions ----------------------------------------------------------

void engage(Work& w, int slot) {
    if (w.piece_of[slot] != kNone) return;
    w.piece_of[slot] = (uint8_t)w.piece_color.size();
    w.piece_color.push_back(w.promise[slot]);
    w.promise[slot] = kNone;
}

/// Adds an edge between two bag slots. Returns false for a dead branch
/// (cycle edge, or a merge of two distinct committed components).
bool take_edge(Work& w, int su, int sv, int edge_id, Weight weight) {
    engage(w, su);
    engage(w, sv);
    uint8_t pu = w.piece_of[su], pv = w.piece_of[sv];
    if (pu == pv) return false;  // a cycle never helps a minimal solution
    uint8_t cu = w.piece_color[pu], cv = w.piece_color[pv];
    if (cu != kNone && cv != kNone && cu != cv) return false;
    uint8_t merged = cu != kNone ? cu : cv;
    for (auto& p : w.piece_of)
        if (p == pv) p = pu;
    w.piece_color[pu] = merged;
    w.piece_color[pv] = kNone;
    w.cost += weight;
    w.edges.insert(std::lower_bound(w.edges.begin(), w.edges.end(), edge_id), edge_id);
    return true;
}

// -- endpoint references -----------------------------------------------------

struct Ref {
    uint8_t color = kNone;  // committed color, if any
    int piece = -1;         // uncommitted piece to paint
    int slot = -1;          // unengaged slot to promise
};

/// Where does terminal/vertex x live in this state? Exactly one of the three
/// fields is set for paintables; `color` wins when a commitment exists.
Ref resolve(const Work& w, const NodePlan& plan, int x) {
    Ref r;
    int s = slot_of(plan.bag, x);
    int b = slot_of(plan.below_terms, x);
    uint8_t below_c = b >= 0 ? w.below[b] : kNone;
    if (s >= 0) {
        if (w.piece_of[s] != kNone) {
            uint8_t c = w.piece_color[w.piece_of[s]];
            assert(below_c == kNone || c == below_c);
            if (c != kNone) {
                r.color = c;
            } else if (below_c != kNone) {
                r.color = below_c;  // commitment recorded below the bag
                r.piece = w.piece_of[s];
            } else {
                r.piece = w.piece_of[s];
            }
        } else {
            uint8_t c = w.promise[s];
            assert(below_c == kNone || c == kNone || c == below_c);
            if (c != kNone)
                r.color = c;
            else if (below_c != kNone)
                r.color = below_c;
            else
                r.slot = s;
        }
    } else {
        // forgotten: every active terminal below is committed
        assert(below_c != kNone);
        r.color = below_c;
    }
    return r;
}

void paint(Work& w, const Ref& r, uint8_t color) {
    if (r.piece >= 0) w.piece_color[r.piece] = color;
    if (r.slot >= 0) w.promise[r.slot] = color;
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<ConformingResult> solve_conforming(const Instance& inst,
                                                 const TreeDecomposition& td,
                                                 const PartitionFamily& fam) {
    if (!td.nice) throw InputError("conforming DP needs a nice decomposition");
    {
        auto check = validate_td(inst, td);
        if (!check.ok)
            throw InputError("conforming DP: invalid decomposition: " + check.violations[0]);
    }
    // states pack bag slots, pieces and colors into bytes; far below the
    // packing limit the state space is already out of reach
    if (td.width() + 1 > 64)
        throw ResourceError("conforming DP guarded at bag size <= 64, got width " +
                            std::to_string(td.width()));
    auto ctxs = bag_contexts(inst, td);
    validate_family(td, ctxs, fam);
    for (int t : inst.terminals()) {
        bool in_leaf = false;
        for (const auto& nd : td.nodes)
            if (nd.children.empty() && std::binary_search(nd.bag.begin(), nd.bag.end(), t))
                in_leaf = true;
        if (!in_leaf)
            throw InputError("conforming DP: terminal " + std::to_string(t + 1) +
                             " is in no leaf bag");
    }

    int node_count = (int)td.nodes.size();
    std::vector<NodePlan> plans(node_count);
    for (int x = 0; x < node_count; ++x) {
        plans[x].bag = td.nodes[x].bag;
        plans[x].active = ctxs[x].active;
        plans[x].partitions = &fam.per_node[x];
        std::set<int> below;
        for (int c : td.nodes[x].children)
            below.insert(ctxs[c].active.begin(), ctxs[c].active.end());
        plans[x].below_terms.assign(below.begin(), below.end());
    }
    // an edge is decided at the topmost node whose bag holds both endpoints
    for (int e = 0; e < (int)inst.edges.size(); ++e) {
        int at = -1;
        for (int x = 0; x < node_count && at < 0; ++x) {
            const auto& bag = td.nodes[x].bag;
            if (std::binary_search(bag.begin(), bag.end(), inst.edges[e].u) &&
                std::binary_search(bag.begin(), bag.end(), inst.edges[e].v))
                at = x;
        }
        assert(at >= 0);
        while (td.nodes[at].parent >= 0) {
            const auto& pb = td.nodes[td.nodes[at].parent].bag;
            if (std::binary_search(pb.begin(), pb.end(), inst.edges[e].u) &&
                std::binary_search(pb.begin(), pb.end(), inst.edges[e].v))
                at = td.nodes[at].parent;
            else
                break;
        }
        plans[at].edges_here.push_back(e);
    }
    // a demand is enforced at every node where its endpoints first share the
    // subtree vertex set
    for (const auto& d : inst.demands) {
        for (int x = 0; x < node_count; ++x) {
            if (!ctxs[x].in_subtree[d.s] || !ctxs[x].in_subtree[d.t]) continue;
            bool minimal = true;
            for (int c : td.nodes[x].children)
                if (ctxs[c].in_subtree[d.s] && ctxs[c].in_subtree[d.t]) minimal = false;
            if (minimal) plans[x].entries.push_back(d);
        }
    }

    std::vector<std::vector<Work>> table(node_count);

    for (int x : td.postorder()) {
        const NodePlan& plan = plans[x];
        const auto& kids = td.nodes[x].children;
        std::map<std::string, Work> mid;

        // -- structural phase
        if (kids.empty()) {
            Work w;
            w.piece_of.assign(plan.bag.size(), kNone);
            w.promise.assign(plan.bag.size(), kNone);
            dedup_into(mid, std::move(w), false);
        } else if (kids.size() == 1) {
            int c = kids[0];
            const auto& cbag = td.nodes[c].bag;
            bool is_forget = plan.bag.size() < cbag.size();
            if (is_forget) {
                std::vector<int> gone;
                std::set_difference(cbag.begin(), cbag.end(), plan.bag.begin(), plan.bag.end(),
                                    std::back_inserter(gone));
                int pos = slot_of(cbag, gone[0]);
                for (const Work& child : table[c]) {
                    Work w = as_child_input(child);
                    if (!forget_slot(w, pos)) continue;
                    dedup_into(mid, std::move(w), false);
                }
            } else {
                std::vector<int> fresh;
                std::set_difference(plan.bag.begin(), plan.bag.end(), cbag.begin(), cbag.end(),
                                    std::back_inserter(fresh));
                int pos = slot_of(plan.bag, fresh[0]);
                for (const Work& child : table[c]) {
                    Work w = as_child_input(child);
                    w.piece_of.insert(w.piece_of.begin() + pos, kNone);
                    w.promise.insert(w.promise.begin() + pos, kNone);
                    dedup_into(mid, std::move(w), false);
                }
            }
        } else {
            // join: unify the two color namespaces; same-side colors never
            // merge, cross-side identifications beyond the forced ones are
            // branched over
            const auto& cl = table[kids[0]];
            const auto& cr = table[kids[1]];
            const auto& al = ctxs[kids[0]].active;
            const auto& ar = ctxs[kids[1]].active;
            int bag_size = (int)plan.bag.size();
            for (const Work& wl : cl) {
                for (const Work& wr : cr) {
                    int off = wl.colors;
                    int total = wl.colors + wr.colors;
                    UnionFind cuf(total);
                    bool dead = false;

                    // pieces that share an engaged vertex merge
                    UnionFind puf((int)(wl.piece_color.size() + wr.piece_color.size()));
                    int pl_count = (int)wl.piece_color.size();
                    for (int s = 0; s < bag_size && !dead; ++s) {
                        uint8_t pl = wl.piece_of[s], pr = wr.piece_of[s];
                        if (pl != kNone && pr != kNone) puf.unite(pl, pl_count + pr);
                    }
                    // per merged piece: all member colors unify
                    std::map<int, std::vector<int>> piece_members;
                    for (int p = 0; p < pl_count; ++p) piece_members[puf.find(p)].push_back(p);
                    for (int p = 0; p < (int)wr.piece_color.size(); ++p)
                        piece_members[puf.find(pl_count + p)].push_back(pl_count + p);
                    std::map<int, std::vector<int>> piece_colors;  // class -> colors
                    for (auto& [root, members] : piece_members) {
                        for (int p : members) {
                            uint8_t c = p < pl_count ? wl.piece_color[p]
                                                     : wr.piece_color[p - pl_count];
                            if (c == kNone) continue;
                            piece_colors[root].push_back(p < pl_count ? c : off + c);
                        }
                    }
                    // cross promises: a promise on a vertex engaged on the
                    // other side binds that piece's color
                    for (int s = 0; s < bag_size; ++s) {
                        uint8_t pl = wl.piece_of[s], pr = wr.piece_of[s];
                        uint8_t ql = wl.promise[s], qr = wr.promise[s];
                        if (pl != kNone && qr != kNone)
                            piece_colors[puf.find(pl)].push_back(off + qr);
                        if (pr != kNone && ql != kNone)
                            piece_colors[puf.find(pl_count + pr)].push_back(ql);
                        if (pl == kNone && pr == kNone && ql != kNone && qr != kNone)
                            cuf.unite(ql, off + qr);
                    }
                    for (auto& [root, colors] : piece_colors)
                        for (std::size_t i = 1; i < colors.size(); ++i)
                            cuf.unite(colors[0], colors[i]);
                    // shared active terminals commit on both sides
                    for (int idx = 0; idx < (int)al.size(); ++idx) {
                        int pos = slot_of(ar, al[idx]);
                        if (pos >= 0) cuf.unite(wl.active_color[idx], off + wr.active_color[pos]);
                    }
                    // discipline: no class may hold two colors of one side
                    std::map<int, std::pair<int, int>> class_sides;  // root -> (l, r) reps
                    for (int c = 0; c < total && !dead; ++c) {
                        auto& [l, r] = class_sides[cuf.find(c)];
                        if (c < off) {
                            if (l && l != c + 1) dead = true;
                            l = c + 1;
                        } else {
                            if (r && r != c + 1) dead = true;
                            r = c + 1;
                        }
                    }
                    if (dead) continue;

                    // voluntary cross-side identifications
                    std::vector<int> lone_l, lone_r;
                    for (auto& [root, sides] : class_sides) {
                        if (sides.first && !sides.second) lone_l.push_back(sides.first - 1);
                        if (!sides.first && sides.second) lone_r.push_back(sides.second - 1);
                    }
                    std::vector<std::vector<std::pair<int, int>>> matchings;
                    std::vector<std::pair<int, int>> current;
                    std::vector<char> used_r(lone_r.size(), 0);
                    auto enumerate = [&](auto&& self, std::size_t i) -> void {
                        if (i == lone_l.size()) {
                            matchings.push_back(current);
                            return;
                        }
                        self(self, i + 1);  // leave lone_l[i] unmatched
                        for (std::size_t j = 0; j < lone_r.size(); ++j) {
                            if (used_r[j]) continue;
                            used_r[j] = 1;
                            current.emplace_back(lone_l[i], lone_r[j]);
                            self(self, i + 1);
                            current.pop_back();
                            used_r[j] = 0;
                        }
                    };
                    enumerate(enumerate, 0);

                    for (const auto& matching : matchings) {
                        UnionFind cuf2 = cuf;
                        for (auto [a, b] : matching) cuf2.unite(a, b);
                        Work w;
                        w.colors = total;  // compacted by dedup_into
                        w.cost = wl.cost + wr.cost;
                        std::merge(wl.edges.begin(), wl.edges.end(), wr.edges.begin(),
                                   wr.edges.end(), std::back_inserter(w.edges));
                        w.piece_of.assign(bag_size, kNone);
                        std::map<int, uint8_t> piece_id;
                        w.promise.assign(bag_size, kNone);
                        for (int s = 0; s < bag_size; ++s) {
                            uint8_t pl = wl.piece_of[s], pr = wr.piece_of[s];
                            int root = pl != kNone ? puf.find(pl)
                                       : pr != kNone ? puf.find(pl_count + pr)
                                                     : -1;
                            if (root >= 0) {
                                auto [it, fresh] = piece_id.emplace(root, (uint8_t)w.piece_color.size());
                                if (fresh) {
                                    auto pc = piece_colors.find(root);
                                    uint8_t col = kNone;
                                    if (pc != piece_colors.end() && !pc->second.empty())
                                        col = (uint8_t)cuf2.find(pc->second[0]);
                                    w.piece_color.push_back(col);
                                }
                                w.piece_of[s] = it->second;
                            } else {
                                uint8_t ql = wl.promise[s], qr = wr.promise[s];
                                if (ql != kNone)
                                    w.promise[s] = (uint8_t)cuf2.find(ql);
                                else if (qr != kNone)
                                    w.promise[s] = (uint8_t)cuf2.find(off + qr);
                            }
                        }
                        w.below.assign(plan.below_terms.size(), kNone);
                        for (int b = 0; b < (int)plan.below_terms.size(); ++b) {
                            int t = plan.below_terms[b];
                            int il = slot_of(al, t), ir = slot_of(ar, t);
                            if (il >= 0)
                                w.below[b] = (uint8_t)cuf2.find(wl.active_color[il]);
                            else if (ir >= 0)
                                w.below[b] = (uint8_t)cuf2.find(off + wr.active_color[ir]);
                        }
                        dedup_into(mid, std::move(w), false);
                    }
                }
            }
        }

        // -- edge phase, one edge at a time with dedup between
        for (int e : plan.edges_here) {
            int su = slot_of(plan.bag, inst.edges[e].u);
            int sv = slot_of(plan.bag, inst.edges[e].v);
            std::map<std::string, Work> next;
            for (auto& [k, w] : mid) {
                dedup_into(next, w, false);  // skip branch
                Work taken = w;
                if (take_edge(taken, su, sv, e, inst.edges[e].w))
                    dedup_into(next, std::move(taken), false);
            }
            mid = std::move(next);
        }

        // -- demand discharge: both endpoints now live under this node
        for (const auto& d : plan.entries) {
            std::map<std::string, Work> next;
            for (auto& [k, w] : mid) {
                Ref rs = resolve(w, plan, d.s);
                Ref rt = resolve(w, plan, d.t);
                if (rs.color != kNone && rt.color != kNone) {
                    if (rs.color == rt.color) dedup_into(next, w, false);
                    continue;  // two distinct commitments never meet
                }
                if (rs.piece >= 0 && rs.piece == rt.piece) {
                    dedup_into(next, w, false);  // already one piece
                    continue;
                }
                uint8_t fixed = rs.color != kNone ? rs.color : rt.color;
                if (fixed != kNone) {
                    Work painted = w;
                    paint(painted, rs.color == kNone ? rs : rt, fixed);
                    dedup_into(next, std::move(painted), false);
                    continue;
                }
                // both sides uncommitted: they join some final component --
                // a fresh one or any already-committed one
                for (int c = 0; c <= w.colors; ++c) {
                    Work painted = w;
                    uint8_t color = (uint8_t)c;
                    if (c == w.colors) painted.colors++;  // fresh
                    paint(painted, rs, color);
                    paint(painted, rt, color);
                    dedup_into(next, std::move(painted), false);
                }
            }
            mid = std::move(next);
        }

        // -- partition choice
        std::map<std::string, Work> done;
        if (plan.active.empty()) {
            for (auto& [k, w] : mid) {
                Work f = w;
                f.active_color.clear();
                dedup_into(done, std::move(f), true);
            }
        } else if (plan.partitions->empty()) {
            // active terminals but nothing to conform to: no solution here
        } else {
            for (const Partition& pi : *plan.partitions) {
                for (auto& [k, w0] : mid) {
                    std::vector<Work> branch{w0};
                    std::vector<std::vector<uint8_t>> branch_blocks{{}};
                    for (const auto& block : pi.blocks) {
                        std::vector<Work> grown;
                        std::vector<std::vector<uint8_t>> grown_blocks;
                        for (std::size_t bi = 0; bi < branch.size(); ++bi) {
                            Work& w = branch[bi];
                            const auto& chosen = branch_blocks[bi];
                            std::set<uint8_t> colors;
                            std::vector<Ref> paintables;
                            for (int t : block) {
                                Ref r = resolve(w, plan, t);
                                if (r.color != kNone)
                                    colors.insert(r.color);
                                if (r.color == kNone || r.piece >= 0 || r.slot >= 0)
                                    paintables.push_back(r);
                            }
                            if (colors.size() > 1) continue;  // split commitment
                            auto used = [&](uint8_t c) {
                                return std::find(chosen.begin(), chosen.end(), c) != chosen.end();
                            };
                            if (colors.size() == 1) {
                                uint8_t c = *colors.begin();
                                if (used(c)) continue;  // blocks need distinct components
                                Work painted = w;
                                for (const Ref& r : paintables) paint(painted, r, c);
                                auto blocks = chosen;
                                blocks.push_back(c);
                                grown.push_back(std::move(painted));
                                grown_blocks.push_back(std::move(blocks));
                            } else {
                                for (int c = 0; c <= w.colors; ++c) {
                                    if (c < w.colors && used((uint8_t)c)) continue;
                                    Work painted = w;
                                    if (c == w.colors) painted.colors++;
                                    for (const Ref& r : paintables) paint(painted, r, (uint8_t)c);
                                    auto blocks = chosen;
                                    blocks.push_back((uint8_t)c);
                                    grown.push_back(std::move(painted));
                                    grown_blocks.push_back(std::move(blocks));
                                }
                            }
                        }
                        branch = std::move(grown);
                        branch_blocks = std::move(grown_blocks);
                    }
                    for (std::size_t bi = 0; bi < branch.size(); ++bi) {
                        Work f = std::move(branch[bi]);
                        f.active_color.assign(plan.active.size(), kNone);
                        for (int a = 0; a < (int)plan.active.size(); ++a) {
                            int blk = pi.block_of(plan.active[a]);
                            f.active_color[a] = branch_blocks[bi][blk];
                        }
                        dedup_into(done, std::move(f), true);
                    }
                }
            }
        }
        table[x] = drain(done);
        for (int c : kids) table[c].clear();  // children fully consumed
    }

    // virtual forget chain above the root retires every remaining piece
    std::map<std::string, Work> pool;
    for (Work& w : table[td.root]) {
        Work m = as_child_input(w);
        bool alive = true;
        while (!m.piece_of.empty() && alive) alive = forget_slot(m, 0);
        if (alive) dedup_into(pool, std::move(m), false);
    }
    const Work* best = nullptr;
    for (auto& [k, w] : pool)
        if (!best || better(w, *best)) best = &w;
    if (!best) return std::nullopt;

    ConformingResult res;
    res.forest = Forest::of(best->edges);
    res.cost = best->cost;
    // post-hoc recheck: the reconstruction must be feasible and conforming
    Evaluation ev = evaluate_solution(inst, res.forest);
    assert(ev.feasible && ev.cost == res.cost);
    (void)ev;
    return res;
}

}  // namespace sf
