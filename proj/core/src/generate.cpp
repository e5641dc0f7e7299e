#include "sf/generate.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "sf/errors.hpp"

namespace sf {

// ---------------------------------------------------------------------------
// three-way variable partition

Cnf3 tsat3_transform(const Cnf3& cnf) {
    int n = cnf.variable_count;
    Cnf3 out;
    out.variable_count = 3 * n;
    auto companion = [&](int var, int tier) { return var + tier * n; };

    // implication cycle x -> x' -> x'' -> x forces equal values
    for (int x = 1; x <= n; ++x) {
        out.clauses.push_back({-x, companion(x, 1)});
        out.clauses.push_back({-companion(x, 1), companion(x, 2)});
        out.clauses.push_back({-companion(x, 2), x});
    }
    // move the 2nd/3rd literal of every clause to its companion, same polarity
    for (const auto& clause : cnf.clauses) {
        if (clause.empty() || clause.size() > 3)
            throw InputError("clause size outside 1..3");
        std::vector<int> rewritten;
        for (std::size_t pos = 0; pos < clause.size(); ++pos) {
            int lit = clause[pos];
            int var = lit > 0 ? lit : -lit;
            if (var < 1 || var > n) throw InputError("literal variable out of range");
            int moved = companion(var, (int)pos);
            rewritten.push_back(lit > 0 ? moved : -moved);
        }
        out.clauses.push_back(std::move(rewritten));
    }
    Cnf3::VarPartition part;
    for (int x = 1; x <= n; ++x) {
        part.set_a.push_back(x);
        part.set_b.push_back(companion(x, 1));
        part.set_c.push_back(companion(x, 2));
    }
    out.partition = std::move(part);
    return out;
}

// ---------------------------------------------------------------------------
// choice-gadget reduction

namespace {

int next_power_of_4(i64 x) {
    i64 p = 4;
    while (p < x) p *= 4;
    return (int)p;
}

int log2_exact(i64 x) {
    int r = 0;
    while ((i64(1) << r) < x) ++r;
    return r;
}

}  // namespace

std::pair<Instance, GadgetLayout> sat_to_steiner_forest(const Cnf3& cnf) {
    if (!cnf.partition)
        throw InputError("gadget construction needs a partitioned formula");
    const auto& part = *cnf.partition;
    const std::vector<const std::vector<int>*> sets{&part.set_a, &part.set_b, &part.set_c};

    std::vector<int> set_of(cnf.variable_count + 1, -1);
    for (int s = 0; s < 3; ++s)
        for (int v : *sets[s]) {
            if (v < 1 || v > cnf.variable_count) throw InputError("partition variable out of range");
            if (set_of[v] != -1) throw InputError("variable in two partition sets");
            set_of[v] = s;
        }
    for (const auto& clause : cnf.clauses) {
        std::set<int> used;
        for (int lit : clause) {
            int var = lit > 0 ? lit : -lit;
            if (set_of[var] < 0) throw InputError("clause variable missing from partition");
            if (!used.insert(set_of[var]).second)
                throw InputError("clause has two variables from one partition set");
        }
    }

    GadgetLayout lay;
    i64 max_set = std::max({(i64)part.set_a.size(), (i64)part.set_b.size(),
                            (i64)part.set_c.size(), (i64)1});
    lay.padded_n = next_power_of_4(max_set);
    lay.log_n = log2_exact(lay.padded_n);
    int half_log = lay.log_n / 2;
    int sqrt_n = 1 << half_log;
    lay.big_l = (lay.padded_n + (i64)lay.log_n * lay.log_n - 1) / ((i64)lay.log_n * lay.log_n);
    lay.gadget_count = 3 * lay.log_n;
    int blocks = (int)(2 * lay.big_l);

    // variable groups: each set is split into log n ascending runs
    lay.slot_of.assign(cnf.variable_count + 1, GadgetLayout::VarSlot{-1, -1, -1});
    int per_group = (lay.padded_n + lay.log_n - 1) / lay.log_n;  // ceil(n / log n)
    for (int s = 0; s < 3; ++s) {
        std::vector<int> vars = *sets[s];
        std::sort(vars.begin(), vars.end());
        for (int idx = 0; idx < (int)vars.size(); ++idx) {
            int group_in_set = idx / per_group;
            int pos = idx % per_group;
            int gadget = s * lay.log_n + group_in_set;
            lay.slot_of[vars[idx]] =
                GadgetLayout::VarSlot{gadget, pos / half_log, pos % half_log};
        }
    }

    // vertex ids: per gadget left, right, middle; then clause pairs
    int next_id = 0;
    lay.left.resize(lay.gadget_count);
    lay.right.resize(lay.gadget_count);
    lay.middle.resize(lay.gadget_count);
    for (int i = 0; i < lay.gadget_count; ++i) {
        for (int j = 0; j < blocks; ++j) lay.left[i].push_back(next_id++);
        for (int j = 0; j < blocks; ++j) lay.right[i].push_back(next_id++);
        for (int j = 0; j < sqrt_n; ++j) lay.middle[i].push_back(next_id++);
    }
    for (std::size_t q = 0; q < cnf.clauses.size(); ++q) {
        int c1 = next_id++, c2 = next_id++;
        lay.clause_vertices.emplace_back(c1, c2);
    }
    lay.vertex_count = next_id;

    std::vector<Edge> edges;
    std::vector<Demand> demands;
    for (int i = 0; i < lay.gadget_count; ++i) {
        for (int j = 0; j < blocks; ++j) {
            for (int jp = 0; jp < sqrt_n; ++jp) {
                edges.push_back(Edge{lay.left[i][j], lay.middle[i][jp], 1});
                edges.push_back(Edge{lay.right[i][j], lay.middle[i][jp], 1});
            }
            demands.push_back(Demand{lay.left[i][j], lay.right[i][j]});
        }
        for (int v : lay.left[i]) lay.cover_witness.push_back(v);
        for (int v : lay.right[i]) lay.cover_witness.push_back(v);
        for (int v : lay.middle[i]) lay.cover_witness.push_back(v);
    }
    for (std::size_t q = 0; q < cnf.clauses.size(); ++q) {
        auto [c1, c2] = lay.clause_vertices[q];
        demands.push_back(Demand{c1, c2});
        for (int lit : cnf.clauses[q]) {
            int var = lit > 0 ? lit : -lit;
            const auto& slot = lay.slot_of[var];
            edges.push_back(Edge{c1, lay.left[slot.gadget][slot.block], 1});
            int want = lit > 0 ? 1 : 0;
            for (int jp = 0; jp < sqrt_n; ++jp)
                if ((jp >> slot.bit & 1) == want)
                    edges.push_back(Edge{c2, lay.middle[slot.gadget][jp], 1});
        }
    }
    lay.budget = 2 * (Cost)cnf.clauses.size() + 12 * (Cost)lay.big_l * lay.log_n;

    Instance inst = make_instance(lay.vertex_count, std::move(edges), std::move(demands));
    return {std::move(inst), std::move(lay)};
}

RoutedSolution assignment_to_solution(const Instance& inst, const GadgetLayout& lay,
                                      const std::vector<bool>& assignment) {
    auto value_of = [&](int var) {
        return var < (int)assignment.size() && assignment[var];  // dummies are false
    };
    std::map<std::pair<int, int>, int> edge_id;
    for (int e = 0; e < (int)inst.edges.size(); ++e)
        edge_id[{inst.edges[e].u, inst.edges[e].v}] = e;
    auto find_edge = [&](int u, int v) {
        if (u > v) std::swap(u, v);
        auto it = edge_id.find({u, v});
        if (it == edge_id.end()) throw InputError("layout does not match instance");
        return it->second;
    };

    int blocks = (int)(2 * lay.big_l);

    // block -> encoded middle index
    std::vector<std::vector<int>> encoded(lay.gadget_count, std::vector<int>(blocks, 0));
    for (int var = 1; var < (int)lay.slot_of.size(); ++var) {
        const auto& slot = lay.slot_of[var];
        if (slot.gadget < 0) continue;
        if (value_of(var)) encoded[slot.gadget][slot.block] |= 1 << slot.bit;
    }
    std::map<int, std::pair<int, int>> left_slot;  // left vertex -> (gadget, block)
    for (int i = 0; i < lay.gadget_count; ++i)
        for (int j = 0; j < blocks; ++j) left_slot[lay.left[i][j]] = {i, j};

    std::set<int> chosen;
    for (int i = 0; i < lay.gadget_count; ++i)
        for (int j = 0; j < blocks; ++j) {
            int m = lay.middle[i][encoded[i][j]];
            chosen.insert(find_edge(lay.left[i][j], m));
            chosen.insert(find_edge(lay.right[i][j], m));
        }

    RoutedSolution out;
    out.all_clauses_routed = true;
    for (std::size_t q = 0; q < lay.clause_vertices.size(); ++q) {
        auto [c1, c2] = lay.clause_vertices[q];
        bool routed = false;
        // scan c1's left neighbors in id order; a literal is true exactly
        // when c2 is adjacent to the block's encoded middle vertex
        for (int e = 0; e < (int)inst.edges.size() && !routed; ++e) {
            const auto& ed = inst.edges[e];
            if (ed.u != c1 && ed.v != c1) continue;
            int ell = ed.u == c1 ? ed.v : ed.u;
            auto it = left_slot.find(ell);
            if (it == left_slot.end()) continue;
            auto [i, j] = it->second;
            int m = lay.middle[i][encoded[i][j]];
            auto adj = edge_id.find({std::min(c2, m), std::max(c2, m)});
            if (adj == edge_id.end()) continue;
            chosen.insert(find_edge(c1, ell));
            chosen.insert(adj->second);
            routed = true;
        }
        if (!routed) {
            out.all_clauses_routed = false;
            out.unrouted_clauses.push_back((int)q);
        }
    }
    out.forest = Forest::of({chosen.begin(), chosen.end()});
    return out;
}

// ---------------------------------------------------------------------------
// random instances

Instance gen_random_bounded(u64 seed, const RandomProfile& profile) {
    const int n = profile.n;
    if (n < 1) throw InputError("profile needs n >= 1");
    if (profile.m < n - 1) throw InputError("profile needs m >= n-1 for connectivity");
    if (profile.weight_max < 1) throw InputError("profile needs weight_max >= 1");
    i64 max_demands = (i64)n * (n - 1) / 2;
    if (profile.demand_count > max_demands) throw InputError("too many demands for n");

    SplitMix64 rng(seed);
    std::set<std::pair<int, int>> edge_set;
    auto add_edge = [&](int u, int v) {
        if (u > v) std::swap(u, v);
        return u != v && edge_set.insert({u, v}).second;
    };

    using Target = RandomProfile::Target;
    if (profile.target == Target::None || profile.target == Target::FeedbackEdges) {
        i64 max_edges = profile.target == Target::FeedbackEdges
                            ? (i64)n - 1 + profile.target_k
                            : max_demands;
        if (profile.m > max_edges) throw InputError("profile m exceeds the target bound");
        // random spanning tree: attach each vertex to a random earlier one
        for (int v = 1; v < n; ++v) add_edge(v, (int)rng.next_below(v));
        while ((i64)edge_set.size() < profile.m) {
            int u = (int)rng.next_below(n), v = (int)rng.next_below(n);
            add_edge(u, v);
        }
    } else {
        int k = profile.target_k;
        if (k < 1 || k > n) throw InputError("vertex cover profile needs 1 <= k <= n");
        i64 max_edges = (i64)k * (k - 1) / 2 + (i64)k * (n - k);
        if (profile.m > max_edges) throw InputError("profile m exceeds the cover bound");
        // cover = vertices 0..k-1; tree: cover path, others attach to cover
        for (int v = 1; v < k; ++v) add_edge(v, (int)rng.next_below(v));
        for (int v = k; v < n; ++v) add_edge(v, (int)rng.next_below(k));
        while ((i64)edge_set.size() < profile.m) {
            int u = (int)rng.next_below(k);
            int v = (int)rng.next_below(n);
            add_edge(u, v);
        }
    }

    std::vector<Edge> edges;
    for (auto [u, v] : edge_set)
        edges.push_back(Edge{u, v, (Weight)rng.next_in(1, profile.weight_max)});

    std::set<std::pair<int, int>> demand_set;
    while ((i64)demand_set.size() < profile.demand_count) {
        int s = (int)rng.next_below(n), t = (int)rng.next_below(n);
        if (s == t) continue;
        demand_set.insert({std::min(s, t), std::max(s, t)});
    }
    std::vector<Demand> demands;
    for (auto [s, t] : demand_set) demands.push_back(Demand{s, t});
    return make_instance(n, std::move(edges), std::move(demands));
}

// ---------------------------------------------------------------------------
// DIMACS + layout text

Cnf3 parse_dimacs(std::istream& in) {
    Cnf3 cnf;
    std::string line;
    bool saw_problem = false;
    i64 declared_clauses = -1;
    std::vector<int> current;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c") continue;
        if (tok == "p") {
            std::string kind;
            if (!(ls >> kind >> cnf.variable_count >> declared_clauses) || kind != "cnf")
                throw InputError("DIMACS: bad problem line");
            saw_problem = true;
            continue;
        }
        if (!saw_problem) throw InputError("DIMACS: clause before problem line");
        ls.clear();
        ls.str(line);
        int lit;
        while (ls >> lit) {
            if (lit == 0) {
                if (current.empty()) throw InputError("DIMACS: empty clause");
                if (current.size() > 3) throw InputError("DIMACS: clause longer than 3");
                cnf.clauses.push_back(current);
                current.clear();
            } else {
                int var = lit > 0 ? lit : -lit;
                if (var > cnf.variable_count) throw InputError("DIMACS: variable out of range");
                current.push_back(lit);
            }
        }
    }
    if (!current.empty()) {
        if (current.size() > 3) throw InputError("DIMACS: clause longer than 3");
        cnf.clauses.push_back(current);
    }
    if (!saw_problem) throw InputError("DIMACS: missing problem line");
    return cnf;
}

Cnf3 load_dimacs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open CNF file: " + path);
    return parse_dimacs(in);
}

void write_layout(const GadgetLayout& lay, std::ostream& out) {
    out << "LAYOUT 1\n";
    out << "PADDED_N " << lay.padded_n << "\n";
    out << "LOG_N " << lay.log_n << "\n";
    out << "L " << lay.big_l << "\n";
    out << "GADGETS " << lay.gadget_count << "\n";
    out << "BUDGET " << lay.budget << "\n";
    for (int i = 0; i < lay.gadget_count; ++i) {
        out << "GADGET " << i << " LEFT";
        for (int v : lay.left[i]) out << " " << (v + 1);
        out << " RIGHT";
        for (int v : lay.right[i]) out << " " << (v + 1);
        out << " MIDDLE";
        for (int v : lay.middle[i]) out << " " << (v + 1);
        out << "\n";
    }
    for (std::size_t q = 0; q < lay.clause_vertices.size(); ++q)
        out << "CLAUSE " << q << " " << (lay.clause_vertices[q].first + 1) << " "
            << (lay.clause_vertices[q].second + 1) << "\n";
    for (int var = 1; var < (int)lay.slot_of.size(); ++var) {
        const auto& s = lay.slot_of[var];
        if (s.gadget >= 0)
            out << "VAR " << var << " " << s.gadget << " " << s.block << " " << s.bit << "\n";
    }
    out << "COVER";
    for (int v : lay.cover_witness) out << " " << (v + 1);
    out << "\nEND\n";
}

std::string write_layout_text(const GadgetLayout& lay) {
    std::ostringstream os;
    write_layout(lay, os);
    return os.str();
}

bool is_vertex_cover(const Instance& inst, const std::vector<int>& cover) {
    std::vector<bool> in_cover(inst.n, false);
    for (int v : cover) {
        if (v < 0 || v >= inst.n) return false;
        in_cover[v] = true;
    }
    for (const auto& e : inst.edges)
        if (!in_cover[e.u] && !in_cover[e.v]) return false;
    return true;
}

}  // namespace sf
