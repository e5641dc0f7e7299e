#include "sf/min_cut.hpp"

#include <algorithm>
#include <queue>

#include "sf/errors.hpp"

namespace sf {

namespace {

/// Dinic on an undirected graph: one arc pair per edge, both directions
/// start at full capacity.
struct Dinic {
    struct Arc {
        int to;
        u128 cap;
        int rev;
    };
    std::vector<std::vector<Arc>> g;
    std::vector<int> level, iter;

    explicit Dinic(int n) : g(n), level(n), iter(n) {}

    void add_undirected(int u, int v, u128 cap) {
        g[u].push_back({v, cap, (int)g[v].size()});
        g[v].push_back({u, cap, (int)g[u].size() - 1});
    }

    bool bfs(int s, int t) {
        std::fill(level.begin(), level.end(), -1);
        std::queue<int> q;
        q.push(s);
        level[s] = 0;
        while (!q.empty()) {
            int x = q.front();
            q.pop();
            for (const auto& a : g[x])
                if (a.cap > 0 && level[a.to] < 0) {
                    level[a.to] = level[x] + 1;
                    q.push(a.to);
                }
        }
        return level[t] >= 0;
    }

    u128 dfs(int x, int t, u128 limit) {
        if (x == t) return limit;
        for (int& i = iter[x]; i < (int)g[x].size(); ++i) {
            Arc& a = g[x][i];
            if (a.cap == 0 || level[a.to] != level[x] + 1) continue;
            u128 pushed = dfs(a.to, t, std::min(limit, a.cap));
            if (pushed > 0) {
                a.cap -= pushed;
                g[a.to][a.rev].cap += pushed;
                return pushed;
            }
        }
        return 0;
    }

    u128 max_flow(int s, int t) {
        u128 flow = 0;
        while (bfs(s, t)) {
            std::fill(iter.begin(), iter.end(), 0);
            while (u128 pushed = dfs(s, t, ~u128(0)))
                flow += pushed;
        }
        return flow;
    }
};

}  // namespace

MinCutResult min_cut(const CutGraph& g, int s, int t) {
    if (s == t) throw InputError("min cut with s == t");
    Dinic dinic(g.n);
    for (const auto& e : g.edges) dinic.add_undirected(e.u, e.v, e.cap);

    MinCutResult res;
    res.value = dinic.max_flow(s, t);

    // source side of the cut: residual reachability from s
    res.source_side.assign(g.n, false);
    std::vector<int> stack{s};
    res.source_side[s] = true;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (const auto& a : dinic.g[x])
            if (a.cap > 0 && !res.source_side[a.to]) {
                res.source_side[a.to] = true;
                stack.push_back(a.to);
            }
    }
    for (int e = 0; e < (int)g.edges.size(); ++e)
        if (res.source_side[g.edges[e].u] != res.source_side[g.edges[e].v])
            res.cut_edges.push_back(e);
    return res;
}

}  // namespace sf
