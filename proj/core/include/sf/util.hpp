#pragma once

#include <cassert>
#include <cstdint>
#include <numeric>
#include <vector>

namespace sf {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/// Disjoint-set forest with union by size and path compression.
class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

    bool same(int a, int b) { return find(a) == find(b); }
    int component_size(int x) { return size_[find(x)]; }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
};

/// splitmix64: small deterministic PRNG, stable across platforms.
class SplitMix64 {
public:
    explicit SplitMix64(u64 seed) : state_(seed) {}

    u64 next() {
        u64 z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d4a2ca9da867b3ULL ^ 0x2545f4914f6cdd1dULL;
        return z ^ (z >> 31);
    }

    /// Uniform value in [0, bound).
    u64 next_below(u64 bound) {
        assert(bound > 0);
        return next() % bound;
    }

    /// Uniform value in [lo, hi] inclusive.
    u64 next_in(u64 lo, u64 hi) {
        assert(lo <= hi);
        return lo + next_below(hi - lo + 1);
    }

private:
    u64 state_;
};

/// FNV-1a over a byte range; used for content digests.
inline u64 fnv1a(const void* data, std::size_t len, u64 seed = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    u64 h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline int floor_log2_u64(u64 x) {
    assert(x > 0);
    int r = 0;
    while (x >>= 1) ++r;
    return r;
}

}  // namespace sf
