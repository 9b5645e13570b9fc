// Test-side reference computations. Nothing here calls into the engine; each
// routine starts again from the letter table or the grid definition.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace oracle_ref {

// up, down, left, right for a..f
using Table = std::array<std::array<int, 4>, 6>;

inline const Table kTable{{{0, 1, 0, 1}, {1, 1, 0, 0}, {1, 0, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}}};

inline int idx(char c) { return c - 'a'; }

/// Bits read as a binary number, position 1 most significant.
inline std::uint32_t bits_of(const std::string& word, int which, const Table& t = kTable) {
    std::uint32_t x = 0;
    for (char c : word) x = (x << 1) | static_cast<std::uint32_t>(t[static_cast<std::size_t>(idx(c))][which]);
    return x;
}
inline std::uint32_t outlet_of(const std::string& w, const Table& t = kTable) { return bits_of(w, 3, t); }
inline std::uint32_t inlet_of(const std::string& w, const Table& t = kTable) { return bits_of(w, 2, t); }

inline bool column_ok(const std::string& w, bool circular, const Table& t = kTable) {
    const auto m = w.size();
    for (std::size_t i = 0; i + 1 < m; ++i) {
        if (t[static_cast<std::size_t>(idx(w[i]))][1] != t[static_cast<std::size_t>(idx(w[i + 1]))][0]) return false;
    }
    const auto& first = t[static_cast<std::size_t>(idx(w.front()))];
    const auto& last = t[static_cast<std::size_t>(idx(w.back()))];
    if (circular) return last[1] == first[0];
    return first[0] == 0 && last[1] == 0;
}

/// Every string in {a..f}^m that is a column of the given kind.
inline std::vector<std::string> brute_columns(int m, bool circular) {
    std::vector<std::string> out;
    std::string w(static_cast<std::size_t>(m), 'a');
    std::function<void(int)> go = [&](int pos) {
        if (pos == m) {
            if (column_ok(w, circular)) out.push_back(w);
            return;
        }
        for (char c = 'a'; c <= 'f'; ++c) {
            w[static_cast<std::size_t>(pos)] = c;
            go(pos + 1);
        }
    };
    go(0);
    return out;
}

/// (inlet, outlet) -> number of columns.
inline std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> brute_matrix(int m, bool circular) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> out;
    for (const auto& w : brute_columns(m, circular)) ++out[{inlet_of(w), outlet_of(w)}];
    return out;
}

/// The a/c and d/f up-down assignments, each possibly swapped.
inline std::vector<Table> candidate_tables() {
    std::vector<Table> out;
    for (int swap_ac = 0; swap_ac < 2; ++swap_ac) {
        for (int swap_df = 0; swap_df < 2; ++swap_df) {
            Table t = kTable;
            if (swap_ac) std::swap(t[0][0], t[2][0]), std::swap(t[0][1], t[2][1]);
            if (swap_df) std::swap(t[3][0], t[5][0]), std::swap(t[3][1], t[5][1]);
            out.push_back(t);
        }
    }
    return out;
}

inline std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

inline int zval(std::uint32_t v, int m) {
    int z = 0;
    for (int pos = 1; pos <= m; ++pos) {
        if ((v >> (m - pos)) & 1u) continue;
        z += pos % 2 == 1 ? 1 : -1;
    }
    return z;
}

/// Row of column 1 that row i of column n is glued to (rows 1-based);
/// 0 when the family does not wrap.
inline int wrap_row(const std::string& family, int m, int p, int i) {
    auto mod1 = [m](int x) { return ((x - 1) % m + m) % m + 1; };
    if (family == "tkc") return i;
    if (family == "ms") return m + 1 - i;
    if (family == "tg") return mod1(i - p);
    if (family == "kb") return mod1(m + 1 + p - i);
    return 0;
}

inline bool circular_family(const std::string& family) { return family != "rg" && family != "ms" && family != "tkc"; }

struct Graph {
    int vertices = 0;
    std::vector<std::pair<int, int>> edges;
};

/// Vertex (i, j) is (i-1)*n + (j-1).
inline Graph grid(const std::string& family, int m, int n, int p) {
    Graph g;
    g.vertices = m * n;
    auto id = [n](int i, int j) { return (i - 1) * n + (j - 1); };
    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i < m; ++i) g.edges.push_back({id(i, j), id(i + 1, j)});
        if (circular_family(family)) g.edges.push_back({id(m, j), id(1, j)});
    }
    for (int i = 1; i <= m; ++i) {
        for (int j = 1; j < n; ++j) g.edges.push_back({id(i, j), id(i, j + 1)});
        if (const int r = wrap_row(family, m, p, i); r != 0) g.edges.push_back({id(i, n), id(r, 1)});
    }
    return g;
}

/// Spanning edge subsets with every degree 2, tallied by cycle count.
inline std::map<int, std::uint64_t> two_factors(const Graph& g) {
    std::map<int, std::uint64_t> tally;
    const auto V = static_cast<std::size_t>(g.vertices);
    std::vector<int> deg(V, 0);
    std::vector<int> remaining(V, 0);
    for (const auto& [a, b] : g.edges) ++remaining[static_cast<std::size_t>(a)], ++remaining[static_cast<std::size_t>(b)];
    std::vector<int> chosen;
    std::function<void(std::size_t)> go = [&](std::size_t e) {
        if (e == g.edges.size()) {
            for (int d : deg) {
                if (d != 2) return;
            }
            std::vector<int> parent(V);
            std::iota(parent.begin(), parent.end(), 0);
            std::function<int(int)> find = [&](int x) {
                return parent[static_cast<std::size_t>(x)] == x ? x : parent[static_cast<std::size_t>(x)] = find(parent[static_cast<std::size_t>(x)]);
            };
            int comps = g.vertices;
            for (int k : chosen) {
                const int a = find(g.edges[static_cast<std::size_t>(k)].first);
                const int b = find(g.edges[static_cast<std::size_t>(k)].second);
                if (a != b) parent[static_cast<std::size_t>(a)] = b, --comps;
            }
            ++tally[comps];
            return;
        }
        const auto [a, b] = g.edges[e];
        const auto ua = static_cast<std::size_t>(a);
        const auto ub = static_cast<std::size_t>(b);
        --remaining[ua], --remaining[ub];
        // take the edge
        if (deg[ua] < 2 && deg[ub] < 2 && (a != b)) {
            ++deg[ua], ++deg[ub];
            chosen.push_back(static_cast<int>(e));
            if (deg[ua] + remaining[ua] >= 2 && deg[ub] + remaining[ub] >= 2) go(e + 1);
            chosen.pop_back();
            --deg[ua], --deg[ub];
        }
        // skip it
        if (deg[ua] + remaining[ua] >= 2 && deg[ub] + remaining[ub] >= 2) go(e + 1);
        ++remaining[ua], ++remaining[ub];
    };
    go(0);
    return tally;
}

inline std::uint64_t two_factor_total(const Graph& g) {
    std::uint64_t t = 0;
    for (const auto& [c, k] : two_factors(g)) t += k;
    return t;
}

/// Counts code-matrix column sequences: consecutive columns agree on
/// outlet/inlet, the ends obey the family's boundary or glueing rule.
inline std::uint64_t sequence_count(const std::string& family, int m, int n, int p) {
    const bool circ = circular_family(family);
    const auto cols = brute_columns(m, circ);
    auto glue = [&](std::uint32_t out) -> std::int64_t {
        if (wrap_row(family, m, p, 1) == 0) return -1;
        std::uint32_t in = 0;
        for (int i = 1; i <= m; ++i) {
            if ((out >> (m - i)) & 1u) in |= 1u << (m - wrap_row(family, m, p, i));
        }
        return in;
    };
    std::uint64_t total = 0;
    for (const auto& first : cols) {
        const std::uint32_t in0 = inlet_of(first);
        if (glue(0) < 0 && in0 != 0) continue;
        // number of ways to extend: dynamic programming over outlet words
        std::map<std::uint32_t, std::uint64_t> ways{{outlet_of(first), 1}};
        for (int j = 2; j <= n; ++j) {
            std::map<std::uint32_t, std::uint64_t> next;
            for (const auto& w : cols) {
                const auto it = ways.find(inlet_of(w));
                if (it != ways.end()) next[outlet_of(w)] += it->second;
            }
            ways = std::move(next);
        }
        for (const auto& [out, k] : ways) {
            const auto g = glue(out);
            if ((g < 0 && out == 0) || (g >= 0 && static_cast<std::uint32_t>(g) == in0)) total += k;
        }
    }
    return total;
}

}  // namespace oracle_ref
