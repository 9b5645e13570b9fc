// oracle.hpp -- explicit grid graphs, brute-force 2-factor census, and the
// code-matrix <-> 2-factor correspondence
//
// Nothing here touches the transfer matrix; the census is the ground truth the
// counting formulas are tested against.

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridfactor/alphabet.hpp"
#include "gridfactor/counting.hpp"
#include "gridfactor/errors.hpp"
#include "gridfactor/parallel.hpp"

namespace gridfactor {

enum class Direction : std::uint8_t { up, down, left, right };

inline constexpr std::array<Direction, 4> kDirections{Direction::up, Direction::down, Direction::left,
                                                      Direction::right};

inline constexpr bool uses(const Incidence& inc, Direction d) noexcept {
    switch (d) {
        case Direction::up: return inc.up;
        case Direction::down: return inc.down;
        case Direction::left: return inc.left;
        case Direction::right: return inc.right;
    }
    return false;
}

/// Vertices (row, col) with 1 <= row <= m, 1 <= col <= n, numbered row-major.
/// Every vertex knows which edge leaves it in each direction, in its own
/// column's frame; the right edge of column n is the glued edge.
struct GridGraph {
    GridSpec spec;
    std::vector<std::array<int, 2>> edges;
    std::vector<std::array<int, 4>> incident;  // edge id per Direction, -1 if none

    int rows() const noexcept { return spec.m; }
    int cols() const noexcept { return spec.n; }
    int vertex_count() const noexcept { return spec.m * spec.n; }
    int vertex_id(int row, int col) const noexcept { return (row - 1) * spec.n + (col - 1); }
    int edge_at(int row, int col, Direction d) const noexcept {
        return incident[static_cast<std::size_t>(vertex_id(row, col))][static_cast<std::size_t>(d)];
    }
    std::pair<int, int> position(int v) const noexcept { return {v / spec.n + 1, v % spec.n + 1}; }
    bool regular(int degree) const {
        std::vector<int> deg(static_cast<std::size_t>(vertex_count()), 0);
        for (const auto& e : edges) {
            ++deg[static_cast<std::size_t>(e[0])];
            ++deg[static_cast<std::size_t>(e[1])];
        }
        return std::all_of(deg.begin(), deg.end(), [&](int d) { return d == degree; });
    }
};

/// Row of column 1 reached by the glued edge leaving (row, n).
inline int glued_row(const GridSpec& spec, int row) {
    const int m = spec.m;
    switch (spec.family) {
        case Family::tkc: return row;
        case Family::ms: return m - row + 1;
        case Family::tg: return ((row - 1 - spec.p) % m + m) % m + 1;
        case Family::kb: return ((m + spec.p - row) % m + m) % m + 1;
        default: return 0;
    }
}

inline GridGraph build_grid(const GridSpec& spec) {
    const int m = spec.m;
    const int n = spec.n;
    const bool circular_rows = column_kind(spec.family) == Kind::circular;
    if (m < 1 || n < 1) throw RangeError("grid dimensions must be positive");
    if (circular_rows && m < 3) {
        throw RangeError(std::string(to_string(spec.family)) + " needs m >= 3 for a simple graph, got m=" +
                         std::to_string(m));
    }
    if (spec.family == Family::ms && n < 2) throw RangeError("ms needs n >= 2, got n=" + std::to_string(n));
    if (wraps_columns(spec.family) && spec.family != Family::ms && n < 3) {
        throw RangeError(std::string(to_string(spec.family)) + " needs n >= 3 for a simple graph, got n=" +
                         std::to_string(n));
    }
    if (has_twist(spec.family) && (spec.p < 0 || spec.p >= m)) throw RangeError("twist p must lie in [0, m-1]");

    GridGraph g{spec, {}, std::vector<std::array<int, 4>>(static_cast<std::size_t>(m * n), {-1, -1, -1, -1})};
    std::set<std::pair<int, int>> seen;
    auto add = [&](int r1, int c1, Direction d1, int r2, int c2, Direction d2) {
        const int u = g.vertex_id(r1, c1);
        const int v = g.vertex_id(r2, c2);
        if (u == v || !seen.insert({std::min(u, v), std::max(u, v)}).second) {
            throw RangeError(std::string(to_string(spec.family)) + " with m=" + std::to_string(m) +
                             ", n=" + std::to_string(n) + " is not a simple graph");
        }
        const int id = static_cast<int>(g.edges.size());
        g.edges.push_back({std::min(u, v), std::max(u, v)});
        g.incident[static_cast<std::size_t>(u)][static_cast<std::size_t>(d1)] = id;
        g.incident[static_cast<std::size_t>(v)][static_cast<std::size_t>(d2)] = id;
    };
    for (int row = 1; row <= m; ++row) {
        for (int col = 1; col <= n; ++col) {
            if (row < m) add(row, col, Direction::down, row + 1, col, Direction::up);
            if (row == m && circular_rows) add(m, col, Direction::down, 1, col, Direction::up);
            if (col < n) add(row, col, Direction::right, row, col + 1, Direction::left);
            if (col == n && wraps_columns(spec.family)) {
                add(row, n, Direction::right, glued_row(spec, row), 1, Direction::left);
            }
        }
    }
    return g;
}

/// Sorted edge ids.
struct TwoFactor {
    std::vector<int> edges;

    friend bool operator==(const TwoFactor&, const TwoFactor&) = default;
};

/// Number of cycles of a 2-regular spanning edge set.
inline int cycle_count(const GridGraph& g, const TwoFactor& factor) {
    const auto vcount = static_cast<std::size_t>(g.vertex_count());
    std::vector<std::array<int, 2>> nbr(vcount, {-1, -1});
    for (int id : factor.edges) {
        const auto& e = g.edges[static_cast<std::size_t>(id)];
        for (int k = 0; k < 2; ++k) {
            auto& slot = nbr[static_cast<std::size_t>(e[k])];
            (slot[0] < 0 ? slot[0] : slot[1]) = e[1 - k];
        }
    }
    std::vector<char> seen(vcount, 0);
    int cycles = 0;
    for (std::size_t start = 0; start < vcount; ++start) {
        if (seen[start]) continue;
        ++cycles;
        int prev = -1;
        int cur = static_cast<int>(start);
        while (!seen[static_cast<std::size_t>(cur)]) {
            seen[static_cast<std::size_t>(cur)] = 1;
            const auto& nb = nbr[static_cast<std::size_t>(cur)];
            const int next = nb[0] != prev ? nb[0] : nb[1];
            prev = cur;
            cur = next;
        }
    }
    return cycles;
}

// ============================================================================
// Exhaustive search
// ============================================================================

namespace detail {

/// Vertices are fixed in row-major order. At each vertex the undecided
/// incident edges are split into "in" and "out" so its degree becomes
/// exactly 2; a branch dies as soon as some neighbour exceeds degree 2 or can
/// no longer reach it.
class FactorSearch {
public:
    explicit FactorSearch(const GridGraph& g)
        : g_(&g),
          state_(g.edges.size(), 0),
          degree_(static_cast<std::size_t>(g.vertex_count()), 0),
          open_(static_cast<std::size_t>(g.vertex_count()), 0) {
        for (const auto& e : g.edges) {
            ++open_[static_cast<std::size_t>(e[0])];
            ++open_[static_cast<std::size_t>(e[1])];
        }
    }

    /// Feasible in/out splits at vertex v: each is a list of edges set "in";
    /// the rest of the open edges go "out".
    std::vector<std::vector<int>> choices(int v) const {
        std::vector<int> open;
        for (int id : g_->incident[static_cast<std::size_t>(v)]) {
            if (id >= 0 && state_[static_cast<std::size_t>(id)] == 0) open.push_back(id);
        }
        const int need = 2 - degree_[static_cast<std::size_t>(v)];
        std::vector<std::vector<int>> out;
        if (need < 0 || need > static_cast<int>(open.size())) return out;
        const auto k = static_cast<unsigned>(open.size());
        for (unsigned mask = 0; mask < (1u << k); ++mask) {
            if (std::popcount(mask) != need) continue;
            std::vector<int> chosen;
            for (unsigned i = 0; i < k; ++i) {
                if (mask & (1u << i)) chosen.push_back(open[i]);
            }
            out.push_back(std::move(chosen));
        }
        return out;
    }

    /// Applies a split at v; false (with the split undone) if a neighbour
    /// becomes infeasible.
    bool apply(int v, const std::vector<int>& chosen) {
        record_.clear();
        for (int id : g_->incident[static_cast<std::size_t>(v)]) {
            if (id < 0 || state_[static_cast<std::size_t>(id)] != 0) continue;
            const bool in = std::find(chosen.begin(), chosen.end(), id) != chosen.end();
            set_edge(id, in ? 1 : 2);
            record_.push_back(id);
        }
        for (int id : record_) {
            const auto& e = g_->edges[static_cast<std::size_t>(id)];
            for (int u : e) {
                const int d = degree_[static_cast<std::size_t>(u)];
                if (d > 2 || d + open_[static_cast<std::size_t>(u)] < 2) {
                    undo(record_);
                    return false;
                }
            }
        }
        return true;
    }

    void undo(const std::vector<int>& ids) {
        for (int id : ids) set_edge(id, 0);
    }

    const std::vector<int>& last_applied() const noexcept { return record_; }

    template <class Leaf>
    void run(int v, Leaf& leaf) {
        if (v == g_->vertex_count()) {
            TwoFactor factor;
            for (std::size_t id = 0; id < state_.size(); ++id) {
                if (state_[id] == 1) factor.edges.push_back(static_cast<int>(id));
            }
            leaf(factor);
            return;
        }
        for (const auto& chosen : choices(v)) {
            if (!apply(v, chosen)) continue;
            const std::vector<int> applied = record_;
            run(v + 1, leaf);
            undo(applied);
        }
    }

private:
    void set_edge(int id, int value) {
        const auto i = static_cast<std::size_t>(id);
        const int old = state_[i];
        if (old == value) return;
        for (int u : g_->edges[i]) {
            auto& deg = degree_[static_cast<std::size_t>(u)];
            auto& open = open_[static_cast<std::size_t>(u)];
            if (old == 0) --open;
            if (old == 1) --deg;
            if (value == 0) ++open;
            if (value == 1) ++deg;
        }
        state_[i] = static_cast<char>(value);
    }

    const GridGraph* g_;
    std::vector<char> state_;  // 0 undecided, 1 in, 2 out
    std::vector<int> degree_;
    std::vector<int> open_;
    std::vector<int> record_;
};

}  // namespace detail

/// Calls leaf(const TwoFactor&) for every 2-factor, in a fixed order.
template <class Leaf>
void for_each_two_factor(const GridGraph& g, Leaf&& leaf) {
    if (g.vertex_count() == 0) return;
    detail::FactorSearch search(g);
    search.run(0, leaf);
}

struct Census {
    Count total;
    std::map<int, Count> by_cycle_count;  // cycles -> number of 2-factors; key 1 = Hamiltonian cycles

    friend bool operator==(const Census&, const Census&) = default;
};

struct CensusOptions {
    int vertex_cap = 36;
    unsigned threads = 1;
};

/// Exhaustive count of 2-factors. Branches at the first vertex run as
/// independent tasks and are merged in branch order.
inline Census census(const GridGraph& g, const CensusOptions& options = {}) {
    if (g.vertex_count() > options.vertex_cap) {
        throw ResourceError("census of " + std::to_string(g.vertex_count()) + " vertices exceeds the vertex cap " +
                            std::to_string(options.vertex_cap));
    }
    Census out;
    out.total = 0;
    if (g.vertex_count() == 0) return out;
    const detail::FactorSearch root(g);
    const auto branches = root.choices(0);
    std::vector<std::map<int, std::uint64_t>> partial(branches.size());
    parallel_for(branches.size(), options.threads, [&](std::size_t b) {
        detail::FactorSearch search(g);
        if (!search.apply(0, branches[b])) return;
        auto leaf = [&](const TwoFactor& factor) { ++partial[b][cycle_count(g, factor)]; };
        search.run(1, leaf);
    });
    for (const auto& part : partial) {
        for (const auto& [cycles, n] : part) {
            Count c;
            mpz_import(c.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
            out.by_cycle_count[cycles] += c;
            out.total += c;
        }
    }
    return out;
}

inline Census census(const GridSpec& spec, const CensusOptions& options = {}) {
    return census(build_grid(spec), options);
}

// ============================================================================
// Code matrices
// ============================================================================

/// m x n letters, stored column by column. Text form: n whitespace-separated
/// column words, each read top to bottom.
class CodeMatrix {
public:
    CodeMatrix(int rows, int cols, std::vector<Letter> letters)
        : rows_(rows), cols_(cols), letters_(std::move(letters)) {
        if (rows < 1 || cols < 1 || letters_.size() != static_cast<std::size_t>(rows * cols)) {
            throw std::invalid_argument("code matrix shape does not match its letters");
        }
    }

    static CodeMatrix parse(std::string_view text) {
        std::istringstream in{std::string(text)};
        std::vector<std::string> words;
        for (std::string w; in >> w;) words.push_back(w);
        if (words.empty()) throw std::invalid_argument("empty code matrix");
        std::vector<Letter> letters;
        for (const auto& w : words) {
            if (w.size() != words.front().size()) throw std::invalid_argument("code matrix columns differ in length");
            for (char ch : w) letters.push_back(letter_from_char(ch));
        }
        return {static_cast<int>(words.front().size()), static_cast<int>(words.size()), std::move(letters)};
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    Letter at(int row, int col) const noexcept {
        return letters_[static_cast<std::size_t>((col - 1) * rows_ + (row - 1))];
    }
    void set(int row, int col, Letter x) noexcept { letters_[static_cast<std::size_t>((col - 1) * rows_ + (row - 1))] = x; }

    std::span<const Letter> column(int col) const noexcept {
        return std::span(letters_).subspan(static_cast<std::size_t>((col - 1) * rows_), static_cast<std::size_t>(rows_));
    }

    std::string str() const {
        std::string out;
        for (int col = 1; col <= cols_; ++col) {
            if (col > 1) out += ' ';
            for (Letter x : column(col)) out += to_char(x);
        }
        return out;
    }

    friend bool operator==(const CodeMatrix&, const CodeMatrix&) = default;

private:
    int rows_;
    int cols_;
    std::vector<Letter> letters_;
};

struct Validation {
    bool ok = true;
    std::string condition;  // column-adjacency, column-boundary, row-adjacency, border, closure, shape
    std::string detail;

    explicit operator bool() const noexcept { return ok; }
};

/// Checks a code matrix letter by letter: up/down arcs inside columns,
/// top/bottom letters of linear columns, left/right arcs between columns,
/// and the family's border or closure rule between column n and column 1.
inline Validation validate(const GridSpec& spec, const CodeMatrix& cm) {
    const int m = spec.m;
    const int n = spec.n;
    auto fail = [](std::string condition, std::string detail) {
        return Validation{false, std::move(condition), std::move(detail)};
    };
    auto at = [](int row, int col) { return "(" + std::to_string(row) + "," + std::to_string(col) + ")"; };
    if (cm.rows() != m || cm.cols() != n) {
        return fail("shape", "expected " + std::to_string(m) + "x" + std::to_string(n) + ", got " +
                                 std::to_string(cm.rows()) + "x" + std::to_string(cm.cols()));
    }
    const bool circular = column_kind(spec.family) == Kind::circular;
    for (int col = 1; col <= n; ++col) {
        for (int row = 1; row < m; ++row) {
            if (!ud_arc(cm.at(row, col), cm.at(row + 1, col))) {
                return fail("column-adjacency", "rows " + std::to_string(row) + "-" + std::to_string(row + 1) +
                                                    " of column " + std::to_string(col));
            }
        }
        if (circular && !ud_arc(cm.at(m, col), cm.at(1, col))) {
            return fail("column-adjacency", "rows " + std::to_string(m) + "-1 of column " + std::to_string(col));
        }
        if (!circular) {
            if (up(cm.at(1, col))) return fail("column-boundary", "top letter of column " + std::to_string(col));
            if (down(cm.at(m, col))) return fail("column-boundary", "bottom letter of column " + std::to_string(col));
        }
    }
    for (int col = 1; col < n; ++col) {
        for (int row = 1; row <= m; ++row) {
            if (!lr_arc(cm.at(row, col), cm.at(row, col + 1))) {
                return fail("row-adjacency", at(row, col) + " -> " + at(row, col + 1));
            }
        }
    }
    auto wrap = [m](int i) { return ((i - 1) % m + m) % m + 1; };
    for (int i = 1; i <= m; ++i) {
        switch (spec.family) {
            case Family::rg:
            case Family::tnc:
                if (left(cm.at(i, 1))) return fail("border", "left edge used at " + at(i, 1));
                if (right(cm.at(i, n))) return fail("border", "right edge used at " + at(i, n));
                break;
            case Family::tkc:
                if (!lr_arc(cm.at(i, n), cm.at(i, 1))) return fail("closure", at(i, n) + " -> " + at(i, 1));
                break;
            case Family::ms:
                if (!lr_arc(bar_letter(cm.at(i, n)), cm.at(m - i + 1, 1))) {
                    return fail("closure", "bar" + at(i, n) + " -> " + at(m - i + 1, 1));
                }
                break;
            case Family::tg:
                if (!lr_arc(cm.at(wrap(i + spec.p), n), cm.at(i, 1))) {
                    return fail("closure", at(wrap(i + spec.p), n) + " -> " + at(i, 1));
                }
                break;
            case Family::kb:
                if (!lr_arc(cm.at(wrap(m + spec.p + 1 - i), n), bar_letter(cm.at(i, 1)))) {
                    return fail("closure", at(wrap(m + spec.p + 1 - i), n) + " -> bar" + at(i, 1));
                }
                break;
        }
    }
    return {};
}

/// Reads each vertex's pair of factor edges as a code letter.
inline CodeMatrix encode(const GridGraph& g, const TwoFactor& factor) {
    std::vector<char> in(g.edges.size(), 0);
    for (int id : factor.edges) in[static_cast<std::size_t>(id)] = 1;
    std::vector<Letter> letters(static_cast<std::size_t>(g.vertex_count()));
    CodeMatrix cm(g.rows(), g.cols(), std::move(letters));
    for (int row = 1; row <= g.rows(); ++row) {
        for (int col = 1; col <= g.cols(); ++col) {
            Incidence inc;
            auto used = [&](Direction d) {
                const int id = g.edge_at(row, col, d);
                return id >= 0 && in[static_cast<std::size_t>(id)] != 0;
            };
            inc.up = used(Direction::up);
            inc.down = used(Direction::down);
            inc.left = used(Direction::left);
            inc.right = used(Direction::right);
            const auto it = std::find_if(kLetters.begin(), kLetters.end(),
                                         [&](Letter x) { return letter_incidence(x) == inc; });
            if (it == kLetters.end()) {
                throw ValidationError("vertex (" + std::to_string(row) + "," + std::to_string(col) +
                                      ") does not have degree 2 in the edge set");
            }
            cm.set(row, col, *it);
        }
    }
    return cm;
}

/// Inverse of encode; rejects matrices that fail validate().
inline TwoFactor decode(const GridGraph& g, const CodeMatrix& cm) {
    if (const auto v = validate(g.spec, cm); !v) {
        throw ValidationError("invalid code matrix (" + v.condition + "): " + v.detail);
    }
    std::vector<int> claims(g.edges.size(), 0);
    for (int row = 1; row <= g.rows(); ++row) {
        for (int col = 1; col <= g.cols(); ++col) {
            const Incidence inc = letter_incidence(cm.at(row, col));
            for (Direction d : kDirections) {
                if (!uses(inc, d)) continue;
                const int id = g.edge_at(row, col, d);
                if (id < 0) throw ValidationError("code matrix uses a missing edge");
                ++claims[static_cast<std::size_t>(id)];
            }
        }
    }
    TwoFactor out;
    for (std::size_t id = 0; id < claims.size(); ++id) {
        if (claims[id] == 1) throw ValidationError("edge claimed by only one endpoint");
        if (claims[id] == 2) out.edges.push_back(static_cast<int>(id));
    }
    return out;
}

inline TwoFactor decode(const GridSpec& spec, const CodeMatrix& cm) { return decode(build_grid(spec), cm); }

}  // namespace gridfactor
