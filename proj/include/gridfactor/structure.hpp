// structure.hpp -- component decomposition of the quotient transfer digraph
//
// The components are indexed by the statistic Z (zeros at odd positions minus
// zeros at even positions):
//   circular, even m:  |Z| = s labels component "A" (s = 0) or s, sizes
//                      C(m, m/2) and 2 C(m, m/2 - s); every s >= 1 component
//                      is bipartite with classes Z = s (red) and Z = -s (green)
//   circular, odd m:   parity of Z splits the words into "A" (contains 1^m)
//                      and "N" (contains 0^m), 2^(m-1) words each, mapped onto
//                      each other by bitwise complement
//   linear:            |Z| again, with C(m, (m-1)/2) and C(m+1, (m+1)/2 - s)
//                      for odd m, whose word 0(10)^k is isolated
// verify_structure recomputes everything from the matrix and records each
// disagreement as a violation with a witness.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "gridfactor/alphabet.hpp"
#include "gridfactor/errors.hpp"
#include "gridfactor/transfer.hpp"

namespace gridfactor {

/// Sorted vertex indices of one component.
using Component = std::vector<std::uint32_t>;

namespace detail {

/// Undirected support: row entries plus their transposes.
inline std::vector<std::vector<std::uint32_t>> undirected_support(const TransferMatrix& matrix) {
    std::vector<std::vector<std::uint32_t>> adj(matrix.dim());
    for (std::uint32_t r = 0; r < matrix.dim(); ++r) {
        for (std::uint32_t c : matrix.row_cols(r)) {
            adj[r].push_back(c);
            if (c != r) adj[c].push_back(r);
        }
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

inline std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t out = 1;
    for (int i = 1; i <= k; ++i) out = out * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return out;
}

}  // namespace detail

/// Connected components of {v - w : entry(v,w) > 0}, isolated words dropped.
/// Ordered by size descending, then by smallest vertex.
inline std::vector<Component> components(const TransferMatrix& matrix) {
    const auto adj = detail::undirected_support(matrix);
    std::vector<char> seen(matrix.dim(), 0);
    std::vector<Component> out;
    for (std::uint32_t start = 0; start < matrix.dim(); ++start) {
        if (seen[start] || adj[start].empty()) continue;
        Component comp;
        std::queue<std::uint32_t> frontier;
        frontier.push(start);
        seen[start] = 1;
        while (!frontier.empty()) {
            const std::uint32_t v = frontier.front();
            frontier.pop();
            comp.push_back(v);
            for (std::uint32_t w : adj[v]) {
                if (!seen[w]) {
                    seen[w] = 1;
                    frontier.push(w);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Component& x, const Component& y) { return x.size() > y.size(); });
    return out;
}

/// Words with an all-zero row and column.
inline std::vector<std::uint32_t> isolated_vertices(const TransferMatrix& matrix) {
    const auto adj = detail::undirected_support(matrix);
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < matrix.dim(); ++v) {
        if (adj[v].empty()) out.push_back(v);
    }
    return out;
}

/// Every vertex of `comp` reaches, and is reached from, comp.front() along arcs.
inline bool strongly_connected(const TransferMatrix& matrix, const Component& comp) {
    if (comp.empty()) return true;
    std::vector<std::vector<std::uint32_t>> reverse(matrix.dim());
    for (std::uint32_t r = 0; r < matrix.dim(); ++r) {
        for (std::uint32_t c : matrix.row_cols(r)) reverse[c].push_back(r);
    }
    auto reach_all = [&](auto&& next) {
        std::vector<char> seen(matrix.dim(), 0);
        std::vector<std::uint32_t> stack{comp.front()};
        seen[comp.front()] = 1;
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            stack.pop_back();
            for (std::uint32_t w : next(v)) {
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        return std::all_of(comp.begin(), comp.end(), [&](std::uint32_t v) { return seen[v] != 0; });
    };
    return reach_all([&](std::uint32_t v) { return matrix.row_cols(v); }) &&
           reach_all([&](std::uint32_t v) { return std::span<const std::uint32_t>(reverse[v]); });
}

struct Bipartition {
    std::vector<std::uint32_t> red;
    std::vector<std::uint32_t> green;

    friend bool operator==(const Bipartition&, const Bipartition&) = default;
};

/// Two-colouring in which every arc (loops included) joins the two classes.
/// The red class is the one holding the first positive-Z vertex (or the
/// first vertex when there is none). Empty if the component has an odd cycle.
inline std::optional<Bipartition> bipartition(const Component& comp, const TransferMatrix& matrix) {
    const auto adj = detail::undirected_support(matrix);
    std::map<std::uint32_t, int> color;
    for (std::uint32_t start : comp) {
        if (color.count(start)) continue;
        color[start] = 0;
        std::queue<std::uint32_t> frontier;
        frontier.push(start);
        while (!frontier.empty()) {
            const std::uint32_t v = frontier.front();
            frontier.pop();
            for (std::uint32_t w : adj[v]) {
                if (w == v) return std::nullopt;
                auto it = color.find(w);
                if (it == color.end()) {
                    color[w] = 1 - color[v];
                    frontier.push(w);
                } else if (it->second == color[v]) {
                    return std::nullopt;
                }
            }
        }
    }
    std::uint32_t anchor = comp.empty() ? 0 : comp.front();
    for (std::uint32_t v : comp) {
        if (z_value(BinaryWord(matrix.width(), v)) > 0) {
            anchor = v;
            break;
        }
    }
    Bipartition out;
    for (std::uint32_t v : comp) {
        (color[v] == color[anchor] ? out.red : out.green).push_back(v);
    }
    return out;
}

struct IsomorphismCheck {
    bool ok = false;
    /// (v, complement(v)) for every v of the component containing 1^m.
    std::vector<std::pair<BinaryWord, BinaryWord>> mapping;
    std::string violation;
};

/// Odd circular widths: complement maps the component of 1^m onto the
/// component of 0^m and preserves every matrix entry.
inline IsomorphismCheck complement_isomorphism(const TransferMatrix& matrix) {
    const int m = matrix.width();
    if (matrix.kind() != Kind::circular || m % 2 == 0) {
        throw std::invalid_argument("complement_isomorphism: needs a circular matrix of odd width");
    }
    IsomorphismCheck out;
    for (const auto& e : matrix.entries()) {
        const BinaryWord v = complement(BinaryWord(m, e.row));
        const BinaryWord w = complement(BinaryWord(m, e.col));
        const std::uint32_t image = matrix.entry(v, w);
        if (image != e.mult) {
            out.violation = "entry(" + BinaryWord(m, e.row).str() + "," + BinaryWord(m, e.col).str() +
                            ")=" + std::to_string(e.mult) + " but entry(" + v.str() + "," + w.str() +
                            ")=" + std::to_string(image);
            return out;
        }
    }
    const auto comps = components(matrix);
    const std::uint32_t ones = BinaryWord::ones(m).index();
    const std::uint32_t zeros = 0;
    const Component* source = nullptr;
    const Component* target = nullptr;
    for (const auto& comp : comps) {
        if (std::binary_search(comp.begin(), comp.end(), ones)) source = &comp;
        if (std::binary_search(comp.begin(), comp.end(), zeros)) target = &comp;
    }
    if (source == nullptr || target == nullptr) {
        out.violation = "0^m or 1^m is isolated";
        return out;
    }
    if (source == target && comps.size() > 1) {
        out.violation = "0^m and 1^m share a component";
        return out;
    }
    if (source->size() != target->size()) {
        out.violation = "component sizes differ: " + std::to_string(source->size()) + " vs " +
                        std::to_string(target->size());
        return out;
    }
    for (std::uint32_t v : *source) {
        const BinaryWord word(m, v);
        const BinaryWord image = complement(word);
        if (!std::binary_search(target->begin(), target->end(), image.index())) {
            out.violation = "complement of " + word.str() + " lies outside the component of 0^m";
            out.mapping.clear();
            return out;
        }
        out.mapping.emplace_back(word, image);
    }
    out.ok = true;
    return out;
}

// ============================================================================
// Queens, court ladies and the connecting column
// ============================================================================

enum class Role : std::uint8_t { queen, court_lady };

struct SpecialWord {
    Role role;
    int m;
    int s;
    BinaryWord word;
};

namespace detail {

inline std::string repeat(std::string_view unit, int times) {
    std::string out;
    for (int i = 0; i < times; ++i) out += unit;
    return out;
}

}  // namespace detail

/// Even m: 0^m for s = 0, (01)^s 0^(m-2s) for 1 <= s <= m/2.
/// Odd m: (01)^(s-1) 0^(m-2s+2) for 1 <= s <= floor(m/2) + 1.
inline SpecialWord queen(int m, int s) {
    detail::check_width(m);
    std::string text;
    if (m % 2 == 0) {
        if (s < 0 || s > m / 2) throw RangeError("queen: s=" + std::to_string(s) + " outside [0, m/2]");
        text = detail::repeat("01", s) + std::string(static_cast<std::size_t>(m - 2 * s), '0');
    } else {
        if (s < 1 || s > m / 2 + 1) throw RangeError("queen: s=" + std::to_string(s) + " outside [1, floor(m/2)+1]");
        text = detail::repeat("01", s - 1) + std::string(static_cast<std::size_t>(m - 2 * s + 2), '0');
    }
    return {Role::queen, m, s, BinaryWord::parse(text)};
}

/// Odd m only: (10)^(s+1) 0^(m-2s-2) for 0 <= s < floor(m/2), and
/// (10)^floor(m/2) 1 for s = floor(m/2).
inline SpecialWord court_lady(int m, int s) {
    detail::check_width(m);
    if (m % 2 == 0) throw RangeError("court_lady: defined for odd widths only");
    const int k = m / 2;
    if (s < 0 || s > k) throw RangeError("court_lady: s=" + std::to_string(s) + " outside [0, floor(m/2)]");
    const std::string text = s < k ? detail::repeat("10", s + 1) + std::string(static_cast<std::size_t>(m - 2 * s - 2), '0')
                                   : detail::repeat("10", k) + "1";
    return {Role::court_lady, m, s, BinaryWord::parse(text)};
}

/// Odd m, 0 <= s <= floor(m/2) - 1: the circular column f (af)^s a b^(m-2s-2),
/// whose inlet is court_lady(m, s) and outlet queen(m, s + 2). It witnesses an
/// arc joining the two.
inline AlphaWord connecting_column(int m, int s) {
    detail::check_width(m);
    if (m % 2 == 0) throw RangeError("connecting_column: defined for odd widths only");
    if (s < 0 || s > m / 2 - 1) {
        throw RangeError("connecting_column: s=" + std::to_string(s) + " outside [0, floor(m/2)-1]");
    }
    return AlphaWord::parse("f" + detail::repeat("af", s) + "a" + std::string(static_cast<std::size_t>(m - 2 * s - 2), 'b'),
                            Kind::circular);
}

// ============================================================================
// Structure report
// ============================================================================

struct ComponentReport {
    std::string label;  // "A", "N" or the decimal s
    std::vector<BinaryWord> vertices;
    bool contains_zeros = false;
    bool contains_ones = false;
    bool strongly_connected = false;
    std::optional<Bipartition> bipartition;
};

struct StructureReport {
    int m = 0;
    Kind kind = Kind::circular;
    std::vector<ComponentReport> components;  // A, N, then s ascending
    std::vector<BinaryWord> isolated;
    std::optional<IsomorphismCheck> isomorphism;
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }

    std::vector<std::size_t> sizes() const {
        std::vector<std::size_t> out;
        for (const auto& c : components) out.push_back(c.vertices.size());
        return out;
    }

    const ComponentReport* find(std::string_view label) const {
        for (const auto& c : components) {
            if (c.label == label) return &c;
        }
        return nullptr;
    }
};

namespace detail {

inline std::string z_label(BinaryWord v, Kind kind) {
    const int z = z_value(v);
    if (kind == Kind::circular && v.width() % 2 == 1) return (z % 2 == 0) ? "A" : "N";
    const int s = z < 0 ? -z : z;
    return s == 0 ? "A" : std::to_string(s);
}

inline int label_rank(const std::string& label) {
    if (label == "A") return -2;
    if (label == "N") return -1;
    return std::stoi(label);
}

/// label -> expected size for the given width and kind.
inline std::map<std::string, std::uint64_t> expected_sizes(int m, Kind kind) {
    std::map<std::string, std::uint64_t> out;
    if (kind == Kind::circular && m % 2 == 1) {
        out["A"] = std::uint64_t{1} << (m - 1);
        out["N"] = std::uint64_t{1} << (m - 1);
        return out;
    }
    if (m % 2 == 0) {
        out["A"] = binomial(m, m / 2);
        for (int s = 1; s <= m / 2; ++s) out[std::to_string(s)] = 2 * binomial(m, m / 2 - s);
    } else {
        out["A"] = binomial(m, (m - 1) / 2);
        for (int s = 1; s <= m / 2; ++s) out[std::to_string(s)] = binomial(m + 1, (m + 1) / 2 - s);
    }
    return out;
}

inline std::string words_str(const std::vector<std::uint32_t>& xs, int m, std::size_t limit = 4) {
    std::string out;
    for (std::size_t i = 0; i < xs.size() && i < limit; ++i) {
        if (i) out += ",";
        out += BinaryWord(m, xs[i]).str();
    }
    if (xs.size() > limit) out += ",...";
    return out;
}

}  // namespace detail

inline StructureReport verify_structure(const TransferMatrix& matrix) {
    const int m = matrix.width();
    const Kind kind = matrix.kind();
    const bool odd_circular = kind == Kind::circular && m % 2 == 1;
    StructureReport report;
    report.m = m;
    report.kind = kind;
    auto violate = [&](std::string text) { report.violations.push_back(std::move(text)); };

    // Vertex set.
    const auto isolated = isolated_vertices(matrix);
    for (std::uint32_t v : isolated) report.isolated.emplace_back(m, v);
    std::vector<std::uint32_t> expected_isolated;
    if (kind == Kind::linear && m % 2 == 1) {
        expected_isolated.push_back(BinaryWord::parse("0" + detail::repeat("10", m / 2)).index());
    }
    if (isolated != expected_isolated) {
        violate("isolated words: expected {" + detail::words_str(expected_isolated, m) + "}, got {" +
                detail::words_str(isolated, m) + "}");
    }

    // Components labelled by their Z class, each class exactly one component.
    const auto comps = components(matrix);
    const auto expected = detail::expected_sizes(m, kind);
    std::map<std::string, const Component*> by_label;
    for (const auto& comp : comps) {
        const BinaryWord first(m, comp.front());
        const std::string label = detail::z_label(first, kind);
        for (std::uint32_t v : comp) {
            const BinaryWord word(m, v);
            if (detail::z_label(word, kind) != label) {
                violate("component of " + first.str() + " mixes Z classes: " + word.str() + " has class " +
                        detail::z_label(word, kind) + ", expected " + label);
                break;
            }
        }
        if (by_label.count(label)) {
            violate("Z class " + label + " is split across components (witness " + first.str() + ")");
            continue;
        }
        by_label[label] = &comp;
    }
    if (comps.size() != expected.size()) {
        violate("expected " + std::to_string(expected.size()) + " components, found " + std::to_string(comps.size()));
    }
    for (const auto& [label, size] : expected) {
        auto it = by_label.find(label);
        if (it == by_label.end()) {
            violate("no component with label " + label);
        } else if (it->second->size() != size) {
            violate("component " + label + ": expected " + std::to_string(size) + " vertices, found " +
                    std::to_string(it->second->size()) + " (witness " + BinaryWord(m, it->second->front()).str() + ")");
        }
    }

    const std::uint32_t zeros = 0;
    const std::uint32_t ones = BinaryWord::ones(m).index();
    for (const auto& [label, comp] : by_label) {
        ComponentReport cr;
        cr.label = label;
        for (std::uint32_t v : *comp) cr.vertices.emplace_back(m, v);
        cr.contains_zeros = std::binary_search(comp->begin(), comp->end(), zeros);
        cr.contains_ones = std::binary_search(comp->begin(), comp->end(), ones);
        cr.strongly_connected = strongly_connected(matrix, *comp);
        if (!cr.strongly_connected) violate("component " + label + " is not strongly connected");
        if (!odd_circular) cr.bipartition = bipartition(*comp, matrix);

        if (label != "A" && label != "N") {
            if (!cr.bipartition) {
                violate("component " + label + " is not bipartite");
            } else {
                for (std::uint32_t v : cr.bipartition->red) {
                    if (z_value(BinaryWord(m, v)) <= 0) {
                        violate("component " + label + ": " + BinaryWord(m, v).str() + " coloured red but Z <= 0");
                        break;
                    }
                }
                for (std::uint32_t v : cr.bipartition->green) {
                    if (z_value(BinaryWord(m, v)) >= 0) {
                        violate("component " + label + ": " + BinaryWord(m, v).str() + " coloured green but Z >= 0");
                        break;
                    }
                }
            }
        }
        report.components.push_back(std::move(cr));
    }
    std::sort(report.components.begin(), report.components.end(), [](const auto& x, const auto& y) {
        return detail::label_rank(x.label) < detail::label_rank(y.label);
    });

    // Anchors 0^m and 1^m.
    if (const auto* a = report.find("A")) {
        if (!a->contains_ones) violate("component A does not contain 1^m");
        if (kind == Kind::circular && m % 2 == 0 && !a->contains_zeros) violate("component A does not contain 0^m");
    }
    if (odd_circular) {
        if (const auto* n = report.find("N"); n && !n->contains_zeros) violate("component N does not contain 0^m");
    }

    // v and its reversal share a component; class rule on bipartite ones.
    std::map<std::uint32_t, const ComponentReport*> owner;
    for (const auto& cr : report.components) {
        for (const auto& v : cr.vertices) owner[v.index()] = &cr;
    }
    for (const auto& [v, cr] : owner) {
        const BinaryWord word(m, v);
        const BinaryWord reversed = bar_binary(word);
        auto it = owner.find(reversed.index());
        if (it == owner.end() || it->second != cr) {
            violate(word.str() + " and its reversal " + reversed.str() + " lie in different components");
            break;
        }
        if (cr->bipartition && word != reversed) {
            const auto& red = cr->bipartition->red;
            const bool same_class = std::binary_search(red.begin(), red.end(), v) ==
                                    std::binary_search(red.begin(), red.end(), reversed.index());
            const bool want_same = kind == Kind::linear && m % 2 == 1;
            if (same_class != want_same) {
                violate(word.str() + " and " + reversed.str() + (same_class ? " share" : " do not share") +
                        " a colour class in component " + cr->label);
                break;
            }
        }
    }

    if (kind == Kind::circular && m % 2 == 0) {
        // Queens of equal parity and different index are disconnected.
        for (int s1 = 0; s1 <= m / 2; ++s1) {
            for (int s2 = s1 + 2; s2 <= m / 2; s2 += 2) {
                const auto q1 = queen(m, s1).word;
                const auto q2 = queen(m, s2).word;
                if (owner.count(q1.index()) && owner[q1.index()] == owner[q2.index()]) {
                    violate("queens " + q1.str() + " and " + q2.str() + " share a component");
                }
            }
        }
    }

    if (odd_circular) {
        report.isomorphism = complement_isomorphism(matrix);
        if (!report.isomorphism->ok) violate("complement isomorphism fails: " + report.isomorphism->violation);
        for (int s = 0; s <= m / 2 - 1; ++s) {
            const AlphaWord column = connecting_column(m, s);
            const BinaryWord lady = court_lady(m, s).word;
            const BinaryWord q = queen(m, s + 2).word;
            if (inlet(column) != lady || outlet(column) != q || matrix.entry(lady, q) == 0) {
                violate("connecting column " + column.str() + " does not join " + lady.str() + " to " + q.str());
            }
        }
    }
    return report;
}

inline StructureReport verify_structure(int m, Kind kind, const BuildOptions& options = {}) {
    return verify_structure(build_matrix(m, kind, options));
}

}  // namespace gridfactor
