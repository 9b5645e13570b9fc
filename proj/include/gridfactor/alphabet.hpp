// alphabet.hpp -- code letters, binary words and the word-level symmetries
//
// A code letter records which two of the four grid edges around a vertex
// (up, down, left, right) belong to a 2-factor. A column of letters read top
// to bottom is an alpha-word; its outlet (inlet) word marks the rows whose
// right (left) edge is used.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gridfactor {

/// Largest width representable by BinaryWord.
inline constexpr int kMaxWidth = 30;

/// Columns of linear grids induce a path, columns of circular grids a cycle.
enum class Kind : std::uint8_t { linear, circular };

inline constexpr std::string_view to_string(Kind kind) noexcept {
    return kind == Kind::linear ? "linear" : "circular";
}

inline Kind parse_kind(std::string_view text) {
    if (text == "linear") return Kind::linear;
    if (text == "circular") return Kind::circular;
    throw std::invalid_argument("unknown kind '" + std::string(text) + "' (expected linear or circular)");
}

// ============================================================================
// Code letters
// ============================================================================

enum class Letter : std::uint8_t { a, b, c, d, e, f };

inline constexpr std::array<Letter, 6> kLetters{Letter::a, Letter::b, Letter::c,
                                                Letter::d, Letter::e, Letter::f};

struct Incidence {
    bool up = false;
    bool down = false;
    bool left = false;
    bool right = false;

    friend constexpr bool operator==(const Incidence&, const Incidence&) = default;
};

/// The fixed letter table. Left/right follow the inlet/outlet bits; the
/// up/down convention is the one under which both sample code matrices of
/// KB(1)_4(3) and TG(0)_4(3) are consistent columns.
inline constexpr Incidence letter_incidence(Letter x) noexcept {
    switch (x) {
        case Letter::a: return {false, true, false, true};
        case Letter::b: return {true, true, false, false};
        case Letter::c: return {true, false, false, true};
        case Letter::d: return {false, true, true, false};
        case Letter::e: return {false, false, true, true};
        case Letter::f: return {true, false, true, false};
    }
    return {};
}

/// Bumped whenever letter_incidence changes; part of the matrix cache key.
inline constexpr int kLetterTableVersion = 1;

inline constexpr bool up(Letter x) noexcept { return letter_incidence(x).up; }
inline constexpr bool down(Letter x) noexcept { return letter_incidence(x).down; }
inline constexpr bool left(Letter x) noexcept { return letter_incidence(x).left; }
inline constexpr bool right(Letter x) noexcept { return letter_incidence(x).right; }

inline constexpr char to_char(Letter x) noexcept { return static_cast<char>('a' + static_cast<int>(x)); }

inline Letter letter_from_char(char ch) {
    if (ch < 'a' || ch > 'f') {
        throw std::invalid_argument(std::string("invalid code letter '") + ch + "'");
    }
    return static_cast<Letter>(ch - 'a');
}

/// Arc of the up/down digraph: x may sit directly above y.
inline constexpr bool ud_arc(Letter x, Letter y) noexcept { return down(x) == up(y); }

/// Arc of the left/right digraph: x may sit directly left of y.
inline constexpr bool lr_arc(Letter x, Letter y) noexcept { return right(x) == left(y); }

/// Reflection in the horizontal axis: a<->c, d<->f, b and e fixed.
inline constexpr Letter bar_letter(Letter x) noexcept {
    switch (x) {
        case Letter::a: return Letter::c;
        case Letter::c: return Letter::a;
        case Letter::d: return Letter::f;
        case Letter::f: return Letter::d;
        default: return x;
    }
}

/// a<->f, b<->e, c<->d: every incidence bit flipped.
inline constexpr Letter complement_letter(Letter x) noexcept {
    return static_cast<Letter>(5 - static_cast<int>(x));
}

// ============================================================================
// Binary words
// ============================================================================

/// Bit word of length m. Position 1 is the top row and is stored as the most
/// significant bit, so the word read as an integer is its matrix index and
/// 0^m has index 0.
class BinaryWord {
public:
    constexpr BinaryWord() = default;

    constexpr BinaryWord(int width, std::uint32_t bits) : width_(width), bits_(bits) {
        if (width < 1 || width > kMaxWidth) throw std::out_of_range("binary word width out of range");
        if (bits >> width) throw std::out_of_range("binary word bits exceed width");
    }

    static BinaryWord parse(std::string_view text) {
        if (text.empty() || text.size() > static_cast<std::size_t>(kMaxWidth)) {
            throw std::invalid_argument("binary word length out of range: '" + std::string(text) + "'");
        }
        std::uint32_t bits = 0;
        for (char ch : text) {
            if (ch != '0' && ch != '1') {
                throw std::invalid_argument("invalid binary word '" + std::string(text) + "'");
            }
            bits = (bits << 1) | static_cast<std::uint32_t>(ch - '0');
        }
        return {static_cast<int>(text.size()), bits};
    }

    static constexpr BinaryWord zeros(int width) { return {width, 0}; }
    static constexpr BinaryWord ones(int width) { return {width, mask(width)}; }

    constexpr int width() const noexcept { return width_; }
    constexpr std::uint32_t index() const noexcept { return bits_; }

    /// Bit at 1-based position `pos`.
    constexpr bool bit(int pos) const noexcept { return (bits_ >> (width_ - pos)) & 1u; }

    std::string str() const {
        std::string out(static_cast<std::size_t>(width_), '0');
        for (int pos = 1; pos <= width_; ++pos) {
            if (bit(pos)) out[static_cast<std::size_t>(pos - 1)] = '1';
        }
        return out;
    }

    static constexpr std::uint32_t mask(int width) noexcept {
        return width >= 32 ? ~0u : ((1u << width) - 1u);
    }

    friend constexpr auto operator<=>(const BinaryWord&, const BinaryWord&) = default;

private:
    int width_ = 1;
    std::uint32_t bits_ = 0;
};

/// b_1 ... b_m -> b_m ... b_1
inline constexpr BinaryWord bar_binary(BinaryWord v) noexcept {
    std::uint32_t out = 0;
    std::uint32_t in = v.index();
    for (int i = 0; i < v.width(); ++i) {
        out = (out << 1) | (in & 1u);
        in >>= 1;
    }
    return {v.width(), out};
}

/// Left cyclic shift applied p times: b_1 b_2 ... b_m -> b_2 ... b_m b_1.
inline constexpr BinaryWord rho(BinaryWord v, int p = 1) {
    if (p < 0) throw std::invalid_argument("rho: negative shift");
    const int m = v.width();
    p %= m;
    if (p == 0) return v;
    const std::uint32_t bits = v.index();
    return {m, ((bits << p) | (bits >> (m - p))) & BinaryWord::mask(m)};
}

inline constexpr BinaryWord complement(BinaryWord v) noexcept {
    return {v.width(), ~v.index() & BinaryWord::mask(v.width())};
}

/// Zeros at odd positions minus zeros at even positions (1-based).
inline constexpr int z_value(BinaryWord v) noexcept {
    int z = 0;
    for (int pos = 1; pos <= v.width(); ++pos) {
        if (!v.bit(pos)) z += (pos % 2 == 1) ? 1 : -1;
    }
    return z;
}

enum class Color : std::uint8_t { neutral, red, green };

inline constexpr std::string_view to_string(Color c) noexcept {
    switch (c) {
        case Color::red: return "red";
        case Color::green: return "green";
        default: return "neutral";
    }
}

struct ZClass {
    int s = 0;
    Color color = Color::neutral;

    friend constexpr bool operator==(const ZClass&, const ZClass&) = default;
};

inline constexpr ZClass classify(BinaryWord v) noexcept {
    const int z = z_value(v);
    if (z > 0) return {z, Color::red};
    if (z < 0) return {-z, Color::green};
    return {0, Color::neutral};
}

// ============================================================================
// Alpha words
// ============================================================================

inline bool is_valid_column(std::span<const Letter> letters, Kind kind) noexcept {
    if (letters.empty()) return false;
    for (std::size_t i = 0; i + 1 < letters.size(); ++i) {
        if (!ud_arc(letters[i], letters[i + 1])) return false;
    }
    if (kind == Kind::circular) return ud_arc(letters.back(), letters.front());
    return !up(letters.front()) && !down(letters.back());
}

/// Outlet/inlet bits packed position-1-first, matching BinaryWord::index().
inline std::uint32_t outlet_bits(std::span<const Letter> letters) noexcept {
    std::uint32_t bits = 0;
    for (Letter x : letters) bits = (bits << 1) | static_cast<std::uint32_t>(right(x));
    return bits;
}

inline std::uint32_t inlet_bits(std::span<const Letter> letters) noexcept {
    std::uint32_t bits = 0;
    for (Letter x : letters) bits = (bits << 1) | static_cast<std::uint32_t>(left(x));
    return bits;
}

/// A valid column of a code matrix. Construction checks the column conditions
/// for the given kind.
class AlphaWord {
public:
    AlphaWord(std::vector<Letter> letters, Kind kind) : letters_(std::move(letters)), kind_(kind) {
        if (letters_.empty() || letters_.size() > static_cast<std::size_t>(kMaxWidth)) {
            throw std::invalid_argument("alpha word length out of range");
        }
        if (!is_valid_column(letters_, kind_)) {
            throw std::invalid_argument("'" + str() + "' is not a valid " + std::string(to_string(kind_)) +
                                        " column");
        }
    }

    static AlphaWord parse(std::string_view text, Kind kind) {
        std::vector<Letter> letters;
        letters.reserve(text.size());
        for (char ch : text) letters.push_back(letter_from_char(ch));
        return {std::move(letters), kind};
    }

    int width() const noexcept { return static_cast<int>(letters_.size()); }
    Kind kind() const noexcept { return kind_; }
    std::span<const Letter> letters() const noexcept { return letters_; }
    Letter operator[](std::size_t i) const noexcept { return letters_[i]; }

    std::string str() const {
        std::string out;
        out.reserve(letters_.size());
        for (Letter x : letters_) out.push_back(to_char(x));
        return out;
    }

    friend bool operator==(const AlphaWord&, const AlphaWord&) = default;

private:
    std::vector<Letter> letters_;
    Kind kind_;
};

inline BinaryWord outlet(const AlphaWord& w) { return {w.width(), outlet_bits(w.letters())}; }
inline BinaryWord inlet(const AlphaWord& w) { return {w.width(), inlet_bits(w.letters())}; }

/// Letterwise reflection followed by reversal.
inline AlphaWord bar_alpha(const AlphaWord& w) {
    std::vector<Letter> out(w.letters().rbegin(), w.letters().rend());
    for (Letter& x : out) x = bar_letter(x);
    return {std::move(out), w.kind()};
}

/// Circular words only: alpha_{j+1} ... alpha_m alpha_1 ... alpha_j.
inline AlphaWord rotate_letters(const AlphaWord& w, int j) {
    if (w.kind() != Kind::circular) throw std::invalid_argument("rotate_letters: linear words do not rotate");
    if (j < 0) throw std::invalid_argument("rotate_letters: negative shift");
    const auto m = static_cast<std::size_t>(w.width());
    std::vector<Letter> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = w[(i + static_cast<std::size_t>(j)) % m];
    return {std::move(out), Kind::circular};
}

/// Letterwise a<->f, b<->e, c<->d. This is an automorphism of the up/down
/// digraph but swaps the linear boundary sets, so only circular words map to
/// valid words.
inline AlphaWord f_automorphism(const AlphaWord& w) {
    if (w.kind() != Kind::circular) {
        throw std::invalid_argument("f_automorphism: defined on circular words only");
    }
    std::vector<Letter> out(w.letters().begin(), w.letters().end());
    for (Letter& x : out) x = complement_letter(x);
    return {std::move(out), Kind::circular};
}

}  // namespace gridfactor
