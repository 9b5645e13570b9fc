// counting.hpp -- exact 2-factor counts from powers of the transfer matrix
//
// With M the transfer matrix of the family's column kind and M^n its n-th
// power, a code matrix with columns c_1..c_n is a walk from inlet(c_1) to
// outlet(c_n). The closure between last and first column fixes how these two
// words are related, so every family reduces to
//
//     sum over v of (M^n)[pairing(v), v]
//
// where v = outlet(c_n) and pairing(v) = inlet(c_1):
//   RG, TnC   single term (M^n)[0^m, 0^m] (no closure, borders empty)
//   TkC       identity
//   MS        reversal, pairing(v) = bar(v)
//   TG(p)     pairing(v) = rho^p(v)
//   KB(p)     pairing(v) = bar(rho^p(v))
// The double sum over pairs (v_i, v_j) with a bijective side condition
// collapses to this single sum because the condition fixes v_i given v_j.

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "gridfactor/alphabet.hpp"
#include "gridfactor/errors.hpp"
#include "gridfactor/parallel.hpp"
#include "gridfactor/transfer.hpp"

namespace gridfactor {

using Count = mpz_class;

enum class Family : std::uint8_t { rg, tkc, ms, tnc, tg, kb };

inline constexpr std::array<Family, 6> kFamilies{Family::rg, Family::tkc, Family::ms,
                                                 Family::tnc, Family::tg, Family::kb};

inline constexpr std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::rg: return "rg";
        case Family::tkc: return "tkc";
        case Family::ms: return "ms";
        case Family::tnc: return "tnc";
        case Family::tg: return "tg";
        case Family::kb: return "kb";
    }
    return "?";
}

inline Family parse_family(std::string_view text) {
    for (Family f : kFamilies) {
        if (to_string(f) == text) return f;
    }
    throw std::invalid_argument("unknown family '" + std::string(text) + "' (expected rg, tkc, ms, tnc, tg or kb)");
}

/// Columns of RG, TkC and MS are paths; of TnC, TG and KB cycles.
inline constexpr Kind column_kind(Family f) noexcept {
    return (f == Family::rg || f == Family::tkc || f == Family::ms) ? Kind::linear : Kind::circular;
}

inline constexpr bool has_twist(Family f) noexcept { return f == Family::tg || f == Family::kb; }

/// Last column glued back to the first.
inline constexpr bool wraps_columns(Family f) noexcept { return f != Family::rg && f != Family::tnc; }

struct GridSpec {
    Family family = Family::rg;
    int m = 1;
    int n = 1;
    int p = 0;

    /// Validates ranges and reduces p modulo m. Twist is rejected for
    /// families without one.
    static GridSpec make(Family family, int m, int n, std::optional<int> p = std::nullopt) {
        if (m < 1) throw std::invalid_argument("width m must be at least 1");
        if (n < 1) throw std::invalid_argument("length n must be at least 1");
        if (p && !has_twist(family)) {
            throw std::invalid_argument("twist p is only defined for tg and kb");
        }
        if (p && *p < 0) throw std::invalid_argument("twist p must be nonnegative");
        return {family, m, n, p ? *p % m : 0};
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Spec whose circular axis has length 1 or 2: the formula still evaluates,
/// but the glued object is not a simple graph.
inline bool degenerate_geometry(const GridSpec& spec) noexcept {
    return (column_kind(spec.family) == Kind::circular && spec.m <= 2) || (wraps_columns(spec.family) && spec.n <= 2);
}

// ============================================================================
// Arithmetic policies
// ============================================================================

struct ExactArithmetic {
    using value_type = mpz_class;

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    static bool is_zero(const value_type& x) { return sgn(x) == 0; }
    void addmul(value_type& acc, const value_type& x, std::uint32_t k) const {
        mpz_addmul_ui(acc.get_mpz_t(), x.get_mpz_t(), k);
    }
    void addmul(value_type& acc, const value_type& x, const value_type& y) const {
        mpz_addmul(acc.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    }
    void add(value_type& acc, const value_type& x) const { acc += x; }
    Count to_count(const value_type& x) const { return x; }
};

/// Residues modulo a 64-bit modulus. Not exact.
struct ModularArithmetic {
    using value_type = std::uint64_t;
    std::uint64_t modulus;

    value_type zero() const { return 0; }
    value_type one() const { return 1 % modulus; }
    static bool is_zero(value_type x) { return x == 0; }
    void addmul(value_type& acc, value_type x, std::uint64_t k) const {
        acc = static_cast<value_type>((static_cast<unsigned __int128>(x) * k + acc) % modulus);
    }
    void add(value_type& acc, value_type x) const {
        acc = static_cast<value_type>((static_cast<unsigned __int128>(acc) + x) % modulus);
    }
    Count to_count(value_type x) const {
        Count out;
        mpz_import(out.get_mpz_t(), 1, 1, sizeof(x), 0, 0, &x);
        return out;
    }
};

// ============================================================================
// Evaluators
// ============================================================================

enum class Method : std::uint8_t { automatic, dense_power, matvec };

inline constexpr std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::dense_power: return "dense-power";
        case Method::matvec: return "matvec";
        default: return "auto";
    }
}

inline Method parse_method(std::string_view text) {
    if (text == "auto") return Method::automatic;
    if (text == "dense" || text == "dense-power") return Method::dense_power;
    if (text == "matvec") return Method::matvec;
    throw std::invalid_argument("unknown method '" + std::string(text) + "' (expected auto, dense or matvec)");
}

struct EvalOptions {
    Method method = Method::automatic;
    unsigned threads = 1;
    std::uint32_t dense_dim_cap = 1024;
};

/// y = M x
template <class Arith>
std::vector<typename Arith::value_type> multiply(const TransferMatrix& matrix,
                                                 const std::vector<typename Arith::value_type>& x,
                                                 const Arith& arith) {
    std::vector<typename Arith::value_type> y(matrix.dim(), arith.zero());
    for (std::uint32_t r = 0; r < matrix.dim(); ++r) {
        const auto cols = matrix.row_cols(r);
        const auto mults = matrix.row_mults(r);
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (!Arith::is_zero(x[cols[i]])) arith.addmul(y[r], x[cols[i]], mults[i]);
        }
    }
    return y;
}

/// Column `col` of M^n.
template <class Arith>
std::vector<typename Arith::value_type> power_column(const TransferMatrix& matrix, int n, std::uint32_t col,
                                                     const Arith& arith) {
    std::vector<typename Arith::value_type> x(matrix.dim(), arith.zero());
    x[col] = arith.one();
    for (int step = 0; step < n; ++step) x = multiply(matrix, x, arith);
    return x;
}

template <class Arith>
using DenseMatrix = std::vector<std::vector<typename Arith::value_type>>;

template <class Arith>
DenseMatrix<Arith> dense_multiply(const DenseMatrix<Arith>& a, const DenseMatrix<Arith>& b, const Arith& arith,
                                  unsigned threads) {
    const std::size_t dim = a.size();
    DenseMatrix<Arith> c(dim, std::vector<typename Arith::value_type>(dim, arith.zero()));
    parallel_for(dim, threads, [&](std::size_t i) {
        for (std::size_t k = 0; k < dim; ++k) {
            if (Arith::is_zero(a[i][k])) continue;
            for (std::size_t j = 0; j < dim; ++j) {
                if constexpr (std::is_same_v<Arith, ExactArithmetic>) {
                    arith.addmul(c[i][j], a[i][k], b[k][j]);
                } else {
                    arith.addmul(c[i][j], b[k][j], a[i][k]);
                }
            }
        }
    });
    return c;
}

/// M^n by binary exponentiation.
template <class Arith>
DenseMatrix<Arith> dense_power(const TransferMatrix& matrix, int n, const Arith& arith, const EvalOptions& options) {
    if (matrix.dim() > options.dense_dim_cap) {
        throw ResourceError("dense power needs dimension <= " + std::to_string(options.dense_dim_cap) + ", matrix has " +
                            std::to_string(matrix.dim()));
    }
    const std::size_t dim = matrix.dim();
    DenseMatrix<Arith> result(dim, std::vector<typename Arith::value_type>(dim, arith.zero()));
    for (std::size_t i = 0; i < dim; ++i) result[i][i] = arith.one();
    DenseMatrix<Arith> base(dim, std::vector<typename Arith::value_type>(dim, arith.zero()));
    for (const auto& e : matrix.entries()) arith.addmul(base[e.row][e.col], arith.one(), e.mult);
    for (int k = n; k > 0; k >>= 1) {
        if (k & 1) result = dense_multiply(result, base, arith, options.threads);
        if (k > 1) base = dense_multiply(base, base, arith, options.threads);
    }
    return result;
}

/// Picks the cheaper strategy for `terms` basis-vector chains unless forced.
inline Method choose_method(const TransferMatrix& matrix, int n, std::size_t terms, const EvalOptions& options) {
    if (options.method != Method::automatic) return options.method;
    if (matrix.dim() > options.dense_dim_cap) return Method::matvec;
    const double dim = matrix.dim();
    const double dense_cost = dim * dim * dim * 2.0 * std::bit_width(static_cast<unsigned>(std::max(n, 1)));
    const double matvec_cost = static_cast<double>(terms) * n * (static_cast<double>(matrix.nonzeros()) + dim);
    return dense_cost < matvec_cost ? Method::dense_power : Method::matvec;
}

template <class Arith>
struct Evaluation {
    typename Arith::value_type value;
    Method method;
};

/// sum over v of (M^n)[pairing[v], v]
template <class Arith>
Evaluation<Arith> pairing_sum(const TransferMatrix& matrix, int n, std::span<const std::uint32_t> pairing,
                              const Arith& arith, const EvalOptions& options = {}) {
    if (n < 0) throw std::invalid_argument("pairing_sum: negative power");
    if (pairing.size() != matrix.dim()) throw std::invalid_argument("pairing_sum: pairing size does not match matrix");
    {
        std::vector<char> hit(matrix.dim(), 0);
        for (std::uint32_t x : pairing) {
            if (x >= matrix.dim() || hit[x]) throw std::invalid_argument("pairing_sum: pairing is not a bijection");
            hit[x] = 1;
        }
    }
    const Method method = choose_method(matrix, n, matrix.dim(), options);
    auto total = arith.zero();
    if (method == Method::dense_power) {
        const auto power = dense_power(matrix, n, arith, options);
        for (std::uint32_t v = 0; v < matrix.dim(); ++v) arith.add(total, power[pairing[v]][v]);
        return {total, method};
    }
    std::vector<typename Arith::value_type> terms(matrix.dim(), arith.zero());
    parallel_for(matrix.dim(), options.threads, [&](std::size_t v) {
        const auto column = power_column(matrix, n, static_cast<std::uint32_t>(v), arith);
        terms[v] = column[pairing[v]];
    });
    for (const auto& t : terms) arith.add(total, t);
    return {total, Method::matvec};
}

/// (M^n)[row, col]
template <class Arith>
Evaluation<Arith> power_entry(const TransferMatrix& matrix, int n, std::uint32_t row, std::uint32_t col,
                              const Arith& arith, const EvalOptions& options = {}) {
    if (n < 0) throw std::invalid_argument("power_entry: negative power");
    const Method method = choose_method(matrix, n, 1, options);
    if (method == Method::dense_power) return {dense_power(matrix, n, arith, options)[row][col], method};
    return {power_column(matrix, n, col, arith)[row], Method::matvec};
}

// ============================================================================
// Family counts
// ============================================================================

/// pairing(v) = inlet word of the first column when the last column's outlet
/// word is v. Empty for RG and TnC, which have no closure.
inline std::optional<std::vector<std::uint32_t>> closure_pairing(const GridSpec& spec) {
    if (!wraps_columns(spec.family)) return std::nullopt;
    const int m = spec.m;
    std::vector<std::uint32_t> out(std::size_t{1} << m);
    for (std::uint32_t v = 0; v < out.size(); ++v) {
        const BinaryWord word(m, v);
        BinaryWord image = word;
        switch (spec.family) {
            case Family::tkc: image = word; break;
            case Family::ms: image = bar_binary(word); break;
            case Family::tg: image = rho(word, spec.p); break;
            case Family::kb: image = bar_binary(rho(word, spec.p)); break;
            default: break;
        }
        out[v] = image.index();
    }
    return out;
}

struct CountOptions {
    EvalOptions eval;
    int width_cap = 14;
    std::optional<std::uint64_t> modulus;  // non-exact when set
};

struct CountResult {
    Count value;
    Method method = Method::matvec;
    bool exact = true;
};

namespace detail {

template <class Arith>
CountResult count_with(const GridSpec& spec, const TransferMatrix& matrix, const Arith& arith,
                       const EvalOptions& options) {
    if (const auto pairing = closure_pairing(spec)) {
        const auto result = pairing_sum(matrix, spec.n, *pairing, arith, options);
        return {arith.to_count(result.value), result.method, true};
    }
    const auto result = power_entry(matrix, spec.n, 0, 0, arith, options);
    return {arith.to_count(result.value), result.method, true};
}

}  // namespace detail

/// Count with a prebuilt matrix of the right width and kind.
inline CountResult count(const GridSpec& spec, const TransferMatrix& matrix, const CountOptions& options = {}) {
    if (matrix.width() != spec.m || matrix.kind() != column_kind(spec.family)) {
        throw std::invalid_argument("count: matrix does not match the grid's width and column kind");
    }
    if (options.modulus) {
        if (*options.modulus < 2) throw std::invalid_argument("modulus must be at least 2");
        auto out = detail::count_with(spec, matrix, ModularArithmetic{*options.modulus}, options.eval);
        out.exact = false;
        return out;
    }
    return detail::count_with(spec, matrix, ExactArithmetic{}, options.eval);
}

inline CountResult count(const GridSpec& spec, const CountOptions& options = {}) {
    const auto matrix = build_matrix(spec.m, column_kind(spec.family), {options.width_cap, options.eval.threads});
    return count(spec, matrix, options);
}

}  // namespace gridfactor
