// transfer.hpp -- column enumeration and the quotient transfer matrix
//
// Entry (v, w) of the transfer matrix is the number of valid columns with
// inlet word v and outlet word w. Consecutive columns of a code matrix agree
// on outlet/inlet, so the n-th power counts n-column code matrices by their
// first inlet and last outlet word.

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridfactor/alphabet.hpp"
#include "gridfactor/errors.hpp"
#include "gridfactor/parallel.hpp"

namespace gridfactor {

namespace detail {

template <class Visitor>
void extend_column(std::vector<Letter>& cur, std::size_t pos, Kind kind, std::uint32_t in_bits,
                   std::uint32_t out_bits, Visitor& visit) {
    const std::size_t m = cur.size();
    if (pos == m) {
        const bool closed = kind == Kind::circular ? ud_arc(cur.back(), cur.front()) : !down(cur.back());
        if (closed) visit(std::span<const Letter>(cur), in_bits, out_bits);
        return;
    }
    const bool need_up = down(cur[pos - 1]);
    for (Letter x : kLetters) {
        if (up(x) != need_up) continue;
        cur[pos] = x;
        extend_column(cur, pos + 1, kind, (in_bits << 1) | left(x), (out_bits << 1) | right(x), visit);
    }
}

inline void check_width(int m) {
    if (m < 1) throw std::invalid_argument("width must be at least 1");
    if (m > kMaxWidth) throw ResourceError("width " + std::to_string(m) + " exceeds the hard limit of " +
                                           std::to_string(kMaxWidth));
}

}  // namespace detail

/// Letters allowed in row 1 of a column of the given kind.
inline std::vector<Letter> first_letters(Kind kind) {
    std::vector<Letter> out;
    for (Letter x : kLetters) {
        if (kind == Kind::circular || !up(x)) out.push_back(x);
    }
    return out;
}

/// Calls visit(letters, inlet_bits, outlet_bits) for every valid column whose
/// first letter is `first`, in lexicographic order.
template <class Visitor>
void for_each_column_from(int m, Kind kind, Letter first, Visitor&& visit) {
    detail::check_width(m);
    if (kind == Kind::linear && up(first)) return;
    std::vector<Letter> cur(static_cast<std::size_t>(m));
    cur[0] = first;
    detail::extend_column(cur, 1, kind, static_cast<std::uint32_t>(left(first)),
                          static_cast<std::uint32_t>(right(first)), visit);
}

/// Every valid column of width m, in lexicographic letter order (a < ... < f).
template <class Visitor>
void for_each_column(int m, Kind kind, Visitor&& visit) {
    for (Letter first : first_letters(kind)) for_each_column_from(m, kind, first, visit);
}

inline std::vector<AlphaWord> enumerate_columns(int m, Kind kind) {
    std::vector<AlphaWord> out;
    for_each_column(m, kind, [&](std::span<const Letter> letters, std::uint32_t, std::uint32_t) {
        out.emplace_back(std::vector<Letter>(letters.begin(), letters.end()), kind);
    });
    return out;
}

/// Sparse (CSR) square matrix over the 2^m binary words, immutable once built.
class TransferMatrix {
public:
    struct Entry {
        std::uint32_t row;
        std::uint32_t col;
        std::uint32_t mult;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    TransferMatrix(int m, Kind kind, std::vector<Entry> entries) : m_(m), kind_(kind) {
        detail::check_width(m);
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& x, const Entry& y) { return x.row != y.row ? x.row < y.row : x.col < y.col; });
        row_start_.assign(static_cast<std::size_t>(dim()) + 1, 0);
        cols_.reserve(entries.size());
        mults_.reserve(entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const Entry& e = entries[i];
            if (e.row >= dim() || e.col >= dim()) throw std::invalid_argument("matrix entry index out of range");
            if (e.mult == 0) throw std::invalid_argument("matrix entries must be positive");
            if (i > 0 && entries[i - 1].row == e.row && entries[i - 1].col == e.col) {
                throw std::invalid_argument("duplicate matrix entry");
            }
            ++row_start_[e.row + 1];
            cols_.push_back(e.col);
            mults_.push_back(e.mult);
        }
        for (std::size_t r = 0; r < dim(); ++r) row_start_[r + 1] += row_start_[r];
    }

    int width() const noexcept { return m_; }
    Kind kind() const noexcept { return kind_; }
    std::uint32_t dim() const noexcept { return 1u << m_; }
    std::size_t nonzeros() const noexcept { return cols_.size(); }

    std::span<const std::uint32_t> row_cols(std::uint32_t row) const noexcept {
        return std::span(cols_).subspan(row_start_[row], row_start_[row + 1] - row_start_[row]);
    }
    std::span<const std::uint32_t> row_mults(std::uint32_t row) const noexcept {
        return std::span(mults_).subspan(row_start_[row], row_start_[row + 1] - row_start_[row]);
    }

    std::uint32_t entry(std::uint32_t row, std::uint32_t col) const noexcept {
        const auto cols = row_cols(row);
        const auto it = std::lower_bound(cols.begin(), cols.end(), col);
        if (it == cols.end() || *it != col) return 0;
        return row_mults(row)[static_cast<std::size_t>(it - cols.begin())];
    }

    std::uint32_t entry(BinaryWord v, BinaryWord w) const {
        if (v.width() != m_ || w.width() != m_) throw std::invalid_argument("word width does not match matrix");
        return entry(v.index(), w.index());
    }

    /// Sum of all entries; equals the number of valid columns.
    std::uint64_t total_mass() const noexcept {
        std::uint64_t sum = 0;
        for (std::uint32_t x : mults_) sum += x;
        return sum;
    }

    /// Entries sorted by (row, col).
    std::vector<Entry> entries() const {
        std::vector<Entry> out;
        out.reserve(nonzeros());
        for (std::uint32_t r = 0; r < dim(); ++r) {
            const auto cols = row_cols(r);
            const auto mults = row_mults(r);
            for (std::size_t i = 0; i < cols.size(); ++i) out.push_back({r, cols[i], mults[i]});
        }
        return out;
    }

    std::vector<std::vector<std::uint32_t>> dense(std::uint32_t dim_cap = 1024) const {
        if (dim() > dim_cap) {
            throw ResourceError("dense view of a " + std::to_string(dim()) + "x" + std::to_string(dim()) +
                                " matrix exceeds the dense dimension cap " + std::to_string(dim_cap));
        }
        std::vector<std::vector<std::uint32_t>> out(dim(), std::vector<std::uint32_t>(dim(), 0));
        for (const Entry& e : entries()) out[e.row][e.col] = e.mult;
        return out;
    }

    friend bool operator==(const TransferMatrix&, const TransferMatrix&) = default;

private:
    int m_;
    Kind kind_;
    std::vector<std::uint32_t> row_start_;
    std::vector<std::uint32_t> cols_;
    std::vector<std::uint32_t> mults_;
};

struct BuildOptions {
    int width_cap = 14;
    unsigned threads = 1;
};

inline void check_width_cap(int m, int width_cap) {
    detail::check_width(m);
    if (m > width_cap) {
        throw ResourceError("width " + std::to_string(m) + " exceeds the configured cap " + std::to_string(width_cap) +
                            " (the number of columns grows as 3^m)");
    }
}

/// Enumerates all columns and tallies them by (inlet, outlet). Each first
/// letter is an independent partition; the result does not depend on threads.
inline TransferMatrix build_matrix(int m, Kind kind, const BuildOptions& options = {}) {
    check_width_cap(m, options.width_cap);
    const std::vector<Letter> firsts = first_letters(kind);
    std::vector<std::vector<std::uint64_t>> parts(firsts.size());
    parallel_for(firsts.size(), options.threads, [&](std::size_t i) {
        auto& keys = parts[i];
        for_each_column_from(m, kind, firsts[i], [&](std::span<const Letter>, std::uint32_t in, std::uint32_t out) {
            keys.push_back((static_cast<std::uint64_t>(in) << m) | out);
        });
    });
    std::vector<std::uint64_t> keys;
    for (auto& part : parts) keys.insert(keys.end(), part.begin(), part.end());
    std::sort(keys.begin(), keys.end());

    std::vector<TransferMatrix::Entry> entries;
    const std::uint64_t low_mask = BinaryWord::mask(m);
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        entries.push_back({static_cast<std::uint32_t>(keys[i] >> m), static_cast<std::uint32_t>(keys[i] & low_mask),
                           static_cast<std::uint32_t>(j - i)});
        i = j;
    }
    return {m, kind, std::move(entries)};
}

/// Recomputes one entry without enumeration. Row j's letter is fixed by
/// (v_j, w_j) up to its up/down pair: 00 -> b, 11 -> e, otherwise one of two
/// letters with down = 1 - up. Counts the up-bit assignments that chain
/// (down_j = up_{j+1}), with up_1 = down_m = 0 for linear columns and the
/// chain closed into a cycle for circular ones.
inline std::uint32_t multiplicity(BinaryWord v, BinaryWord w, Kind kind) {
    if (v.width() != w.width()) throw std::invalid_argument("multiplicity: word lengths differ");
    const int m = v.width();
    std::uint32_t count = 0;
    for (int start = 0; start <= 1; ++start) {
        if (kind == Kind::linear && start == 1) break;
        bool cur_up = start != 0;
        bool ok = true;
        for (int pos = 1; pos <= m && ok; ++pos) {
            const bool in = v.bit(pos);
            const bool out = w.bit(pos);
            bool next_down;
            if (!in && !out) {
                ok = cur_up;
                next_down = true;
            } else if (in && out) {
                ok = !cur_up;
                next_down = false;
            } else {
                next_down = !cur_up;
            }
            cur_up = next_down;
        }
        if (!ok) continue;
        const bool closes = kind == Kind::circular ? cur_up == (start != 0) : !cur_up;
        if (closes) ++count;
    }
    return count;
}

}  // namespace gridfactor
