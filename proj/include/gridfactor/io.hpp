// io.hpp -- JSON/CSV serialization and the on-disk matrix cache
//
// Every writer here is deterministic: fixed key order, sorted entries, no
// timestamps. Counts are written as decimal strings.

#pragma once

#include <zlib.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gridfactor/alphabet.hpp"
#include "gridfactor/counting.hpp"
#include "gridfactor/errors.hpp"
#include "gridfactor/oracle.hpp"
#include "gridfactor/structure.hpp"
#include "gridfactor/transfer.hpp"

namespace gridfactor {

using ojson = nlohmann::ordered_json;

inline constexpr int kMatrixFormatVersion = 1;
inline constexpr std::string_view kIndexOrder = "msb-first-position-1";

// ============================================================================
// Transfer matrices
// ============================================================================

/// CRC-32 of the canonical entry listing.
inline std::string matrix_checksum(const TransferMatrix& matrix) {
    std::string canon = std::to_string(matrix.width()) + " " + std::string(to_string(matrix.kind())) + "\n";
    for (const auto& e : matrix.entries()) {
        canon += BinaryWord(matrix.width(), e.row).str() + " " + BinaryWord(matrix.width(), e.col).str() + " " +
                 std::to_string(e.mult) + "\n";
    }
    const uLong crc = crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(canon.data()),
                            static_cast<uInt>(canon.size()));
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
    return std::string("crc32:") + buf;
}

/// One entry per line so large matrices stay diffable.
inline void write_matrix_json(std::ostream& out, const TransferMatrix& matrix) {
    const int m = matrix.width();
    out << "{\n"
        << "  \"m\": " << m << ",\n"
        << "  \"kind\": \"" << to_string(matrix.kind()) << "\",\n"
        << "  \"order\": \"" << kIndexOrder << "\",\n"
        << "  \"format_version\": " << kMatrixFormatVersion << ",\n"
        << "  \"letter_table_version\": " << kLetterTableVersion << ",\n"
        << "  \"entries\": [";
    bool first = true;
    for (const auto& e : matrix.entries()) {
        out << (first ? "\n" : ",\n") << "    [\"" << BinaryWord(m, e.row).str() << "\", \""
            << BinaryWord(m, e.col).str() << "\", " << e.mult << "]";
        first = false;
    }
    out << (first ? "],\n" : "\n  ],\n") << "  \"checksum\": \"" << matrix_checksum(matrix) << "\"\n}\n";
}

inline void write_matrix_csv(std::ostream& out, const TransferMatrix& matrix) {
    out << "v,w,mult\n";
    for (const auto& e : matrix.entries()) {
        out << BinaryWord(matrix.width(), e.row).str() << "," << BinaryWord(matrix.width(), e.col).str() << ","
            << e.mult << "\n";
    }
}

/// Parses and checks the JSON form. A checksum mismatch raises ChecksumError;
/// other structural problems ValidationError.
inline TransferMatrix read_matrix_json(std::istream& in) {
    ojson doc;
    try {
        doc = ojson::parse(in);
        const int m = doc.at("m").get<int>();
        const Kind kind = parse_kind(doc.at("kind").get<std::string>());
        if (doc.at("order").get<std::string>() != kIndexOrder) throw ValidationError("unsupported index order");
        if (doc.at("format_version").get<int>() != kMatrixFormatVersion ||
            doc.at("letter_table_version").get<int>() != kLetterTableVersion) {
            throw ValidationError("matrix file was written by an incompatible version");
        }
        std::vector<TransferMatrix::Entry> entries;
        for (const auto& item : doc.at("entries")) {
            const auto v = BinaryWord::parse(item.at(0).get<std::string>());
            const auto w = BinaryWord::parse(item.at(1).get<std::string>());
            if (v.width() != m || w.width() != m) throw ValidationError("entry word width differs from m");
            entries.push_back({v.index(), w.index(), item.at(2).get<std::uint32_t>()});
        }
        TransferMatrix matrix(m, kind, std::move(entries));
        const std::string stored = doc.at("checksum").get<std::string>();
        if (stored != matrix_checksum(matrix)) {
            throw ChecksumError("checksum mismatch: file says " + stored + ", contents hash to " +
                                matrix_checksum(matrix));
        }
        return matrix;
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception& ex) {
        throw ValidationError(std::string("malformed matrix file: ") + ex.what());
    }
}

// ============================================================================
// Specs, counts, censuses, structure reports
// ============================================================================

inline std::string to_decimal(const Count& c) { return c.get_str(10); }

inline ojson spec_json(const GridSpec& spec) {
    ojson out;
    out["family"] = to_string(spec.family);
    out["m"] = spec.m;
    out["n"] = spec.n;
    if (has_twist(spec.family)) out["p"] = spec.p;
    return out;
}

inline ojson count_json(const GridSpec& spec, const CountResult& result, std::optional<std::uint64_t> modulus) {
    ojson out;
    out["spec"] = spec_json(spec);
    out["count"] = to_decimal(result.value);
    out["method"] = to_string(result.method);
    if (modulus) {
        out["exact"] = false;
        out["modulus"] = std::to_string(*modulus);
    }
    if (degenerate_geometry(spec)) out["note"] = "formula-value; no simple-graph interpretation";
    return out;
}

inline std::string count_csv_header() { return "family,m,n,p,count"; }

inline std::string count_csv_row(const GridSpec& spec, const Count& value) {
    return std::string(to_string(spec.family)) + "," + std::to_string(spec.m) + "," + std::to_string(spec.n) + "," +
           (has_twist(spec.family) ? std::to_string(spec.p) : std::string()) + "," + to_decimal(value);
}

inline ojson census_json(const GridSpec& spec, const Census& c, bool histogram) {
    ojson out;
    out["spec"] = spec_json(spec);
    out["total"] = to_decimal(c.total);
    if (histogram) {
        ojson hist = ojson::object();
        for (const auto& [cycles, n] : c.by_cycle_count) hist[std::to_string(cycles)] = to_decimal(n);
        out["by_cycle_count"] = hist;
    }
    return out;
}

inline ojson words_json(const std::vector<std::uint32_t>& xs, int m) {
    ojson out = ojson::array();
    for (std::uint32_t x : xs) out.push_back(BinaryWord(m, x).str());
    return out;
}

inline ojson structure_json(const StructureReport& report) {
    ojson out;
    out["m"] = report.m;
    out["kind"] = to_string(report.kind);
    ojson comps = ojson::array();
    for (const auto& c : report.components) {
        ojson item;
        item["s_label"] = c.label;
        item["size"] = c.vertices.size();
        ojson contains = ojson::array();
        if (c.contains_zeros) contains.push_back(BinaryWord::zeros(report.m).str());
        if (c.contains_ones) contains.push_back(BinaryWord::ones(report.m).str());
        item["contains"] = contains;
        item["strongly_connected"] = c.strongly_connected;
        ojson vertices = ojson::array();
        for (const auto& v : c.vertices) vertices.push_back(v.str());
        item["vertices"] = vertices;
        if (c.bipartition) {
            item["bipartition"] = {{"red", words_json(c.bipartition->red, report.m)},
                                   {"green", words_json(c.bipartition->green, report.m)}};
        } else {
            item["bipartition"] = nullptr;
        }
        comps.push_back(item);
    }
    out["components"] = comps;
    ojson isolated = ojson::array();
    for (const auto& v : report.isolated) isolated.push_back(v.str());
    out["isolated"] = isolated;
    if (report.isomorphism && report.isomorphism->ok) {
        ojson witness = ojson::object();
        for (const auto& [v, w] : report.isomorphism->mapping) witness[v.str()] = w.str();
        out["isomorphism_witness"] = witness;
    }
    out["violations"] = report.violations;
    return out;
}

inline void write_structure_csv(std::ostream& out, const StructureReport& report) {
    out << "m,kind,s_label,size,strongly_connected,bipartite\n";
    for (const auto& c : report.components) {
        out << report.m << "," << to_string(report.kind) << "," << c.label << "," << c.vertices.size() << ","
            << (c.strongly_connected ? "yes" : "no") << "," << (c.bipartition ? "yes" : "no") << "\n";
    }
}

// ============================================================================
// Matrix cache
// ============================================================================

/// Matrices on disk, keyed by width, kind, file format and letter table.
class MatrixCache {
public:
    explicit MatrixCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    /// $GRIDFACTOR_CACHE_DIR, else $XDG_CACHE_HOME/gridfactor, else
    /// ~/.cache/gridfactor.
    static std::optional<std::filesystem::path> default_dir() {
        if (const char* env = std::getenv("GRIDFACTOR_CACHE_DIR"); env && *env) return std::filesystem::path(env);
        if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
            return std::filesystem::path(xdg) / "gridfactor";
        }
        if (const char* home = std::getenv("HOME"); home && *home) {
            return std::filesystem::path(home) / ".cache" / "gridfactor";
        }
        return std::nullopt;
    }

    const std::filesystem::path& dir() const noexcept { return dir_; }

    std::filesystem::path path_for(int m, Kind kind) const {
        return dir_ / ("transfer-" + std::string(to_string(kind)) + "-m" + std::to_string(m) + "-f" +
                       std::to_string(kMatrixFormatVersion) + "-l" + std::to_string(kLetterTableVersion) + ".json");
    }

    /// Empty when no file exists; throws ChecksumError/ValidationError on a
    /// damaged one.
    std::optional<TransferMatrix> load(int m, Kind kind) const {
        const auto path = path_for(m, kind);
        std::ifstream in(path);
        if (!in) return std::nullopt;
        try {
            auto matrix = read_matrix_json(in);
            if (matrix.width() != m || matrix.kind() != kind) {
                throw ValidationError("cached file holds a different matrix");
            }
            return matrix;
        } catch (const ChecksumError& ex) {
            throw ChecksumError(path.string() + ": " + ex.what());
        } catch (const ValidationError& ex) {
            throw ValidationError(path.string() + ": " + ex.what());
        }
    }

    /// Best effort: false if the directory is not writable.
    bool store(const TransferMatrix& matrix) const {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        const auto path = path_for(matrix.width(), matrix.kind());
        const auto tmp = std::filesystem::path(path.string() + ".tmp");
        {
            std::ofstream out(tmp);
            if (!out) return false;
            write_matrix_json(out, matrix);
            if (!out) return false;
        }
        std::filesystem::rename(tmp, path, ec);
        return !ec;
    }

    TransferMatrix obtain(int m, Kind kind, const BuildOptions& options) const {
        check_width_cap(m, options.width_cap);
        if (auto cached = load(m, kind)) return std::move(*cached);
        auto matrix = build_matrix(m, kind, options);
        store(matrix);
        return matrix;
    }

private:
    std::filesystem::path dir_;
};

}  // namespace gridfactor
