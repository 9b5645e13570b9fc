// cli.hpp -- the commands behind the gridfactor tool
//
// Each command writes its result to `out`, diagnostics to `err`, and returns
// the process exit code. Argument parsing lives in tools/gridfactor.cpp.

#pragma once

#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gridfactor/alphabet.hpp"
#include "gridfactor/counting.hpp"
#include "gridfactor/errors.hpp"
#include "gridfactor/io.hpp"
#include "gridfactor/oracle.hpp"
#include "gridfactor/structure.hpp"
#include "gridfactor/transfer.hpp"

namespace gridfactor::cli {

enum ExitCode : int { kOk = 0, kVerificationFailure = 1, kResourceError = 2, kBadArguments = 3 };

enum class OutputFormat { json, csv };

inline OutputFormat parse_output(std::string_view text) {
    if (text == "json") return OutputFormat::json;
    if (text == "csv") return OutputFormat::csv;
    throw std::invalid_argument("unknown output format '" + std::string(text) + "' (expected json or csv)");
}

struct RunConfig {
    int width_cap = 14;
    int census_vertex_cap = 36;
    std::uint32_t dense_dim_cap = 1024;
    std::optional<OutputFormat> output;  // unset: the command's natural format
    unsigned threads = 1;                // 0 = one per hardware thread
    bool use_cache = true;
    std::optional<std::filesystem::path> cache_dir;

    BuildOptions build() const { return {width_cap, threads}; }
    EvalOptions eval(Method method = Method::automatic) const { return {method, threads, dense_dim_cap}; }
    CountOptions counting(Method method = Method::automatic) const { return {eval(method), width_cap, std::nullopt}; }

    std::optional<MatrixCache> cache() const {
        if (!use_cache) return std::nullopt;
        if (cache_dir) return MatrixCache(*cache_dir);
        if (auto dir = MatrixCache::default_dir()) return MatrixCache(*dir);
        return std::nullopt;
    }

    TransferMatrix matrix(int m, Kind kind) const {
        if (auto c = cache()) return c->obtain(m, kind, build());
        return build_matrix(m, kind, build());
    }
};

/// Maps library exceptions onto exit codes.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ChecksumError& ex) {
        err << "error: checksum violation: " << ex.what() << "\n";
        return kVerificationFailure;
    } catch (const ValidationError& ex) {
        err << "error: " << ex.what() << "\n";
        return kVerificationFailure;
    } catch (const ResourceError& ex) {
        err << "error: resource limit: " << ex.what() << "\n";
        return kResourceError;
    } catch (const RangeError& ex) {
        err << "error: range: " << ex.what() << "\n";
        return kResourceError;
    } catch (const std::invalid_argument& ex) {
        err << "error: " << ex.what() << "\n";
        return kBadArguments;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kResourceError;
    }
}

// ----------------------------------------------------------------------------

struct MatrixArgs {
    int m = 1;
    std::string kind = "circular";
    std::optional<std::filesystem::path> out_path;
};

inline int cmd_matrix(const RunConfig& cfg, const MatrixArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto matrix = build_matrix(args.m, parse_kind(args.kind), cfg.build());
        auto write = [&](std::ostream& os) {
            if (cfg.output == OutputFormat::csv) {
                write_matrix_csv(os, matrix);
            } else {
                write_matrix_json(os, matrix);
            }
        };
        if (args.out_path) {
            std::ofstream file(*args.out_path);
            if (!file) throw std::runtime_error("cannot write " + args.out_path->string());
            write(file);
        } else {
            write(out);
        }
        return kOk;
    });
}

// ----------------------------------------------------------------------------

struct StructureArgs {
    int m = 1;
    std::string kind = "circular";
};

inline int cmd_structure(const RunConfig& cfg, const StructureArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto report = verify_structure(cfg.matrix(args.m, parse_kind(args.kind)));
        if (cfg.output == OutputFormat::csv) {
            write_structure_csv(out, report);
        } else {
            out << structure_json(report).dump(2) << "\n";
        }
        for (const auto& v : report.violations) err << "violation: " << v << "\n";
        return report.ok() ? kOk : kVerificationFailure;
    });
}

// ----------------------------------------------------------------------------

struct CountArgs {
    std::string family;
    int m = 1;
    int n = 1;
    std::optional<int> p;
    std::string method = "auto";
    std::optional<std::uint64_t> modulus;
    bool timing = false;
};

inline int cmd_count(const RunConfig& cfg, const CountArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto spec = GridSpec::make(parse_family(args.family), args.m, args.n, args.p);
        const Method method = parse_method(args.method);
        const auto start = std::chrono::steady_clock::now();
        check_width_cap(spec.m, cfg.width_cap);
        const auto matrix = cfg.matrix(spec.m, column_kind(spec.family));
        CountOptions options = cfg.counting(method);
        options.modulus = args.modulus;
        const auto result = count(spec, matrix, options);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        if (cfg.output == OutputFormat::json) {
            auto doc = count_json(spec, result, args.modulus);
            if (args.timing) doc["seconds"] = seconds;
            out << doc.dump(2) << "\n";
        } else if (cfg.output == OutputFormat::csv) {
            out << count_csv_header() << "\n" << count_csv_row(spec, result.value) << "\n";
        } else {
            out << to_decimal(result.value);
            if (args.modulus) out << " (mod " << *args.modulus << ")";
            out << "\n";
            if (degenerate_geometry(spec)) err << "note: formula-value; no simple-graph interpretation\n";
            if (args.timing) err << "method " << to_string(result.method) << ", " << seconds << " s\n";
        }
        return kOk;
    });
}

// ----------------------------------------------------------------------------

struct OracleArgs {
    std::string family;
    int m = 1;
    int n = 1;
    std::optional<int> p;
    bool histogram = false;
    bool compare = false;
};

inline int cmd_oracle(const RunConfig& cfg, const OracleArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto spec = GridSpec::make(parse_family(args.family), args.m, args.n, args.p);
        const auto graph = build_grid(spec);
        const auto result = census(graph, {cfg.census_vertex_cap, cfg.threads});
        std::optional<Count> formula;
        if (args.compare) formula = count(spec, cfg.matrix(spec.m, column_kind(spec.family)), cfg.counting()).value;
        const bool match = !formula || *formula == result.total;

        if (cfg.output == OutputFormat::csv) {
            out << "family,m,n,p,cycles,count\n";
            const std::string prefix = std::string(to_string(spec.family)) + "," + std::to_string(spec.m) + "," +
                                       std::to_string(spec.n) + "," +
                                       (has_twist(spec.family) ? std::to_string(spec.p) : std::string()) + ",";
            if (args.histogram) {
                for (const auto& [cycles, n] : result.by_cycle_count) {
                    out << prefix << cycles << "," << to_decimal(n) << "\n";
                }
            }
            out << prefix << "total," << to_decimal(result.total) << "\n";
        } else {
            auto doc = census_json(spec, result, args.histogram);
            if (formula) {
                doc["formula_count"] = to_decimal(*formula);
                doc["match"] = match;
            }
            out << doc.dump(2) << "\n";
        }
        if (!match) {
            err << "mismatch: census " << to_decimal(result.total) << " vs formula " << to_decimal(*formula) << "\n";
            return kVerificationFailure;
        }
        return kOk;
    });
}

// ----------------------------------------------------------------------------

struct VerifyArgs {
    int m_max = 8;
    std::optional<std::string> kind;
    std::optional<std::filesystem::path> report_dir;
};

namespace detail {

inline std::uint64_t column_word_count(int m, Kind kind) {
    std::uint64_t p = 1;
    for (int i = 0; i < m; ++i) p *= 3;
    const std::uint64_t circular = m % 2 == 0 ? p + 1 : p - 1;
    return kind == Kind::circular ? circular : circular / 2;
}

/// Small grids where census and formula are compared.
inline std::vector<GridSpec> differential_specs(int m_max) {
    std::vector<GridSpec> out;
    for (int m = 2; m <= std::min(4, m_max); ++m) {
        for (int n = 1; n <= 4; ++n) out.push_back(GridSpec::make(Family::rg, m, n));
    }
    for (int m = 2; m <= std::min(3, m_max); ++m) {
        for (int n = 3; n <= 4; ++n) {
            out.push_back(GridSpec::make(Family::tkc, m, n));
            out.push_back(GridSpec::make(Family::ms, m, n));
        }
    }
    if (m_max >= 3) {
        for (int n = 3; n <= 4; ++n) out.push_back(GridSpec::make(Family::tnc, 3, n));
        for (int p = 0; p < 3; ++p) {
            out.push_back(GridSpec::make(Family::tg, 3, 3, p));
            out.push_back(GridSpec::make(Family::kb, 3, 3, p));
        }
    }
    return out;
}

}  // namespace detail

inline int cmd_verify(const RunConfig& cfg, const VerifyArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (args.m_max < 1) throw std::invalid_argument("--m-max must be at least 1");
        check_width_cap(args.m_max, cfg.width_cap);
        std::vector<Kind> kinds{Kind::linear, Kind::circular};
        if (args.kind) kinds = {parse_kind(*args.kind)};
        if (args.report_dir) std::filesystem::create_directories(*args.report_dir);

        ojson checks = ojson::array();
        ojson reports = ojson::array();
        std::vector<std::string> violations;
        auto check = [&](const std::string& name, bool passed, const std::string& detail) {
            checks.push_back({{"check", name}, {"passed", passed}, {"detail", detail}});
            if (!passed) violations.push_back(name + ": " + detail);
        };
        const auto cache = cfg.cache();

        for (int m = 1; m <= args.m_max; ++m) {
            for (Kind kind : kinds) {
                const std::string tag = std::string(to_string(kind)) + " m=" + std::to_string(m);
                const auto matrix = build_matrix(m, kind, cfg.build());

                if (cache) {
                    try {
                        // Store on first sight, then always compare what reads back.
                        if (!cache->load(m, kind)) cache->store(matrix);
                        const auto cached = cache->load(m, kind);
                        check("cache " + tag, !cached || *cached == matrix, "cached matrix equals a fresh build");
                    } catch (const ChecksumError& ex) {
                        check("cache " + tag, false, std::string("checksum violation: ") + ex.what());
                    } catch (const ValidationError& ex) {
                        check("cache " + tag, false, ex.what());
                    }
                }

                const auto expected = detail::column_word_count(m, kind);
                check("cardinality " + tag, matrix.total_mass() == expected,
                      std::to_string(matrix.total_mass()) + " columns, expected " + std::to_string(expected));

                bool symmetric = true;
                bool in_range = true;
                for (const auto& e : matrix.entries()) {
                    symmetric = symmetric && matrix.entry(e.col, e.row) == e.mult;
                    in_range = in_range && e.mult <= (kind == Kind::circular ? 2u : 1u);
                }
                check("symmetry " + tag, symmetric, "entry(v,w) = entry(w,v)");
                check("entry range " + tag, in_range, kind == Kind::circular ? "entries in {0,1,2}" : "entries in {0,1}");

                if (m <= 8) {
                    bool agree = true;
                    for (std::uint32_t v = 0; v < matrix.dim() && agree; ++v) {
                        for (std::uint32_t w = 0; w < matrix.dim(); ++w) {
                            if (multiplicity(BinaryWord(m, v), BinaryWord(m, w), kind) != matrix.entry(v, w)) {
                                agree = false;
                                break;
                            }
                        }
                    }
                    check("multiplicity " + tag, agree, "propagation recount equals enumeration");
                }

                const auto report = verify_structure(matrix);
                check("structure " + tag, report.ok(),
                      report.ok() ? "component structure as predicted" : report.violations.front());
                for (std::size_t i = 1; i < report.violations.size(); ++i) {
                    violations.push_back("structure " + tag + ": " + report.violations[i]);
                }
                auto doc = structure_json(report);
                if (args.report_dir) {
                    std::ofstream file(*args.report_dir / ("structure-" + std::string(to_string(kind)) + "-m" +
                                                          std::to_string(m) + ".json"));
                    file << doc.dump(2) << "\n";
                }
                reports.push_back(std::move(doc));
            }
        }

        ojson differentials = ojson::array();
        for (const auto& spec : detail::differential_specs(args.m_max)) {
            const auto total = census(spec, {cfg.census_vertex_cap, cfg.threads}).total;
            const auto formula = count(spec, cfg.counting()).value;
            differentials.push_back({{"spec", spec_json(spec)},
                                     {"census", to_decimal(total)},
                                     {"formula", to_decimal(formula)},
                                     {"match", total == formula}});
            if (total != formula) {
                violations.push_back("differential " + spec_json(spec).dump() + ": census " + to_decimal(total) +
                                     " vs formula " + to_decimal(formula));
            }
        }

        if (cfg.output == OutputFormat::csv) {
            out << "check,passed,detail\n";
            for (const auto& c : checks) {
                out << c["check"].get<std::string>() << "," << (c["passed"].get<bool>() ? "yes" : "no") << ",\""
                    << c["detail"].get<std::string>() << "\"\n";
            }
            for (const auto& d : differentials) {
                out << "differential " << d["spec"].dump() << "," << (d["match"].get<bool>() ? "yes" : "no")
                    << ",\"" << d["census"].get<std::string>() << "\"\n";
            }
        } else {
            ojson doc;
            doc["m_max"] = args.m_max;
            doc["ok"] = violations.empty();
            doc["checks"] = checks;
            doc["differentials"] = differentials;
            doc["reports"] = reports;
            doc["violations"] = violations;
            out << doc.dump(2) << "\n";
        }
        for (const auto& v : violations) err << "violation: " << v << "\n";
        return violations.empty() ? kOk : kVerificationFailure;
    });
}

// ----------------------------------------------------------------------------

struct SweepArgs {
    std::string family;
    int m_min = 2;
    int m_max = 4;
    int n_min = 1;
    int n_max = 6;
    std::optional<int> p;  // twisted families: every p in [0, m-1] when unset
};

inline int cmd_sweep(const RunConfig& cfg, const SweepArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const Family family = parse_family(args.family);
        if (args.p && !has_twist(family)) throw std::invalid_argument("twist p is only defined for tg and kb");
        if (args.m_min < 1 || args.m_min > args.m_max || args.n_min < 1 || args.n_min > args.n_max) {
            throw std::invalid_argument("empty or invalid sweep range");
        }
        check_width_cap(args.m_max, cfg.width_cap);
        ojson rows = ojson::array();
        if (cfg.output != OutputFormat::json) out << count_csv_header() << "\n";
        for (int m = args.m_min; m <= args.m_max; ++m) {
            const auto matrix = cfg.matrix(m, column_kind(family));
            std::vector<std::optional<int>> twists{std::nullopt};
            if (has_twist(family)) {
                twists.clear();
                if (args.p) {
                    twists.push_back(*args.p);
                } else {
                    for (int p = 0; p < m; ++p) twists.push_back(p);
                }
            }
            for (const auto& p : twists) {
                for (int n = args.n_min; n <= args.n_max; ++n) {
                    const auto spec = GridSpec::make(family, m, n, p);
                    const auto result = count(spec, matrix, cfg.counting());
                    if (cfg.output == OutputFormat::json) {
                        rows.push_back(count_json(spec, result, std::nullopt));
                    } else {
                        out << count_csv_row(spec, result.value) << "\n";
                    }
                }
            }
        }
        if (cfg.output == OutputFormat::json) out << rows.dump(2) << "\n";
        return kOk;
    });
}

}  // namespace gridfactor::cli
