// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Usage: acceptance [path-to-gridfactor-tool]

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "gridfactor/cli.hpp"
#include "support/oracles.hpp"
#include "support/run.hpp"

using namespace gridfactor;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

std::uint64_t pow3(int m) {
    std::uint64_t p = 1;
    for (int i = 0; i < m; ++i) p *= 3;
    return p;
}

bool contains(const Component& comp, std::uint32_t v) { return std::binary_search(comp.begin(), comp.end(), v); }

const Component* component_of(const std::vector<Component>& comps, std::uint32_t v) {
    for (const auto& c : comps) {
        if (contains(c, v)) return &c;
    }
    return nullptr;
}

std::string tag(int m) { return "m=" + std::to_string(m); }

// 1 -------------------------------------------------------------------------
Outcome cardinalities() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    for (int m = 1; m <= 12; ++m) {
        const std::uint64_t circular = m % 2 == 0 ? pow3(m) + 1 : pow3(m) - 1;
        for (Kind kind : {Kind::linear, Kind::circular}) {
            std::uint64_t n = 0;
            for_each_column(m, kind, [&](std::span<const Letter>, std::uint32_t, std::uint32_t) { ++n; });
            const std::uint64_t want = kind == Kind::circular ? circular : circular / 2;
            if (n != want) o.fail(tag(m) + " " + std::string(to_string(kind)) + ": " + std::to_string(n));
            if (build_matrix(m, kind).total_mass() != want) o.fail(tag(m) + " matrix mass");
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 60) o.fail("took " + std::to_string(secs) + " s");
    if (o.pass) o.detail = "m=1..12 both kinds, 3^m+(-1)^m and half";
    return o;
}

// 2 -------------------------------------------------------------------------
Outcome even_circular() {
    Outcome o;
    for (int m = 2; m <= 10; m += 2) {
        const auto M = build_matrix(m, Kind::circular);
        const auto comps = components(M);
        if (comps.size() != static_cast<std::size_t>(m / 2 + 1)) o.fail(tag(m) + " component count");
        if (!isolated_vertices(M).empty()) o.fail(tag(m) + " isolated vertices");
        const auto* a = component_of(comps, 0);
        if (a == nullptr || !contains(*a, BinaryWord::ones(m).index())) o.fail(tag(m) + " 0^m, 1^m not together");
        for (const auto& comp : comps) {
            const int s = std::abs(oracle_ref::zval(comp.front(), m));
            for (std::uint32_t v : comp) {
                if (std::abs(oracle_ref::zval(v, m)) != s) o.fail(tag(m) + " mixed |Z| in a component");
            }
            const std::uint64_t want = s == 0 ? oracle_ref::binom(m, m / 2) : 2 * oracle_ref::binom(m, m / 2 - s);
            if (comp.size() != want) o.fail(tag(m) + " size of s=" + std::to_string(s));
            if (s == 0) continue;
            const auto parts = bipartition(comp, M);
            if (!parts) {
                o.fail(tag(m) + " B(" + std::to_string(s) + ") not bipartite");
                continue;
            }
            for (std::uint32_t v : parts->red) {
                if (oracle_ref::zval(v, m) <= 0) o.fail(tag(m) + " red vertex with Z<=0");
                const auto b = bar_binary(BinaryWord(m, v)).index();
                if (std::find(parts->green.begin(), parts->green.end(), b) == parts->green.end()) {
                    o.fail(tag(m) + " v and its reversal in the same class");
                }
            }
            for (std::uint32_t v : parts->green) {
                if (oracle_ref::zval(v, m) >= 0) o.fail(tag(m) + " green vertex with Z>=0");
            }
            // every arc crosses between the classes
            for (std::uint32_t v : comp) {
                const bool red = oracle_ref::zval(v, m) > 0;
                for (std::uint32_t w : M.row_cols(v)) {
                    if ((oracle_ref::zval(w, m) > 0) == red) o.fail(tag(m) + " arc inside a colour class");
                }
            }
        }
    }
    if (o.pass) o.detail = "m=2,4,6,8,10: m/2+1 components, binomial sizes, Z-sign bipartitions";
    return o;
}

// 3 -------------------------------------------------------------------------
Outcome odd_circular() {
    Outcome o;
    for (int m = 1; m <= 11; m += 2) {
        const auto M = build_matrix(m, Kind::circular);
        const auto comps = components(M);
        if (comps.size() != 2) {
            o.fail(tag(m) + " component count " + std::to_string(comps.size()));
            continue;
        }
        for (const auto& comp : comps) {
            if (comp.size() != (std::size_t{1} << (m - 1))) o.fail(tag(m) + " component size");
            const int parity = std::abs(oracle_ref::zval(comp.front(), m)) % 2;
            for (std::uint32_t v : comp) {
                if (std::abs(oracle_ref::zval(v, m)) % 2 != parity) o.fail(tag(m) + " mixed Z parity");
            }
        }
        const auto* ones = component_of(comps, BinaryWord::ones(m).index());
        const auto* zeros = component_of(comps, 0);
        if (ones == nullptr || zeros == nullptr || ones == zeros) o.fail(tag(m) + " anchors");
        for (const auto& e : M.entries()) {
            const auto v = complement(BinaryWord(m, e.row));
            const auto w = complement(BinaryWord(m, e.col));
            if (M.entry(v, w) != e.mult) o.fail(tag(m) + " complement does not preserve multiplicity");
        }
        if (ones != nullptr && zeros != nullptr) {
            for (std::uint32_t v : *ones) {
                if (!contains(*zeros, complement(BinaryWord(m, v)).index())) o.fail(tag(m) + " complement image");
            }
        }
        if (!complement_isomorphism(M).ok) o.fail(tag(m) + " library witness rejected");
    }
    if (o.pass) o.detail = "m=1..11 odd: two components of 2^(m-1), Z parity, complement isomorphism";
    return o;
}

// 4 -------------------------------------------------------------------------
Outcome linear_structure() {
    Outcome o;
    for (int m = 2; m <= 10; ++m) {
        const auto M = build_matrix(m, Kind::linear);
        const auto comps = components(M);
        if (comps.size() != static_cast<std::size_t>(m / 2 + 1)) o.fail(tag(m) + " component count");
        std::vector<std::uint32_t> want_isolated;
        if (m % 2 == 1) {
            std::string w = "0";
            for (int k = 0; k < m / 2; ++k) w += "10";
            want_isolated.push_back(BinaryWord::parse(w).index());
        }
        if (isolated_vertices(M) != want_isolated) o.fail(tag(m) + " isolated set");
        for (const auto& comp : comps) {
            const int s = std::abs(oracle_ref::zval(comp.front(), m));
            std::uint64_t want = 0;
            if (m % 2 == 0) {
                want = s == 0 ? oracle_ref::binom(m, m / 2) : 2 * oracle_ref::binom(m, m / 2 - s);
            } else {
                want = s == 0 ? oracle_ref::binom(m, (m - 1) / 2) : oracle_ref::binom(m + 1, (m + 1) / 2 - s);
            }
            if (comp.size() != want) o.fail(tag(m) + " size of s=" + std::to_string(s));
            for (std::uint32_t v : comp) {
                if (std::abs(oracle_ref::zval(v, m)) != s) o.fail(tag(m) + " mixed |Z|");
                if (!contains(comp, bar_binary(BinaryWord(m, v)).index())) o.fail(tag(m) + " v, reversal split");
            }
        }
    }
    if (o.pass) o.detail = "m=2..10: floor(m/2)+1 components, binomial sizes, 0(10)^k isolated";
    return o;
}

// 5 -------------------------------------------------------------------------
Outcome matrix_algebra() {
    Outcome o;
    for (int m = 1; m <= 10; ++m) {
        for (Kind kind : {Kind::linear, Kind::circular}) {
            const auto M = build_matrix(m, kind);
            const std::string t = tag(m) + " " + std::string(to_string(kind));
            for (const auto& e : M.entries()) {
                if (M.entry(e.col, e.row) != e.mult) o.fail(t + " asymmetric");
                if (e.mult > (kind == Kind::circular ? 2u : 1u)) o.fail(t + " entry out of range");
            }
            for (const auto& comp : components(M)) {
                if (!strongly_connected(M, comp)) o.fail(t + " component not strongly connected");
            }
            if (m <= 8) {
                for (std::uint32_t v = 0; v < M.dim(); ++v) {
                    for (std::uint32_t w = 0; w < M.dim(); ++w) {
                        if (multiplicity(BinaryWord(m, v), BinaryWord(m, w), kind) != M.entry(v, w)) {
                            o.fail(t + " propagation differs at " + BinaryWord(m, v).str() + "," +
                                   BinaryWord(m, w).str());
                        }
                    }
                }
            }
            if (m <= 6) {
                const auto ref = oracle_ref::brute_matrix(m, kind == Kind::circular);
                if (ref.size() != M.nonzeros()) o.fail(t + " brute-force support differs");
                for (const auto& [key, mult] : ref) {
                    if (M.entry(key.first, key.second) != mult) o.fail(t + " brute-force entry differs");
                }
            }
        }
    }
    if (o.pass) o.detail = "m<=10: symmetric, entries bounded, strongly connected; propagation = enumeration for m<=8";
    return o;
}

// 6 -------------------------------------------------------------------------
Outcome differential() {
    Outcome o;
    std::vector<GridSpec> specs;
    for (int m = 2; m <= 5; ++m) {
        for (int n = 1; n <= 5; ++n) specs.push_back(GridSpec::make(Family::rg, m, n));
    }
    for (int m = 2; m <= 4; ++m) {
        for (int n = 3; n <= 4; ++n) {
            specs.push_back(GridSpec::make(Family::tkc, m, n));
            specs.push_back(GridSpec::make(Family::ms, m, n));
        }
    }
    for (int m = 3; m <= 5; ++m) {
        for (int n = 3; n <= 4; ++n) specs.push_back(GridSpec::make(Family::tnc, m, n));
    }
    for (int m = 3; m <= 4; ++m) {
        for (int p = 0; p < m; ++p) {
            for (int n = 3; n <= 4; ++n) {
                specs.push_back(GridSpec::make(Family::tg, m, n, p));
                specs.push_back(GridSpec::make(Family::kb, m, n, p));
            }
        }
    }
    for (const auto& spec : specs) {
        const Count formula = count(spec).value;
        const Count total = census(spec).total;
        const std::string t = std::string(to_string(spec.family)) + " m=" + std::to_string(spec.m) +
                              " n=" + std::to_string(spec.n) + " p=" + std::to_string(spec.p);
        if (formula != total) o.fail(t + ": formula " + formula.get_str() + " vs census " + total.get_str());
        if (spec.m * spec.n <= 16) {
            const auto ref = oracle_ref::two_factor_total(
                oracle_ref::grid(std::string(to_string(spec.family)), spec.m, spec.n, spec.p));
            if (Count(std::to_string(ref)) != total) o.fail(t + ": reference search " + std::to_string(ref));
        }
    }
    if (o.pass) o.detail = std::to_string(specs.size()) + " grids: formula = census";
    return o;
}

// 7 -------------------------------------------------------------------------
Outcome fixtures() {
    Outcome o;
    const auto kb_spec = GridSpec::make(Family::kb, 4, 3, 1);
    const auto tg_spec = GridSpec::make(Family::tg, 4, 3, 0);
    const auto kb = CodeMatrix::parse("bfdb cabb dfac");
    const auto tg = CodeMatrix::parse("bfdb cabb feab");
    if (!validate(kb_spec, kb).ok) o.fail("KB sample rejected: " + validate(kb_spec, kb).detail);
    if (!validate(tg_spec, tg).ok) o.fail("TG sample rejected: " + validate(tg_spec, tg).detail);
    try {
        const auto kb_graph = build_grid(kb_spec);
        if (cycle_count(kb_graph, decode(kb_graph, kb)) != 2) o.fail("KB sample is not a 2-cycle 2-factor");
        const auto tg_graph = build_grid(tg_spec);
        if (cycle_count(tg_graph, decode(tg_graph, tg)) != 1) o.fail("TG sample is not a Hamiltonian cycle");
    } catch (const std::exception& ex) {
        o.fail(std::string("decode: ") + ex.what());
    }
    auto out_of = [](const char* w) { return outlet(AlphaWord::parse(w, Kind::circular)).str(); };
    auto in_of = [](const char* w) { return inlet(AlphaWord::parse(w, Kind::circular)).str(); };
    if (out_of("bfdb") != "0000" || out_of("cabb") != "1100" || out_of("dfac") != "0011" || out_of("feab") != "0110") {
        o.fail("outlet walk differs");
    }
    if (in_of("cabb") != out_of("bfdb") || in_of("dfac") != out_of("cabb") || in_of("feab") != out_of("cabb")) {
        o.fail("consecutive columns do not chain");
    }
    // closing the walks back onto the first column
    if (bar_binary(rho(BinaryWord::parse(out_of("dfac")), 1)).str() != in_of("bfdb")) o.fail("KB closure");
    if (rho(BinaryWord::parse(out_of("feab")), 0).str() != in_of("bfdb")) o.fail("TG closure");
    if (o.pass) o.detail = "both sample matrices validate; 2 cycles / Hamiltonian; walk 0000 -> 1100 -> 0011 | 0110";
    return o;
}

// 8 -------------------------------------------------------------------------
Outcome connecting_columns() {
    Outcome o;
    int checked = 0;
    for (int m = 3; m <= 11; m += 2) {
        const auto M = build_matrix(m, Kind::circular);
        for (int s = 0; s <= m / 2 - 1; ++s) {
            const auto w = connecting_column(m, s);
            const std::string t = tag(m) + " s=" + std::to_string(s);
            if (!oracle_ref::column_ok(w.str(), true)) o.fail(t + " not a circular column");
            // L^(s) = (10)^(s+1) 0^(m-2s-2), Q^(s+2) = (01)^(s+1) 0^(m-2s-2)
            std::string lady;
            std::string queen_text;
            for (int k = 0; k <= s; ++k) lady += "10", queen_text += "01";
            lady += std::string(static_cast<std::size_t>(m - 2 * s - 2), '0');
            queen_text += std::string(static_cast<std::size_t>(m - 2 * s - 2), '0');
            if (inlet(w).str() != lady) o.fail(t + " inlet " + inlet(w).str());
            if (outlet(w).str() != queen_text) o.fail(t + " outlet " + outlet(w).str());
            if (M.entry(inlet(w), outlet(w)) == 0) o.fail(t + " no arc");
            ++checked;
        }
    }
    if (o.pass) o.detail = std::to_string(checked) + " (m,s) pairs, odd m=3..11";
    return o;
}

// 9 -------------------------------------------------------------------------
Outcome determinism(const std::string& tool) {
    Outcome o;
    const auto dir = fs::temp_directory_path() / ("gridfactor-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    const std::vector<std::string> commands{
        "matrix --m 7 --kind circular",
        "--output csv matrix --m 6 --kind linear",
        "structure --m 6 --kind circular",
        "--output csv structure --m 7 --kind linear",
        "count --family kb --m 5 --n 40 --p 2",
        "--output json count --family tg --m 4 --n 12 --p 1",
        "--output json oracle --family kb --m 4 --n 4 --p 1 --histogram",
        "--output csv oracle --family tnc --m 4 --n 4 --histogram",
        "verify --m-max 5",
        "sweep --family ms --m-min 2 --m-max 4 --n-min 1 --n-max 6",
        "--output json sweep --family kb --m-min 3 --m-max 3 --n-min 3 --n-max 4",
    };
    int runs = 0;
    for (const auto& command : commands) {
        std::vector<std::string> outputs;
        for (const char* threads : {"1", "1", "4", "auto"}) {
            const std::string cache = (dir / (std::string("cache-") + (outputs.empty() ? "a" : "b"))).string();
            std::string out;
            int rc = 0;
            if (!tool.empty()) {
                const auto r = run_tool::run(tool, std::string("--threads ") + threads + " --cache-dir '" + cache +
                                                       "' " + command + " 2>/dev/null");
                out = r.out;
                rc = r.exit_code;
            } else {
                o.fail("no tool path given");
                return o;
            }
            if (rc != 0) o.fail("'" + command + "' exited " + std::to_string(rc));
            outputs.push_back(out);
            ++runs;
        }
        for (const auto& out : outputs) {
            if (out != outputs.front()) o.fail("'" + command + "' output differs between runs");
        }
        if (outputs.front().empty()) o.fail("'" + command + "' printed nothing");
    }
    fs::remove_all(dir);
    if (o.pass) o.detail = std::to_string(runs) + " runs of " + std::to_string(commands.size()) +
                           " commands, threads 1/1/4/auto, cold and warm cache";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string tool = argc > 1 ? argv[1] : run_tool::tool_from_env();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"cardinalities", cardinalities},
        {"even circular structure", even_circular},
        {"odd circular structure", odd_circular},
        {"linear structure", linear_structure},
        {"matrix invariants", matrix_algebra},
        {"differential counting", differential},
        {"sample code matrices", fixtures},
        {"connecting columns", connecting_columns},
        {"determinism", [&] { return determinism(tool); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& ex) {
            o.fail(std::string("exception: ") + ex.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (!o.pass) ++failed;
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(2);
        line << (o.pass ? "PASS" : "FAIL") << "  criterion " << (i + 1) << " (" << criteria[i].first << "): " << o.detail
             << " [" << secs << " s]";
        std::cout << line.str() << std::endl;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
    return failed == 0 ? 0 : 1;
}
