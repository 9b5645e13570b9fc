// A short tour: build a transfer matrix, inspect its components, count
// 2-factors of a few glued grids, and check one count by brute force.

#include <iostream>

#include "gridfactor/counting.hpp"
#include "gridfactor/oracle.hpp"
#include "gridfactor/structure.hpp"

using namespace gridfactor;

int main() {
    const auto M = build_matrix(6, Kind::circular);
    std::cout << "circular width 6: " << M.total_mass() << " columns, " << M.nonzeros() << " nonzero entries\n";

    const auto report = verify_structure(M);
    for (const auto& c : report.components) {
        std::cout << "  component " << c.label << ": " << c.vertices.size() << " words"
                  << (c.bipartition ? ", bipartite" : "") << "\n";
    }

    for (const auto& spec : {GridSpec::make(Family::rg, 6, 20), GridSpec::make(Family::tnc, 6, 20),
                             GridSpec::make(Family::tg, 6, 20, 1), GridSpec::make(Family::kb, 6, 20, 1)}) {
        std::cout << to_string(spec.family) << " 6x20: " << count(spec).value << "\n";
    }

    const auto small = GridSpec::make(Family::kb, 4, 4, 1);
    const auto tally = census(small);
    std::cout << "kb 4x4, p=1: formula " << count(small).value << ", exhaustive " << tally.total << " (";
    for (const auto& [cycles, n] : tally.by_cycle_count) std::cout << " " << cycles << ":" << n;
    std::cout << " )\n";

    const auto cm = CodeMatrix::parse("bfdb cabb feab");
    const auto g = build_grid(GridSpec::make(Family::tg, 4, 3, 0));
    std::cout << "code matrix " << cm.str() << " is a 2-factor with " << cycle_count(g, decode(g, cm)) << " cycle(s)\n";
}
