// gridfactor -- command-line front end

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "gridfactor/cli.hpp"

namespace gc = gridfactor::cli;

int main(int argc, char** argv) {
    CLI::App app{"Transfer-matrix counting of 2-factors in grid graphs"};
    app.require_subcommand(1);

    gc::RunConfig cfg;
    std::string output;
    std::string threads = "1";
    bool no_cache = false;
    std::string cache_dir;
    app.add_option("--width-cap", cfg.width_cap, "largest column width to build")->check(CLI::PositiveNumber);
    app.add_option("--census-vertex-cap", cfg.census_vertex_cap, "largest grid the oracle will search")
        ->check(CLI::PositiveNumber);
    app.add_option("--dense-dim-cap", cfg.dense_dim_cap, "largest dimension for dense powering")
        ->check(CLI::PositiveNumber);
    app.add_option("--output", output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--threads", threads, "worker threads, or auto");
    app.add_flag("--no-cache", no_cache, "do not read or write the matrix cache");
    app.add_option("--cache-dir", cache_dir, "matrix cache directory");

    auto* matrix = app.add_subcommand("matrix", "build and serialize a transfer matrix");
    gc::MatrixArgs matrix_args;
    std::string matrix_out;
    matrix->add_option("--m", matrix_args.m)->required();
    matrix->add_option("--kind", matrix_args.kind);
    matrix->add_option("--out", matrix_out, "write to this file instead of stdout");

    auto* structure = app.add_subcommand("structure", "component report for one matrix");
    gc::StructureArgs structure_args;
    structure->add_option("--m", structure_args.m)->required();
    structure->add_option("--kind", structure_args.kind);

    auto* count = app.add_subcommand("count", "count 2-factors by the transfer-matrix formula");
    gc::CountArgs count_args;
    count->add_option("--family", count_args.family)->required();
    count->add_option("--m", count_args.m)->required();
    count->add_option("--n", count_args.n)->required();
    count->add_option("--p", count_args.p);
    count->add_option("--method", count_args.method, "auto, dense-power or matvec");
    count->add_option("--modulus", count_args.modulus, "reduce modulo Q (result is not exact)");
    count->add_flag("--timing", count_args.timing);

    auto* oracle = app.add_subcommand("oracle", "count 2-factors by exhaustive search");
    gc::OracleArgs oracle_args;
    oracle->add_option("--family", oracle_args.family)->required();
    oracle->add_option("--m", oracle_args.m)->required();
    oracle->add_option("--n", oracle_args.n)->required();
    oracle->add_option("--p", oracle_args.p);
    oracle->add_flag("--histogram", oracle_args.histogram, "tally by number of cycles");
    oracle->add_flag("--compare", oracle_args.compare, "check against the formula count");

    auto* verify = app.add_subcommand("verify", "run the invariant suite");
    gc::VerifyArgs verify_args;
    std::string verify_kind;
    std::string report_dir;
    verify->add_option("--m-max", verify_args.m_max)->required();
    verify->add_option("--kind", verify_kind);
    verify->add_option("--report-dir", report_dir);

    auto* sweep = app.add_subcommand("sweep", "count table over ranges of m and n");
    gc::SweepArgs sweep_args;
    sweep->add_option("--family", sweep_args.family)->required();
    sweep->add_option("--m-min", sweep_args.m_min);
    sweep->add_option("--m-max", sweep_args.m_max);
    sweep->add_option("--n-min", sweep_args.n_min);
    sweep->add_option("--n-max", sweep_args.n_max);
    sweep->add_option("--p", sweep_args.p);

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
        if (!output.empty()) cfg.output = gc::parse_output(output);
        if (threads == "auto") {
            cfg.threads = 0;
        } else {
            const int t = std::stoi(threads);
            if (t < 1) throw std::invalid_argument("--threads must be positive or auto");
            cfg.threads = static_cast<unsigned>(t);
        }
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : gc::kBadArguments;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return gc::kBadArguments;
    }
    cfg.use_cache = !no_cache;
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;

    if (*matrix) {
        if (!matrix_out.empty()) matrix_args.out_path = matrix_out;
        return gc::cmd_matrix(cfg, matrix_args, std::cout, std::cerr);
    }
    if (*structure) return gc::cmd_structure(cfg, structure_args, std::cout, std::cerr);
    if (*count) return gc::cmd_count(cfg, count_args, std::cout, std::cerr);
    if (*oracle) return gc::cmd_oracle(cfg, oracle_args, std::cout, std::cerr);
    if (*verify) {
        if (!verify_kind.empty()) verify_args.kind = verify_kind;
        if (!report_dir.empty()) verify_args.report_dir = report_dir;
        return gc::cmd_verify(cfg, verify_args, std::cout, std::cerr);
    }
    return gc::cmd_sweep(cfg, sweep_args, std::cout, std::cerr);
}
