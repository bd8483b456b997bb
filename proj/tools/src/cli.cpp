#include "partsub/cli.hpp"

#include <ostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "partsub/errors.hpp"

namespace partsub::cli {

namespace {

int kind_to_exit(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config: return 2;
        case ErrorKind::Io: return 3;
        default: return 1;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"hard-family workbench: partition submodular minimization instances,\n"
                 "adversary games, matroid intersections, and sequential solvers"};
    app.name("partsub");
    app.require_subcommand(1);

    GenOptions gen;
    std::int64_t gen_r = 0, gen_g = 0;
    auto* sg = app.add_subcommand("gen", "generate an instance: params, partition, matroids");
    sg->add_option("--n", gen.n, "part size (even)")->required();
    sg->add_option("--r", gen_r, "part count (odd, defaults to the largest feasible)");
    sg->add_option("--g", gen_g, "gap parameter (multiple of 4; required in desk mode)");
    sg->add_option("--c", gen.c, "per-round query exponent")->capture_default_str();
    sg->add_option("--mode", gen.mode, "parameter mode")->capture_default_str()
        ->check(CLI::IsMember({"desk", "asymptotic"}));
    sg->add_option("--seed", gen.seed, "master seed")->capture_default_str();
    sg->add_option("--out", gen.out, "output directory")->capture_default_str();

    VerifyOptions verify;
    auto* sv = app.add_subcommand("verify", "run invariant suites against instance files");
    sv->add_option("dir", verify.dir, "instance directory")->required();
    sv->add_option("--suite", verify.suites,
                   "suites to run (submodularity, minima, indistinguishability, ranks, "
                   "edmonds, all, none); default all");
    sv->add_option("--budget", verify.budget, "point budget before degrading to sampling")->capture_default_str();
    sv->add_option("--trials", verify.trials, "random sets per matroid in the rank suite")->capture_default_str();
    sv->add_option("--seed", verify.seed, "sampling seed")->capture_default_str();
    sv->add_option("--out", verify.out, "directory for verify_report.csv");

    GameOptions game;
    std::int64_t game_r = 0, game_g = 0;
    auto* sga = app.add_subcommand("game", "adversary resampling game with a random querier");
    sga->add_option("--n", game.n, "part size (even)")->required();
    sga->add_option("--r", game_r, "part count (odd, defaults to the largest feasible)");
    sga->add_option("--g", game_g, "gap parameter (multiple of 4; required in desk mode)");
    sga->add_option("--c", game.c, "per-round query exponent")->capture_default_str();
    sga->add_option("--mode", game.mode, "parameter mode")->capture_default_str()
        ->check(CLI::IsMember({"desk", "asymptotic"}));
    sga->add_option("--seed", game.seed, "master seed")->capture_default_str();
    sga->add_option("--trials", game.trials, "independent games")->capture_default_str();
    sga->add_option("--rounds", game.rounds, "rounds per game")->capture_default_str();
    sga->add_option("--queries-per-round", game.queries_per_round,
                    "implicit queries per round")->capture_default_str();
    sga->add_option("--out", game.out, "output directory for trials.csv and trial 0 records");

    IntersectOptions isec;
    std::int64_t isec_r = 0, isec_g = 0;
    auto* si = app.add_subcommand("intersect",
                                  "matroid intersection sizes vs the minimax identity");
    si->add_flag("--illustration", isec.illustration,
                 "build the r=3 instance inline instead of loading files");
    si->add_option("dir", isec.dir, "instance directory (omit with --illustration)");
    si->add_option("--n", isec.n, "part size (even)")->capture_default_str();
    si->add_option("--r", isec_r, "part count (odd)");
    si->add_option("--g", isec_g, "gap parameter (multiple of 4)");
    si->add_option("--seed", isec.seed, "partition seed")->capture_default_str();
    si->add_option("--budget", isec.budget, "point budget for grid cross-checks")->capture_default_str();
    si->add_option("--out", isec.out, "output directory for intersect.csv and element lists");

    SolveOptions solve;
    auto* ss = app.add_subcommand("solve", "sequential exact minimization over fresh sessions");
    ss->add_option("--n", solve.n, "part size (even)")->capture_default_str();
    ss->add_option("--r", solve.r, "part count (the solver handles r=3)")->capture_default_str();
    ss->add_option("--g", solve.g, "gap parameter (multiple of 4)")->capture_default_str();
    ss->add_option("--c", solve.c,
                   "per-round query exponent (the chain round needs ~100n queries)")->capture_default_str();
    ss->add_option("--seed", solve.seed, "master seed")->capture_default_str();
    ss->add_option("--trials", solve.trials, "instances to solve")->capture_default_str();
    ss->add_option("--variant", solve.variant, "fix the hidden variant (default: mixed)")
        ->check(CLI::IsMember({"f", "fhat", "fhatprime"}));
    ss->add_option("--budget", solve.budget, "point budget for the reference minimum")->capture_default_str();
    ss->add_option("--out", solve.out, "output directory for solve.csv");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("partsub");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sg->parsed()) {
            if (sg->count("--r")) gen.r = gen_r;
            if (sg->count("--g")) gen.g = gen_g;
            return cmd_gen(gen, out);
        }
        if (sv->parsed()) return cmd_verify(verify, out);
        if (sga->parsed()) {
            if (sga->count("--r")) game.r = game_r;
            if (sga->count("--g")) game.g = game_g;
            return cmd_game(game, out);
        }
        if (si->parsed()) {
            if (si->count("--r")) isec.r = isec_r;
            if (si->count("--g")) isec.g = isec_g;
            return cmd_intersect(isec, out);
        }
        if (ss->parsed()) return cmd_solve(solve, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kind_to_exit(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace partsub::cli
