#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "commands.hpp"
#include "partsub/io.hpp"
#include "partsub/oracle.hpp"
#include "partsub/rng.hpp"
#include "partsub/solvers.hpp"

namespace partsub::cli {

int cmd_solve(const SolveOptions& opt, std::ostream& out) {
    HardParams p = derive_params(opt.n, opt.c, ParamMode::Desk, opt.g, opt.r);
    std::optional<Variant> fixed;
    if (!opt.variant.empty()) fixed = variant_from_name(opt.variant);

    // Reference minimum per variant: the exhaustive grid scan when it fits the
    // budget, otherwise the corner scan (equal by per-coordinate concavity).
    bool fits = std::pow(static_cast<double>(p.n + 1), static_cast<double>(p.r)) <=
                static_cast<double>(opt.budget);
    std::map<Variant, std::int64_t> reference;
    for (Variant v : {Variant::F, Variant::FHAT, Variant::FHATPRIME}) {
        HypergridFunction h = as_hypergrid(p, v);
        reference[v] = fits ? grid_minimum_bruteforce(h, opt.budget).value
                            : corner_minimum(h).value;
    }

    const Variant variants[] = {Variant::F, Variant::FHAT, Variant::FHATPRIME};
    std::vector<SolverRow> rows;
    rows.reserve(static_cast<std::size_t>(opt.trials));
    std::int64_t correct = 0;
    std::int64_t max_rounds = 0;
    std::int64_t max_queries = 0;
    std::int64_t total_queries = 0;
    for (std::int64_t t = 0; t < opt.trials; ++t) {
        std::uint64_t trial_seed = derive_seed(opt.seed, static_cast<std::uint64_t>(t));
        Variant v;
        if (fixed) {
            v = *fixed;
        } else {
            Rng pick(derive_seed(trial_seed, 0x7a));
            v = variants[uniform_below(pick, 3)];
        }
        Partition hidden = sample_equipartition(p.N, p.r, derive_seed(trial_seed, 0x9a));
        OracleSession sess(p, v, std::move(hidden), trial_seed);
        SolverReport rep = sequential_minimize(sess);
        bool ok = rep.min_value == reference[v] && rep.rounds <= p.r + 2 &&
                  rep.detected_variant == v;
        correct += ok;
        max_rounds = std::max(max_rounds, rep.rounds);
        max_queries = std::max(max_queries, rep.queries);
        total_queries += rep.queries;
        rows.push_back({trial_seed, v, rep.min_value, rep.rounds, rep.queries, ok});
    }

    out << "solve: n=" << p.n << " r=" << p.r << " g=" << p.g << " c=" << p.c
        << " budget=" << p.budget() << " trials=" << opt.trials << " variant="
        << (fixed ? variant_name(*fixed) : std::string("mixed")) << '\n';
    out << "solve: correct=" << correct << "/" << opt.trials << " max_rounds=" << max_rounds
        << " (limit r+2=" << p.r + 2 << ") max_queries=" << max_queries << " avg_queries="
        << (opt.trials > 0 ? total_queries / opt.trials : 0)
        << " reference=" << (fits ? "grid" : "corner") << '\n';

    if (!opt.out.empty())
        save_solver_csv(std::filesystem::path(opt.out) / "solve.csv", rows);
    return correct == opt.trials ? 0 : 1;
}

}  // namespace partsub::cli
