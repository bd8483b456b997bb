#include <ostream>
#include <sstream>

#include "commands.hpp"
#include "partsub/io.hpp"
#include "partsub/oracle.hpp"
#include "partsub/rng.hpp"
#include "partsub/solvers.hpp"

namespace partsub::cli {

int cmd_game(const GameOptions& opt, std::ostream& out) {
    HardParams p = derive_params(opt.n, opt.c, mode_from_flag(opt.mode), opt.g, opt.r);
    const std::int64_t query_size = p.N / 2;

    std::ostringstream csv;
    csv << "trial,seed,failure_round,failure_query,transcripts_identical\n";
    std::int64_t failures = 0;
    std::int64_t divergences = 0;
    std::optional<GameRecord> first_record;
    for (std::int64_t t = 0; t < opt.trials; ++t) {
        std::uint64_t trial_seed = derive_seed(opt.seed, static_cast<std::uint64_t>(t));
        auto alg = random_querier(p, opt.queries_per_round, query_size, /*implicit=*/true,
                                  derive_seed(trial_seed, 0x51));
        GameRecord rec = adversary_game(*alg, p, opt.rounds, trial_seed);
        if (rec.failure_round) ++failures;
        if (!rec.transcripts_identical) ++divergences;
        csv << t << ',' << trial_seed << ','
            << (rec.failure_round ? std::to_string(*rec.failure_round) : std::string()) << ','
            << (rec.failure_query ? std::to_string(*rec.failure_query) : std::string()) << ','
            << (rec.transcripts_identical ? "true" : "false") << '\n';
        if (t == 0) first_record = std::move(rec);
    }

    bool ok = 20 * failures <= opt.trials && 20 * divergences <= opt.trials;
    out << "game: n=" << p.n << " r=" << p.r << " g=" << p.g << " N=" << p.N
        << " rounds=" << opt.rounds << " queries_per_round=" << opt.queries_per_round
        << " query_size=" << query_size << " trials=" << opt.trials << '\n';
    out << "game: failures=" << failures << "/" << opt.trials << " ("
        << percent(failures, opt.trials) << ") divergences=" << divergences << "/" << opt.trials
        << " (" << percent(divergences, opt.trials) << ") threshold=5.0% -> "
        << (ok ? "PASS" : "FAIL") << '\n';

    if (!opt.out.empty()) {
        std::filesystem::path dir(opt.out);
        atomic_write_text(dir / "trials.csv", std::move(csv).str());
        if (first_record) {
            save_game_csv(dir / "trial0_transcript.csv", *first_record);
            save_game_record(dir / "trial0_record.json", *first_record);
        }
    }
    return ok ? 0 : 1;
}

}  // namespace partsub::cli
