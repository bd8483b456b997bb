// Acceptance gate: one check per shipped guarantee, one PASS/FAIL line each.
// Exit status is the number of failing checks. Run via ctest or directly.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "partsub/cli.hpp"
#include "partsub/hardfamily.hpp"
#include "partsub/io.hpp"
#include "partsub/matroids.hpp"
#include "partsub/oracle.hpp"
#include "partsub/rng.hpp"
#include "partsub/solvers.hpp"

using namespace partsub;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string sig_str(const Signature& x) {
    std::string s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(x[i]);
    }
    return "(" + s + ")";
}

// 1. All three value functions are exactly submodular across small grids,
//    including parameters without the 5gr <= n headroom.
Outcome check_submodularity() {
    Outcome out;
    std::int64_t combos = 0, checked = 0;
    for (std::int64_t n = 6; n <= 12; n += 2) {
        for (std::int64_t r = 3; r <= 5; r += 2) {
            for (std::int64_t g = 4; g <= 8; ++g) {
                if ((g * r) % 4 != 0) continue;  // offset gr/4 must be integral
                HardParams p = hard_params_raw(n, r, g);
                ++combos;
                for (Variant v :
                     {Variant::F, Variant::FHAT, Variant::FHATPRIME}) {
                    auto rep = submodularity_check(as_hypergrid(p, v),
                                                   100'000'000);
                    checked += rep.checked;
                    if (rep.sampled)
                        out.fail("sampled instead of exhaustive at n=" +
                                 std::to_string(n));
                    if (!rep.ok)
                        out.fail("violation at n=" + std::to_string(n) +
                                 " r=" + std::to_string(r) +
                                 " g=" + std::to_string(g) + " variant=" +
                                 variant_name(v) + ": " +
                                 rep.counterexample->to_string());
                }
            }
        }
    }
    out.note(std::to_string(combos) + " parameter sets, " +
             std::to_string(checked) + " marginal pairs");
    return out;
}

// 2. Desk-scale exact minimizers by full-grid brute force.
Outcome check_minimizers() {
    Outcome out;
    HardParams p = derive_params(60, 1.0, ParamMode::Desk, 4);

    auto h = grid_minimum_bruteforce(as_hypergrid(p, Variant::F));
    if (h.value != 0 || h.argmin != Signature{0, 0, 0})
        out.fail("base minimum " + std::to_string(h.value) + " at " +
                 sig_str(h.argmin) + ", want 0 at (0,0,0)");
    for (int mask = 1; mask < 8; ++mask) {
        Signature corner(3, 0);
        for (int i = 0; i < 3; ++i)
            if (mask >> i & 1) corner[static_cast<std::size_t>(i)] = p.n;
        if (h_value(p, corner) == 0)
            out.fail("zero re-attained at corner " + sig_str(corner));
    }

    auto hh = grid_minimum_bruteforce(as_hypergrid(p, Variant::FHAT));
    if (hh.value != -p.g / 2 || hh.argmin != Signature{0, 0, 60})
        out.fail("last-coordinate truncation minimum " +
                 std::to_string(hh.value) + " at " + sig_str(hh.argmin) +
                 ", want -2 at (0,0,60)");

    auto hp = grid_minimum_bruteforce(as_hypergrid(p, Variant::FHATPRIME));
    const std::int64_t tail_corner =
        hhatprime_value(p, Signature{0, p.n, p.n});
    if (6 * tail_corner > -p.g * p.r)
        out.fail("tail corner " + std::to_string(tail_corner) +
                 " above -gr/6");
    // golden full-grid minimum, frozen from the brute-force oracle
    if (hp.value != -7 || hp.argmin != Signature{0, 60, 60})
        out.fail("all-truncated minimum " + std::to_string(hp.value) + " at " +
                 sig_str(hp.argmin) + ", want golden -7 at (0,60,60)");
    out.note("h_min=0@(0,0,0) hhat_min=-2@(0,0,60) hhatprime_min=-7@(0,60,60)");
    return out;
}

// 3. Closed-form marginals equal finite differences at every desk grid point.
Outcome check_marginals() {
    Outcome out;
    HardParams p = derive_params(60, 1.0, ParamMode::Desk, 4);
    std::int64_t checked = 0;
    for (Variant v : {Variant::F, Variant::FHAT, Variant::FHATPRIME}) {
        HypergridFunction h = as_hypergrid(p, v);
        Signature x(3, 0);
        for (x[0] = 0; x[0] <= 60 && out.pass; ++x[0])
            for (x[1] = 0; x[1] <= 60 && out.pass; ++x[1])
                for (x[2] = 0; x[2] <= 60 && out.pass; ++x[2])
                    for (std::int64_t i = 1; i <= 3; ++i) {
                        if (x[static_cast<std::size_t>(i - 1)] == 60) continue;
                        ++checked;
                        if (marginal_closed_form(p, x, i, v) !=
                            marginal_fd(h, x, i - 1)) {
                            out.fail("mismatch at " + sig_str(x) + " i=" +
                                     std::to_string(i) + " variant=" +
                                     variant_name(v));
                            break;
                        }
                    }
    }
    out.note(std::to_string(checked) + " marginals");
    return out;
}

// 4. Suffix indistinguishability: exhaustive at desk scale, sampled at depth.
Outcome check_indistinguishability() {
    Outcome out;
    HardParams desk = derive_params(60, 1.0, ParamMode::Desk, 4);
    auto exact = suffix_indistinguishability_check(desk, 1);
    if (!exact.ok)
        out.fail("desk: " + exact.counterexample.value_or("violated"));
    if (exact.sampled) out.fail("desk grid unexpectedly sampled");
    out.note("desk classes=" + std::to_string(exact.classes));

    HardParams deep = hard_params_raw(10'000, 9, 40);
    if (!deep.structural_ok()) out.fail("deep parameters lost 5gr <= n");
    for (std::int64_t i = 1; 2 * i < deep.r; ++i) {
        auto rep = suffix_indistinguishability_check(
            deep, i, 10'000'000, 1'000'000, derive_seed(42, static_cast<std::uint64_t>(i)));
        if (!rep.ok)
            out.fail("deep i=" + std::to_string(i) + ": " +
                     rep.counterexample.value_or("violated"));
        if (!rep.sampled || rep.checked != 1'000'000)
            out.fail("deep i=" + std::to_string(i) + " did not sample 10^6 pairs");
    }
    out.note("sampled 10^6 pairs per prefix depth at n=10^4 r=9 g=40");
    return out;
}

// 5. Nested-matroid rank closed form vs the greedy independence oracle,
//    plus both dual identities.
Outcome check_ranks() {
    Outcome out;
    Rng rng(20'240'601);
    std::int64_t checked = 0;

    for (int t = 0; t < 50 && out.pass; ++t) {
        const std::int64_t universe =
            8 + static_cast<std::int64_t>(uniform_below(rng, 9));  // 8..16
        const std::int64_t k = 1 + static_cast<std::int64_t>(uniform_below(rng, 4));
        NestedMatroid m;
        m.partition.universe_size = universe;
        m.partition.part_of.assign(static_cast<std::size_t>(universe), 0);
        m.partition.part_sizes.assign(static_cast<std::size_t>(k), 0);
        for (std::int64_t e = 0; e < universe; ++e) {
            const auto part = static_cast<std::int32_t>(
                1 + uniform_below(rng, static_cast<std::uint64_t>(k)));
            m.partition.part_of[static_cast<std::size_t>(e)] = part;
            ++m.partition.part_sizes[static_cast<std::size_t>(part - 1)];
        }
        for (std::int64_t j = 0; j < k; ++j) {
            if (m.partition.part_sizes[static_cast<std::size_t>(j)] == 0) {
                m.partition.part_of[static_cast<std::size_t>(j)] =
                    static_cast<std::int32_t>(j + 1);
                m.partition.part_sizes.assign(static_cast<std::size_t>(k), 0);
                for (std::int64_t e = 0; e < universe; ++e)
                    ++m.partition.part_sizes[static_cast<std::size_t>(
                        m.partition.part_of[static_cast<std::size_t>(e)] - 1)];
                j = -1;  // recount from scratch after the reroute
            }
        }
        m.thresholds.resize(static_cast<std::size_t>(k));
        for (std::int64_t j = 0; j < k; ++j)
            m.thresholds[static_cast<std::size_t>(j)] =
                static_cast<std::int64_t>(uniform_below(
                    rng, static_cast<std::uint64_t>(
                             m.partition.part_sizes[static_cast<std::size_t>(j)] + 1)));
        m.validate();
        NestedMatroid dual = dual_nested(m);
        RankOracle closed = oracle_closed_form(m);

        for (std::uint64_t mask = 0; mask < (1ull << universe); ++mask) {
            Set s;
            for (std::int64_t e = 0; e < universe; ++e)
                if (mask >> e & 1) s.push_back(e);
            const std::int64_t a = rank_closed_form(m, s);
            const std::int64_t b = rank_greedy_oracle(m, s);
            ++checked;
            if (a != b) {
                out.fail("closed " + std::to_string(a) + " != greedy " +
                         std::to_string(b) + " on matroid " + std::to_string(t));
                break;
            }
            if (dual_rank(closed, s) != rank_closed_form(dual, s)) {
                out.fail("dual identities split on matroid " + std::to_string(t));
                break;
            }
        }
    }

    HardParams p = derive_params(60, 1.0, ParamMode::Desk, 4);
    Partition base = sample_equipartition(p.N, p.r, 424'242);
    HardMatroidPair pair = build_hard_pair(p, base);
    Rng pick(7);
    for (int t = 0; t < 1000 && out.pass; ++t) {
        Set s;
        for (std::int64_t e = 0; e < p.N; ++e)
            if (uniform_below(pick, 2)) s.push_back(e);
        for (const NestedMatroid* m :
             {&pair.m_odd, &pair.m_even, &pair.m_even_prime}) {
            ++checked;
            if (rank_closed_form(*m, s) != rank_greedy_oracle(*m, s)) {
                out.fail("closed/greedy split at |U|=180");
                break;
            }
            if (dual_rank(oracle_closed_form(*m), s) !=
                rank_closed_form(dual_nested(*m), s)) {
                out.fail("dual identities split at |U|=180");
                break;
            }
        }
    }
    out.note(std::to_string(checked) + " rank comparisons");
    return out;
}

// 6. The r=3 matroid-intersection illustration with its exact sizes.
Outcome check_intersection() {
    Outcome out;
    HardParams p = derive_params(60, 1.0, ParamMode::Desk, 4);
    Partition base = sample_equipartition(p.N, p.r, 99);
    HardMatroidPair pair = build_hard_pair(p, base);
    NestedMatroid even_dual = dual_nested(pair.m_even);
    NestedMatroid even_prime_dual = dual_nested(pair.m_even_prime);

    auto first = intersection_max(oracle_closed_form(pair.m_odd),
                                  oracle_closed_form(even_dual));
    auto second = intersection_max(oracle_closed_form(pair.m_odd),
                                   oracle_closed_form(even_prime_dual));
    if (first.size != p.n + 5 * p.g / 4)
        out.fail("first intersection " + std::to_string(first.size));
    if (second.size != p.n + 3 * p.g / 4)
        out.fail("second intersection " + std::to_string(second.size));
    if (first.size - second.size != p.g / 2)
        out.fail("gap " + std::to_string(first.size - second.size));

    if (edmonds_min(pair.m_odd, even_dual).value != first.size)
        out.fail("first minimax value disagrees");
    if (edmonds_min(pair.m_odd, even_prime_dual).value != second.size)
        out.fail("second minimax value disagrees");

    Set universe;
    for (std::int64_t e = 0; e < p.N; ++e) universe.push_back(e);
    const std::int64_t c1 = p.N - rank_closed_form(pair.m_even, universe);
    const std::int64_t c2 = p.N - rank_closed_form(pair.m_even_prime, universe);
    const std::int64_t h_corner =
        corner_minimum(as_hypergrid(p, Variant::F)).value;
    const std::int64_t hh_corner =
        corner_minimum(as_hypergrid(p, Variant::FHAT)).value;
    if (c1 + h_corner != first.size)
        out.fail("C + corner(h) = " + std::to_string(c1 + h_corner));
    if (c2 + hh_corner != second.size)
        out.fail("C' + corner(hhat) = " + std::to_string(c2 + hh_corner));
    out.note("sizes 65/63, gap 2, C=" + std::to_string(c1));
    return out;
}

// 7. The resampling game at scale: the random querier essentially never
//    produces an unbalanced query or a distinguishing answer, and every
//    non-failing trial has byte-identical coupled transcripts.
Outcome check_game() {
    Outcome out;
    const std::int64_t trials = 100;
    HardParams p = derive_params(4'000'000, 1.0, ParamMode::Desk, 160'000);
    if (p.r != 5 || !p.structural_ok()) {
        out.fail("unexpected derived game parameters");
        return out;
    }
    std::int64_t failures = 0, divergences = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(20'240'716, static_cast<std::uint64_t>(t));
        auto alg = random_querier(p, 1000, p.N / 2, true,
                                  derive_seed(trial_seed, 0x51));
        GameRecord rec = adversary_game(*alg, p, 2, trial_seed);
        if (rec.failure_round) ++failures;
        if (!rec.transcripts_identical) ++divergences;
        if (!rec.failure_round && !rec.transcripts_identical)
            out.fail("non-failing trial " + std::to_string(t) +
                     " with diverging transcripts");
    }
    if (20 * failures > trials)
        out.fail("failure rate " + std::to_string(failures) + "%");
    if (20 * divergences > trials)
        out.fail("divergence rate " + std::to_string(divergences) + "%");
    out.note("failures " + std::to_string(failures) + "/100, divergences " +
             std::to_string(divergences) + "/100");
    return out;
}

// 8. The sequential solver solves 100 mixed hidden instances exactly within
//    the round bound, reporting its query counts.
Outcome check_solver() {
    Outcome out;
    HardParams p = derive_params(60, 2.0, ParamMode::Desk, 4);
    std::int64_t reference[3] = {0, 0, 0};
    const Variant variants[3] = {Variant::F, Variant::FHAT, Variant::FHATPRIME};
    for (int v = 0; v < 3; ++v)
        reference[v] = grid_minimum_bruteforce(as_hypergrid(p, variants[v])).value;

    std::int64_t correct = 0, max_rounds = 0, max_queries = 0, total_queries = 0;
    const std::int64_t trials = 100;
    for (std::int64_t t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(811, static_cast<std::uint64_t>(t));
        Rng pick(derive_seed(trial_seed, 0x7a));
        const Variant v = variants[uniform_below(pick, 3)];
        Partition hidden =
            sample_equipartition(p.N, p.r, derive_seed(trial_seed, 0x9a));
        OracleSession sess(p, v, hidden, trial_seed);
        SolverReport rep = sequential_minimize(sess);
        max_rounds = std::max(max_rounds, rep.rounds);
        max_queries = std::max(max_queries, rep.queries);
        total_queries += rep.queries;
        const bool ok = rep.min_value == reference[static_cast<int>(v)] &&
                        rep.rounds <= p.r + 2 && rep.detected_variant == v;
        if (ok)
            ++correct;
        else if (out.pass)
            out.fail("trial " + std::to_string(t) + " returned " +
                     std::to_string(rep.min_value) + " in " +
                     std::to_string(rep.rounds) + " rounds");
    }
    if (correct != trials)
        out.fail(std::to_string(correct) + "/100 correct");
    if (max_rounds > p.r + 2)
        out.fail("rounds up to " + std::to_string(max_rounds));
    out.note("100/100 exact, rounds <= " + std::to_string(max_rounds) +
             ", queries max " + std::to_string(max_queries) + " avg " +
             std::to_string(total_queries / trials));
    return out;
}

// 9. Byte-identical CSV outputs for every command under a fixed seed.
Outcome check_determinism() {
    Outcome out;
    const fs::path root =
        fs::temp_directory_path() /
        ("partsub_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);

    auto run = [&](const std::vector<std::string>& args) {
        std::ostringstream o, e;
        const int code = cli::run_cli(args, o, e);
        if (code != 0)
            out.fail("command '" + args[0] + "' exited " + std::to_string(code) +
                     ": " + e.str());
        return o.str();
    };
    auto bytes = [&](const fs::path& dir) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(dir))
            if (entry.is_regular_file()) files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        std::string all;
        for (const auto& f : files) {
            all += f.filename().string();
            all += '\0';
            all += read_text(f);
            all += '\0';
        }
        return all;
    };

    const std::string a = (root / "a").string(), b = (root / "b").string();
    run({"gen", "--n", "60", "--g", "4", "--seed", "7", "--out", a});
    run({"gen", "--n", "60", "--g", "4", "--seed", "7", "--out", b});
    if (bytes(root / "a") != bytes(root / "b")) out.fail("gen outputs differ");

    run({"verify", a, "--out", (root / "va").string()});
    run({"verify", a, "--out", (root / "vb").string()});
    if (bytes(root / "va") != bytes(root / "vb"))
        out.fail("verify reports differ");

    run({"solve", "--trials", "10", "--seed", "3", "--out", (root / "sa").string()});
    run({"solve", "--trials", "10", "--seed", "3", "--out", (root / "sb").string()});
    if (bytes(root / "sa") != bytes(root / "sb")) out.fail("solve CSVs differ");

    const std::vector<std::string> game = {
        "game", "--n", "400000", "--g", "26664", "--r", "3", "--trials", "10",
        "--rounds", "2", "--queries-per-round", "50", "--seed", "5"};
    auto ga = game, gb = game;
    ga.insert(ga.end(), {"--out", (root / "ga").string()});
    gb.insert(gb.end(), {"--out", (root / "gb").string()});
    run(ga);
    run(gb);
    if (bytes(root / "ga") != bytes(root / "gb")) out.fail("game CSVs differ");

    const std::string ia = (root / "ia").string(), ib = (root / "ib").string();
    run({"intersect", "--illustration", "--n", "60", "--g", "4", "--out", ia});
    run({"intersect", "--illustration", "--n", "60", "--g", "4", "--out", ib});
    if (bytes(root / "ia") != bytes(root / "ib"))
        out.fail("intersect CSVs differ");

    fs::remove_all(root);
    out.note("gen/verify/solve/game/intersect byte-stable under reruns");
    return out;
}

struct Check {
    const char* name;
    double limit_seconds;  // 0: no stated limit
    std::function<Outcome()> fn;
};

}  // namespace

int main() {
    const std::vector<Check> checks = {
        {"exact submodularity of all three variants", 60, check_submodularity},
        {"desk-scale exact minimizers", 30, check_minimizers},
        {"closed-form marginals equal finite differences", 0, check_marginals},
        {"suffix indistinguishability", 0, check_indistinguishability},
        {"nested-matroid rank and dual identities", 0, check_ranks},
        {"matroid intersection illustration", 60, check_intersection},
        {"resampling game at scale", 600, check_game},
        {"sequential solver exactness", 0, check_solver},
        {"byte-identical reruns", 0, check_determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = checks[i].fn();
        } catch (const std::exception& e) {
            out.fail(std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (checks[i].limit_seconds > 0 && secs > checks[i].limit_seconds)
            out.fail("took " + std::to_string(secs) + "s, limit " +
                     std::to_string(checks[i].limit_seconds) + "s");
        std::ostringstream line;
        line << "criterion " << (i + 1) << " (" << checks[i].name
             << "): " << (out.pass ? "PASS" : "FAIL");
        if (!out.detail.empty()) line << " — " << out.detail;
        line << " [" << std::fixed;
        line.precision(2);
        line << secs << "s]";
        std::cout << line.str() << "\n";
        if (!out.pass) ++failures;
    }
    std::cout << (failures == 0 ? "acceptance: all criteria passed"
                                : "acceptance: " + std::to_string(failures) +
                                      " criteria failed")
              << "\n";
    return failures;
}
