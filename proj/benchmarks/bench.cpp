#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "partsub/hardfamily.hpp"
#include "partsub/hypergrid.hpp"
#include "partsub/matroids.hpp"
#include "partsub/oracle.hpp"
#include "partsub/rng.hpp"
#include "partsub/solvers.hpp"

namespace {

using namespace partsub;

const HardParams& desk() {
    static const HardParams p = derive_params(60, 2.0, ParamMode::Desk, 4);
    return p;
}

// Wide instances stress the O(r) suffix scan inside a single evaluation.
HardParams wide(std::int64_t r) {
    return hard_params_raw(2 * r * ((5 * 8 * r) / (2 * r) + 1), r, 8);
}

void BM_value_base(benchmark::State& state) {
    const HardParams p = wide(state.range(0));
    Rng rng(1);
    Signature x(static_cast<std::size_t>(p.r));
    for (auto& c : x)
        c = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(p.n + 1)));
    for (auto _ : state) benchmark::DoNotOptimize(h_value(p, x));
}
BENCHMARK(BM_value_base)->Arg(3)->Arg(101)->Arg(1001);

void BM_value_all_truncated(benchmark::State& state) {
    const HardParams p = wide(state.range(0));
    Rng rng(2);
    Signature x(static_cast<std::size_t>(p.r));
    for (auto& c : x)
        c = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(p.n + 1)));
    for (auto _ : state) benchmark::DoNotOptimize(hhatprime_value(p, x));
}
BENCHMARK(BM_value_all_truncated)->Arg(3)->Arg(101)->Arg(1001);

void BM_signature_of_set(benchmark::State& state) {
    const std::int64_t N = state.range(0);
    Partition part = sample_equipartition(N, 3, 7);
    Rng rng(3);
    std::vector<std::int64_t> s = sample_without_replacement(rng, N, N / 2);
    for (auto _ : state) benchmark::DoNotOptimize(signature(part, s));
    state.SetItemsProcessed(state.iterations() * (N / 2));
}
BENCHMARK(BM_signature_of_set)->Arg(180)->Arg(180'000);

void BM_rank_closed_form(benchmark::State& state) {
    Partition base = sample_equipartition(desk().N, desk().r, 11);
    HardMatroidPair pair = build_hard_pair(desk(), base);
    Rng rng(4);
    Set s;
    for (std::int64_t e = 0; e < desk().N; ++e)
        if (uniform_below(rng, 2)) s.push_back(e);
    for (auto _ : state) benchmark::DoNotOptimize(rank_closed_form(pair.m_odd, s));
}
BENCHMARK(BM_rank_closed_form);

void BM_hypergeometric_large_urn(benchmark::State& state) {
    Rng rng(5);
    // Population and draw sizes matching one implicit query at game scale.
    for (auto _ : state)
        benchmark::DoNotOptimize(hypergeometric(rng, 4'000'000, 16'000'000, 10'000'000));
}
BENCHMARK(BM_hypergeometric_large_urn)->Unit(benchmark::kMicrosecond);

void BM_implicit_query_signature(benchmark::State& state) {
    const HardParams p = derive_params(4'000'000, 1.0, ParamMode::Desk, 160'000);
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(p.r), p.n);
    Rng rng(6);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            multivariate_hypergeometric(rng, sizes, p.N / 2));
}
BENCHMARK(BM_implicit_query_signature)->Unit(benchmark::kMicrosecond);

void BM_submodularity_exhaustive(benchmark::State& state) {
    const HardParams p = hard_params_raw(state.range(0), 3, 4);
    HypergridFunction h = as_hypergrid(p, Variant::FHAT);
    for (auto _ : state) {
        auto rep = submodularity_check(h, 100'000'000);
        benchmark::DoNotOptimize(rep.ok);
    }
    state.SetItemsProcessed(state.iterations() * (state.range(0) + 1) *
                            (state.range(0) + 1) * (state.range(0) + 1) * 9);
}
BENCHMARK(BM_submodularity_exhaustive)->Arg(12)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_intersection_max(benchmark::State& state) {
    Partition base = sample_equipartition(desk().N, desk().r, 13);
    HardMatroidPair pair = build_hard_pair(desk(), base);
    NestedMatroid even_dual = dual_nested(pair.m_even);
    RankOracle a = oracle_closed_form(pair.m_odd);
    RankOracle b = oracle_closed_form(even_dual);
    for (auto _ : state) {
        auto res = intersection_max(a, b);
        benchmark::DoNotOptimize(res.size);
    }
}
BENCHMARK(BM_intersection_max)->Unit(benchmark::kMillisecond);

void BM_sequential_solve(benchmark::State& state) {
    std::uint64_t trial = 0;
    for (auto _ : state) {
        state.PauseTiming();
        const std::uint64_t seed = derive_seed(99, trial++);
        Partition hidden = sample_equipartition(desk().N, desk().r, derive_seed(seed, 1));
        OracleSession sess(desk(), Variant::FHAT, hidden, seed);
        state.ResumeTiming();
        auto rep = sequential_minimize(sess);
        benchmark::DoNotOptimize(rep.min_value);
    }
}
BENCHMARK(BM_sequential_solve)->Unit(benchmark::kMillisecond);

void BM_game_trial(benchmark::State& state) {
    const HardParams p = derive_params(400'000, 1.0, ParamMode::Desk, 26'664, 3);
    std::uint64_t trial = 0;
    for (auto _ : state) {
        const std::uint64_t seed = derive_seed(77, trial++);
        auto alg = random_querier(p, 50, p.N / 2, true, derive_seed(seed, 0x51));
        GameRecord rec = adversary_game(*alg, p, 2, seed);
        benchmark::DoNotOptimize(rec.transcripts_identical);
    }
}
BENCHMARK(BM_game_trial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
