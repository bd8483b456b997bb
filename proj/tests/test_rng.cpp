#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "partsub/rng.hpp"

using namespace partsub;

TEST_CASE("mix64 and derive_seed are deterministic and spread inputs") {
    CHECK(mix64(0) == mix64(0));
    CHECK(mix64(1) != mix64(2));
    CHECK(derive_seed(7, 1) == derive_seed(7, 1));
    CHECK(derive_seed(7, 1) != derive_seed(7, 2));
    CHECK(derive_seed(7, 1, 0) != derive_seed(7, 1, 1));
    CHECK(derive_seed(7, 1) != derive_seed(8, 1));

    // no obvious collisions across a small grid of (master, a, b)
    std::set<std::uint64_t> seen;
    for (std::uint64_t m = 0; m < 8; ++m)
        for (std::uint64_t a = 0; a < 8; ++a)
            for (std::uint64_t b = 0; b < 8; ++b)
                seen.insert(derive_seed(m, a, b));
    CHECK(seen.size() == 8 * 8 * 8);
}

TEST_CASE("uniform_below stays in range and is roughly uniform") {
    Rng rng(42);
    const std::uint64_t n = 16;
    std::vector<std::int64_t> counts(n, 0);
    const std::int64_t trials = 160000;
    for (std::int64_t t = 0; t < trials; ++t) {
        const std::uint64_t v = uniform_below(rng, n);
        REQUIRE(v < n);
        ++counts[v];
    }
    // chi-square with 15 dof; 99.9% quantile is ~37.7, use a generous 60
    const double expected = static_cast<double>(trials) / static_cast<double>(n);
    double chi2 = 0.0;
    for (std::int64_t c : counts) {
        const double d = static_cast<double>(c) - expected;
        chi2 += d * d / expected;
    }
    CHECK(chi2 < 60.0);

    Rng a(9), b(9);
    for (int i = 0; i < 100; ++i) CHECK(uniform_below(a, 1000) == uniform_below(b, 1000));
    CHECK(uniform_below(a, 1) == 0);
}

TEST_CASE("sample_without_replacement draws distinct in-range ids") {
    Rng rng(3);
    auto s = sample_without_replacement(rng, 100, 30);
    REQUIRE(s.size() == 30);
    std::set<std::int64_t> uniq(s.begin(), s.end());
    CHECK(uniq.size() == 30);
    for (std::int64_t e : s) {
        CHECK(e >= 0);
        CHECK(e < 100);
    }

    // k == population is a permutation
    Rng rng2(4);
    auto perm = sample_without_replacement(rng2, 10, 10);
    std::sort(perm.begin(), perm.end());
    for (std::int64_t i = 0; i < 10; ++i) CHECK(perm[static_cast<std::size_t>(i)] == i);

    // element inclusion is uniform: each id should appear with rate k/pop
    std::vector<std::int64_t> hits(20, 0);
    Rng rng3(5);
    const std::int64_t trials = 20000;
    for (std::int64_t t = 0; t < trials; ++t)
        for (std::int64_t e : sample_without_replacement(rng3, 20, 5))
            ++hits[static_cast<std::size_t>(e)];
    for (std::int64_t h : hits) {
        CHECK(h > trials / 4 - 600);  // expected 5000, sd ~43
        CHECK(h < trials / 4 + 600);
    }
}

namespace {

// log of the hypergeometric pmf, for the chi-square reference below
double log_hyper_pmf(std::int64_t good, std::int64_t bad, std::int64_t draws,
                     std::int64_t k) {
    auto lc = [](std::int64_t n, std::int64_t r) {
        return std::lgamma(static_cast<double>(n + 1)) -
               std::lgamma(static_cast<double>(r + 1)) -
               std::lgamma(static_cast<double>(n - r + 1));
    };
    return lc(good, k) + lc(bad, draws - k) - lc(good + bad, draws);
}

}  // namespace

TEST_CASE("hypergeometric matches the exact law") {
    Rng rng(11);
    const std::int64_t good = 30, bad = 50, draws = 25;
    const std::int64_t lo = std::max<std::int64_t>(0, draws - bad);
    const std::int64_t hi = std::min(good, draws);
    std::vector<std::int64_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
    const std::int64_t trials = 200000;
    for (std::int64_t t = 0; t < trials; ++t) {
        const std::int64_t k = hypergeometric(rng, good, bad, draws);
        REQUIRE(k >= lo);
        REQUIRE(k <= hi);
        ++counts[static_cast<std::size_t>(k - lo)];
    }
    // chi-square against the exact pmf, pooling tail cells below 10 expected
    double chi2 = 0.0;
    int cells = 0;
    double pooled_exp = 0.0;
    std::int64_t pooled_obs = 0;
    for (std::int64_t k = lo; k <= hi; ++k) {
        const double e =
            std::exp(log_hyper_pmf(good, bad, draws, k)) * static_cast<double>(trials);
        const auto o = static_cast<double>(counts[static_cast<std::size_t>(k - lo)]);
        if (e < 10.0) {
            pooled_exp += e;
            pooled_obs += static_cast<std::int64_t>(o);
            continue;
        }
        chi2 += (o - e) * (o - e) / e;
        ++cells;
    }
    if (pooled_exp > 0.0) {
        const double d = static_cast<double>(pooled_obs) - pooled_exp;
        chi2 += d * d / pooled_exp;
        ++cells;
    }
    CHECK(cells > 5);
    CHECK(chi2 < 2.0 * cells + 40.0);  // far beyond the 99.9% quantile
}

TEST_CASE("hypergeometric edge cases") {
    Rng rng(1);
    CHECK(hypergeometric(rng, 10, 5, 0) == 0);
    CHECK(hypergeometric(rng, 10, 5, 15) == 10);
    CHECK(hypergeometric(rng, 0, 9, 4) == 0);
    CHECK(hypergeometric(rng, 9, 0, 4) == 4);
    // huge urn: O(sd) inverse transform must not walk the whole support
    const std::int64_t k = hypergeometric(rng, 10'000'000, 10'000'000, 1'000'000);
    CHECK(k > 480000);
    CHECK(k < 520000);
}

TEST_CASE("multivariate_hypergeometric sums to draws and respects bins") {
    Rng rng(8);
    const std::vector<std::int64_t> bins = {60, 60, 60};
    for (int t = 0; t < 200; ++t) {
        auto x = multivariate_hypergeometric(rng, bins, 90);
        REQUIRE(x.size() == 3);
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(x[i] >= 0);
            CHECK(x[i] <= bins[i]);
            sum += x[i];
        }
        CHECK(sum == 90);
    }
    // full draw takes everything
    auto all = multivariate_hypergeometric(rng, bins, 180);
    CHECK(all == std::vector<std::int64_t>{60, 60, 60});

    // determinism
    Rng a(77), b(77);
    CHECK(multivariate_hypergeometric(a, bins, 90) ==
          multivariate_hypergeometric(b, bins, 90));
}
