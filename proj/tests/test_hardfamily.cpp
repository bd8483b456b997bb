#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "partsub/errors.hpp"
#include "partsub/hardfamily.hpp"
#include "partsub/rng.hpp"
#include "reference.hpp"

using namespace partsub;
using namespace partsub::testref;

TEST_CASE("derive_params desk mode fills the documented derived fields") {
    HardParams p = derive_params(60, 2.0, ParamMode::Desk, 4);
    CHECK(p.n == 60);
    CHECK(p.r == 3);  // largest odd r with 5*4*r <= 60
    CHECK(p.g == 4);
    CHECK(p.tau == 26);
    CHECK(p.gamma == 3);
    CHECK(p.theta == 29);
    CHECK(p.cut == 2);
    CHECK(p.N == 180);
    CHECK(p.structural_ok());
    CHECK(p.budget() == 32400);      // floor(180^2)
    CHECK(p.budget_n2c() == 12960000);  // floor(60^4)

    HardParams c1 = derive_params(60, 1.0, ParamMode::Desk, 4);
    CHECK(c1.budget() == 180);

    // r capped explicitly
    HardParams r3 = derive_params(120, 1.0, ParamMode::Desk, 4, 3);
    CHECK(r3.r == 3);
    CHECK(r3.N == 360);
}

TEST_CASE("derive_params rejects infeasible or malformed requests by name") {
    // asymptotic-mode g at n=60 is far beyond 5gr <= n
    CHECK_THROWS_WITH_AS(derive_params(60, 1.0, ParamMode::Asymptotic),
                         doctest::Contains("5*g*r <= n"), ConfigError);
    CHECK_THROWS_AS(derive_params(61, 1.0, ParamMode::Desk, 4), ConfigError);
    CHECK_THROWS_AS(derive_params(60, 1.0, ParamMode::Desk, 6), ConfigError);
    CHECK_THROWS_AS(derive_params(60, 1.0, ParamMode::Desk, std::nullopt),
                    ConfigError);  // desk needs an explicit g
    CHECK_THROWS_AS(derive_params(60, 1.0, ParamMode::Desk, 4, 4), ConfigError);
    CHECK_THROWS_AS(derive_params(20, 1.0, ParamMode::Desk, 4), ConfigError);
}

TEST_CASE("derive_params asymptotic mode is feasible at large n") {
    const std::int64_t n = 200'000'000;
    HardParams p = derive_params(n, 1.0, ParamMode::Asymptotic);
    CHECK(p.n == n);
    CHECK(p.g % 4 == 0);
    CHECK(p.r >= 3);
    CHECK(p.r % 2 == 1);
    CHECK(p.structural_ok());
    CHECK(p.mode == ParamMode::Asymptotic);
}

TEST_CASE("hard_params_raw checks parity only") {
    HardParams p = hard_params_raw(20, 3, 8);
    CHECK_FALSE(p.structural_ok());  // 5*8*3 = 120 > 20, still constructible
    CHECK(p.tau == 10 - 8);
    CHECK(p.gamma == 6);
    CHECK(p.theta == 8);
    CHECK_THROWS_AS(hard_params_raw(21, 3, 8), ConfigError);
    CHECK_THROWS_AS(hard_params_raw(20, 4, 8), ConfigError);
    CHECK_THROWS_AS(hard_params_raw(20, 3, 6), ConfigError);
    CHECK_THROWS_AS(hard_params_raw(20, 1, 8), ConfigError);
}

TEST_CASE("variant names round-trip") {
    for (Variant v : {Variant::F, Variant::FHAT, Variant::FHATPRIME})
        CHECK(variant_from_name(variant_name(v)) == v);
    CHECK_THROWS_AS(variant_from_name("g"), DomainError);
}

TEST_CASE("suffix function matches the literal definition") {
    HardParams p = derive_params(60, 1.0, ParamMode::Desk, 4);
    const Signature x = {10, 40, 35};
    for (std::int64_t t = 1; t <= 3; ++t)
        CHECK(suffix(p, x, t) == ref_suffix(p, x, t));
    CHECK(suffix(p, x, 3) == 35 - 26 - 3);
    CHECK(suffix(p, x, 1) == (10 - 26) + (40 - 26) + (35 - 26) - 3);
}

TEST_CASE("odd_even_index prefers the smaller index on ties") {
    HardParams p = derive_params(60, 1.0, ParamMode::Desk, 4);
    // equal coordinates: ell_1 < ell_3 normally; build an exact odd tie via
    // x = (tau, anything, tau + gamma - gamma): ell_1 = ell_3 iff
    // (x1 - tau) + (x2 - tau) = 0
    const Signature x = {26, 26, 40};
    CHECK(suffix(p, x, 1) == suffix(p, x, 3));
    auto oe = odd_even_index(p, x);
    CHECK(oe.a == 1);
    CHECK(oe.ell_a == suffix(p, x, 1));
    CHECK(oe.b == 2);

    // sweep a small grid: a/b always the argmax with ties toward smaller
    HardParams q = hard_params_raw(8, 5, 4);
    for_each_grid_point(std::vector<std::int64_t>(5, 8), [&](const Signature& y) {
        auto idx = odd_even_index(q, y);
        std::int64_t best_odd = suffix(q, y, 1), arg_odd = 1;
        std::int64_t best_even = suffix(q, y, 2), arg_even = 2;
        for (std::int64_t t = 1; t <= 5; ++t) {
            const std::int64_t v = suffix(q, y, t);
            if (t % 2 == 1 && v > best_odd) { best_odd = v; arg_odd = t; }
            if (t % 2 == 0 && v > best_even) { best_even = v; arg_even = t; }
        }
        REQUIRE(idx.a == arg_odd);
        REQUIRE(idx.b == arg_even);
        REQUIRE(idx.ell_a == best_odd);
        REQUIRE(idx.ell_b == best_even);
    });
}

TEST_CASE("value functions match the reference on an exhaustive small grid") {
    for (auto [n, r, g] : {std::tuple<int, int, int>{6, 3, 4},
                           {8, 3, 8}, {6, 5, 4}}) {
        HardParams p = hard_params_raw(n, r, g);
        for_each_grid_point(std::vector<std::int64_t>(static_cast<std::size_t>(r), n),
                            [&](const Signature& x) {
            REQUIRE(h_value(p, x) == ref_h(p, x));
            REQUIRE(hhat_value(p, x) == ref_hhat(p, x));
            REQUIRE(hhatprime_value(p, x) == ref_hhatprime(p, x));
        });
    }
}

TEST_CASE("value functions match the reference on random desk signatures") {
    HardParams p = derive_params(60, 1.0, ParamMode::Desk, 4);
    Rng rng(123);
    for (int t = 0; t < 2000; ++t) {
        Signature x(3);
        for (auto& c : x) c = static_cast<std::int64_t>(uniform_below(rng, 61));
        for (Variant v : {Variant::F, Variant::FHAT, Variant::FHATPRIME})
            REQUIRE(variant_value(p, x, v) == ref_variant(p, x, v));
    }
}

TEST_CASE("desk corner values match independently derived constants") {
    HardParams p = derive_params(60, 1.0, ParamMode::Desk, 4);
    CHECK(h_value(p, {0, 0, 0}) == 0);
    CHECK(h_value(p, {0, 0, 60}) == 24);
    CHECK(h_value(p, {60, 60, 60}) == 16);
    CHECK(hhat_value(p, {0, 0, 60}) == -2);
    CHECK(hhatprime_value(p, {0, 60, 60}) == -7);
    // the base and last-coordinate-truncated variants agree on every
    // certain signature over {P1, complement}; the all-truncated one departs
    CHECK(h_value(p, {0, 60, 60}) == 16);
    CHECK(hhat_value(p, {0, 60, 60}) == 16);
    CHECK(h_value(p, {60, 0, 0}) == 60);
    CHECK(hhat_value(p, {60, 0, 0}) == 60);
    CHECK(hhatprime_value(p, {60, 0, 0}) == 60);
    CHECK(hhat_value(p, {60, 60, 60}) == 16);
    CHECK(hhatprime_value(p, {60, 60, 60}) == 16);
}

TEST_CASE("truncate clamps the documented coordinates") {
    HardParams p = derive_params(60, 1.0, ParamMode::Desk, 4);  // theta=29 cut=2
    const Signature x = {60, 40, 50};
    CHECK(truncate(p, x, Variant::F) == x);
    CHECK(truncate(p, x, Variant::FHAT) == Signature{60, 40, 29});
    CHECK(truncate(p, x, Variant::FHATPRIME) == Signature{60, 29, 29});
}

TEST_CASE("closed-form marginals are unit-bounded and equal finite differences") {
    HardParams p = derive_params(60, 1.0, ParamMode::Desk, 4);
    Rng rng(5);
    for (Variant v : {Variant::F, Variant::FHAT, Variant::FHATPRIME}) {
        HypergridFunction h = as_hypergrid(p, v);
        for (int t = 0; t < 1500; ++t) {
            Signature x(3);
            for (auto& c : x) c = static_cast<std::int64_t>(uniform_below(rng, 60));
            for (std::int64_t i = 1; i <= 3; ++i) {
                const std::int64_t m = marginal_closed_form(p, x, i, v);
                REQUIRE(m >= -1);
                REQUIRE(m <= 1);
                REQUIRE(m == marginal_fd(h, x, i - 1));
            }
        }
    }
    CHECK_THROWS_AS(marginal_closed_form(p, {60, 0, 0}, 1, Variant::F), DomainError);
}

TEST_CASE("is_balanced compares tail coordinates against g/8 in integers") {
    HardParams p8 = hard_params_raw(16, 3, 8);  // slack g/8 = 1
    CHECK(is_balanced(p8, {5, 5, 6}, 1));
    CHECK(is_balanced(p8, {5, 4, 5}, 1));
    CHECK_FALSE(is_balanced(p8, {5, 5, 7}, 1));
    CHECK_FALSE(is_balanced(p8, {5, 3, 5}, 1));
    CHECK(is_balanced(p8, {0, 5, 6}, 2));  // only j > i constrained

    HardParams p4 = derive_params(60, 1.0, ParamMode::Desk, 4);  // slack 0.5
    CHECK(is_balanced(p4, {30, 30, 30}, 1));
    CHECK_FALSE(is_balanced(p4, {30, 30, 31}, 1));
}

TEST_CASE("as_hypergrid exposes bounds n in every coordinate") {
    HardParams p = derive_params(60, 1.0, ParamMode::Desk, 4);
    HypergridFunction h = as_hypergrid(p, Variant::FHAT);
    CHECK(h.bounds == std::vector<std::int64_t>{60, 60, 60});
    CHECK(h.eval({0, 0, 60}) == -2);
}

TEST_CASE("suffix indistinguishability holds exhaustively on small grids") {
    // g=8 gives slack 1, so classes contain genuinely distinct signatures
    HardParams p = hard_params_raw(12, 3, 8);
    auto rep = suffix_indistinguishability_check(p, 1);
    CHECK(rep.ok);
    CHECK_FALSE(rep.sampled);
    CHECK(rep.checked > 0);
    CHECK(rep.classes > 0);
    CHECK_FALSE(rep.counterexample.has_value());

    for (std::int64_t g : {16, 32}) {
        HardParams q = hard_params_raw(60, 3, g);
        auto r2 = suffix_indistinguishability_check(q, 1);
        CHECK(r2.ok);
        CHECK_FALSE(r2.sampled);
    }
}

TEST_CASE("suffix indistinguishability rejects out-of-range i") {
    HardParams p = derive_params(60, 1.0, ParamMode::Desk, 4);
    CHECK_THROWS_AS(suffix_indistinguishability_check(p, 0), DomainError);
    CHECK_THROWS_AS(suffix_indistinguishability_check(p, 2), DomainError);  // i < r/2
}

TEST_CASE("suffix indistinguishability samples beyond the grid budget") {
    HardParams p = hard_params_raw(10'000, 9, 40);
    auto rep = suffix_indistinguishability_check(p, 2, 1'000'000, 20'000, 3);
    CHECK(rep.ok);
    CHECK(rep.sampled);
    CHECK(rep.checked == 20'000);
}
