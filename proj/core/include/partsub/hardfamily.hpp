#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "partsub/hypergrid.hpp"

namespace partsub {

// Which of the three hard-family value functions a session evaluates.
// F is the base function; FHAT truncates the last coordinate at theta and
// subtracts the overflow; FHATPRIME does the same for every coordinate from
// the cut index onward.
enum class Variant { F, FHAT, FHATPRIME };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);  // DomainError on unknown

enum class ParamMode { Asymptotic, Desk };

// Instance parameters. n is the common part size, r the (odd) part count,
// g the gap parameter (divisible by 4), c the per-round query exponent.
// Derived: tau = n/2 - g, gamma = g*r/4, theta = n/2 - g/4, cut = ceil(2r/3),
// N = n*r.
struct HardParams {
    std::int64_t n = 0;
    std::int64_t r = 0;
    std::int64_t g = 0;
    double c = 1.0;
    ParamMode mode = ParamMode::Desk;

    std::int64_t tau = 0;
    std::int64_t gamma = 0;
    std::int64_t theta = 0;
    std::int64_t cut = 0;   // 1-based part index where FHATPRIME truncation starts
    std::int64_t N = 0;

    // Per-round query budget floor(N^c); both budget forms are reported, only
    // N^c is enforced.
    std::int64_t budget() const;
    std::int64_t budget_n2c() const;  // floor(n^(2c)), reporting only

    // 5*g*r <= n — required by the unique-minimizer structure and by the
    // matroid constructions, but NOT by submodularity or indistinguishability,
    // so lab-scale suites may run without it.
    bool structural_ok() const { return 5 * g * r <= n; }
};

// Validates divisibility/parity and fills in the derived fields.
// Desk mode requires g_override; r is the largest odd integer with 5gr <= n
// unless r_override caps it lower. Asymptotic mode picks g as the smallest multiple
// of 4 >= 200*sqrt(c*n*ln n) and errors when no odd r >= 3 satisfies 5gr <= n.
// Violated constraints are named in the ConfigError message.
HardParams derive_params(std::int64_t n, double c, ParamMode mode,
                         std::optional<std::int64_t> g_override = std::nullopt,
                         std::optional<std::int64_t> r_override = std::nullopt);

// Fills derived fields checking only parity/divisibility (n even, r odd >= 3,
// g positive and divisible by 4) — for lab suites where 5gr <= n is not needed.
HardParams hard_params_raw(std::int64_t n, std::int64_t r, std::int64_t g, double c = 1.0);

// Suffix function: sum_{s=t..r} (x_s - tau) - gamma. t is 1-based.
std::int64_t suffix(const HardParams& p, const Signature& x, std::int64_t t);

// Odd/even argmax of the suffix functions, ties toward the smaller index.
// Indices are 1-based and always present (the max(0, .) clamp is applied by
// the value functions, not here).
struct OddEvenIndex {
    std::int64_t a = 0;      // odd index maximizing ell_t
    std::int64_t b = 0;      // even index maximizing ell_t
    std::int64_t ell_a = 0;
    std::int64_t ell_b = 0;
};
OddEvenIndex odd_even_index(const HardParams& p, const Signature& x);

// Base function: ||x||_1 - (max(0, ell_a) + max(0, ell_b)).
std::int64_t h_value(const HardParams& p, const Signature& x);

// Variant truncation: F identity; FHAT clamps the last coordinate at theta;
// FHATPRIME clamps every coordinate >= cut at theta.
Signature truncate(const HardParams& p, const Signature& x, Variant v);

// h(truncate(x)) minus the clamped overflow (x_r - theta), when x_r > theta.
std::int64_t hhat_value(const HardParams& p, const Signature& x);

// h(truncate(x)) minus the total overflow over coordinates >= cut.
std::int64_t hhatprime_value(const HardParams& p, const Signature& x);

// Dispatch on the variant tag.
std::int64_t variant_value(const HardParams& p, const Signature& x, Variant v);

// Closed-form marginal of the chosen variant at x in coordinate i (1-based);
// always one of {-1, 0, +1}. Equals the finite difference of the variant's
// value function. Coordinate at n -> DomainError.
std::int64_t marginal_closed_form(const HardParams& p, const Signature& x,
                                  std::int64_t i, Variant v);

// i-balanced: x_i - g/8 <= x_j <= x_i + g/8 for every j > i. g/8 may be
// fractional; the comparison multiplies through by 8 and stays in integers.
bool is_balanced(const HardParams& p, const Signature& x, std::int64_t i);

// Convenience adapters to the generic hypergrid machinery (bounds all n).
HypergridFunction as_hypergrid(const HardParams& p, Variant v);

struct IndisReport {
    bool ok = true;
    std::int64_t checked = 0;   // balanced signatures (exhaustive) or pairs (sampled)
    std::int64_t classes = 0;   // (prefix, sum) classes seen; 0 in sampled mode
    bool sampled = false;
    std::optional<std::string> counterexample;
};

// Verifies that i-balanced signatures with equal first i coordinates and
// equal sum are indistinguishable: every such signature has h == hhat, and any
// two in the same (prefix, sum) class share one value. Exhaustive over the
// full grid when (n+1)^r fits in grid_budget; otherwise draws `samples`
// random balanced pairs per the same law and says so in the report.
// Requires 1 <= i < r/2 (the regime where the claim holds).
IndisReport suffix_indistinguishability_check(const HardParams& p, std::int64_t i,
                                              std::int64_t grid_budget = 10'000'000,
                                              std::int64_t samples = 1'000'000,
                                              std::uint64_t seed = 1);

}  // namespace partsub
