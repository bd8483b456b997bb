#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "partsub/errors.hpp"

namespace partsub {

// A signature is the vector of per-part intersection counts |S ∩ P_i|,
// i = 1..r. Coordinates are 0-based in code, 1-based in all printed output.
using Signature = std::vector<std::int64_t>;

std::int64_t signature_sum(const Signature& x);

// Partition of the universe {0, ..., N-1} into parts 1..r.
struct Partition {
    std::int64_t universe_size = 0;          // N
    std::vector<std::int32_t> part_of;       // element id -> part index (1..r)
    std::vector<std::int64_t> part_sizes;    // size of each part, [r]
    std::uint64_t seed = 0;                  // provenance (0 when hand-built)

    std::int64_t parts() const { return static_cast<std::int64_t>(part_sizes.size()); }
    bool is_equipartition() const;
    void validate() const;  // throws ConfigError on inconsistency

    // Element ids of one part (1-based index), ascending.
    std::vector<std::int64_t> part_elements(std::int32_t part) const;
};

// x_i = |S ∩ P_i| for each part. Ids out of range -> DomainError.
Signature signature(const Partition& p, const std::vector<std::int64_t>& s);

// A hypergrid function is any integer evaluator over signatures together with
// its per-coordinate domain bounds. Concrete hard-family instances live in
// hardfamily.hpp; this type-erased form is what the scan engines and the CLI
// consume.
struct HypergridFunction {
    std::vector<std::int64_t> bounds;  // coordinate i ranges over 0..bounds[i]
    std::function<std::int64_t(const Signature&)> eval;
};

// f_P(S) = h(signature(P, S)).
std::int64_t lift_eval(const Partition& p, const HypergridFunction& h,
                       const std::vector<std::int64_t>& s);

// Finite-difference marginal: h(x + e_i) - h(x). 0-based i.
// Coordinate at its bound -> DomainError.
std::int64_t marginal_fd(const HypergridFunction& h, const Signature& x, std::int64_t i);

struct SubmodularityCounterexample {
    Signature x;
    std::int64_t i = 0;  // 0-based coordinate indices
    std::int64_t j = 0;
    std::int64_t lhs = 0;  // marginal_j(x)
    std::int64_t rhs = 0;  // marginal_j(x + e_i)

    // "x=<coords> i=<i> j=<j> lhs=<v> rhs=<v>" with 1-based indices.
    std::string to_string() const;
};

struct SubmodularityReport {
    bool ok = true;
    std::optional<SubmodularityCounterexample> counterexample;
    bool sampled = false;        // true when the grid exceeded the budget
    std::int64_t checked = 0;    // number of (x, i, j) triples examined
};

// Verifies the diminishing-marginals inequality marginal_j(x) >= marginal_j(x+e_i)
// for every grid point and coordinate pair where both sides are defined.
// Exhaustive when the grid fits in `budget` points (the values are cached in a
// flat array, so the cost is one evaluation per grid point plus O(r^2) integer
// compares per point); otherwise falls back to `budget` uniformly sampled
// triples and says so in the report. The exhaustive scan reports the
// lexicographically smallest violating triple.
SubmodularityReport submodularity_check(const HypergridFunction& h,
                                        std::int64_t budget = 10'000'000);

struct GridMinimum {
    std::int64_t value = 0;
    Signature argmin;
};

// Minimum over the 2^r corners (each coordinate 0 or its bound); ties toward
// the lexicographically smallest corner. For a submodular h this equals the
// global grid minimum in value (the maximal minimizer is a corner).
GridMinimum corner_minimum(const HypergridFunction& h);

// Exact minimum over the full grid by lexicographic scan (argmin is the
// lexicographically smallest). Grid larger than `budget` points -> ResourceError.
GridMinimum grid_minimum_bruteforce(const HypergridFunction& h,
                                    std::int64_t budget = 10'000'000);

}  // namespace partsub
