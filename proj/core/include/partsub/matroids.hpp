#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "partsub/hardfamily.hpp"
#include "partsub/hypergrid.hpp"

namespace partsub {

// A subset of the ground set as ascending element ids (ids 0..N-1).
using Set = std::vector<std::int64_t>;

// Nested matroid: a set S is independent iff for every t,
// sum_{s>=t} (x_s - tau_s) <= 0, where x is the signature of S with respect
// to the matroid's partition (parts in nesting order).
struct NestedMatroid {
    Partition partition;                    // parts 1..k in nesting order
    std::vector<std::int64_t> thresholds;   // tau_1..tau_k

    std::int64_t k() const { return static_cast<std::int64_t>(thresholds.size()); }
    std::int64_t ground_size() const { return partition.universe_size; }
    bool nonnegative_thresholds() const;
    void validate() const;  // ConfigError on shape mismatch
};

// Type-erased rank oracle; rank is monotone submodular with unit marginals.
struct RankOracle {
    std::int64_t ground_size = 0;
    std::function<std::int64_t(const Set&)> rank;
};

Signature matroid_signature(const NestedMatroid& m, const Set& s);

bool is_independent_sig(const NestedMatroid& m, const Signature& x);
bool is_independent(const NestedMatroid& m, const Set& s);

// rk(S) = ||x||_1 - max(0, max_t ell_t(x)); valid only when every threshold
// is non-negative (ConfigError otherwise).
std::int64_t rank_closed_form_sig(const NestedMatroid& m, const Signature& x);
std::int64_t rank_closed_form(const NestedMatroid& m, const Set& s);

// Independent oracle for the closed form: scan S in ascending id order and
// keep every element that preserves independence. In a matroid every maximal
// independent subset of S has size rk(S).
std::int64_t rank_greedy_oracle(const NestedMatroid& m, const Set& s);

RankOracle oracle_closed_form(const NestedMatroid& m);
RankOracle oracle_greedy(const NestedMatroid& m);

// rk*(S) = rk(U \ S) + |S| - rk(U), computed via three rank calls.
std::int64_t dual_rank(const RankOracle& m, const Set& s);

// Dual of a nested matroid: reversed part order with thresholds
// (n_k - tau_k, ..., n_1 - tau_1). ConfigError when some tau_i > n_i.
NestedMatroid dual_nested(const NestedMatroid& m);

// The three coarsenings of the r-part base partition used by the hard
// matroid-intersection instances.
struct HardMatroidPair {
    NestedMatroid m_odd;
    NestedMatroid m_even;
    NestedMatroid m_even_prime;
    Partition base;
    HardParams params;
};

HardMatroidPair build_hard_pair(const HardParams& p, const Partition& base);

struct IntersectionResult {
    std::int64_t size = 0;
    Set elements;               // sorted ascending
    std::int64_t augmentations = 0;
};

// Maximum-cardinality common independent set via the exchange-graph
// augmenting-path algorithm, driven purely by the two rank oracles.
// IntegrityError when the oracles return non-matroidal answers.
IntersectionResult intersection_max(const RankOracle& m1, const RankOracle& m2);

// Brute-force certification: enumerate all subsets. ResourceError when the
// ground set exceeds 20 elements.
IntersectionResult intersection_enumerate(const RankOracle& m1, const RankOracle& m2);

struct EdmondsMinResult {
    std::int64_t value = 0;
    // Signature over the common refinement attaining the minimum, and the
    // refinement itself (parts ordered by (part-in-m1, part-in-m2)).
    Signature refined_argmin;
    Partition refinement;
};

// min_S rk1(S) + rk2(U \ S). The objective depends only on the signature over
// the common refinement and is concave along each refined coordinate, so the
// minimum is attained at a corner; 2^m corner enumeration, m = refined parts.
EdmondsMinResult edmonds_min(const NestedMatroid& m1, const NestedMatroid& m2);

// Cross-check: full scan of the refined signature grid. ResourceError when
// the grid exceeds the budget.
EdmondsMinResult edmonds_min_grid(const NestedMatroid& m1, const NestedMatroid& m2,
                                  std::int64_t budget = 10'000'000);

struct MatDualReport {
    bool ok = true;
    std::int64_t c_constant = 0;      // |U| - rk_{m_even}(U)
    std::int64_t checked = 0;
    std::vector<std::string> violations;
};

// Checks rk_{M_odd}(S) + rk*_{M_even}(U\S) = C + h(x) over the exhaustive
// signature grid (when within budget) plus random element sets, and the primed
// identity with hhat. Violations are reported, not thrown.
MatDualReport verify_mat_dual_two(const HardParams& p, const Partition& base,
                                  std::int64_t random_sets = 200,
                                  std::uint64_t seed = 1,
                                  std::int64_t grid_budget = 10'000'000);

}  // namespace partsub
