#pragma once

#include <cstdint>
#include <memory>

#include "partsub/oracle.hpp"

namespace partsub {

struct SolverReport {
    std::int64_t min_value = 0;
    Signature argmin_signature;   // signature of the reported minimizer
    Set argmin_set;               // a concrete set attaining it (may be empty)
    std::int64_t rounds = 0;
    std::int64_t queries = 0;
    Variant detected_variant = Variant::F;
};

// Adaptive exact minimizer for hidden r=3 instances. Knows HardParams but not
// the partition or variant; uses only the session's value oracle.
//
// Round 1 probes U minus each single element: the part-1 elements are exactly
// those whose removal does not raise the value (true under every variant).
// Round 2 queries the known sets {∅, P1, U∖P1, U}. The base variant and the
// last-coordinate truncation agree on all four — they agree on every set
// buildable from P1 and its complement — but truncating every coordinate past
// the cut lowers U∖P1 by n/2 - 7g/4, so round 2 either settles on that
// variant (whose grid minimum sits on one of the two probed corners) or
// narrows the field to the other two. Round 3 submits nested ascending chains
// over U∖P1 and decodes each chain's value path under both surviving
// hypotheses: above the truncation threshold the value pins the chain's
// part-2 count, so consecutive decodable states label the element between
// them, and a hypothesis whose decode turns self-contradictory is convicted.
// Round 4 is decisive: a probe of theta+1 elements believed to lie in part 3
// answers theta-1 under the truncated variant and theta under the base one
// when the belief is right, and theta+1 under either when it is wrong — so
// an answer of theta-1 or theta certifies the variant and cannot be faked.
// The base variant's minimum is 0 at ∅; the truncated one's is -g/2 at P3,
// completed if needed by one finisher chain and confirmed by probing P3.
//
// Sessions with r != 3 are rejected with ConfigError: the certified
// identification scheme is specific to three parts. Identifying middle parts
// at larger r needs random subsets to concentrate within the balance slack,
// which fails when g^2 is small next to n, so no exact scheme is offered.
// Needs a session with c = 2 (the chain round submits ~100n queries).
SolverReport sequential_minimize(OracleSession& sess);

// Emits per_round uniform random queries of the given size each round,
// ignoring answers. Implicit queries carry derived draw seeds; explicit ones
// materialize random subsets.
std::unique_ptr<RoundAlgorithm> random_querier(const HardParams& p,
                                               std::int64_t per_round,
                                               std::int64_t query_size,
                                               bool implicit, std::uint64_t seed);

// Adaptive baseline: each round queries the best set found so far plus
// single-element toggles of the next probes_per_round elements, then moves to
// the best answer. No correctness contract; exercises adaptive transcripts.
std::unique_ptr<RoundAlgorithm> greedy_marginal_probe(const HardParams& p,
                                                      std::int64_t probes_per_round,
                                                      std::uint64_t seed);

}  // namespace partsub
