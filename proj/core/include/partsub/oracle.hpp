#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "partsub/hardfamily.hpp"
#include "partsub/hypergrid.hpp"
#include "partsub/matroids.hpp"

namespace partsub {

// A single oracle query. Explicit queries carry element ids; implicit queries
// carry only a size and a draw seed — they are materialized as signatures
// drawn from the multivariate hypergeometric law of a uniform random subset
// of that size, never as element sets.
struct Query {
    enum class Kind { Explicit, Implicit };
    Kind kind = Kind::Explicit;
    Set elements;                 // explicit only
    std::int64_t size = 0;        // implicit only
    std::uint64_t draw_seed = 0;  // implicit only

    static Query explicit_set(Set elems);
    static Query implicit(std::int64_t size, std::uint64_t draw_seed);
};

struct TranscriptEntry {
    std::int64_t round = 0;
    std::int64_t query_id = 0;
    Query::Kind kind = Query::Kind::Explicit;
    std::int64_t size = 0;
    std::int64_t answer = 0;    // SFM value, or rank in m_odd in matroid mode
    std::int64_t answer2 = 0;   // matroid mode: rank in the chosen dual
};

// Round-accounting evaluation oracle over a hidden partition. SFM mode
// answers f/fhat/fhatprime values; matroid-pair mode answers rank pairs
// (rk in M_odd, rk in the chosen even dual) and accepts explicit queries only.
// Batches of more than budget() queries raise BudgetError without consuming
// the round.
class OracleSession {
public:
    OracleSession(const HardParams& p, Variant v, Partition hidden,
                  std::uint64_t seed);
    OracleSession(const HardParams& p, Variant v,
                  std::shared_ptr<const Partition> hidden, std::uint64_t seed);

    // Matroid-pair mode: M_odd plus the dual of M_even (primed=false) or of
    // M'_even (primed=true).
    static OracleSession matroid_pair(const HardParams& p, bool primed,
                                      Partition hidden, std::uint64_t seed);

    const HardParams& params() const { return params_; }
    std::int64_t round() const { return round_; }
    std::int64_t budget() const { return budget_; }
    std::uint64_t seed() const { return seed_; }
    std::int64_t queries_used() const { return queries_used_; }
    bool matroid_mode() const { return matroid_mode_; }
    const std::vector<TranscriptEntry>& transcript() const { return transcript_; }

    // SFM mode. Returns one value per query; increments the round (empty
    // batches included).
    std::vector<std::int64_t> submit_round(const std::vector<Query>& batch);

    // Matroid-pair mode; the combined batch shares the round budget.
    std::vector<std::pair<std::int64_t, std::int64_t>> submit_round_ranks(
        const std::vector<Query>& batch);

private:
    Signature query_signature(const Query& q);

    HardParams params_;
    Variant variant_ = Variant::F;
    std::shared_ptr<const Partition> hidden_;
    std::uint64_t seed_ = 0;
    bool matroid_mode_ = false;
    NestedMatroid m_first_, m_second_;  // matroid mode: M_odd and chosen dual
    std::int64_t round_ = 0;
    std::int64_t budget_ = 0;
    std::int64_t queries_used_ = 0;
    std::vector<TranscriptEntry> transcript_;
};

// Multi-round query strategy. next_batch is called once per round; receive
// hands back the answers for that batch (SFM values).
class RoundAlgorithm {
public:
    virtual ~RoundAlgorithm() = default;
    virtual std::vector<Query> next_batch(std::int64_t round) = 0;
    virtual void receive(const std::vector<Query>& batch,
                         const std::vector<std::int64_t>& answers) = 0;
};

// Uniformly random equipartition of {0..N-1} into r parts, with the given
// parts fixed as a prefix; deterministic in seed.
Partition sample_equipartition(std::int64_t N, std::int64_t r, std::uint64_t seed,
                               const std::vector<Set>& fixed_prefix = {});

struct GameQueryRow {
    std::int64_t round = 0;
    std::int64_t query_id = 0;
    Query::Kind kind = Query::Kind::Explicit;
    std::int64_t size = 0;
    std::int64_t answer_f = 0;
    std::int64_t answer_fhat = 0;
    bool balanced = true;
};

struct GameRoundVerdict {
    std::int64_t round = 0;
    std::uint64_t resample_seed = 0;
    std::int64_t checked = 0;      // balancedness checks performed this round
    bool all_balanced = true;
    std::int64_t answered = 0;
    bool answers_equal = true;     // f vs fhat within this round
};

struct GameRecord {
    std::uint64_t master_seed = 0;
    HardParams params;
    std::int64_t max_rounds = 0;
    std::vector<GameRoundVerdict> rounds;
    std::vector<GameQueryRow> rows;             // answered queries only
    std::optional<std::int64_t> failure_round;  // set when the algorithm wins
    std::optional<std::int64_t> failure_query;  // id of an unbalanced query
    bool transcripts_identical = true;
};

// The prefix-conditioned resampling game. At round l a fresh equipartition is
// drawn with parts 1..l-1 fixed to the previously revealed ones; every query
// from round i <= l must be i-balanced under it, otherwise the run stops with
// a recorded failure ("algorithm wins"). Surviving round-l queries are
// answered under both f and fhat on identical randomness, the algorithm sees
// the f answers, and part l is revealed. A run uses either explicit or
// implicit queries throughout; mixing the two is a domain error (the implicit
// signature coupling is exact only when no query is ever materialized).
GameRecord adversary_game(RoundAlgorithm& alg, const HardParams& p,
                          std::int64_t max_rounds, std::uint64_t master_seed);

struct BalancednessStats {
    std::int64_t trials = 0;
    double fraction_balanced = 0.0;
    double max_deviation = 0.0;  // max_j |X_j - tail mean| over all trials
    double yardstick = 0.0;      // g/16
};

// Empirical Lemma i-good: draws signatures of uniform random subsets of the
// given sizes and reports how often they are i-balanced, plus the largest
// tail deviation against the g/16 yardstick.
BalancednessStats balancedness_stats(const HardParams& p,
                                     const std::vector<std::int64_t>& query_sizes,
                                     std::int64_t i, std::int64_t trials,
                                     std::uint64_t seed);

struct CoupledTrial {
    std::int64_t trial = 0;
    std::int64_t first_divergence_round = -1;  // -1: never diverged
};

struct CoupledSummary {
    std::int64_t trials = 0;
    std::int64_t distinguished = 0;
    std::vector<CoupledTrial> per_trial;
};

// Runs the algorithm against F and FHAT sessions sharing one hidden partition
// and seed; reports the first round (if any) where an answer differs.
using AlgorithmFactory =
    std::function<std::unique_ptr<RoundAlgorithm>(std::uint64_t trial_seed)>;

CoupledSummary coupled_distinguish(const AlgorithmFactory& make_algorithm,
                                   const HardParams& p, std::int64_t rounds,
                                   std::int64_t trials, std::uint64_t seed);

}  // namespace partsub
