#include "partsub/solvers.hpp"

#include <algorithm>
#include <iterator>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "partsub/errors.hpp"
#include "partsub/rng.hpp"

namespace partsub {

namespace {

constexpr std::int64_t kChainsPerRound = 50;
constexpr std::uint64_t kChainSalt = 0xc4a195ull;

// ---- round 1: part 1 from leave-one-out probes on the full ground set ----
//
// At the full set every suffix statistic is far above its threshold, so
// removing a part-1 element leaves the value unchanged while removing any
// deeper element raises it by exactly one. Holds under all three variants.
Set identify_part1(OracleSession& sess) {
    const HardParams& p = sess.params();
    std::vector<Query> batch;
    batch.reserve(static_cast<std::size_t>(p.N));
    for (std::int64_t e = 0; e < p.N; ++e) {
        Set s;
        s.reserve(static_cast<std::size_t>(p.N - 1));
        for (std::int64_t x = 0; x < p.N; ++x)
            if (x != e) s.push_back(x);
        batch.push_back(Query::explicit_set(std::move(s)));
    }
    std::vector<std::int64_t> ans = sess.submit_round(batch);
    std::int64_t lo = *std::min_element(ans.begin(), ans.end());
    std::int64_t hi = *std::max_element(ans.begin(), ans.end());
    if (hi != lo + 1)
        throw IntegrityError(
            "leave-one-out probes did not split into two unit-gap classes");
    Set part1;
    for (std::int64_t e = 0; e < p.N; ++e)
        if (ans[static_cast<std::size_t>(e)] == lo) part1.push_back(e);
    if (static_cast<std::int64_t>(part1.size()) != p.n)
        throw IntegrityError("leave-one-out low class has size " +
                             std::to_string(part1.size()) + ", expected " +
                             std::to_string(p.n));
    return part1;
}

// ---- round 2: screening out the all-coordinate truncation ----
//
// Every set buildable after round 1 is a union drawn from {P1, U minus P1},
// so its signature is certain, and on every certain signature the base
// variant and the last-coordinate truncation agree — at (0, n, n) both give
// 5*tau + 2*gamma - 2*n. Truncating every coordinate past the cut instead
// gives 4*theta - gamma - 2*n there, lower by n/2 - 7g/4 > 0. Round 2 can
// therefore settle on that variant or narrow the field to the other two,
// but it cannot split the pair; that takes the chain round.
//
// Returns true when the probes match the all-truncated variant.
bool screen_all_truncated(const HardParams& p,
                          const std::vector<std::int64_t>& ans) {
    const Signature sig_zero = {0, 0, 0};
    const Signature sig_p1 = {p.n, 0, 0};
    const Signature sig_t2 = {0, p.n, p.n};
    const Signature sig_full = {p.n, p.n, p.n};
    if (ans[2] == variant_value(p, sig_t2, Variant::FHATPRIME)) {
        if (variant_value(p, sig_zero, Variant::FHATPRIME) != ans[0] ||
            variant_value(p, sig_p1, Variant::FHATPRIME) != ans[1] ||
            variant_value(p, sig_full, Variant::FHATPRIME) != ans[3])
            throw IntegrityError(
                "corner probes inconsistent with the all-truncated variant");
        return true;
    }
    if (ans[2] != variant_value(p, sig_t2, Variant::F))
        throw IntegrityError(
            "value at U minus part 1 matches no variant closed form");
    for (Variant v : {Variant::F, Variant::FHAT}) {
        if (variant_value(p, sig_zero, v) != ans[0] ||
            variant_value(p, sig_p1, v) != ans[1] ||
            variant_value(p, sig_full, v) != ans[3])
            throw IntegrityError(
                "corner probes inconsistent with the surviving variants");
    }
    return false;
}

// ---- chain decoding under a variant hypothesis (r = 3) ----
//
// Along a nested chain inside U minus part 1 the signature is (0, y2, w-y2).
// Scanning every candidate y2 and accepting only a unique value match
// recovers y2 exactly or abstains; under the true variant it never misreads
// a state. (Below the truncation threshold the value is flat in y2, so those
// states abstain on their own.)
std::optional<std::int64_t> decode_y2(const HardParams& p, std::int64_t w,
                                      std::int64_t value, Variant v) {
    std::optional<std::int64_t> hit;
    const std::int64_t lo = std::max<std::int64_t>(0, w - p.n);
    const std::int64_t hi = std::min(w, p.n);
    for (std::int64_t y2 = lo; y2 <= hi; ++y2) {
        if (variant_value(p, Signature{0, y2, w - y2}, v) != value) continue;
        if (hit) return std::nullopt;  // flat zone: not uniquely invertible
        hit = y2;
    }
    return hit;
}

// Classify elements between consecutive decodable chain states; label[] holds
// 0 (unknown), 2, or 3 per element id. Returns false when the answers are
// inconsistent with the hypothesis (a non-unit step or a label conflict),
// which convicts the hypothesis: under the true variant neither can happen.
[[nodiscard]] bool decode_chain(const HardParams& p, const Set& order,
                                const std::vector<std::int64_t>& values,
                                Variant v, std::vector<int>& label) {
    std::optional<std::int64_t> prev = 0;  // the empty prefix has y2 = 0
    for (std::size_t w = 1; w <= order.size(); ++w) {
        std::optional<std::int64_t> cur =
            decode_y2(p, static_cast<std::int64_t>(w), values[w - 1], v);
        if (prev && cur) {
            const std::int64_t d = *cur - *prev;
            if (d != 0 && d != 1) return false;
            const int part = d == 1 ? 2 : 3;
            const std::int64_t e = order[w - 1];
            auto& slot = label[static_cast<std::size_t>(e)];
            if (slot != 0 && slot != part) return false;
            slot = part;
        }
        prev = cur;
    }
    return true;
}

// One round's worth of seeded random chain orders with the answers to every
// prefix, kept raw so they can be decoded under each hypothesis in turn.
struct ChainData {
    std::vector<Set> orders;
    std::vector<std::vector<std::int64_t>> values;  // per order, per prefix
};

std::vector<Query> prefix_queries(const std::vector<Set>& orders) {
    std::vector<Query> batch;
    for (const Set& order : orders) {
        for (std::size_t w = 1; w <= order.size(); ++w) {
            Set s(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(w));
            std::sort(s.begin(), s.end());
            batch.push_back(Query::explicit_set(std::move(s)));
        }
    }
    return batch;
}

ChainData run_chain_round(OracleSession& sess, const Set& t2) {
    ChainData out;
    const std::uint64_t base = derive_seed(sess.seed(), kChainSalt);
    out.orders.reserve(static_cast<std::size_t>(kChainsPerRound));
    for (std::int64_t k = 0; k < kChainsPerRound; ++k) {
        Rng rng(derive_seed(base, 1, static_cast<std::uint64_t>(k)));
        std::vector<std::int64_t> idx = sample_without_replacement(
            rng, static_cast<std::int64_t>(t2.size()),
            static_cast<std::int64_t>(t2.size()));
        Set order;
        order.reserve(t2.size());
        for (std::int64_t i : idx) order.push_back(t2[static_cast<std::size_t>(i)]);
        out.orders.push_back(std::move(order));
    }
    std::vector<std::int64_t> ans = sess.submit_round(prefix_queries(out.orders));
    std::size_t off = 0;
    for (const Set& order : out.orders) {
        out.values.emplace_back(
            ans.begin() + static_cast<std::ptrdiff_t>(off),
            ans.begin() + static_cast<std::ptrdiff_t>(off + order.size()));
        off += order.size();
    }
    return out;
}

// Element labels accumulated by decoding every chain under one hypothesis.
struct HypothesisLabels {
    bool consistent = true;
    std::vector<int> label;          // by element id: 0 unknown, 2, or 3
    Set known2, known3, unresolved;  // within t2, ascending
};

void collect_label_sets(const Set& t2, HypothesisLabels& hl) {
    hl.known2.clear();
    hl.known3.clear();
    hl.unresolved.clear();
    for (std::int64_t e : t2) {
        switch (hl.label[static_cast<std::size_t>(e)]) {
            case 2: hl.known2.push_back(e); break;
            case 3: hl.known3.push_back(e); break;
            default: hl.unresolved.push_back(e); break;
        }
    }
}

HypothesisLabels decode_under(const HardParams& p, const ChainData& chains,
                              const Set& t2, Variant v) {
    HypothesisLabels hl;
    hl.label.assign(static_cast<std::size_t>(p.N), 0);
    for (std::size_t k = 0; k < chains.orders.size(); ++k) {
        if (!decode_chain(p, chains.orders[k], chains.values[k], v, hl.label)) {
            hl.consistent = false;
            return hl;
        }
    }
    collect_label_sets(t2, hl);
    return hl;
}

}  // namespace

SolverReport sequential_minimize(OracleSession& sess) {
    const HardParams& p = sess.params();
    if (sess.matroid_mode())
        throw DomainError("sequential_minimize needs a value-oracle session");
    if (sess.round() != 0)
        throw DomainError("sequential_minimize needs a fresh session");
    if (p.r != 3)
        throw ConfigError(
            "sequential_minimize handles r = 3 instances only: the certified "
            "part-identification scheme does not extend to deeper parts");
    if (!p.structural_ok())
        throw ConfigError(
            "sequential_minimize needs structurally admissible parameters: "
            "its variant certificates rely on 5*g*r <= n");
    const std::int64_t chain_queries = kChainsPerRound * 2 * p.n;
    // rounds 1..5 worst case: N + 4 + chains + (finisher 2n + 3 probes) + 1
    const std::int64_t needed = p.N + chain_queries + 2 * p.n + 8;
    if (sess.budget() < needed)
        throw ConfigError("session budget " + std::to_string(sess.budget()) +
                          " cannot fit the solver's " + std::to_string(needed) +
                          " worst-case queries; instantiate the params with "
                          "c = 2");

    Set part1 = identify_part1(sess);
    std::vector<char> in1(static_cast<std::size_t>(p.N), 0);
    for (std::int64_t e : part1) in1[static_cast<std::size_t>(e)] = 1;
    Set t2;
    t2.reserve(static_cast<std::size_t>(p.N - p.n));
    Set full;
    full.reserve(static_cast<std::size_t>(p.N));
    for (std::int64_t e = 0; e < p.N; ++e) {
        full.push_back(e);
        if (!in1[static_cast<std::size_t>(e)]) t2.push_back(e);
    }

    std::vector<Query> corner_probe;
    corner_probe.push_back(Query::explicit_set({}));
    corner_probe.push_back(Query::explicit_set(part1));
    corner_probe.push_back(Query::explicit_set(t2));
    corner_probe.push_back(Query::explicit_set(full));
    std::vector<std::int64_t> ans = sess.submit_round(corner_probe);

    SolverReport rep;
    if (screen_all_truncated(p, ans)) {
        // Filling any coordinate at or past the truncation cut lowers the
        // value, so the grid minimum lies on a corner that is full past the
        // cut: U minus part 1 or U itself, both already probed.
        if (ans[2] <= ans[3]) {
            rep.min_value = ans[2];
            rep.argmin_signature = {0, p.n, p.n};
            rep.argmin_set = t2;
        } else {
            rep.min_value = ans[3];
            rep.argmin_signature = {p.n, p.n, p.n};
            rep.argmin_set = full;
        }
        rep.detected_variant = Variant::FHATPRIME;
        rep.rounds = sess.round();
        rep.queries = sess.queries_used();
        return rep;
    }

    // Round 3: chains over U minus part 1, decoded under both hypotheses.
    ChainData chains = run_chain_round(sess, t2);
    HypothesisLabels base = decode_under(p, chains, t2, Variant::F);
    HypothesisLabels trunc = decode_under(p, chains, t2, Variant::FHAT);
    if (!base.consistent && !trunc.consistent)
        throw IntegrityError("chain answers fit neither remaining variant");

    // Round 4: discrimination probes (theta + 1 believed part-3 elements per
    // hypothesis), plus whatever the truncated hypothesis still needs — the
    // finisher chain, or the full believed part 3 when already complete.
    const std::int64_t probe_size = p.theta + 1;
    std::vector<Query> batch;
    std::ptrdiff_t idx_trunc = -1;
    std::ptrdiff_t idx_base = -1;
    std::ptrdiff_t idx_part3 = -1;
    std::ptrdiff_t finisher_off = -1;
    Set finisher_order;
    if (trunc.consistent &&
        static_cast<std::int64_t>(trunc.known3.size()) >= probe_size) {
        idx_trunc = static_cast<std::ptrdiff_t>(batch.size());
        batch.push_back(Query::explicit_set(
            Set(trunc.known3.begin(), trunc.known3.begin() + probe_size)));
    }
    if (base.consistent &&
        static_cast<std::int64_t>(base.known3.size()) >= probe_size) {
        idx_base = static_cast<std::ptrdiff_t>(batch.size());
        batch.push_back(Query::explicit_set(
            Set(base.known3.begin(), base.known3.begin() + probe_size)));
    }
    if (trunc.consistent) {
        if (trunc.unresolved.empty()) {
            if (static_cast<std::int64_t>(trunc.known3.size()) == p.n) {
                idx_part3 = static_cast<std::ptrdiff_t>(batch.size());
                batch.push_back(Query::explicit_set(trunc.known3));
            }
        } else {
            // The finisher chain [known 3 | unresolved | known 2] is
            // decodable across the whole unresolved block: the known part-3
            // prefix opens the invertible band before the block and the
            // part-2 count cannot reach 2*tau until the known suffix.
            const bool band_opens =
                static_cast<std::int64_t>(trunc.known3.size()) >= p.theta + 1;
            const bool band_stays_open =
                p.n - static_cast<std::int64_t>(trunc.known2.size()) <=
                2 * p.tau - 1;
            if (band_opens && band_stays_open) {
                finisher_order.reserve(t2.size());
                finisher_order.insert(finisher_order.end(),
                                      trunc.known3.begin(), trunc.known3.end());
                finisher_order.insert(finisher_order.end(),
                                      trunc.unresolved.begin(),
                                      trunc.unresolved.end());
                finisher_order.insert(finisher_order.end(),
                                      trunc.known2.begin(), trunc.known2.end());
                finisher_off = static_cast<std::ptrdiff_t>(batch.size());
                std::vector<Query> prefixes = prefix_queries({finisher_order});
                std::move(prefixes.begin(), prefixes.end(),
                          std::back_inserter(batch));
            }
        }
    }
    if (idx_trunc < 0 && idx_base < 0)
        throw IntegrityError(
            "too few classified elements to build discrimination probes");
    std::vector<std::int64_t> probes = sess.submit_round(batch);

    // An answer of theta - 1 certifies the last-coordinate truncation and
    // theta certifies the base variant; theta + 1 means that probe's belief
    // was wrong and says nothing. Neither certificate can be faked.
    std::optional<Variant> verdict;
    auto apply_verdict = [&](std::ptrdiff_t idx) {
        if (idx < 0) return;
        std::optional<Variant> v;
        if (probes[static_cast<std::size_t>(idx)] == p.theta - 1)
            v = Variant::FHAT;
        else if (probes[static_cast<std::size_t>(idx)] == p.theta)
            v = Variant::F;
        else
            return;
        if (verdict && *verdict != *v)
            throw IntegrityError(
                "discrimination probes certified contradictory variants");
        verdict = v;
    };
    apply_verdict(idx_trunc);
    apply_verdict(idx_base);

    Variant v;
    if (verdict) {
        v = *verdict;
        if ((v == Variant::F && !base.consistent) ||
            (v == Variant::FHAT && !trunc.consistent))
            throw IntegrityError(
                "certified variant contradicts the chain decode");
    } else if (base.consistent != trunc.consistent) {
        v = base.consistent ? Variant::F : Variant::FHAT;
    } else {
        throw IntegrityError("discrimination probes were inconclusive");
    }

    if (v == Variant::F) {
        // the base variant is nonnegative with value 0 at the empty set
        rep.min_value = ans[0];
        rep.argmin_signature = {0, 0, 0};
        rep.argmin_set = {};
        rep.detected_variant = v;
        rep.rounds = sess.round();
        rep.queries = sess.queries_used();
        return rep;
    }

    // Last-coordinate truncation: the grid minimum is -g/2 at part 3 alone.
    std::int64_t part3_value = 0;
    if (trunc.unresolved.empty()) {
        if (idx_part3 < 0)
            throw IntegrityError("tail split produced parts of sizes " +
                                 std::to_string(trunc.known2.size()) + " and " +
                                 std::to_string(trunc.known3.size()));
        part3_value = probes[static_cast<std::size_t>(idx_part3)];
    } else {
        if (finisher_off < 0)
            throw IntegrityError(
                "chain round left too few anchors to finish the tail split");
        std::vector<std::int64_t> vals(
            probes.begin() + finisher_off,
            probes.begin() + finisher_off +
                static_cast<std::ptrdiff_t>(finisher_order.size()));
        if (!decode_chain(p, finisher_order, vals, Variant::FHAT, trunc.label))
            throw IntegrityError(
                "finisher chain answers inconsistent with the certified "
                "variant");
        collect_label_sets(t2, trunc);
        if (!trunc.unresolved.empty())
            throw IntegrityError("tail split incomplete after finisher chain");
        if (static_cast<std::int64_t>(trunc.known2.size()) != p.n ||
            static_cast<std::int64_t>(trunc.known3.size()) != p.n)
            throw IntegrityError("tail split produced parts of sizes " +
                                 std::to_string(trunc.known2.size()) + " and " +
                                 std::to_string(trunc.known3.size()));
        // Round 5: confirm the completed part 3 attains the minimum.
        std::vector<std::int64_t> confirm =
            sess.submit_round({Query::explicit_set(trunc.known3)});
        part3_value = confirm[0];
    }
    const std::int64_t expected =
        variant_value(p, Signature{0, 0, p.n}, Variant::FHAT);
    if (part3_value != expected)
        throw IntegrityError("part-3 probe does not attain the certified "
                             "minimum of the truncated variant");
    rep.min_value = expected;
    rep.argmin_signature = {0, 0, p.n};
    rep.argmin_set = trunc.known3;
    rep.detected_variant = v;
    rep.rounds = sess.round();
    rep.queries = sess.queries_used();
    return rep;
}

namespace {

class RandomQuerier final : public RoundAlgorithm {
public:
    RandomQuerier(const HardParams& p, std::int64_t per_round,
                  std::int64_t query_size, bool implicit, std::uint64_t seed)
        : p_(p), per_round_(per_round), size_(query_size), implicit_(implicit),
          seed_(seed) {
        if (per_round_ < 1) throw DomainError("per_round must be positive");
        if (size_ < 0 || size_ > p_.N)
            throw DomainError("query size out of range");
    }

    std::vector<Query> next_batch(std::int64_t round) override {
        std::vector<Query> batch;
        batch.reserve(static_cast<std::size_t>(per_round_));
        for (std::int64_t j = 0; j < per_round_; ++j) {
            const std::uint64_t qs = derive_seed(
                seed_, static_cast<std::uint64_t>(round),
                static_cast<std::uint64_t>(j));
            if (implicit_) {
                batch.push_back(Query::implicit(size_, qs));
            } else {
                Rng rng(qs);
                Set s = sample_without_replacement(rng, p_.N, size_);
                std::sort(s.begin(), s.end());
                batch.push_back(Query::explicit_set(std::move(s)));
            }
        }
        return batch;
    }

    void receive(const std::vector<Query>&,
                 const std::vector<std::int64_t>&) override {}

private:
    HardParams p_;
    std::int64_t per_round_;
    std::int64_t size_;
    bool implicit_;
    std::uint64_t seed_;
};

class GreedyMarginalProbe final : public RoundAlgorithm {
public:
    GreedyMarginalProbe(const HardParams& p, std::int64_t probes_per_round,
                        std::uint64_t seed)
        : p_(p), per_round_(probes_per_round) {
        if (per_round_ < 1) throw DomainError("probes_per_round must be positive");
        Rng rng(derive_seed(seed, 0x9eedull));
        probe_order_ = sample_without_replacement(rng, p_.N, p_.N);
    }

    std::vector<Query> next_batch(std::int64_t) override {
        std::vector<Query> batch;
        batch.reserve(static_cast<std::size_t>(per_round_) + 1);
        batch.push_back(Query::explicit_set(best_));
        for (std::int64_t j = 0; j < per_round_; ++j) {
            const std::int64_t e =
                probe_order_[static_cast<std::size_t>(cursor_)];
            cursor_ = (cursor_ + 1) % p_.N;
            batch.push_back(Query::explicit_set(toggled(e)));
        }
        return batch;
    }

    void receive(const std::vector<Query>& batch,
                 const std::vector<std::int64_t>& answers) override {
        std::size_t best = 0;
        for (std::size_t i = 1; i < answers.size(); ++i)
            if (answers[i] < answers[best]) best = i;
        best_ = batch[best].elements;
    }

private:
    Set toggled(std::int64_t e) const {
        Set s = best_;
        auto it = std::lower_bound(s.begin(), s.end(), e);
        if (it != s.end() && *it == e)
            s.erase(it);
        else
            s.insert(it, e);
        return s;
    }

    HardParams p_;
    std::int64_t per_round_;
    Set best_;  // kept sorted: toggles preserve order
    std::vector<std::int64_t> probe_order_;
    std::int64_t cursor_ = 0;
};

}  // namespace

std::unique_ptr<RoundAlgorithm> random_querier(const HardParams& p,
                                               std::int64_t per_round,
                                               std::int64_t query_size,
                                               bool implicit,
                                               std::uint64_t seed) {
    return std::make_unique<RandomQuerier>(p, per_round, query_size, implicit,
                                           seed);
}

std::unique_ptr<RoundAlgorithm> greedy_marginal_probe(
    const HardParams& p, std::int64_t probes_per_round, std::uint64_t seed) {
    return std::make_unique<GreedyMarginalProbe>(p, probes_per_round, seed);
}

}  // namespace partsub
