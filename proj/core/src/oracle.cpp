#include "partsub/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "partsub/errors.hpp"
#include "partsub/rng.hpp"

namespace partsub {

Query Query::explicit_set(Set elems) {
    Query q;
    q.kind = Kind::Explicit;
    q.elements = std::move(elems);
    q.size = static_cast<std::int64_t>(q.elements.size());
    return q;
}

Query Query::implicit(std::int64_t size, std::uint64_t draw_seed) {
    Query q;
    q.kind = Kind::Implicit;
    q.size = size;
    q.draw_seed = draw_seed;
    return q;
}

namespace {

void validate_explicit(const Set& elems, std::int64_t ground) {
    Set sorted = elems;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] < 0 || sorted[i] >= ground)
            throw DomainError("query element " + std::to_string(sorted[i]) +
                              " outside the ground set [0, " +
                              std::to_string(ground) + ")");
        if (i > 0 && sorted[i] == sorted[i - 1])
            throw DomainError("query contains element " +
                              std::to_string(sorted[i]) + " twice");
    }
}

void check_session_partition(const HardParams& p, const Partition& hidden) {
    hidden.validate();
    if (hidden.parts() != p.r || hidden.universe_size != p.N)
        throw ConfigError("hidden partition shape does not match params");
    for (std::int64_t sz : hidden.part_sizes)
        if (sz != p.n)
            throw ConfigError("hidden partition must be an equipartition with "
                              "part size " + std::to_string(p.n));
}

}  // namespace

OracleSession::OracleSession(const HardParams& p, Variant v, Partition hidden,
                             std::uint64_t seed)
    : OracleSession(p, v, std::make_shared<const Partition>(std::move(hidden)),
                    seed) {}

OracleSession::OracleSession(const HardParams& p, Variant v,
                             std::shared_ptr<const Partition> hidden,
                             std::uint64_t seed)
    : params_(p), variant_(v), hidden_(std::move(hidden)), seed_(seed) {
    check_session_partition(params_, *hidden_);
    budget_ = params_.budget();
}

OracleSession OracleSession::matroid_pair(const HardParams& p, bool primed,
                                          Partition hidden, std::uint64_t seed) {
    OracleSession sess(p, Variant::F, std::move(hidden), seed);
    HardMatroidPair pair = build_hard_pair(p, *sess.hidden_);
    sess.matroid_mode_ = true;
    sess.m_first_ = pair.m_odd;
    sess.m_second_ = dual_nested(primed ? pair.m_even_prime : pair.m_even);
    return sess;
}

Signature OracleSession::query_signature(const Query& q) {
    if (q.kind == Query::Kind::Explicit)
        return signature(*hidden_, q.elements);
    Rng rng(derive_seed(seed_, q.draw_seed, static_cast<std::uint64_t>(round_ + 1)));
    return multivariate_hypergeometric(rng, hidden_->part_sizes, q.size);
}

std::vector<std::int64_t> OracleSession::submit_round(
    const std::vector<Query>& batch) {
    if (matroid_mode_)
        throw DomainError("matroid-pair session answers rank pairs; "
                          "use submit_round_ranks");
    if (static_cast<std::int64_t>(batch.size()) > budget_)
        throw BudgetError("batch of " + std::to_string(batch.size()) +
                          " queries exceeds the per-round budget of " +
                          std::to_string(budget_));
    for (const Query& q : batch) {
        if (q.kind == Query::Kind::Explicit)
            validate_explicit(q.elements, params_.N);
        else if (q.size < 0 || q.size > params_.N)
            throw DomainError("implicit query size " + std::to_string(q.size) +
                              " outside [0, N=" + std::to_string(params_.N) + "]");
    }
    std::vector<std::int64_t> answers;
    answers.reserve(batch.size());
    for (const Query& q : batch) {
        Signature sig = query_signature(q);
        std::int64_t value = variant_value(params_, sig, variant_);
        TranscriptEntry e;
        e.round = round_ + 1;
        e.query_id = static_cast<std::int64_t>(transcript_.size());
        e.kind = q.kind;
        e.size = q.kind == Query::Kind::Explicit
                     ? static_cast<std::int64_t>(q.elements.size())
                     : q.size;
        e.answer = value;
        transcript_.push_back(e);
        answers.push_back(value);
    }
    queries_used_ += static_cast<std::int64_t>(batch.size());
    ++round_;
    return answers;
}

std::vector<std::pair<std::int64_t, std::int64_t>> OracleSession::submit_round_ranks(
    const std::vector<Query>& batch) {
    if (!matroid_mode_)
        throw DomainError("rank pairs are only available in matroid-pair mode");
    if (static_cast<std::int64_t>(batch.size()) > budget_)
        throw BudgetError("batch of " + std::to_string(batch.size()) +
                          " queries exceeds the per-round budget of " +
                          std::to_string(budget_));
    for (const Query& q : batch) {
        if (q.kind != Query::Kind::Explicit)
            throw DomainError("implicit queries are forbidden in matroid mode");
        validate_explicit(q.elements, params_.N);
    }
    std::vector<std::pair<std::int64_t, std::int64_t>> answers;
    answers.reserve(batch.size());
    for (const Query& q : batch) {
        std::int64_t r1 = rank_closed_form(m_first_, q.elements);
        std::int64_t r2 = rank_closed_form(m_second_, q.elements);
        TranscriptEntry e;
        e.round = round_ + 1;
        e.query_id = static_cast<std::int64_t>(transcript_.size());
        e.kind = q.kind;
        e.size = static_cast<std::int64_t>(q.elements.size());
        e.answer = r1;
        e.answer2 = r2;
        transcript_.push_back(e);
        answers.emplace_back(r1, r2);
    }
    queries_used_ += static_cast<std::int64_t>(batch.size());
    ++round_;
    return answers;
}

Partition sample_equipartition(std::int64_t N, std::int64_t r, std::uint64_t seed,
                               const std::vector<Set>& fixed_prefix) {
    if (r < 1 || N < r || N % r != 0)
        throw DomainError("cannot equipartition " + std::to_string(N) +
                          " elements into " + std::to_string(r) + " parts");
    const std::int64_t n = N / r;
    if (static_cast<std::int64_t>(fixed_prefix.size()) > r)
        throw DomainError("prefix has more parts than the partition");

    Partition p;
    p.universe_size = N;
    p.seed = seed;
    p.part_sizes.assign(static_cast<std::size_t>(r), n);
    p.part_of.assign(static_cast<std::size_t>(N), 0);

    std::int64_t k = 0;
    for (const Set& part : fixed_prefix) {
        ++k;
        if (static_cast<std::int64_t>(part.size()) != n)
            throw DomainError("prefix part " + std::to_string(k) + " has " +
                              std::to_string(part.size()) + " elements, expected " +
                              std::to_string(n));
        for (std::int64_t e : part) {
            if (e < 0 || e >= N)
                throw DomainError("prefix element " + std::to_string(e) +
                                  " outside the ground set");
            if (p.part_of[static_cast<std::size_t>(e)] != 0)
                throw DomainError("prefix parts overlap at element " +
                                  std::to_string(e));
            p.part_of[static_cast<std::size_t>(e)] = static_cast<std::int32_t>(k);
        }
    }

    Set remaining;
    remaining.reserve(static_cast<std::size_t>(N - k * n));
    for (std::int64_t e = 0; e < N; ++e)
        if (p.part_of[static_cast<std::size_t>(e)] == 0) remaining.push_back(e);

    Rng rng(derive_seed(seed, 0x45715054ull));
    for (std::size_t i = remaining.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(remaining[i - 1], remaining[j]);
    }
    for (std::size_t idx = 0; idx < remaining.size(); ++idx) {
        std::int64_t part = k + 1 + static_cast<std::int64_t>(idx) / n;
        p.part_of[static_cast<std::size_t>(remaining[idx])] =
            static_cast<std::int32_t>(part);
    }
    p.validate();
    return p;
}

GameRecord adversary_game(RoundAlgorithm& alg, const HardParams& p,
                          std::int64_t max_rounds, std::uint64_t master_seed) {
    if (max_rounds < 1)
        throw DomainError("the game needs at least one round");

    GameRecord rec;
    rec.master_seed = master_seed;
    rec.params = p;
    rec.max_rounds = max_rounds;

    const std::int64_t budget = p.budget();
    enum class Mode { Unset, Explicit, Implicit };
    Mode mode = Mode::Unset;

    struct LiveQuery {
        std::int64_t id = 0;
        std::int64_t round = 0;   // submission round
        std::int64_t size = 0;
        Set elems;                          // explicit mode
        std::vector<std::int64_t> frozen;   // implicit mode: coords of revealed parts
        std::size_t row = static_cast<std::size_t>(-1);
    };
    std::vector<LiveQuery> live;
    std::vector<Set> revealed;  // explicit mode only
    std::int64_t next_id = 0;

    auto round_resample_seed = [master_seed](std::int64_t round) {
        return derive_seed(master_seed, 0xad7e5a11ull,
                           static_cast<std::uint64_t>(round));
    };

    for (std::int64_t round = 1; round <= max_rounds; ++round) {
        std::vector<Query> batch = alg.next_batch(round);
        if (static_cast<std::int64_t>(batch.size()) > budget)
            throw BudgetError("round " + std::to_string(round) + " batch of " +
                              std::to_string(batch.size()) +
                              " queries exceeds the budget of " +
                              std::to_string(budget));
        for (const Query& q : batch) {
            if (q.kind == Query::Kind::Explicit) {
                if (mode == Mode::Implicit)
                    throw DomainError("a game run must not mix explicit and "
                                      "implicit queries");
                mode = Mode::Explicit;
                validate_explicit(q.elements, p.N);
            } else {
                if (mode == Mode::Explicit)
                    throw DomainError("a game run must not mix explicit and "
                                      "implicit queries");
                mode = Mode::Implicit;
                if (q.size < 0 || q.size > p.N)
                    throw DomainError("implicit query size " +
                                      std::to_string(q.size) + " outside [0, N]");
            }
        }

        // Reveals from query-free earlier rounds are reproducible from their
        // seeds; catch up before the first explicit batch needs them.
        if (mode == Mode::Explicit &&
            static_cast<std::int64_t>(revealed.size()) < std::min(round - 1, p.r)) {
            for (std::int64_t past =
                     static_cast<std::int64_t>(revealed.size()) + 1;
                 past < std::min(round, p.r + 1); ++past) {
                Partition gp = sample_equipartition(
                    p.N, p.r, round_resample_seed(past), revealed);
                revealed.push_back(gp.part_elements(past));
            }
        }

        for (const Query& q : batch) {
            LiveQuery lq;
            lq.id = next_id++;
            lq.round = round;
            if (q.kind == Query::Kind::Explicit) {
                lq.elems = q.elements;
                lq.size = static_cast<std::int64_t>(q.elements.size());
            } else {
                lq.size = q.size;
                // The query's intersection with already-revealed parts is
                // fixed at submission and never redrawn.
                std::int64_t k = std::min(round - 1, p.r - 1);
                if (k > 0) {
                    std::vector<std::int64_t> bins(static_cast<std::size_t>(k), p.n);
                    bins.push_back(p.N - k * p.n);
                    Rng rng(derive_seed(master_seed, 0x50f1d9ull ^ q.draw_seed,
                                        static_cast<std::uint64_t>(lq.id)));
                    Signature draw = multivariate_hypergeometric(rng, bins, lq.size);
                    lq.frozen.assign(draw.begin(), draw.begin() + k);
                }
            }
            live.push_back(std::move(lq));
        }

        GameRoundVerdict verdict;
        verdict.round = round;
        verdict.resample_seed = round_resample_seed(round);

        std::optional<Partition> gamma;
        if (mode == Mode::Explicit)
            gamma = sample_equipartition(p.N, p.r, verdict.resample_seed, revealed);

        // One signature draw per live query under this round's partition; the
        // same draw feeds the balance check and (for round-l queries) both
        // answers.
        std::vector<Signature> sigs(live.size());
        for (std::size_t qi = 0; qi < live.size(); ++qi) {
            LiveQuery& lq = live[qi];
            if (mode == Mode::Explicit) {
                sigs[qi] = signature(*gamma, lq.elems);
            } else {
                // Rounds past r-1 have nothing left to resample: the single
                // remaining "tail" coordinate is forced.
                std::int64_t tail_parts = p.r - std::min(round, p.r) + 1;
                std::vector<std::int64_t> bins(static_cast<std::size_t>(tail_parts),
                                               p.n);
                std::int64_t frozen_sum = std::accumulate(
                    lq.frozen.begin(), lq.frozen.end(), std::int64_t{0});
                Rng rng(derive_seed(verdict.resample_seed,
                                    static_cast<std::uint64_t>(lq.id), 0x7a11ull));
                Signature tail =
                    multivariate_hypergeometric(rng, bins, lq.size - frozen_sum);
                sigs[qi] = lq.frozen;
                sigs[qi].insert(sigs[qi].end(), tail.begin(), tail.end());
            }
        }

        for (std::size_t qi = 0; qi < live.size(); ++qi) {
            LiveQuery& lq = live[qi];
            if (lq.round >= p.r) continue;  // no parts left to unbalance
            ++verdict.checked;
            if (!is_balanced(p, sigs[qi], lq.round)) {
                verdict.all_balanced = false;
                if (lq.row != static_cast<std::size_t>(-1))
                    rec.rows[lq.row].balanced = false;
                if (!rec.failure_round) {
                    rec.failure_round = round;
                    rec.failure_query = lq.id;
                }
            }
        }
        if (rec.failure_round) {
            rec.rounds.push_back(verdict);
            break;  // algorithm wins; round-l queries stay unanswered
        }

        std::vector<std::int64_t> f_answers(batch.size());
        std::size_t bi = 0;
        for (std::size_t qi = 0; qi < live.size(); ++qi) {
            LiveQuery& lq = live[qi];
            if (lq.round != round) continue;
            std::int64_t vf = h_value(p, sigs[qi]);
            std::int64_t vh = hhat_value(p, sigs[qi]);
            GameQueryRow row;
            row.round = round;
            row.query_id = lq.id;
            row.kind = mode == Mode::Explicit ? Query::Kind::Explicit
                                              : Query::Kind::Implicit;
            row.size = lq.size;
            row.answer_f = vf;
            row.answer_fhat = vh;
            lq.row = rec.rows.size();
            rec.rows.push_back(row);
            f_answers[bi++] = vf;
            ++verdict.answered;
            if (vf != vh) {
                verdict.answers_equal = false;
                rec.transcripts_identical = false;
            }
        }
        alg.receive(batch, f_answers);

        // Reveal part `round`.
        if (mode == Mode::Explicit) {
            if (static_cast<std::int64_t>(revealed.size()) < p.r)
                revealed.push_back(gamma->part_elements(
                    static_cast<std::int64_t>(revealed.size()) + 1));
        } else if (round < p.r) {
            for (std::size_t qi = 0; qi < live.size(); ++qi)
                live[qi].frozen.push_back(sigs[qi][static_cast<std::size_t>(round - 1)]);
        }
        rec.rounds.push_back(verdict);
    }
    return rec;
}

BalancednessStats balancedness_stats(const HardParams& p,
                                     const std::vector<std::int64_t>& query_sizes,
                                     std::int64_t i, std::int64_t trials,
                                     std::uint64_t seed) {
    if (trials < 1) throw DomainError("need at least one trial");
    if (i < 1 || i >= p.r)
        throw DomainError("balance index i=" + std::to_string(i) +
                          " outside [1, r)");
    if (query_sizes.empty()) throw DomainError("need at least one query size");
    for (std::int64_t m : query_sizes)
        if (m < 0 || m > p.N)
            throw DomainError("query size " + std::to_string(m) +
                              " outside [0, N]");

    BalancednessStats stats;
    stats.trials = trials;
    stats.yardstick = static_cast<double>(p.g) / 16.0;
    std::vector<std::int64_t> bins(static_cast<std::size_t>(p.r), p.n);
    std::int64_t balanced_count = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        std::int64_t m = query_sizes[static_cast<std::size_t>(t) % query_sizes.size()];
        Rng rng(derive_seed(seed, 0xba1a9cedull, static_cast<std::uint64_t>(t)));
        Signature x = multivariate_hypergeometric(rng, bins, m);
        if (is_balanced(p, x, i)) ++balanced_count;
        std::int64_t tail_parts = p.r - i + 1;
        std::int64_t tail_sum = 0;
        for (std::int64_t j = i; j <= p.r; ++j)
            tail_sum += x[static_cast<std::size_t>(j - 1)];
        double mu = static_cast<double>(tail_sum) / static_cast<double>(tail_parts);
        for (std::int64_t j = i; j <= p.r; ++j) {
            double dev =
                std::abs(static_cast<double>(x[static_cast<std::size_t>(j - 1)]) - mu);
            stats.max_deviation = std::max(stats.max_deviation, dev);
        }
    }
    stats.fraction_balanced =
        static_cast<double>(balanced_count) / static_cast<double>(trials);
    return stats;
}

CoupledSummary coupled_distinguish(const AlgorithmFactory& make_algorithm,
                                   const HardParams& p, std::int64_t rounds,
                                   std::int64_t trials, std::uint64_t seed) {
    CoupledSummary summary;
    summary.trials = trials;
    for (std::int64_t t = 0; t < trials; ++t) {
        std::uint64_t tseed = derive_seed(seed, 0xc09b1edull,
                                          static_cast<std::uint64_t>(t));
        auto hidden = std::make_shared<const Partition>(
            sample_equipartition(p.N, p.r, tseed));
        OracleSession sess_f(p, Variant::F, hidden, tseed);
        OracleSession sess_h(p, Variant::FHAT, hidden, tseed);
        auto alg_f = make_algorithm(tseed);
        auto alg_h = make_algorithm(tseed);

        CoupledTrial trial;
        trial.trial = t;
        for (std::int64_t round = 1; round <= rounds; ++round) {
            std::vector<Query> batch_f = alg_f->next_batch(round);
            std::vector<Query> batch_h = alg_h->next_batch(round);
            std::vector<std::int64_t> ans_f = sess_f.submit_round(batch_f);
            std::vector<std::int64_t> ans_h = sess_h.submit_round(batch_h);
            if (ans_f != ans_h) {
                trial.first_divergence_round = round;
                break;
            }
            alg_f->receive(batch_f, ans_f);
            alg_h->receive(batch_h, ans_h);
        }
        if (trial.first_divergence_round >= 0) ++summary.distinguished;
        summary.per_trial.push_back(trial);
    }
    return summary;
}

}  // namespace partsub
