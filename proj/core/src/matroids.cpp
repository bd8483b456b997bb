#include "partsub/matroids.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "partsub/errors.hpp"
#include "partsub/rng.hpp"

namespace partsub {

bool NestedMatroid::nonnegative_thresholds() const {
    return std::all_of(thresholds.begin(), thresholds.end(),
                       [](std::int64_t t) { return t >= 0; });
}

void NestedMatroid::validate() const {
    partition.validate();
    if (static_cast<std::int64_t>(thresholds.size()) != partition.parts())
        throw ConfigError("matroid has " + std::to_string(thresholds.size()) +
                          " thresholds for " + std::to_string(partition.parts()) +
                          " parts");
}

Signature matroid_signature(const NestedMatroid& m, const Set& s) {
    return signature(m.partition, s);
}

bool is_independent_sig(const NestedMatroid& m, const Signature& x) {
    if (static_cast<std::int64_t>(x.size()) != m.k())
        throw DomainError("signature size does not match matroid part count");
    std::int64_t ell = 0;
    for (std::int64_t t = m.k(); t >= 1; --t) {
        ell += x[t - 1] - m.thresholds[t - 1];
        if (ell > 0) return false;
    }
    return true;
}

bool is_independent(const NestedMatroid& m, const Set& s) {
    return is_independent_sig(m, matroid_signature(m, s));
}

std::int64_t rank_closed_form_sig(const NestedMatroid& m, const Signature& x) {
    if (!m.nonnegative_thresholds())
        throw ConfigError("rank closed form requires non-negative thresholds");
    if (static_cast<std::int64_t>(x.size()) != m.k())
        throw DomainError("signature size does not match matroid part count");
    std::int64_t ell = 0;
    std::int64_t worst = 0;  // max(0, max_t ell_t)
    std::int64_t total = 0;
    for (std::int64_t t = m.k(); t >= 1; --t) {
        ell += x[t - 1] - m.thresholds[t - 1];
        worst = std::max(worst, ell);
        total += x[t - 1];
    }
    return total - worst;
}

std::int64_t rank_closed_form(const NestedMatroid& m, const Set& s) {
    return rank_closed_form_sig(m, matroid_signature(m, s));
}

std::int64_t rank_greedy_oracle(const NestedMatroid& m, const Set& s) {
    Set sorted = s;
    std::sort(sorted.begin(), sorted.end());
    const std::int64_t k = m.k();
    Signature x(static_cast<std::size_t>(k), 0);
    // ell[t-1] tracks the suffix slack for the kept set; adding an element of
    // part q raises ell_t for every t <= q by one.
    std::vector<std::int64_t> ell(static_cast<std::size_t>(k));
    {
        std::int64_t acc = 0;
        for (std::int64_t t = k; t >= 1; --t) {
            acc -= m.thresholds[t - 1];
            ell[t - 1] = acc;
        }
    }
    std::int64_t kept = 0;
    for (std::int64_t e : sorted) {
        if (e < 0 || e >= m.ground_size())
            throw DomainError("element id outside the ground set");
        std::int64_t q = m.partition.part_of[static_cast<std::size_t>(e)];
        bool ok = true;
        for (std::int64_t t = 1; t <= q; ++t) {
            if (ell[t - 1] + 1 > 0) { ok = false; break; }
        }
        if (!ok) continue;
        for (std::int64_t t = 1; t <= q; ++t) ++ell[t - 1];
        ++x[static_cast<std::size_t>(q - 1)];
        ++kept;
    }
    return kept;
}

RankOracle oracle_closed_form(const NestedMatroid& m) {
    m.validate();
    RankOracle o;
    o.ground_size = m.ground_size();
    o.rank = [m](const Set& s) { return rank_closed_form(m, s); };
    return o;
}

RankOracle oracle_greedy(const NestedMatroid& m) {
    m.validate();
    RankOracle o;
    o.ground_size = m.ground_size();
    o.rank = [m](const Set& s) { return rank_greedy_oracle(m, s); };
    return o;
}

std::int64_t dual_rank(const RankOracle& m, const Set& s) {
    std::vector<char> in(static_cast<std::size_t>(m.ground_size), 0);
    for (std::int64_t e : s) {
        if (e < 0 || e >= m.ground_size)
            throw DomainError("element id outside the ground set");
        in[static_cast<std::size_t>(e)] = 1;
    }
    Set complement;
    complement.reserve(static_cast<std::size_t>(m.ground_size) - s.size());
    for (std::int64_t e = 0; e < m.ground_size; ++e)
        if (!in[static_cast<std::size_t>(e)]) complement.push_back(e);
    Set full(static_cast<std::size_t>(m.ground_size));
    for (std::int64_t e = 0; e < m.ground_size; ++e) full[static_cast<std::size_t>(e)] = e;
    return m.rank(complement) + static_cast<std::int64_t>(s.size()) - m.rank(full);
}

NestedMatroid dual_nested(const NestedMatroid& m) {
    m.validate();
    const std::int64_t k = m.k();
    NestedMatroid d;
    d.partition.universe_size = m.partition.universe_size;
    d.partition.seed = m.partition.seed;
    d.partition.part_sizes.resize(static_cast<std::size_t>(k));
    d.thresholds.resize(static_cast<std::size_t>(k));
    for (std::int64_t j = 1; j <= k; ++j) {
        std::int64_t src = k + 1 - j;
        std::int64_t nj = m.partition.part_sizes[static_cast<std::size_t>(src - 1)];
        std::int64_t tj = m.thresholds[static_cast<std::size_t>(src - 1)];
        if (tj > nj) {
            std::ostringstream msg;
            msg << "dual threshold would be negative: part " << src << " has size "
                << nj << " < threshold " << tj;
            throw ConfigError(msg.str());
        }
        d.partition.part_sizes[static_cast<std::size_t>(j - 1)] = nj;
        d.thresholds[static_cast<std::size_t>(j - 1)] = nj - tj;
    }
    d.partition.part_of.resize(m.partition.part_of.size());
    for (std::size_t e = 0; e < m.partition.part_of.size(); ++e)
        d.partition.part_of[e] =
            static_cast<std::int32_t>(k + 1 - m.partition.part_of[e]);
    return d;
}

namespace {

// Coarsening of a base partition: coarse part j is the union of the listed
// base parts (1-based ids).
Partition coarsen(const Partition& base,
                  const std::vector<std::vector<std::int64_t>>& groups) {
    Partition c;
    c.universe_size = base.universe_size;
    c.seed = base.seed;
    c.part_sizes.assign(groups.size(), 0);
    std::vector<std::int32_t> fine_to_coarse(
        static_cast<std::size_t>(base.parts()) + 1, 0);
    for (std::size_t j = 0; j < groups.size(); ++j) {
        for (std::int64_t q : groups[j]) {
            fine_to_coarse[static_cast<std::size_t>(q)] =
                static_cast<std::int32_t>(j + 1);
            c.part_sizes[j] += base.part_sizes[static_cast<std::size_t>(q - 1)];
        }
    }
    c.part_of.resize(base.part_of.size());
    for (std::size_t e = 0; e < base.part_of.size(); ++e)
        c.part_of[e] = fine_to_coarse[static_cast<std::size_t>(base.part_of[e])];
    return c;
}

// tau vector of the hard family: tau everywhere except tau + gamma on the
// last part.
std::vector<std::int64_t> hard_tau(const HardParams& p) {
    std::vector<std::int64_t> tau(static_cast<std::size_t>(p.r), p.tau);
    tau[static_cast<std::size_t>(p.r - 1)] += p.gamma;
    return tau;
}

}  // namespace

HardMatroidPair build_hard_pair(const HardParams& p, const Partition& base) {
    base.validate();
    if (base.parts() != p.r || base.universe_size != p.N)
        throw ConfigError("partition shape does not match params: expected " +
                          std::to_string(p.r) + " parts over " +
                          std::to_string(p.N) + " elements");
    for (std::int64_t sz : base.part_sizes)
        if (sz != p.n)
            throw ConfigError("hard pair requires an equipartition with part size " +
                              std::to_string(p.n));
    if (!p.structural_ok())
        throw ConfigError("constraint 5*g*r <= n violated: 5*" + std::to_string(p.g) +
                          "*" + std::to_string(p.r) + " > " + std::to_string(p.n));

    const std::int64_t r = p.r;
    std::vector<std::int64_t> tau = hard_tau(p);

    HardMatroidPair pair;
    pair.base = base;
    pair.params = p;

    // M_odd: (P1 u P2, P3 u P4, ..., P_{r-2} u P_{r-1}, P_r).
    {
        std::vector<std::vector<std::int64_t>> groups;
        std::vector<std::int64_t> thr;
        for (std::int64_t q = 1; q + 1 <= r - 1; q += 2) {
            groups.push_back({q, q + 1});
            thr.push_back(tau[static_cast<std::size_t>(q - 1)] +
                          tau[static_cast<std::size_t>(q)]);
        }
        groups.push_back({r});
        thr.push_back(tau[static_cast<std::size_t>(r - 1)]);
        pair.m_odd.partition = coarsen(base, groups);
        pair.m_odd.thresholds = std::move(thr);
    }

    // M_even: (P1, P2 u P3, ..., P_{r-1} u P_r), first threshold relaxed to n.
    {
        std::vector<std::vector<std::int64_t>> groups{{1}};
        std::vector<std::int64_t> thr{p.n};
        for (std::int64_t q = 2; q + 1 <= r; q += 2) {
            groups.push_back({q, q + 1});
            thr.push_back(tau[static_cast<std::size_t>(q - 1)] +
                          tau[static_cast<std::size_t>(q)]);
        }
        pair.m_even.partition = coarsen(base, groups);
        pair.m_even.thresholds = std::move(thr);
    }

    // M'_even: M_even with the last merged part split back into P_{r-1} and
    // P_r, thresholds (tau_{r-1} + tau_r - theta, theta).
    {
        std::vector<std::vector<std::int64_t>> groups{{1}};
        std::vector<std::int64_t> thr{p.n};
        for (std::int64_t q = 2; q + 1 <= r - 2; q += 2) {
            groups.push_back({q, q + 1});
            thr.push_back(tau[static_cast<std::size_t>(q - 1)] +
                          tau[static_cast<std::size_t>(q)]);
        }
        groups.push_back({r - 1});
        thr.push_back(tau[static_cast<std::size_t>(r - 2)] +
                      tau[static_cast<std::size_t>(r - 1)] - p.theta);
        groups.push_back({r});
        thr.push_back(p.theta);
        pair.m_even_prime.partition = coarsen(base, groups);
        pair.m_even_prime.thresholds = std::move(thr);
    }

    pair.m_odd.validate();
    pair.m_even.validate();
    pair.m_even_prime.validate();
    return pair;
}

namespace {

std::int64_t checked_rank(const RankOracle& m, const Set& s) {
    std::int64_t rk = m.rank(s);
    if (rk < 0 || rk > static_cast<std::int64_t>(s.size()))
        throw IntegrityError("rank oracle returned " + std::to_string(rk) +
                             " on a set of size " + std::to_string(s.size()));
    return rk;
}

}  // namespace

IntersectionResult intersection_max(const RankOracle& m1, const RankOracle& m2) {
    if (m1.ground_size != m2.ground_size)
        throw ConfigError("intersection requires a common ground set");
    const std::int64_t n = m1.ground_size;

    std::vector<char> in_i(static_cast<std::size_t>(n), 0);
    Set current;  // kept sorted ascending
    IntersectionResult result;

    auto with = [](const Set& s, std::int64_t e) {
        Set t = s;
        t.insert(std::upper_bound(t.begin(), t.end(), e), e);
        return t;
    };
    auto exchanged = [](const Set& s, std::int64_t out, std::int64_t in) {
        Set t;
        t.reserve(s.size());
        for (std::int64_t e : s)
            if (e != out) t.push_back(e);
        t.insert(std::upper_bound(t.begin(), t.end(), in), in);
        return t;
    };

    while (true) {
        const std::int64_t sz = static_cast<std::int64_t>(current.size());
        if (checked_rank(m1, current) != sz || checked_rank(m2, current) != sz)
            throw IntegrityError("working set is no longer independent in both "
                                 "matroids: oracle answers are not matroidal");

        // Sources: addable in m1. Sinks: addable in m2.
        std::vector<char> src(static_cast<std::size_t>(n), 0);
        std::vector<char> snk(static_cast<std::size_t>(n), 0);
        bool any_src = false;
        for (std::int64_t y = 0; y < n; ++y) {
            if (in_i[static_cast<std::size_t>(y)]) continue;
            Set grown = with(current, y);
            std::int64_t r1 = checked_rank(m1, grown);
            if (r1 == sz + 1) { src[static_cast<std::size_t>(y)] = 1; any_src = true; }
            std::int64_t r2 = checked_rank(m2, grown);
            if (r2 == sz + 1) snk[static_cast<std::size_t>(y)] = 1;
        }
        if (!any_src) break;

        // BFS for a shortest source-to-sink path in the exchange graph.
        // Arcs: y (in I) -> z (outside) when I - y + z is independent in m1;
        //       z (outside) -> y (in I) when I - y + z is independent in m2.
        std::vector<std::int64_t> parent(static_cast<std::size_t>(n), -2);
        std::deque<std::int64_t> queue;
        std::int64_t reached = -1;
        for (std::int64_t y = 0; y < n; ++y) {
            if (!src[static_cast<std::size_t>(y)]) continue;
            parent[static_cast<std::size_t>(y)] = -1;
            if (snk[static_cast<std::size_t>(y)]) { reached = y; break; }
            queue.push_back(y);
        }
        while (reached < 0 && !queue.empty()) {
            std::int64_t v = queue.front();
            queue.pop_front();
            bool v_inside = in_i[static_cast<std::size_t>(v)] != 0;
            for (std::int64_t w = 0; w < n; ++w) {
                if (parent[static_cast<std::size_t>(w)] != -2) continue;
                if (in_i[static_cast<std::size_t>(w)] == in_i[static_cast<std::size_t>(v)])
                    continue;
                std::int64_t inside = v_inside ? v : w;
                std::int64_t outside = v_inside ? w : v;
                Set swapped = exchanged(current, inside, outside);
                const RankOracle& m = v_inside ? m1 : m2;
                if (checked_rank(m, swapped) != sz) continue;
                parent[static_cast<std::size_t>(w)] = v;
                if (!v_inside) { queue.push_back(w); continue; }
                if (snk[static_cast<std::size_t>(w)]) { reached = w; break; }
                queue.push_back(w);
            }
        }
        if (reached < 0) break;

        for (std::int64_t v = reached; v != -1; v = parent[static_cast<std::size_t>(v)])
            in_i[static_cast<std::size_t>(v)] ^= 1;
        current.clear();
        for (std::int64_t e = 0; e < n; ++e)
            if (in_i[static_cast<std::size_t>(e)]) current.push_back(e);
        ++result.augmentations;
    }

    result.size = static_cast<std::int64_t>(current.size());
    result.elements = std::move(current);
    return result;
}

IntersectionResult intersection_enumerate(const RankOracle& m1, const RankOracle& m2) {
    if (m1.ground_size != m2.ground_size)
        throw ConfigError("intersection requires a common ground set");
    const std::int64_t n = m1.ground_size;
    if (n > 20)
        throw ResourceError("subset enumeration capped at 20 ground elements, got " +
                            std::to_string(n));
    IntersectionResult best;
    best.size = -1;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        std::int64_t pop = static_cast<std::int64_t>(__builtin_popcountll(mask));
        if (pop <= best.size) continue;
        Set s;
        s.reserve(static_cast<std::size_t>(pop));
        for (std::int64_t e = 0; e < n; ++e)
            if (mask & (1ull << e)) s.push_back(e);
        if (m1.rank(s) != pop || m2.rank(s) != pop) continue;
        best.size = pop;
        best.elements = std::move(s);
    }
    if (best.size < 0) {
        best.size = 0;
        best.elements.clear();
    }
    return best;
}

namespace {

struct Refinement {
    Partition partition;                 // refined parts 1..m
    std::vector<std::int64_t> in_m1;     // coarse part of each refined part in m1
    std::vector<std::int64_t> in_m2;     // and in m2
};

Refinement common_refinement(const NestedMatroid& m1, const NestedMatroid& m2) {
    if (m1.ground_size() != m2.ground_size())
        throw ConfigError("matroids live on different ground sets");
    const std::int64_t n = m1.ground_size();
    // Dense ids for occurring (part-in-m1, part-in-m2) pairs, ordered
    // lexicographically for determinism.
    std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
    for (std::int64_t e = 0; e < n; ++e)
        pairs.emplace_back(m1.partition.part_of[static_cast<std::size_t>(e)],
                           m2.partition.part_of[static_cast<std::size_t>(e)]);
    std::vector<std::pair<std::int64_t, std::int64_t>> uniq = pairs;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

    Refinement ref;
    ref.partition.universe_size = n;
    ref.partition.seed = m1.partition.seed;
    ref.partition.part_sizes.assign(uniq.size(), 0);
    ref.partition.part_of.resize(static_cast<std::size_t>(n));
    ref.in_m1.resize(uniq.size());
    ref.in_m2.resize(uniq.size());
    for (std::size_t j = 0; j < uniq.size(); ++j) {
        ref.in_m1[j] = uniq[j].first;
        ref.in_m2[j] = uniq[j].second;
    }
    for (std::int64_t e = 0; e < n; ++e) {
        std::size_t j = static_cast<std::size_t>(
            std::lower_bound(uniq.begin(), uniq.end(),
                             pairs[static_cast<std::size_t>(e)]) -
            uniq.begin());
        ref.partition.part_of[static_cast<std::size_t>(e)] =
            static_cast<std::int32_t>(j + 1);
        ++ref.partition.part_sizes[j];
    }
    return ref;
}

// rk1(S) + rk2(U \ S) as a function of the refined signature z.
std::int64_t edmonds_objective(const NestedMatroid& m1, const NestedMatroid& m2,
                               const Refinement& ref, const Signature& z) {
    Signature x1(static_cast<std::size_t>(m1.k()), 0);
    Signature x2(static_cast<std::size_t>(m2.k()), 0);
    for (std::size_t j = 0; j < z.size(); ++j) {
        x1[static_cast<std::size_t>(ref.in_m1[j] - 1)] += z[j];
        x2[static_cast<std::size_t>(ref.in_m2[j] - 1)] +=
            ref.partition.part_sizes[j] - z[j];
    }
    return rank_closed_form_sig(m1, x1) + rank_closed_form_sig(m2, x2);
}

}  // namespace

EdmondsMinResult edmonds_min(const NestedMatroid& m1, const NestedMatroid& m2) {
    Refinement ref = common_refinement(m1, m2);
    const std::int64_t m = ref.partition.parts();
    if (m > 30)
        throw ResourceError("corner enumeration capped at 30 refined parts, got " +
                            std::to_string(m));
    EdmondsMinResult best;
    best.refinement = ref.partition;
    bool first = true;
    Signature z(static_cast<std::size_t>(m), 0);
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        for (std::int64_t j = 0; j < m; ++j)
            z[static_cast<std::size_t>(j)] =
                (mask & (1ull << j)) ? ref.partition.part_sizes[static_cast<std::size_t>(j)]
                                     : 0;
        std::int64_t v = edmonds_objective(m1, m2, ref, z);
        if (first || v < best.value) {
            first = false;
            best.value = v;
            best.refined_argmin = z;
        }
    }
    return best;
}

EdmondsMinResult edmonds_min_grid(const NestedMatroid& m1, const NestedMatroid& m2,
                                  std::int64_t budget) {
    Refinement ref = common_refinement(m1, m2);
    const std::int64_t m = ref.partition.parts();
    std::int64_t points = 1;
    for (std::int64_t j = 0; j < m; ++j) {
        std::int64_t b = ref.partition.part_sizes[static_cast<std::size_t>(j)] + 1;
        if (points > budget / b) {
            throw ResourceError("refined signature grid exceeds budget " +
                                std::to_string(budget));
        }
        points *= b;
    }
    EdmondsMinResult best;
    best.refinement = ref.partition;
    Signature z(static_cast<std::size_t>(m), 0);
    bool first = true;
    while (true) {
        std::int64_t v = edmonds_objective(m1, m2, ref, z);
        if (first || v < best.value) {
            first = false;
            best.value = v;
            best.refined_argmin = z;
        }
        std::int64_t j = m - 1;
        while (j >= 0 &&
               z[static_cast<std::size_t>(j)] ==
                   ref.partition.part_sizes[static_cast<std::size_t>(j)]) {
            z[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
        ++z[static_cast<std::size_t>(j)];
    }
    return best;
}

namespace {

// Fine-part -> coarse-part map for a coarsening of the same ground set.
std::vector<std::int64_t> fine_to_coarse(const Partition& base, const Partition& coarse) {
    std::vector<std::int64_t> map(static_cast<std::size_t>(base.parts()) + 1, 0);
    for (std::size_t e = 0; e < base.part_of.size(); ++e)
        map[static_cast<std::size_t>(base.part_of[e])] = coarse.part_of[e];
    return map;
}

Signature coarse_signature(const std::vector<std::int64_t>& map, std::int64_t k,
                           const Signature& fine) {
    Signature x(static_cast<std::size_t>(k), 0);
    for (std::size_t q = 0; q < fine.size(); ++q)
        x[static_cast<std::size_t>(map[q + 1] - 1)] += fine[q];
    return x;
}

}  // namespace

MatDualReport verify_mat_dual_two(const HardParams& p, const Partition& base,
                                  std::int64_t random_sets, std::uint64_t seed,
                                  std::int64_t grid_budget) {
    HardMatroidPair pair = build_hard_pair(p, base);
    NestedMatroid even_star = dual_nested(pair.m_even);
    NestedMatroid even_prime_star = dual_nested(pair.m_even_prime);

    MatDualReport report;
    Signature full(static_cast<std::size_t>(p.r), p.n);
    std::vector<std::int64_t> odd_map = fine_to_coarse(base, pair.m_odd.partition);
    std::vector<std::int64_t> es_map = fine_to_coarse(base, even_star.partition);
    std::vector<std::int64_t> eps_map = fine_to_coarse(base, even_prime_star.partition);
    report.c_constant =
        p.N - rank_closed_form_sig(pair.m_even,
                                   coarse_signature(fine_to_coarse(base, pair.m_even.partition),
                                                    pair.m_even.k(), full));

    auto check_signature_point = [&](const Signature& x) {
        Signature xc(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) xc[i] = p.n - x[i];
        std::int64_t rk_odd =
            rank_closed_form_sig(pair.m_odd, coarse_signature(odd_map, pair.m_odd.k(), x));
        std::int64_t lhs = rk_odd + rank_closed_form_sig(
                                        even_star,
                                        coarse_signature(es_map, even_star.k(), xc));
        std::int64_t rhs = report.c_constant + h_value(p, x);
        std::int64_t lhs_p = rk_odd + rank_closed_form_sig(
                                          even_prime_star,
                                          coarse_signature(eps_map, even_prime_star.k(), xc));
        std::int64_t rhs_p = report.c_constant + hhat_value(p, x);
        report.checked += 2;
        if (lhs != rhs || lhs_p != rhs_p) {
            report.ok = false;
            if (report.violations.size() < 10) {
                std::ostringstream msg;
                msg << "x=";
                for (std::size_t i = 0; i < x.size(); ++i)
                    msg << (i ? "," : "") << x[i];
                msg << " plain " << lhs << " vs " << rhs << "; primed " << lhs_p
                    << " vs " << rhs_p;
                report.violations.push_back(msg.str());
            }
        }
    };

    // Exhaustive sweep of the fine signature grid when affordable.
    std::int64_t points = 1;
    bool exhaustive = true;
    for (std::int64_t i = 0; i < p.r; ++i) {
        if (points > grid_budget / (p.n + 1)) { exhaustive = false; break; }
        points *= p.n + 1;
    }
    if (exhaustive) {
        Signature x(static_cast<std::size_t>(p.r), 0);
        while (true) {
            check_signature_point(x);
            std::int64_t j = p.r - 1;
            while (j >= 0 && x[static_cast<std::size_t>(j)] == p.n) {
                x[static_cast<std::size_t>(j)] = 0;
                --j;
            }
            if (j < 0) break;
            ++x[static_cast<std::size_t>(j)];
        }
    }

    // Random element sets exercise the set-based rank and the three-call dual
    // rank identity.
    RankOracle even_oracle = oracle_closed_form(pair.m_even);
    RankOracle even_prime_oracle = oracle_closed_form(pair.m_even_prime);
    for (std::int64_t t = 0; t < random_sets; ++t) {
        Rng rng(derive_seed(seed, 0x6d617464ull, static_cast<std::uint64_t>(t)));
        Set s;
        Set complement;
        for (std::int64_t e = 0; e < p.N; ++e) {
            if (rng() & 1ull)
                s.push_back(e);
            else
                complement.push_back(e);
        }
        Signature x = signature(base, s);
        std::int64_t rk_odd = rank_closed_form(pair.m_odd, s);
        std::int64_t lhs = rk_odd + dual_rank(even_oracle, complement);
        std::int64_t rhs = report.c_constant + h_value(p, x);
        std::int64_t lhs_p = rk_odd + dual_rank(even_prime_oracle, complement);
        std::int64_t rhs_p = report.c_constant + hhat_value(p, x);
        report.checked += 2;
        if (lhs != rhs || lhs_p != rhs_p) {
            report.ok = false;
            if (report.violations.size() < 10) {
                std::ostringstream msg;
                msg << "random set trial " << t << ": plain " << lhs << " vs " << rhs
                    << "; primed " << lhs_p << " vs " << rhs_p;
                report.violations.push_back(msg.str());
            }
        }
    }
    return report;
}

}  // namespace partsub
