#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "commands.hpp"
#include "partsub/errors.hpp"
#include "partsub/io.hpp"
#include "partsub/rng.hpp"

namespace partsub::cli {

namespace {

struct SuiteResult {
    explicit SuiteResult(std::string suite) : name(std::move(suite)) {}

    std::string name;
    bool pass = true;
    bool sampled = false;
    std::int64_t checked = 0;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        detail = why;
    }
};

std::string sig_str(const Signature& x) {
    std::ostringstream os;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (k) os << ',';
        os << x[k];
    }
    return os.str();
}

std::string csv_quote(const std::string& s) {
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += "\"\"";
        else q += ch;
    }
    q += '"';
    return q;
}

bool grid_fits(const HardParams& p, std::int64_t budget) {
    double points = std::pow(static_cast<double>(p.n + 1), static_cast<double>(p.r));
    return points <= static_cast<double>(budget);
}

SuiteResult suite_submodularity(const HardParams& p, std::int64_t budget) {
    SuiteResult res{"submodularity"};
    for (Variant v : {Variant::F, Variant::FHAT, Variant::FHATPRIME}) {
        SubmodularityReport rep = submodularity_check(as_hypergrid(p, v), budget);
        res.checked += rep.checked;
        res.sampled = res.sampled || rep.sampled;
        if (!rep.ok) {
            res.fail(variant_name(v) + ": " + rep.counterexample->to_string());
            return res;
        }
    }
    return res;
}

SuiteResult suite_minima(const HardParams& p, std::int64_t budget) {
    SuiteResult res{"minima"};
    if (!p.structural_ok()) {
        res.fail("minimizer structure requires 5*g*r <= n");
        return res;
    }

    // Within budget the scan is the exhaustive grid; otherwise the corner
    // scan, which attains the same minimum because every per-coordinate
    // marginal is non-increasing along its axis.
    bool fits = grid_fits(p, budget);
    res.sampled = !fits;
    auto min_of = [&](Variant v) {
        HypergridFunction h = as_hypergrid(p, v);
        if (fits) {
            res.checked += static_cast<std::int64_t>(
                std::llround(std::pow(static_cast<double>(p.n + 1),
                                      static_cast<double>(p.r))));
            return grid_minimum_bruteforce(h, budget);
        }
        res.checked += std::int64_t{1} << p.r;
        return corner_minimum(h);
    };

    const Signature origin(static_cast<std::size_t>(p.r), 0);
    GridMinimum mh = min_of(Variant::F);
    if (mh.value != 0 || mh.argmin != origin) {
        res.fail("base function minimum is " + std::to_string(mh.value) + " at x=" +
                 sig_str(mh.argmin) + ", expected 0 at the origin");
        return res;
    }
    HypergridFunction hf = as_hypergrid(p, Variant::F);
    for (std::int64_t mask = 1; mask < (std::int64_t{1} << p.r); ++mask) {
        Signature corner(static_cast<std::size_t>(p.r), 0);
        for (std::int64_t i = 0; i < p.r; ++i)
            if (mask & (std::int64_t{1} << i)) corner[static_cast<std::size_t>(i)] = p.n;
        ++res.checked;
        if (hf.eval(corner) == 0) {
            res.fail("base function attains 0 at the non-origin corner x=" + sig_str(corner));
            return res;
        }
    }

    GridMinimum mhat = min_of(Variant::FHAT);
    Signature last_corner(static_cast<std::size_t>(p.r), 0);
    last_corner[static_cast<std::size_t>(p.r - 1)] = p.n;
    if (mhat.value != -p.g / 2) {
        res.fail("last-coordinate truncation minimum is " + std::to_string(mhat.value) +
                 ", expected -g/2 = " + std::to_string(-p.g / 2));
        return res;
    }
    if (hhat_value(p, last_corner) != mhat.value) {
        res.fail("minimum not attained at x=" + sig_str(last_corner));
        return res;
    }

    GridMinimum mprime = min_of(Variant::FHATPRIME);
    Signature tail_corner(static_cast<std::size_t>(p.r), 0);
    for (std::int64_t i = p.cut; i <= p.r; ++i)
        tail_corner[static_cast<std::size_t>(i - 1)] = p.n;
    std::int64_t tcv = hhatprime_value(p, tail_corner);
    if (6 * tcv > -p.g * p.r) {
        res.fail("tail-corner value " + std::to_string(tcv) + " at x=" + sig_str(tail_corner) +
                 " is above -g*r/6");
        return res;
    }
    if (mprime.value > tcv) {
        res.fail("grid minimum " + std::to_string(mprime.value) +
                 " exceeds the tail-corner value " + std::to_string(tcv));
        return res;
    }

    res.detail = "h_min=0@" + sig_str(origin) + ";hhat_min=" + std::to_string(mhat.value) +
                 "@" + sig_str(mhat.argmin) + ";hhatprime_min=" + std::to_string(mprime.value) +
                 "@" + sig_str(mprime.argmin) + ";tail_corner=" + std::to_string(tcv);
    return res;
}

SuiteResult suite_indistinguishability(const HardParams& p, std::int64_t budget,
                                       std::uint64_t seed) {
    SuiteResult res{"indistinguishability"};
    std::int64_t classes = 0;
    for (std::int64_t i = 1; 2 * i < p.r; ++i) {
        IndisReport rep =
            suffix_indistinguishability_check(p, i, budget, 200'000, derive_seed(seed, 0x1d, i));
        res.checked += rep.checked;
        classes += rep.classes;
        res.sampled = res.sampled || rep.sampled;
        if (!rep.ok) {
            res.fail(*rep.counterexample);
            return res;
        }
    }
    res.detail = "classes=" + std::to_string(classes);
    return res;
}

SuiteResult suite_ranks(const Instance& inst, std::int64_t trials, std::int64_t budget,
                        std::uint64_t seed) {
    SuiteResult res{"ranks"};
    const HardParams& p = inst.p;
    const std::int64_t N = p.N;

    std::int64_t effective = trials;
    if (N > 0 && trials > budget / N) {
        effective = std::max<std::int64_t>(1, budget / N);
        res.sampled = true;
    }

    struct Entry {
        const char* name;
        const NestedMatroid* m;
    };
    const Entry entries[] = {{"m_odd", &inst.m_odd},
                             {"m_even", &inst.m_even},
                             {"m_even_prime", &inst.m_even_prime}};
    for (std::size_t idx = 0; idx < 3; ++idx) {
        const NestedMatroid& m = *entries[idx].m;
        NestedMatroid dual = dual_nested(m);
        RankOracle closed = oracle_closed_form(m);
        for (std::int64_t k = 0; k < effective; ++k) {
            Set s = random_subset(N, derive_seed(seed, 0xa0 + idx, static_cast<std::uint64_t>(k)));
            std::int64_t rc = rank_closed_form(m, s);
            std::int64_t rg = rank_greedy_oracle(m, s);
            ++res.checked;
            if (rc != rg) {
                res.fail(std::string(entries[idx].name) + ": closed form " + std::to_string(rc) +
                         " vs greedy oracle " + std::to_string(rg) + " on |S|=" +
                         std::to_string(s.size()) + " x=" + sig_str(matroid_signature(m, s)));
                return res;
            }
            std::int64_t dr = dual_rank(closed, s);
            std::int64_t dc = rank_closed_form(dual, s);
            ++res.checked;
            if (dr != dc) {
                res.fail(std::string(entries[idx].name) + ": dual rank " + std::to_string(dr) +
                         " vs dual nested closed form " + std::to_string(dc) + " on |S|=" +
                         std::to_string(s.size()) + " x=" + sig_str(matroid_signature(m, s)));
                return res;
            }
        }
    }

    // Minimax identity against the loaded threshold files: for every S,
    // rk_odd(S) + rk*_even(U\S) must equal C + h(x(S)) (primed: hhat).
    Set universe(static_cast<std::size_t>(N));
    std::iota(universe.begin(), universe.end(), 0);
    const std::int64_t c_even = N - rank_closed_form(inst.m_even, universe);
    const std::int64_t c_prime = N - rank_closed_form(inst.m_even_prime, universe);
    NestedMatroid even_star = dual_nested(inst.m_even);
    NestedMatroid even_prime_star = dual_nested(inst.m_even_prime);

    auto check_identity = [&](const Set& s) -> bool {
        Set comp;
        comp.reserve(static_cast<std::size_t>(N) - s.size());
        std::size_t at = 0;
        for (std::int64_t e = 0; e < N; ++e) {
            if (at < s.size() && s[at] == e) ++at;
            else comp.push_back(e);
        }
        Signature x = signature(inst.base, s);
        std::int64_t rk_odd = rank_closed_form(inst.m_odd, s);
        std::int64_t lhs = rk_odd + rank_closed_form(even_star, comp);
        std::int64_t rhs = c_even + h_value(p, x);
        std::int64_t lhs_p = rk_odd + rank_closed_form(even_prime_star, comp);
        std::int64_t rhs_p = c_prime + hhat_value(p, x);
        res.checked += 2;
        if (lhs != rhs) {
            res.fail("minimax identity: |S|=" + std::to_string(s.size()) + " x=" + sig_str(x) +
                     " lhs=" + std::to_string(lhs) + " rhs=" + std::to_string(rhs));
            return false;
        }
        if (lhs_p != rhs_p) {
            res.fail("primed minimax identity: |S|=" + std::to_string(s.size()) + " x=" +
                     sig_str(x) + " lhs=" + std::to_string(lhs_p) + " rhs=" +
                     std::to_string(rhs_p));
            return false;
        }
        return true;
    };

    if (!check_identity({}) || !check_identity(universe)) return res;
    for (std::int64_t k = 0; k < effective; ++k) {
        Set s = random_subset(N, derive_seed(seed, 0xb7, static_cast<std::uint64_t>(k)));
        if (!check_identity(s)) return res;
    }
    res.detail = "C=" + std::to_string(c_even) + ";C_prime=" + std::to_string(c_prime);
    return res;
}

SuiteResult suite_edmonds(const Instance& inst, std::int64_t budget, std::uint64_t seed) {
    SuiteResult res{"edmonds"};
    const HardParams& p = inst.p;
    const std::int64_t N = p.N;

    MatDualReport mdr = verify_mat_dual_two(p, inst.base, 200, seed, budget);
    res.checked += mdr.checked;
    res.sampled = res.sampled || !grid_fits(p, budget);
    if (!mdr.ok) {
        res.fail(mdr.violations.empty() ? "pointwise minimax identity failed"
                                        : mdr.violations.front());
        return res;
    }

    if (N > budget / N) {
        // The exchange-graph run costs on the order of N^2 oracle calls.
        res.sampled = true;
        res.detail = "intersection skipped: N^2 exceeds budget";
        return res;
    }

    HardMatroidPair pair = build_hard_pair(p, inst.base);
    NestedMatroid even_star = dual_nested(pair.m_even);
    NestedMatroid even_prime_star = dual_nested(pair.m_even_prime);
    IntersectionResult i1 =
        intersection_max(oracle_closed_form(pair.m_odd), oracle_closed_form(even_star));
    IntersectionResult i2 =
        intersection_max(oracle_closed_form(pair.m_odd), oracle_closed_form(even_prime_star));
    EdmondsMinResult e1 = edmonds_min(pair.m_odd, even_star);
    EdmondsMinResult e2 = edmonds_min(pair.m_odd, even_prime_star);

    Set universe(static_cast<std::size_t>(N));
    std::iota(universe.begin(), universe.end(), 0);
    std::int64_t c_even = N - rank_closed_form(pair.m_even, universe);
    std::int64_t c_prime = N - rank_closed_form(pair.m_even_prime, universe);
    std::int64_t corner_h = corner_minimum(as_hypergrid(p, Variant::F)).value;
    std::int64_t corner_hhat = corner_minimum(as_hypergrid(p, Variant::FHAT)).value;
    res.checked += 6;

    if (i1.size != e1.value || i2.size != e2.value) {
        res.fail("intersection sizes " + std::to_string(i1.size) + "," + std::to_string(i2.size) +
                 " differ from minimax values " + std::to_string(e1.value) + "," +
                 std::to_string(e2.value));
        return res;
    }
    if (i1.size != c_even + corner_h || i2.size != c_prime + corner_hhat) {
        res.fail("intersection sizes " + std::to_string(i1.size) + "," + std::to_string(i2.size) +
                 " differ from C + corner minima " + std::to_string(c_even + corner_h) + "," +
                 std::to_string(c_prime + corner_hhat));
        return res;
    }
    if (p.r == 3) {
        std::int64_t expect1 = p.n + 5 * p.g / 4;
        std::int64_t expect2 = p.n + 3 * p.g / 4;
        res.checked += 3;
        if (i1.size != expect1 || i2.size != expect2 || i1.size - i2.size != p.g / 2) {
            res.fail("r=3 sizes " + std::to_string(i1.size) + "," + std::to_string(i2.size) +
                     " differ from n+1.25g=" + std::to_string(expect1) + ", n+0.75g=" +
                     std::to_string(expect2) + " (gap g/2=" + std::to_string(p.g / 2) + ")");
            return res;
        }
    }
    res.detail = "sizes=" + std::to_string(i1.size) + "," + std::to_string(i2.size) +
                 ";gap=" + std::to_string(i1.size - i2.size) + ";C=" + std::to_string(c_even);
    return res;
}

}  // namespace

int cmd_verify(const VerifyOptions& opt, std::ostream& out) {
    Instance inst = load_instance(opt.dir);

    const std::vector<std::string> all = {"submodularity", "minima", "indistinguishability",
                                          "ranks", "edmonds"};
    std::vector<std::string> requested = opt.suites;
    bool none = false;
    for (const auto& s : requested) {
        if (s == "none") {
            none = true;
        } else if (s == "all") {
            // expands below
        } else if (std::find(all.begin(), all.end(), s) == all.end()) {
            throw ConfigError("unknown suite '" + s + "' (expected one of: submodularity, "
                              "minima, indistinguishability, ranks, edmonds, all, none)");
        }
    }
    std::vector<std::string> selected;
    if (!none) {
        bool take_all =
            requested.empty() ||
            std::find(requested.begin(), requested.end(), "all") != requested.end();
        for (const auto& name : all)
            if (take_all || std::find(requested.begin(), requested.end(), name) != requested.end())
                selected.push_back(name);
    }

    std::vector<SuiteResult> results;
    for (const auto& name : selected) {
        if (name == "submodularity") results.push_back(suite_submodularity(inst.p, opt.budget));
        else if (name == "minima") results.push_back(suite_minima(inst.p, opt.budget));
        else if (name == "indistinguishability")
            results.push_back(suite_indistinguishability(inst.p, opt.budget, opt.seed));
        else if (name == "ranks")
            results.push_back(suite_ranks(inst, opt.trials, opt.budget, opt.seed));
        else if (name == "edmonds") results.push_back(suite_edmonds(inst, opt.budget, opt.seed));
    }

    std::ostringstream csv;
    csv << "suite,pass,sampled,checked,detail\n";
    std::int64_t passed = 0;
    for (const auto& res : results) {
        csv << res.name << ',' << (res.pass ? "true" : "false") << ','
            << (res.sampled ? "true" : "false") << ',' << res.checked << ','
            << csv_quote(res.detail) << '\n';
        if (res.pass) {
            ++passed;
            out << "suite " << res.name << ": PASS (checked=" << res.checked
                << ", sampled=" << (res.sampled ? "true" : "false") << ")";
            if (!res.detail.empty()) out << ' ' << res.detail;
            out << '\n';
        } else {
            out << "suite " << res.name << ": FAIL " << res.detail << '\n';
        }
    }
    out << "verify: " << passed << "/" << results.size() << " suites passed";
    if (results.empty()) out << " (empty selection)";
    out << '\n';

    if (!opt.out.empty())
        atomic_write_text(std::filesystem::path(opt.out) / "verify_report.csv",
                          std::move(csv).str());
    return passed == static_cast<std::int64_t>(results.size()) ? 0 : 1;
}

}  // namespace partsub::cli
