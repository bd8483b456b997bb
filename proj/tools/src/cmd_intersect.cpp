#include <numeric>
#include <ostream>
#include <sstream>

#include "commands.hpp"
#include "partsub/errors.hpp"
#include "partsub/io.hpp"
#include "partsub/oracle.hpp"

namespace partsub::cli {

int cmd_intersect(const IntersectOptions& opt, std::ostream& out) {
    if (opt.illustration && !opt.dir.empty())
        throw ConfigError("--illustration generates its own instance; "
                          "drop the instance directory argument or the flag");

    HardParams p;
    Partition base;
    NestedMatroid m_odd, m_even, m_even_prime;
    if (!opt.dir.empty()) {
        Instance inst = load_instance(opt.dir);
        p = inst.p;
        base = std::move(inst.base);
        m_odd = std::move(inst.m_odd);
        m_even = std::move(inst.m_even);
        m_even_prime = std::move(inst.m_even_prime);
    } else {
        p = derive_params(opt.n, 1.0, ParamMode::Desk, opt.g.value_or(4),
                          opt.r.value_or(3));
        base = sample_equipartition(p.N, p.r, opt.seed);
        HardMatroidPair pair = build_hard_pair(p, base);
        m_odd = std::move(pair.m_odd);
        m_even = std::move(pair.m_even);
        m_even_prime = std::move(pair.m_even_prime);
    }

    NestedMatroid even_star = dual_nested(m_even);
    NestedMatroid even_prime_star = dual_nested(m_even_prime);
    IntersectionResult i1 =
        intersection_max(oracle_closed_form(m_odd), oracle_closed_form(even_star));
    IntersectionResult i2 =
        intersection_max(oracle_closed_form(m_odd), oracle_closed_form(even_prime_star));
    EdmondsMinResult e1 = edmonds_min(m_odd, even_star);
    EdmondsMinResult e2 = edmonds_min(m_odd, even_prime_star);

    Set universe(static_cast<std::size_t>(p.N));
    std::iota(universe.begin(), universe.end(), 0);
    std::int64_t c_even = p.N - rank_closed_form(m_even, universe);
    std::int64_t c_prime = p.N - rank_closed_form(m_even_prime, universe);
    std::int64_t corner_h = corner_minimum(as_hypergrid(p, Variant::F)).value;
    std::int64_t corner_hhat = corner_minimum(as_hypergrid(p, Variant::FHAT)).value;
    std::int64_t identity1 = c_even + corner_h;
    std::int64_t identity2 = c_prime + corner_hhat;

    bool have_expected = p.r == 3;
    std::int64_t expect1 = p.n + 5 * p.g / 4;
    std::int64_t expect2 = p.n + 3 * p.g / 4;
    bool ok = i1.size == e1.value && i2.size == e2.value && i1.size == identity1 &&
              i2.size == identity2;
    if (have_expected)
        ok = ok && i1.size == expect1 && i2.size == expect2 && i1.size - i2.size == p.g / 2;

    std::ostringstream csv;
    csv << "pair,size,edmonds_min,corner_identity,expected,match\n";
    auto row = [&](const char* name, const IntersectionResult& res, std::int64_t minimax,
                   std::int64_t identity, std::int64_t expected) {
        bool match = res.size == minimax && res.size == identity &&
                     (!have_expected || res.size == expected);
        csv << name << ',' << res.size << ',' << minimax << ',' << identity << ',';
        if (have_expected) csv << expected;
        csv << ',' << (match ? "true" : "false") << '\n';
    };
    row("odd_vs_even_dual", i1, e1.value, identity1, expect1);
    row("odd_vs_even_prime_dual", i2, e2.value, identity2, expect2);

    out << "intersect: n=" << p.n << " r=" << p.r << " g=" << p.g << " N=" << p.N
        << " seed=" << opt.seed << '\n';
    if (have_expected)
        out << "intersection sizes: " << i1.size << " and " << i2.size
            << " (expected n+1.25g=" << expect1 << " and n+0.75g=" << expect2 << "), gap "
            << i1.size - i2.size << " (expected g/2=" << p.g / 2 << ")\n";
    else
        out << "intersection sizes: " << i1.size << " and " << i2.size << ", gap "
            << i1.size - i2.size << '\n';
    out << "minimax check: " << e1.value << " and " << e2.value
        << "; corner identity C+min: " << identity1 << " and " << identity2
        << " (C=" << c_even << ", C'=" << c_prime << ") -> " << (ok ? "PASS" : "FAIL") << '\n';

    if (!opt.out.empty()) {
        std::filesystem::path dir(opt.out);
        atomic_write_text(dir / "intersect.csv", std::move(csv).str());
        save_intersection(dir / "intersect_even_dual.txt", i1);
        save_intersection(dir / "intersect_even_prime_dual.txt", i2);
    }
    return ok ? 0 : 1;
}

}  // namespace partsub::cli
