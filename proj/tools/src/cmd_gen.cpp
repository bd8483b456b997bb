#include <ostream>

#include "commands.hpp"
#include "partsub/io.hpp"
#include "partsub/oracle.hpp"

namespace partsub::cli {

int cmd_gen(const GenOptions& opt, std::ostream& out) {
    HardParams p = derive_params(opt.n, opt.c, mode_from_flag(opt.mode), opt.g, opt.r);
    Partition base = sample_equipartition(p.N, p.r, opt.seed);
    HardMatroidPair pair = build_hard_pair(p, base);

    InstancePaths f = InstancePaths::in(opt.out);
    save_params(f.params, p);
    save_partition(f.partition, base);
    save_partition(f.m_odd_parts, pair.m_odd.partition);
    save_matroid(f.m_odd, pair.m_odd, f.m_odd_parts.filename().string());
    save_partition(f.m_even_parts, pair.m_even.partition);
    save_matroid(f.m_even, pair.m_even, f.m_even_parts.filename().string());
    save_partition(f.m_even_prime_parts, pair.m_even_prime.partition);
    save_matroid(f.m_even_prime, pair.m_even_prime, f.m_even_prime_parts.filename().string());

    out << "instance: n=" << p.n << " r=" << p.r << " g=" << p.g << " c=" << p.c
        << " mode=" << opt.mode << " seed=" << opt.seed << '\n';
    out << "derived: N=" << p.N << " tau=" << p.tau << " gamma=" << p.gamma
        << " theta=" << p.theta << " cut=" << p.cut << " budget=" << p.budget() << '\n';
    for (const auto& path : {f.params, f.partition, f.m_odd, f.m_odd_parts, f.m_even,
                             f.m_even_parts, f.m_even_prime, f.m_even_prime_parts})
        out << "wrote " << path.generic_string() << '\n';
    return 0;
}

}  // namespace partsub::cli
