#include "commands.hpp"

#include <algorithm>

#include "partsub/io.hpp"
#include "partsub/rng.hpp"

namespace partsub::cli {

InstancePaths InstancePaths::in(const std::filesystem::path& dir) {
    InstancePaths f;
    f.params = dir / "params.txt";
    f.partition = dir / "partition.txt";
    f.m_odd = dir / "m_odd.txt";
    f.m_odd_parts = dir / "m_odd_parts.txt";
    f.m_even = dir / "m_even.txt";
    f.m_even_parts = dir / "m_even_parts.txt";
    f.m_even_prime = dir / "m_even_prime.txt";
    f.m_even_prime_parts = dir / "m_even_prime_parts.txt";
    return f;
}

Instance load_instance(const std::filesystem::path& dir) {
    InstancePaths f = InstancePaths::in(dir);
    Instance inst;
    inst.p = load_params(f.params);
    inst.base = load_partition(f.partition);
    inst.m_odd = load_matroid(f.m_odd);
    inst.m_even = load_matroid(f.m_even);
    inst.m_even_prime = load_matroid(f.m_even_prime);
    return inst;
}

ParamMode mode_from_flag(const std::string& mode) {
    return mode == "asymptotic" ? ParamMode::Asymptotic : ParamMode::Desk;
}

Set random_subset(std::int64_t universe, std::uint64_t seed) {
    Rng rng(seed);
    std::int64_t size = static_cast<std::int64_t>(
        uniform_below(rng, static_cast<std::uint64_t>(universe + 1)));
    Set s = sample_without_replacement(rng, universe, size);
    std::sort(s.begin(), s.end());
    return s;
}

std::string percent(std::int64_t numerator, std::int64_t denominator) {
    if (denominator <= 0) return "0.0%";
    std::int64_t permille = (1000 * numerator + denominator / 2) / denominator;
    return std::to_string(permille / 10) + "." + std::to_string(permille % 10) + "%";
}

}  // namespace partsub::cli
