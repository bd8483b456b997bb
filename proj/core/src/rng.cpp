#include "partsub/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "partsub/errors.hpp"

namespace partsub {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    if (n == 0) throw DomainError("uniform_below: n must be positive");
    // Rejection sampling on the top of the range keeps the draw unbiased.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % n);
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit && limit != 0);
    return v % n;
}

std::vector<std::int64_t> sample_without_replacement(Rng& rng,
                                                     std::int64_t population,
                                                     std::int64_t k) {
    if (k < 0 || population < 0 || k > population)
        throw DomainError("sample_without_replacement: need 0 <= k <= population");
    std::vector<std::int64_t> ids(static_cast<std::size_t>(population));
    std::iota(ids.begin(), ids.end(), std::int64_t{0});
    for (std::int64_t i = 0; i < k; ++i) {
        const std::int64_t j = i + static_cast<std::int64_t>(
            uniform_below(rng, static_cast<std::uint64_t>(population - i)));
        std::swap(ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(j)]);
    }
    ids.resize(static_cast<std::size_t>(k));
    return ids;
}

namespace {

// log C(n, k) via lgamma.
double log_choose(std::int64_t n, std::int64_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace

std::int64_t hypergeometric(Rng& rng, std::int64_t good, std::int64_t bad,
                            std::int64_t draws) {
    if (good < 0 || bad < 0 || draws < 0 || draws > good + bad)
        throw DomainError("hypergeometric: need 0 <= draws <= good + bad");
    const std::int64_t population = good + bad;
    const std::int64_t lo = std::max<std::int64_t>(0, draws - bad);
    const std::int64_t hi = std::min(good, draws);
    if (lo == hi) return lo;

    // Mode of the pmf.
    std::int64_t mode = static_cast<std::int64_t>(
        (static_cast<double>(draws) + 1.0) * (static_cast<double>(good) + 1.0) /
        (static_cast<double>(population) + 2.0));
    mode = std::clamp(mode, lo, hi);

    const double log_pmf_mode = log_choose(good, mode) + log_choose(bad, draws - mode) -
                                log_choose(population, draws);
    const double pmf_mode = std::exp(log_pmf_mode);

    // u uniform in [0,1): consume probability mass scanning outward from the
    // mode, alternating sides. pmf ratios:
    //   p(k+1)/p(k) = (good-k)(draws-k) / ((k+1)(bad-draws+k+1))
    //   p(k-1)/p(k) = k(bad-draws+k) / ((good-k+1)(draws-k+1))
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double remaining = u - pmf_mode;
    if (remaining < 0) return mode;

    std::int64_t up = mode;       // last k consumed going up
    std::int64_t down = mode;     // last k consumed going down
    double pmf_up = pmf_mode;
    double pmf_down = pmf_mode;
    while (up < hi || down > lo) {
        if (up < hi) {
            pmf_up *= static_cast<double>(good - up) * static_cast<double>(draws - up) /
                      (static_cast<double>(up + 1) * static_cast<double>(bad - draws + up + 1));
            ++up;
            remaining -= pmf_up;
            if (remaining < 0) return up;
        }
        if (down > lo) {
            pmf_down *= static_cast<double>(down) * static_cast<double>(bad - draws + down) /
                        (static_cast<double>(good - down + 1) * static_cast<double>(draws - down + 1));
            --down;
            remaining -= pmf_down;
            if (remaining < 0) return down;
        }
    }
    // Floating-point slack (u extremely close to 1): return the heavier tail end.
    return hi;
}

std::vector<std::int64_t> multivariate_hypergeometric(Rng& rng,
                                                      const std::vector<std::int64_t>& bins,
                                                      std::int64_t draws) {
    std::int64_t population = 0;
    for (std::int64_t b : bins) {
        if (b < 0) throw DomainError("multivariate_hypergeometric: negative bin");
        population += b;
    }
    if (draws < 0 || draws > population)
        throw DomainError("multivariate_hypergeometric: need 0 <= draws <= population");
    std::vector<std::int64_t> counts(bins.size(), 0);
    std::int64_t remaining_pop = population;
    std::int64_t remaining_draws = draws;
    for (std::size_t j = 0; j + 1 < bins.size(); ++j) {
        const std::int64_t c =
            hypergeometric(rng, bins[j], remaining_pop - bins[j], remaining_draws);
        counts[j] = c;
        remaining_pop -= bins[j];
        remaining_draws -= c;
    }
    if (!bins.empty()) counts.back() = remaining_draws;
    return counts;
}

}  // namespace partsub
