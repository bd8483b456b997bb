#include "partsub/hypergrid.hpp"

#include <algorithm>
#include <sstream>

#include "partsub/rng.hpp"

namespace partsub {

std::int64_t signature_sum(const Signature& x) {
    std::int64_t s = 0;
    for (std::int64_t v : x) s += v;
    return s;
}

bool Partition::is_equipartition() const {
    if (part_sizes.empty()) return false;
    for (std::int64_t s : part_sizes)
        if (s != part_sizes.front()) return false;
    return true;
}

void Partition::validate() const {
    if (universe_size <= 0) throw ConfigError("partition: empty universe");
    if (static_cast<std::int64_t>(part_of.size()) != universe_size)
        throw ConfigError("partition: part_of size != universe size");
    std::vector<std::int64_t> counts(part_sizes.size(), 0);
    for (std::int32_t p : part_of) {
        if (p < 1 || p > parts())
            throw ConfigError("partition: part index out of range");
        ++counts[static_cast<std::size_t>(p - 1)];
    }
    if (counts != part_sizes)
        throw ConfigError("partition: part_sizes disagree with part_of");
}

std::vector<std::int64_t> Partition::part_elements(std::int32_t part) const {
    if (part < 1 || part > parts())
        throw DomainError("part_elements: part index out of range");
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(part_sizes[static_cast<std::size_t>(part - 1)]));
    for (std::int64_t e = 0; e < universe_size; ++e)
        if (part_of[static_cast<std::size_t>(e)] == part) out.push_back(e);
    return out;
}

Signature signature(const Partition& p, const std::vector<std::int64_t>& s) {
    Signature x(static_cast<std::size_t>(p.parts()), 0);
    for (std::int64_t e : s) {
        if (e < 0 || e >= p.universe_size)
            throw DomainError("signature: element id out of range");
        ++x[static_cast<std::size_t>(p.part_of[static_cast<std::size_t>(e)] - 1)];
    }
    return x;
}

std::int64_t lift_eval(const Partition& p, const HypergridFunction& h,
                       const std::vector<std::int64_t>& s) {
    return h.eval(signature(p, s));
}

std::int64_t marginal_fd(const HypergridFunction& h, const Signature& x, std::int64_t i) {
    if (i < 0 || i >= static_cast<std::int64_t>(x.size()))
        throw DomainError("marginal_fd: coordinate index out of range");
    if (x[static_cast<std::size_t>(i)] >= h.bounds[static_cast<std::size_t>(i)])
        throw DomainError("marginal_fd: coordinate at its maximum");
    Signature y = x;
    ++y[static_cast<std::size_t>(i)];
    return h.eval(y) - h.eval(x);
}

std::string SubmodularityCounterexample::to_string() const {
    std::ostringstream os;
    os << "x=";
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (k) os << ',';
        os << x[k];
    }
    os << " i=" << (i + 1) << " j=" << (j + 1) << " lhs=" << lhs << " rhs=" << rhs;
    return os.str();
}

namespace {

std::int64_t grid_points(const std::vector<std::int64_t>& bounds, std::int64_t cap) {
    std::int64_t n = 1;
    for (std::int64_t b : bounds) {
        if (b < 0) throw DomainError("grid bounds must be non-negative");
        if (n > cap / (b + 1)) return cap + 1;  // overflow-safe saturation
        n *= (b + 1);
    }
    return n;
}

// Advance a mixed-radix counter in lexicographic order (last coordinate
// fastest). Returns false after the last point.
bool next_point(Signature& x, const std::vector<std::int64_t>& bounds) {
    for (std::size_t k = x.size(); k-- > 0;) {
        if (x[k] < bounds[k]) {
            ++x[k];
            std::fill(x.begin() + static_cast<std::ptrdiff_t>(k) + 1, x.end(), 0);
            return true;
        }
    }
    return false;
}

}  // namespace

SubmodularityReport submodularity_check(const HypergridFunction& h, std::int64_t budget) {
    const auto& bounds = h.bounds;
    const std::int64_t r = static_cast<std::int64_t>(bounds.size());
    if (r == 0) throw DomainError("submodularity_check: zero-dimensional grid");
    SubmodularityReport rep;

    const std::int64_t points = grid_points(bounds, budget);
    if (points <= budget) {
        // Exhaustive: cache all values in a flat array indexed lexicographically,
        // then every marginal is a difference of two lookups.
        std::vector<std::int64_t> stride(static_cast<std::size_t>(r), 1);
        for (std::size_t k = static_cast<std::size_t>(r) - 1; k-- > 0;)
            stride[k] = stride[k + 1] * (bounds[k + 1] + 1);

        std::vector<std::int64_t> value(static_cast<std::size_t>(points));
        Signature x(static_cast<std::size_t>(r), 0);
        std::int64_t idx = 0;
        do {
            value[static_cast<std::size_t>(idx++)] = h.eval(x);
        } while (next_point(x, bounds));

        std::fill(x.begin(), x.end(), 0);
        idx = 0;
        do {
            for (std::int64_t i = 0; i < r; ++i) {
                if (x[static_cast<std::size_t>(i)] >= bounds[static_cast<std::size_t>(i)]) continue;
                const std::int64_t idx_i = idx + stride[static_cast<std::size_t>(i)];
                for (std::int64_t j = 0; j < r; ++j) {
                    // marginal_j must be defined at x and at x + e_i.
                    const std::int64_t xj = x[static_cast<std::size_t>(j)] + (i == j ? 1 : 0);
                    if (xj >= bounds[static_cast<std::size_t>(j)]) continue;
                    const std::int64_t sj = stride[static_cast<std::size_t>(j)];
                    const std::int64_t lhs = value[static_cast<std::size_t>(idx + sj)] -
                                             value[static_cast<std::size_t>(idx)];
                    const std::int64_t rhs = value[static_cast<std::size_t>(idx_i + sj)] -
                                             value[static_cast<std::size_t>(idx_i)];
                    ++rep.checked;
                    if (lhs < rhs) {
                        rep.ok = false;
                        rep.counterexample = SubmodularityCounterexample{x, i, j, lhs, rhs};
                        return rep;
                    }
                }
            }
            ++idx;
        } while (next_point(x, bounds));
        return rep;
    }

    // Sampled fallback: uniform random (x, i, j) triples.
    rep.sampled = true;
    Rng rng(derive_seed(0x5f3759df, static_cast<std::uint64_t>(points)));
    Signature x(static_cast<std::size_t>(r), 0);
    for (std::int64_t t = 0; t < budget; ++t) {
        for (std::int64_t k = 0; k < r; ++k)
            x[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(
                uniform_below(rng, static_cast<std::uint64_t>(bounds[static_cast<std::size_t>(k)] + 1)));
        const std::int64_t i = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(r)));
        const std::int64_t j = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(r)));
        if (x[static_cast<std::size_t>(i)] >= bounds[static_cast<std::size_t>(i)]) continue;
        const std::int64_t xj = x[static_cast<std::size_t>(j)] + (i == j ? 1 : 0);
        if (xj >= bounds[static_cast<std::size_t>(j)]) continue;
        Signature xi = x;
        ++xi[static_cast<std::size_t>(i)];
        const std::int64_t lhs = marginal_fd(h, x, j);
        Signature xij = xi;
        ++xij[static_cast<std::size_t>(j)];
        const std::int64_t rhs = h.eval(xij) - h.eval(xi);
        ++rep.checked;
        if (lhs < rhs) {
            rep.ok = false;
            rep.counterexample = SubmodularityCounterexample{x, i, j, lhs, rhs};
            return rep;
        }
    }
    return rep;
}

GridMinimum corner_minimum(const HypergridFunction& h) {
    const std::size_t r = h.bounds.size();
    if (r == 0) throw DomainError("corner_minimum: zero-dimensional grid");
    if (r > 62) throw ResourceError("corner_minimum: too many coordinates for 2^r scan");
    GridMinimum best;
    bool first = true;
    Signature x(r, 0);
    // Lexicographic corner order: treat coordinate 0 as the most significant bit.
    for (std::uint64_t mask = 0; mask < (1ull << r); ++mask) {
        for (std::size_t k = 0; k < r; ++k)
            x[k] = (mask >> (r - 1 - k)) & 1 ? h.bounds[k] : 0;
        const std::int64_t v = h.eval(x);
        if (first || v < best.value) {
            best.value = v;
            best.argmin = x;
            first = false;
        }
    }
    return best;
}

GridMinimum grid_minimum_bruteforce(const HypergridFunction& h, std::int64_t budget) {
    if (h.bounds.empty()) throw DomainError("grid_minimum_bruteforce: zero-dimensional grid");
    if (grid_points(h.bounds, budget) > budget)
        throw ResourceError("grid_minimum_bruteforce: grid exceeds the point budget");
    GridMinimum best;
    bool first = true;
    Signature x(h.bounds.size(), 0);
    do {
        const std::int64_t v = h.eval(x);
        if (first || v < best.value) {  // strict: lexicographically smallest argmin wins
            best.value = v;
            best.argmin = x;
            first = false;
        }
    } while (next_point(x, h.bounds));
    return best;
}

}  // namespace partsub
