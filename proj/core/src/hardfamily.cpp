#include "partsub/hardfamily.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "partsub/errors.hpp"
#include "partsub/rng.hpp"

namespace partsub {

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::F: return "f";
        case Variant::FHAT: return "fhat";
        case Variant::FHATPRIME: return "fhatprime";
    }
    throw DomainError("unknown variant tag");
}

Variant variant_from_name(const std::string& name) {
    if (name == "f") return Variant::F;
    if (name == "fhat") return Variant::FHAT;
    if (name == "fhatprime") return Variant::FHATPRIME;
    throw DomainError("unknown variant name: " + name +
                      " (expected f, fhat, or fhatprime)");
}

namespace {

void check_basic_shape(std::int64_t n, std::int64_t r, std::int64_t g) {
    if (n < 2 || n % 2 != 0)
        throw ConfigError("part size n must be a positive even integer, got n=" +
                          std::to_string(n));
    if (r < 3 || r % 2 == 0)
        throw ConfigError("part count r must be an odd integer >= 3, got r=" +
                          std::to_string(r));
    if (g < 4 || g % 4 != 0)
        throw ConfigError("gap g must be a positive multiple of 4, got g=" +
                          std::to_string(g));
}

HardParams fill_derived(std::int64_t n, std::int64_t r, std::int64_t g, double c,
                        ParamMode mode) {
    HardParams p;
    p.n = n;
    p.r = r;
    p.g = g;
    p.c = c;
    p.mode = mode;
    p.tau = n / 2 - g;
    p.gamma = g * r / 4;
    p.theta = n / 2 - g / 4;
    p.cut = (2 * r + 2) / 3;  // ceil(2r/3)
    p.N = n * r;
    return p;
}

// Largest odd r >= 3 with 5*g*r <= n, or 0 when none exists.
std::int64_t natural_r(std::int64_t n, std::int64_t g) {
    std::int64_t rmax = n / (5 * g);
    if (rmax % 2 == 0) --rmax;
    return rmax >= 3 ? rmax : 0;
}

}  // namespace

std::int64_t HardParams::budget() const {
    if (c == 1.0) return N;
    double b = std::pow(static_cast<double>(N), c);
    return static_cast<std::int64_t>(std::floor(b + 1e-9));
}

std::int64_t HardParams::budget_n2c() const {
    if (c == 0.5) return n;
    double b = std::pow(static_cast<double>(n), 2.0 * c);
    return static_cast<std::int64_t>(std::floor(b + 1e-9));
}

HardParams derive_params(std::int64_t n, double c, ParamMode mode,
                         std::optional<std::int64_t> g_override,
                         std::optional<std::int64_t> r_override) {
    if (n < 2 || n % 2 != 0)
        throw ConfigError("part size n must be a positive even integer, got n=" +
                          std::to_string(n));
    if (!(c > 0.0))
        throw ConfigError("query exponent c must be positive");

    std::int64_t g = 0;
    if (mode == ParamMode::Asymptotic) {
        if (g_override)
            throw ConfigError("asymptotic mode derives g from n and c; "
                              "use desk mode to override g");
        double g0 = 200.0 * std::sqrt(c * static_cast<double>(n) *
                                      std::log(static_cast<double>(n)));
        g = static_cast<std::int64_t>(std::ceil(g0 / 4.0)) * 4;
        if (g < 4) g = 4;
    } else {
        if (!g_override)
            throw ConfigError("desk mode requires an explicit g");
        g = *g_override;
        if (g < 4 || g % 4 != 0)
            throw ConfigError("gap g must be a positive multiple of 4, got g=" +
                              std::to_string(g));
    }

    std::int64_t r = natural_r(n, g);
    if (r == 0) {
        std::ostringstream msg;
        msg << "constraint 5*g*r <= n has no odd solution r >= 3: "
            << "n=" << n << " g=" << g << " requires n >= " << 15 * g;
        throw ConfigError(msg.str());
    }
    if (r_override) {
        std::int64_t ro = *r_override;
        if (ro % 2 == 0 || ro < 3)
            throw ConfigError("r override must be an odd integer >= 3, got r=" +
                              std::to_string(ro));
        if (ro > r) {
            std::ostringstream msg;
            msg << "constraint 5*g*r <= n violated by r override: 5*" << g << "*"
                << ro << " = " << 5 * g * ro << " > " << n;
            throw ConfigError(msg.str());
        }
        r = ro;
    }

    return fill_derived(n, r, g, c, mode);
}

HardParams hard_params_raw(std::int64_t n, std::int64_t r, std::int64_t g, double c) {
    check_basic_shape(n, r, g);
    if (!(c > 0.0))
        throw ConfigError("query exponent c must be positive");
    return fill_derived(n, r, g, c, ParamMode::Desk);
}

namespace {

void check_signature(const HardParams& p, const Signature& x) {
    if (static_cast<std::int64_t>(x.size()) != p.r)
        throw DomainError("signature has " + std::to_string(x.size()) +
                          " coordinates, expected r=" + std::to_string(p.r));
    for (std::int64_t v : x)
        if (v < 0 || v > p.n)
            throw DomainError("signature coordinate " + std::to_string(v) +
                              " outside [0, n=" + std::to_string(p.n) + "]");
}

}  // namespace

std::int64_t suffix(const HardParams& p, const Signature& x, std::int64_t t) {
    check_signature(p, x);
    if (t < 1 || t > p.r)
        throw DomainError("suffix index t=" + std::to_string(t) +
                          " outside [1, r=" + std::to_string(p.r) + "]");
    std::int64_t s = -p.gamma;
    for (std::int64_t k = t; k <= p.r; ++k) s += x[k - 1] - p.tau;
    return s;
}

OddEvenIndex odd_even_index(const HardParams& p, const Signature& x) {
    check_signature(p, x);
    // One backward sweep accumulates every suffix value; the forward scan
    // keeps the smallest index on ties.
    std::vector<std::int64_t> ell(p.r);
    std::int64_t acc = -p.gamma;
    for (std::int64_t t = p.r; t >= 1; --t) {
        acc += x[t - 1] - p.tau;
        ell[t - 1] = acc;
    }
    OddEvenIndex out;
    for (std::int64_t t = 1; t <= p.r; ++t) {
        if (t % 2 == 1) {
            if (out.a == 0 || ell[t - 1] > out.ell_a) {
                out.a = t;
                out.ell_a = ell[t - 1];
            }
        } else {
            if (out.b == 0 || ell[t - 1] > out.ell_b) {
                out.b = t;
                out.ell_b = ell[t - 1];
            }
        }
    }
    return out;
}

std::int64_t h_value(const HardParams& p, const Signature& x) {
    OddEvenIndex oe = odd_even_index(p, x);
    return signature_sum(x) - std::max<std::int64_t>(0, oe.ell_a) -
           std::max<std::int64_t>(0, oe.ell_b);
}

Signature truncate(const HardParams& p, const Signature& x, Variant v) {
    check_signature(p, x);
    Signature y = x;
    switch (v) {
        case Variant::F:
            break;
        case Variant::FHAT:
            y[p.r - 1] = std::min(y[p.r - 1], p.theta);
            break;
        case Variant::FHATPRIME:
            for (std::int64_t i = p.cut; i <= p.r; ++i)
                y[i - 1] = std::min(y[i - 1], p.theta);
            break;
    }
    return y;
}

std::int64_t hhat_value(const HardParams& p, const Signature& x) {
    check_signature(p, x);
    if (x[p.r - 1] <= p.theta) return h_value(p, x);
    Signature y = truncate(p, x, Variant::FHAT);
    return h_value(p, y) - (x[p.r - 1] - p.theta);
}

std::int64_t hhatprime_value(const HardParams& p, const Signature& x) {
    Signature y = truncate(p, x, Variant::FHATPRIME);
    std::int64_t overflow = 0;
    for (std::int64_t i = p.cut; i <= p.r; ++i)
        overflow += std::max<std::int64_t>(0, x[i - 1] - p.theta);
    return h_value(p, y) - overflow;
}

std::int64_t variant_value(const HardParams& p, const Signature& x, Variant v) {
    switch (v) {
        case Variant::F: return h_value(p, x);
        case Variant::FHAT: return hhat_value(p, x);
        case Variant::FHATPRIME: return hhatprime_value(p, x);
    }
    throw DomainError("unknown variant tag");
}

std::int64_t marginal_closed_form(const HardParams& p, const Signature& x,
                                  std::int64_t i, Variant v) {
    check_signature(p, x);
    if (i < 1 || i > p.r)
        throw DomainError("coordinate i=" + std::to_string(i) + " outside [1, r=" +
                          std::to_string(p.r) + "]");
    if (x[i - 1] >= p.n)
        throw DomainError("marginal undefined: coordinate " + std::to_string(i) +
                          " already at its bound n=" + std::to_string(p.n));

    // Past the variant's truncation start, a coordinate at or above theta only
    // grows the subtracted overflow.
    std::int64_t clamp_start = p.r + 1;
    if (v == Variant::FHAT) clamp_start = p.r;
    else if (v == Variant::FHATPRIME) clamp_start = p.cut;
    if (i >= clamp_start && x[i - 1] >= p.theta) return -1;

    // Otherwise the step happens inside the truncated grid, where the variant
    // agrees with the base function.
    Signature y = truncate(p, x, v);
    OddEvenIndex oe = odd_even_index(p, y);
    std::int64_t d = 1;
    if (i >= oe.a && oe.ell_a >= 0) d -= 1;
    if (i >= oe.b && oe.ell_b >= 0) d -= 1;
    return d;
}

bool is_balanced(const HardParams& p, const Signature& x, std::int64_t i) {
    check_signature(p, x);
    if (i < 1 || i >= p.r)
        throw DomainError("balance index i=" + std::to_string(i) +
                          " outside [1, r) with r=" + std::to_string(p.r));
    for (std::int64_t j = i + 1; j <= p.r; ++j) {
        std::int64_t d = x[j - 1] - x[i - 1];
        if (8 * d > p.g || 8 * d < -p.g) return false;
    }
    return true;
}

HypergridFunction as_hypergrid(const HardParams& p, Variant v) {
    HypergridFunction f;
    f.bounds.assign(static_cast<std::size_t>(p.r), p.n);
    f.eval = [p, v](const Signature& x) { return variant_value(p, x, v); };
    return f;
}

namespace {

std::string sig_to_string(const Signature& x) {
    std::ostringstream os;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (k) os << ',';
        os << x[k];
    }
    return os.str();
}

// Checks one signature against its (prefix, sum) class: h must equal hhat,
// and the class must hold a single common value.
bool indis_account(const HardParams& p, const Signature& x, std::int64_t i,
                   std::map<std::vector<std::int64_t>,
                            std::pair<std::int64_t, Signature>>& classes,
                   IndisReport& rep) {
    std::int64_t hv = h_value(p, x);
    std::int64_t hh = hhat_value(p, x);
    if (hv != hh) {
        rep.ok = false;
        rep.counterexample = "h and hhat disagree on a balanced signature: x=" +
                             sig_to_string(x) + " i=" + std::to_string(i) +
                             " h=" + std::to_string(hv) + " hhat=" + std::to_string(hh);
        return false;
    }
    std::vector<std::int64_t> key(x.begin(), x.begin() + i);
    key.push_back(signature_sum(x));
    auto [it, inserted] = classes.try_emplace(std::move(key), hv, x);
    if (!inserted && it->second.first != hv) {
        rep.ok = false;
        rep.counterexample =
            "balanced pair with equal prefix and sum disagrees: x=" +
            sig_to_string(it->second.second) + " x'=" + sig_to_string(x) +
            " i=" + std::to_string(i) + " h=" + std::to_string(it->second.first) +
            " h'=" + std::to_string(hv);
        return false;
    }
    return true;
}

}  // namespace

IndisReport suffix_indistinguishability_check(const HardParams& p, std::int64_t i,
                                              std::int64_t grid_budget,
                                              std::int64_t samples,
                                              std::uint64_t seed) {
    if (i < 1 || 2 * i >= p.r)
        throw DomainError("balance index i=" + std::to_string(i) +
                          " outside [1, r/2) with r=" + std::to_string(p.r));

    IndisReport rep;

    // Exhaustive when the grid fits: one odometer sweep, classifying every
    // balanced signature into its (first i coordinates, sum) class.
    double grid = std::pow(static_cast<double>(p.n + 1), static_cast<double>(p.r));
    if (grid <= static_cast<double>(grid_budget)) {
        std::map<std::vector<std::int64_t>, std::pair<std::int64_t, Signature>> classes;
        Signature x(static_cast<std::size_t>(p.r), 0);
        for (;;) {
            if (is_balanced(p, x, i)) {
                ++rep.checked;
                if (!indis_account(p, x, i, classes, rep)) return rep;
            }
            std::int64_t k = 0;
            while (k < p.r && x[static_cast<std::size_t>(k)] == p.n) {
                x[static_cast<std::size_t>(k)] = 0;
                ++k;
            }
            if (k == p.r) break;
            ++x[static_cast<std::size_t>(k)];
        }
        rep.classes = static_cast<std::int64_t>(classes.size());
        return rep;
    }

    // Sampled fallback: draw a balanced signature, then a second one with the
    // same first i coordinates and the same tail sum. The second tail is drawn
    // coordinate by coordinate, each uniform over the values that keep the
    // remaining sum achievable — this terminates unconditionally and gives
    // every equal-sum tail positive probability (unlike whole-tail rejection,
    // which stalls when the first draw lands in the sum distribution's tail).
    rep.sampled = true;
    Rng rng(seed);
    std::int64_t slack = p.g / 8;
    for (std::int64_t trial = 0; trial < samples; ++trial) {
        Signature x(static_cast<std::size_t>(p.r), 0);
        for (std::int64_t k = 0; k < i; ++k)
            x[static_cast<std::size_t>(k)] =
                static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(p.n + 1)));
        std::int64_t anchor = x[static_cast<std::size_t>(i - 1)];
        std::int64_t lo = std::max<std::int64_t>(0, anchor - slack);
        std::int64_t hi = std::min(p.n, anchor + slack);
        std::uint64_t width = static_cast<std::uint64_t>(hi - lo + 1);

        std::int64_t tail_sum = 0;
        for (std::int64_t k = i; k < p.r; ++k) {
            x[static_cast<std::size_t>(k)] =
                lo + static_cast<std::int64_t>(uniform_below(rng, width));
            tail_sum += x[static_cast<std::size_t>(k)];
        }

        Signature y = x;
        std::int64_t rem = tail_sum;
        for (std::int64_t k = i; k < p.r; ++k) {
            const std::int64_t after = p.r - 1 - k;  // coordinates still to draw
            const std::int64_t v_lo = std::max(lo, rem - after * hi);
            const std::int64_t v_hi = std::min(hi, rem - after * lo);
            const std::int64_t v =
                v_lo + static_cast<std::int64_t>(uniform_below(
                           rng, static_cast<std::uint64_t>(v_hi - v_lo + 1)));
            y[static_cast<std::size_t>(k)] = v;
            rem -= v;
        }

        ++rep.checked;
        std::int64_t hx = h_value(p, x);
        std::int64_t hhx = hhat_value(p, x);
        std::int64_t hy = h_value(p, y);
        std::int64_t hhy = hhat_value(p, y);
        if (hx != hhx || hy != hhy || hx != hy) {
            rep.ok = false;
            rep.counterexample = "sampled balanced pair disagrees: x=" + sig_to_string(x) +
                                 " x'=" + sig_to_string(y) + " i=" + std::to_string(i) +
                                 " h=" + std::to_string(hx) + " hhat=" + std::to_string(hhx) +
                                 " h'=" + std::to_string(hy) + " hhat'=" + std::to_string(hhy);
            return rep;
        }
    }
    return rep;
}

}  // namespace partsub
