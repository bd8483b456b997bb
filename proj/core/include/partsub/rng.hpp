#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace partsub {

// All randomness in the project flows through mt19937_64 (bit-exact across
// standard libraries) and the helpers below. The <random> distribution
// classes are deliberately avoided: their output sequences are
// implementation-defined, which would break the byte-identical reproducibility
// contract of the experiment CSVs.

using Rng = std::mt19937_64;

// Stateless 64-bit mixer (splitmix64 finalizer). Used to derive independent
// stream seeds from (master seed, round, index) tuples.
std::uint64_t mix64(std::uint64_t x);

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(master ^ mix64(a ^ mix64(b + 0x9e3779b97f4a7c15ull)));
}

// Uniform draw from [0, n) by rejection; n > 0.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

// k distinct element ids drawn uniformly from [0, population); k <= population.
// Partial Fisher-Yates on an explicit index vector — intended for desk-scale
// populations only.
std::vector<std::int64_t> sample_without_replacement(Rng& rng,
                                                     std::int64_t population,
                                                     std::int64_t k);

// One draw from the hypergeometric law: an urn with `good` + `bad` balls,
// `draws` taken without replacement, returns the number of good balls taken.
// Exact inverse transform scanning outward from the distribution mode, so the
// cost is O(standard deviation) per draw, independent of the urn size.
std::int64_t hypergeometric(Rng& rng, std::int64_t good, std::int64_t bad,
                            std::int64_t draws);

// Signature of a uniformly random `draws`-subset of a population partitioned
// into `bins` (bins[j] elements each): the multivariate hypergeometric law,
// realised by chaining scalar hypergeometric draws.
std::vector<std::int64_t> multivariate_hypergeometric(Rng& rng,
                                                      const std::vector<std::int64_t>& bins,
                                                      std::int64_t draws);

}  // namespace partsub
