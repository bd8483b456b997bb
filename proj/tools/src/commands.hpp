#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "partsub/hardfamily.hpp"
#include "partsub/hypergrid.hpp"
#include "partsub/matroids.hpp"

namespace partsub::cli {

// Fixed file names inside an instance directory, shared by gen (writer) and
// every command that loads instances.
struct InstancePaths {
    std::filesystem::path params;
    std::filesystem::path partition;
    std::filesystem::path m_odd;
    std::filesystem::path m_odd_parts;
    std::filesystem::path m_even;
    std::filesystem::path m_even_parts;
    std::filesystem::path m_even_prime;
    std::filesystem::path m_even_prime_parts;

    static InstancePaths in(const std::filesystem::path& dir);
};

struct Instance {
    HardParams p;
    Partition base;
    NestedMatroid m_odd;
    NestedMatroid m_even;
    NestedMatroid m_even_prime;
};

Instance load_instance(const std::filesystem::path& dir);

ParamMode mode_from_flag(const std::string& mode);

// Uniform random subset of {0..N-1} of uniform random size, ascending.
Set random_subset(std::int64_t universe, std::uint64_t seed);

// percent with one decimal from an integer ratio, e.g. (3, 200) -> "1.5%".
std::string percent(std::int64_t numerator, std::int64_t denominator);

struct GenOptions {
    std::int64_t n = 0;
    std::optional<std::int64_t> r;
    std::optional<std::int64_t> g;
    double c = 1.0;
    std::string mode = "desk";
    std::uint64_t seed = 1;
    std::string out = "instance";
};
int cmd_gen(const GenOptions& opt, std::ostream& out);

struct VerifyOptions {
    std::string dir;
    std::vector<std::string> suites;  // empty -> all; "none" -> empty selection
    std::int64_t budget = 10'000'000;
    std::int64_t trials = 1000;       // random sets per matroid in the rank suite
    std::uint64_t seed = 1;
    std::string out;                  // optional report directory
};
int cmd_verify(const VerifyOptions& opt, std::ostream& out);

struct GameOptions {
    std::int64_t n = 0;
    std::optional<std::int64_t> r;
    std::optional<std::int64_t> g;
    double c = 1.0;
    std::string mode = "desk";
    std::uint64_t seed = 1;
    std::int64_t trials = 100;
    std::int64_t rounds = 2;
    std::int64_t queries_per_round = 1000;
    std::string out;                  // optional output directory
};
int cmd_game(const GameOptions& opt, std::ostream& out);

struct IntersectOptions {
    bool illustration = false;
    std::string dir;                  // instance directory (exclusive with --illustration)
    std::int64_t n = 60;
    std::optional<std::int64_t> r;
    std::optional<std::int64_t> g;
    std::uint64_t seed = 1;
    std::int64_t budget = 10'000'000;
    std::string out;                  // optional output directory
};
int cmd_intersect(const IntersectOptions& opt, std::ostream& out);

struct SolveOptions {
    std::int64_t n = 60;
    std::int64_t r = 3;
    std::int64_t g = 4;
    double c = 2.0;                   // the solver's chain round needs ~100n queries
    std::uint64_t seed = 1;
    std::int64_t trials = 100;
    std::string variant;              // empty -> mixed per trial
    std::int64_t budget = 10'000'000;
    std::string out;                  // optional output directory
};
int cmd_solve(const SolveOptions& opt, std::ostream& out);

}  // namespace partsub::cli
