#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "partsub/hardfamily.hpp"
#include "partsub/hypergrid.hpp"
#include "partsub/matroids.hpp"
#include "partsub/oracle.hpp"

namespace partsub {

// All writers go through atomic_write_text: the content is staged in a
// temporary file in the destination directory and renamed into place, so a
// crash mid-write never leaves a truncated file behind. Readers throw IoError
// on missing files, malformed syntax, or integrity-check failures.

void atomic_write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

// Partition file: header line "N r seed", then one 1-based part index per
// element id in ascending id order. load_partition recomputes part_sizes and
// validates shape; it does not require equal part sizes (matroid coarsenings
// have unequal parts).
void save_partition(const std::filesystem::path& path, const Partition& part);
Partition load_partition(const std::filesystem::path& path);

// Params file: flat key=value lines (n, r, g, c, mode, then the derived
// fields tau, gamma, theta, cut, N). On load the derived fields are
// recomputed from (n, r, g, c, mode) and checked against the stored values;
// any mismatch is an IoError naming the offending key.
void save_params(const std::filesystem::path& path, const HardParams& p);
HardParams load_params(const std::filesystem::path& path);

// Nested-matroid file: a count line "k", then k lines "part_size threshold"
// in nesting order, then "partition <filename>" referencing the partition
// file that holds the element-to-part map (resolved relative to the matroid
// file's directory). The part_size column duplicates the partition's part
// sizes as an integrity check; the loader verifies both against each other.
void save_matroid(const std::filesystem::path& path, const NestedMatroid& m,
                  const std::string& partition_filename);
NestedMatroid load_matroid(const std::filesystem::path& path);

// Intersection result: "size <k>" then the sorted element ids, one per line.
void save_intersection(const std::filesystem::path& path, const IntersectionResult& res);

// Game transcript CSV: fixed header
//   round,query_id,kind,size,answer_f,answer_fhat,balanced
// with kind spelled "explicit"/"implicit" and balanced "true"/"false".
std::string game_rows_csv(const std::vector<GameQueryRow>& rows);
void save_game_csv(const std::filesystem::path& path, const GameRecord& rec);

// Full game record as JSON: master seed, the params block, per-round
// verdicts, and the failure coordinates (null when the adversary never
// failed). Returned pretty-printed.
std::string game_record_json(const GameRecord& rec);
void save_game_record(const std::filesystem::path& path, const GameRecord& rec);

// One solver trial for the results CSV.
struct SolverRow {
    std::uint64_t instance_seed = 0;
    Variant variant = Variant::F;
    std::int64_t min_value = 0;
    std::int64_t rounds = 0;
    std::int64_t queries = 0;
    bool correct = false;
};

// Solver results CSV: fixed header
//   instance_seed,variant,min_value,rounds,queries,correct
std::string solver_rows_csv(const std::vector<SolverRow>& rows);
void save_solver_csv(const std::filesystem::path& path, const std::vector<SolverRow>& rows);

}  // namespace partsub
