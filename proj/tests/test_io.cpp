#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "partsub/errors.hpp"
#include "partsub/io.hpp"
#include "partsub/oracle.hpp"
#include "partsub/solvers.hpp"

using namespace partsub;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("partsub_io_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

void corrupt_line(const fs::path& file, std::size_t line_no,
                  const std::string& replacement) {
    std::ifstream in(file);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    in.close();
    REQUIRE(line_no < lines.size());
    lines[line_no] = replacement;
    std::ofstream out(file, std::ios::trunc);
    for (const auto& l : lines) out << l << "\n";
}

}  // namespace

TEST_CASE("atomic_write_text writes exact content and creates parents") {
    TempDir tmp;
    const fs::path f = tmp.path / "deep" / "nested" / "file.txt";
    atomic_write_text(f, "hello\nworld\n");
    CHECK(read_text(f) == "hello\nworld\n");
    // overwrite in place
    atomic_write_text(f, "second");
    CHECK(read_text(f) == "second");
    // no stray temp files left behind
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(f.parent_path())) ++entries;
    CHECK(entries == 1);
    CHECK_THROWS_AS(read_text(tmp.path / "missing.txt"), IoError);
}

TEST_CASE("partition round-trips and rejects malformed files") {
    TempDir tmp;
    Partition part = sample_equipartition(180, 3, 7);
    const fs::path f = tmp.path / "partition.txt";
    save_partition(f, part);

    Partition loaded = load_partition(f);
    CHECK(loaded.universe_size == part.universe_size);
    CHECK(loaded.part_of == part.part_of);
    CHECK(loaded.part_sizes == part.part_sizes);
    CHECK(loaded.seed == part.seed);

    // byte-identical re-save
    const std::string bytes = read_text(f);
    save_partition(f, loaded);
    CHECK(read_text(f) == bytes);

    SUBCASE("part index out of range") {
        corrupt_line(f, 1, "9");
        CHECK_THROWS_AS(load_partition(f), IoError);
    }
    SUBCASE("wrong element count") {
        corrupt_line(f, 0, "181 3 7");
        CHECK_THROWS_AS(load_partition(f), IoError);
    }
    SUBCASE("non-numeric token") {
        corrupt_line(f, 5, "two");
        CHECK_THROWS_AS(load_partition(f), IoError);
    }
}

TEST_CASE("params round-trip recomputes and checks derived fields") {
    TempDir tmp;
    HardParams p = derive_params(60, 2.0, ParamMode::Desk, 4);
    const fs::path f = tmp.path / "params.txt";
    save_params(f, p);

    HardParams loaded = load_params(f);
    CHECK(loaded.n == 60);
    CHECK(loaded.r == 3);
    CHECK(loaded.g == 4);
    CHECK(loaded.c == 2.0);
    CHECK(loaded.mode == ParamMode::Desk);
    CHECK(loaded.theta == 29);
    CHECK(loaded.N == 180);

    SUBCASE("tampered derived field is named") {
        corrupt_line(f, 7, "theta=30");
        CHECK_THROWS_WITH_AS(load_params(f), doctest::Contains("theta"), IoError);
    }
    SUBCASE("inconsistent base parameters") {
        corrupt_line(f, 2, "g=6");
        CHECK_THROWS_WITH_AS(load_params(f),
                             doctest::Contains("stored parameters are inconsistent"),
                             IoError);
    }
    SUBCASE("missing key") {
        corrupt_line(f, 0, "x=60");
        CHECK_THROWS_AS(load_params(f), IoError);
    }
}

TEST_CASE("matroid file references its partition and cross-checks sizes") {
    TempDir tmp;
    HardParams p = derive_params(60, 1.0, ParamMode::Desk, 4);
    Partition base = sample_equipartition(p.N, p.r, 3);
    HardMatroidPair pair = build_hard_pair(p, base);

    save_partition(tmp.path / "m_odd_parts.txt", pair.m_odd.partition);
    save_matroid(tmp.path / "m_odd.txt", pair.m_odd, "m_odd_parts.txt");

    NestedMatroid loaded = load_matroid(tmp.path / "m_odd.txt");
    CHECK(loaded.thresholds == pair.m_odd.thresholds);
    CHECK(loaded.partition.part_of == pair.m_odd.partition.part_of);
    loaded.validate();

    SUBCASE("missing partition file") {
        fs::remove(tmp.path / "m_odd_parts.txt");
        CHECK_THROWS_AS(load_matroid(tmp.path / "m_odd.txt"), IoError);
    }
    SUBCASE("part size column disagrees with the partition") {
        corrupt_line(tmp.path / "m_odd.txt", 1, "119 52");
        CHECK_THROWS_AS(load_matroid(tmp.path / "m_odd.txt"), IoError);
    }
}

TEST_CASE("intersection file lists size then sorted ids") {
    TempDir tmp;
    IntersectionResult res;
    res.size = 3;
    res.elements = {2, 5, 11};
    save_intersection(tmp.path / "isec.txt", res);
    CHECK(read_text(tmp.path / "isec.txt") == "size 3\n2\n5\n11\n");
}

TEST_CASE("game rows CSV has the documented header and spelling") {
    std::vector<GameQueryRow> rows(2);
    rows[0] = {1, 0, Query::Kind::Implicit, 90, 47, 47, true};
    rows[1] = {2, 3, Query::Kind::Explicit, 10, 5, 4, false};
    CHECK(game_rows_csv(rows) ==
          "round,query_id,kind,size,answer_f,answer_fhat,balanced\n"
          "1,0,implicit,90,47,47,true\n"
          "2,3,explicit,10,5,4,false\n");
}

TEST_CASE("solver rows CSV spells variants and booleans") {
    std::vector<SolverRow> rows(2);
    rows[0] = {7, Variant::FHAT, -2, 5, 6187, true};
    rows[1] = {8, Variant::FHATPRIME, -7, 2, 184, false};
    CHECK(solver_rows_csv(rows) ==
          "instance_seed,variant,min_value,rounds,queries,correct\n"
          "7,fhat,-2,5,6187,true\n"
          "8,fhatprime,-7,2,184,false\n");
}

TEST_CASE("game record JSON carries seeds, params, and verdicts") {
    HardParams p = derive_params(60, 1.0, ParamMode::Desk, 4);
    auto alg = random_querier(p, 5, 90, true, 11);
    GameRecord rec = adversary_game(*alg, p, 1, 99);

    const std::string text = game_record_json(rec);
    auto j = nlohmann::json::parse(text);
    CHECK(j["master_seed"].get<std::uint64_t>() == 99);
    CHECK(j["max_rounds"].get<std::int64_t>() == 1);
    CHECK(j["params"]["n"].get<std::int64_t>() == 60);
    CHECK(j["params"]["theta"].get<std::int64_t>() == 29);
    CHECK(j["params"]["mode"].get<std::string>() == "desk");
    CHECK(j["rounds"].is_array());
    CHECK(j["rounds"].size() == rec.rounds.size());
    CHECK(j["transcripts_identical"].is_boolean());
    if (!rec.failure_round) CHECK(j["failure_round"].is_null());

    TempDir tmp;
    save_game_record(tmp.path / "rec.json", rec);
    CHECK(read_text(tmp.path / "rec.json") == text);
    save_game_csv(tmp.path / "rows.csv", rec);
    CHECK(read_text(tmp.path / "rows.csv") == game_rows_csv(rec.rows));
}
