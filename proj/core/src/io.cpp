#include "partsub/io.hpp"

#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>
#include <utility>

#include "json.hpp"
#include "partsub/errors.hpp"

namespace partsub {

namespace {

[[noreturn]] void io_fail(const std::filesystem::path& path, const std::string& what) {
    throw IoError(path.string() + ": " + what);
}

std::int64_t parse_i64(const std::filesystem::path& path, const std::string& token,
                       const char* what) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        io_fail(path, std::string("expected an integer for ") + what + ", got '" + token + "'");
    return v;
}

std::uint64_t parse_u64(const std::filesystem::path& path, const std::string& token,
                        const char* what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        io_fail(path, std::string("expected an unsigned integer for ") + what + ", got '" +
                          token + "'");
    return v;
}

double parse_double(const std::filesystem::path& path, const std::string& token,
                    const char* what) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        io_fail(path, std::string("expected a number for ") + what + ", got '" + token + "'");
    return v;
}

// Shortest round-trip formatting, so c=1.0 prints as "1" and 1.5 as "1.5".
std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) return "0";
    return std::string(buf, ptr);
}

// Non-empty lines of the file, in order, with trailing '\r' stripped.
std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::istringstream in(read_text(path));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

const char* mode_name(ParamMode m) { return m == ParamMode::Desk ? "desk" : "asymptotic"; }

ParamMode mode_from_name(const std::filesystem::path& path, const std::string& s) {
    if (s == "desk") return ParamMode::Desk;
    if (s == "asymptotic") return ParamMode::Asymptotic;
    io_fail(path, "unknown mode '" + s + "' (expected desk or asymptotic)");
}

const char* kind_name(Query::Kind k) {
    return k == Query::Kind::Explicit ? "explicit" : "implicit";
}

}  // namespace

void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path dir = path.parent_path();
    if (!dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec) io_fail(path, "cannot create parent directory: " + ec.message());
    }

    static std::atomic<std::uint64_t> counter{0};
    std::uint64_t nonce =
        counter.fetch_add(1, std::memory_order_relaxed) ^ std::random_device{}();
    std::filesystem::path tmp = path;
    tmp += ".tmp" + std::to_string(nonce);

    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) io_fail(tmp, "cannot open for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            io_fail(tmp, "write failed");
        }
    }

    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ec2;
        std::filesystem::remove(tmp, ec2);
        io_fail(path, "rename failed: " + ec.message());
    }
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) io_fail(path, "read failed");
    return std::move(buf).str();
}

void save_partition(const std::filesystem::path& path, const Partition& part) {
    part.validate();
    std::ostringstream out;
    out << part.universe_size << ' ' << part.parts() << ' ' << part.seed << '\n';
    for (std::int64_t e = 0; e < part.universe_size; ++e)
        out << part.part_of[static_cast<std::size_t>(e)] << '\n';
    atomic_write_text(path, std::move(out).str());
}

Partition load_partition(const std::filesystem::path& path) {
    auto lines = read_lines(path);
    if (lines.empty()) io_fail(path, "empty partition file");
    auto header = split_tokens(lines[0]);
    if (header.size() != 3) io_fail(path, "expected header 'N r seed'");
    std::int64_t N = parse_i64(path, header[0], "N");
    std::int64_t r = parse_i64(path, header[1], "r");
    std::uint64_t seed = parse_u64(path, header[2], "seed");
    if (N < 0 || r < 1) io_fail(path, "header values out of range");
    if (static_cast<std::int64_t>(lines.size()) != N + 1)
        io_fail(path, "expected " + std::to_string(N) + " element lines, found " +
                          std::to_string(lines.size() - 1));

    Partition part;
    part.universe_size = N;
    part.seed = seed;
    part.part_of.resize(static_cast<std::size_t>(N));
    part.part_sizes.assign(static_cast<std::size_t>(r), 0);
    for (std::int64_t e = 0; e < N; ++e) {
        std::int64_t idx = parse_i64(path, lines[static_cast<std::size_t>(e + 1)], "part index");
        if (idx < 1 || idx > r)
            io_fail(path, "element " + std::to_string(e) + " has part index " +
                              std::to_string(idx) + " outside 1.." + std::to_string(r));
        part.part_of[static_cast<std::size_t>(e)] = static_cast<std::int32_t>(idx);
        ++part.part_sizes[static_cast<std::size_t>(idx - 1)];
    }
    part.validate();
    return part;
}

void save_params(const std::filesystem::path& path, const HardParams& p) {
    std::ostringstream out;
    out << "n=" << p.n << '\n'
        << "r=" << p.r << '\n'
        << "g=" << p.g << '\n'
        << "c=" << format_double(p.c) << '\n'
        << "mode=" << mode_name(p.mode) << '\n'
        << "tau=" << p.tau << '\n'
        << "gamma=" << p.gamma << '\n'
        << "theta=" << p.theta << '\n'
        << "cut=" << p.cut << '\n'
        << "N=" << p.N << '\n';
    atomic_write_text(path, std::move(out).str());
}

HardParams load_params(const std::filesystem::path& path) {
    auto lines = read_lines(path);
    std::vector<std::pair<std::string, std::string>> kv;
    for (const auto& line : lines) {
        auto eq = line.find('=');
        if (eq == std::string::npos) io_fail(path, "expected key=value, got '" + line + "'");
        kv.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    auto get = [&](const char* key) -> const std::string& {
        for (const auto& [k, v] : kv)
            if (k == key) return v;
        io_fail(path, std::string("missing key ") + key);
    };

    std::int64_t n = parse_i64(path, get("n"), "n");
    std::int64_t r = parse_i64(path, get("r"), "r");
    std::int64_t g = parse_i64(path, get("g"), "g");
    double c = parse_double(path, get("c"), "c");
    ParamMode mode = mode_from_name(path, get("mode"));

    HardParams p;
    try {
        if (mode == ParamMode::Desk)
            p = derive_params(n, c, ParamMode::Desk, g, r);
        else
            p = derive_params(n, c, ParamMode::Asymptotic, std::nullopt, r);
    } catch (const Error& e) {
        io_fail(path, std::string("stored parameters are inconsistent: ") + e.what());
    }

    auto check = [&](const char* key, std::int64_t actual) {
        std::int64_t stored = parse_i64(path, get(key), key);
        if (stored != actual)
            io_fail(path, std::string("stored ") + key + "=" + std::to_string(stored) +
                              " disagrees with recomputed value " + std::to_string(actual));
    };
    check("g", p.g);  // asymptotic mode re-derives g from (n, c)
    check("tau", p.tau);
    check("gamma", p.gamma);
    check("theta", p.theta);
    check("cut", p.cut);
    check("N", p.N);
    return p;
}

void save_matroid(const std::filesystem::path& path, const NestedMatroid& m,
                  const std::string& partition_filename) {
    m.validate();
    std::ostringstream out;
    out << m.k() << '\n';
    for (std::int64_t i = 0; i < m.k(); ++i)
        out << m.partition.part_sizes[static_cast<std::size_t>(i)] << ' '
            << m.thresholds[static_cast<std::size_t>(i)] << '\n';
    out << "partition " << partition_filename << '\n';
    atomic_write_text(path, std::move(out).str());
}

NestedMatroid load_matroid(const std::filesystem::path& path) {
    auto lines = read_lines(path);
    if (lines.empty()) io_fail(path, "empty matroid file");
    std::int64_t k = parse_i64(path, lines[0], "part count");
    if (k < 1) io_fail(path, "part count must be positive");
    if (static_cast<std::int64_t>(lines.size()) != k + 2)
        io_fail(path, "expected " + std::to_string(k) +
                          " 'part_size threshold' lines plus a partition reference");

    std::vector<std::int64_t> sizes(static_cast<std::size_t>(k));
    std::vector<std::int64_t> thresholds(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i) {
        auto toks = split_tokens(lines[static_cast<std::size_t>(i + 1)]);
        if (toks.size() != 2) io_fail(path, "expected 'part_size threshold' on line " +
                                                std::to_string(i + 2));
        sizes[static_cast<std::size_t>(i)] = parse_i64(path, toks[0], "part_size");
        thresholds[static_cast<std::size_t>(i)] = parse_i64(path, toks[1], "threshold");
    }

    auto ref = split_tokens(lines[static_cast<std::size_t>(k + 1)]);
    if (ref.size() != 2 || ref[0] != "partition")
        io_fail(path, "expected trailing 'partition <filename>' line");
    std::filesystem::path part_path = path.parent_path() / ref[1];
    Partition part = load_partition(part_path);

    if (part.parts() != k)
        io_fail(path, "partition file has " + std::to_string(part.parts()) +
                          " parts, matroid declares " + std::to_string(k));
    for (std::int64_t i = 0; i < k; ++i)
        if (part.part_sizes[static_cast<std::size_t>(i)] != sizes[static_cast<std::size_t>(i)])
            io_fail(path, "part " + std::to_string(i + 1) + " size " +
                              std::to_string(part.part_sizes[static_cast<std::size_t>(i)]) +
                              " in partition file disagrees with declared " +
                              std::to_string(sizes[static_cast<std::size_t>(i)]));

    NestedMatroid m{std::move(part), std::move(thresholds)};
    m.validate();
    return m;
}

void save_intersection(const std::filesystem::path& path, const IntersectionResult& res) {
    std::ostringstream out;
    out << "size " << res.size << '\n';
    for (std::int64_t e : res.elements) out << e << '\n';
    atomic_write_text(path, std::move(out).str());
}

std::string game_rows_csv(const std::vector<GameQueryRow>& rows) {
    std::ostringstream out;
    out << "round,query_id,kind,size,answer_f,answer_fhat,balanced\n";
    for (const auto& row : rows)
        out << row.round << ',' << row.query_id << ',' << kind_name(row.kind) << ','
            << row.size << ',' << row.answer_f << ',' << row.answer_fhat << ','
            << (row.balanced ? "true" : "false") << '\n';
    return std::move(out).str();
}

void save_game_csv(const std::filesystem::path& path, const GameRecord& rec) {
    atomic_write_text(path, game_rows_csv(rec.rows));
}

std::string game_record_json(const GameRecord& rec) {
    nlohmann::json j;
    j["master_seed"] = rec.master_seed;
    j["params"] = {{"n", rec.params.n},        {"r", rec.params.r},
                   {"g", rec.params.g},        {"c", rec.params.c},
                   {"mode", mode_name(rec.params.mode)},
                   {"tau", rec.params.tau},    {"gamma", rec.params.gamma},
                   {"theta", rec.params.theta},{"cut", rec.params.cut},
                   {"N", rec.params.N}};
    j["max_rounds"] = rec.max_rounds;
    j["transcripts_identical"] = rec.transcripts_identical;
    if (rec.failure_round)
        j["failure_round"] = *rec.failure_round;
    else
        j["failure_round"] = nullptr;
    if (rec.failure_query)
        j["failure_query"] = *rec.failure_query;
    else
        j["failure_query"] = nullptr;
    j["rounds"] = nlohmann::json::array();
    for (const auto& v : rec.rounds)
        j["rounds"].push_back({{"round", v.round},
                               {"resample_seed", v.resample_seed},
                               {"checked", v.checked},
                               {"all_balanced", v.all_balanced},
                               {"answered", v.answered},
                               {"answers_equal", v.answers_equal}});
    return j.dump(2) + "\n";
}

void save_game_record(const std::filesystem::path& path, const GameRecord& rec) {
    atomic_write_text(path, game_record_json(rec));
}

std::string solver_rows_csv(const std::vector<SolverRow>& rows) {
    std::ostringstream out;
    out << "instance_seed,variant,min_value,rounds,queries,correct\n";
    for (const auto& row : rows)
        out << row.instance_seed << ',' << variant_name(row.variant) << ',' << row.min_value
            << ',' << row.rounds << ',' << row.queries << ','
            << (row.correct ? "true" : "false") << '\n';
    return std::move(out).str();
}

void save_solver_csv(const std::filesystem::path& path, const std::vector<SolverRow>& rows) {
    atomic_write_text(path, solver_rows_csv(rows));
}

}  // namespace partsub
