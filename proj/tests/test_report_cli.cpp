#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "quadclass/cli.hpp"
#include "quadclass/report.hpp"
#include "quadclass/version.hpp"

using namespace quadclass;

namespace {

std::filesystem::path temp_file(const std::string& stem) {
    return std::filesystem::temp_directory_path() / (stem + "-" + std::to_string(::getpid()));
}

std::vector<std::string> file_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

struct CoutCapture {
    std::ostringstream buffer;
    std::streambuf* saved;
    CoutCapture() : saved(std::cout.rdbuf(buffer.rdbuf())) {}
    ~CoutCapture() { std::cout.rdbuf(saved); }
    std::string str() const { return buffer.str(); }
};

int run_captured(const std::vector<std::string>& args, std::string& out) {
    CoutCapture cap;
    int rc = run_command(args);
    out = cap.str();
    return rc;
}

}  // namespace

TEST_CASE("json builders carry the agreed fields") {
    ClassNumberResult r = real_class_number(316);
    Json cj = class_number_json(r, false);
    CHECK(cj["discriminant"] == "316");
    CHECK(cj["narrow_h"] == 6);
    CHECK(cj["divisible_by_3"] == true);
    CHECK(cj["h"] == 3);
    CHECK(cj["unit_norm"] == 1);
    CHECK(cj["form_count"] == 32);
    CHECK_FALSE(cj.contains("elapsed_seconds"));
    CHECK(class_number_json(r, true).contains("elapsed_seconds"));

    Json kj = km_certificate_json(km_certificate(2, 11, {}));
    CHECK(kj["type"] == "km");
    CHECK(kj["u"] == "2");
    CHECK(kj["v"] == "11");
    CHECK(kj["d_branch"] == "d1");
    CHECK(kj["discriminant"] == "42160");
    CHECK(kj["field_radicand"] == "2635");
    CHECK(kj["valid"] == true);

    Json sj = kishi_certificate_json(kishi_certificate({9, 1, 70385}, {}));
    CHECK(sj["type"] == "kishi");
    CHECK(sj["element"]["a"] == "9");
    CHECK(sj["d"] == "-70385");
    CHECK(sj["trace"] == "9");
    CHECK(sj["norm"] == "-17576");
    CHECK(sj["norm_cube_root"] == "-26");
    CHECK(sj["target_radicand"] == "211155");
    CHECK(sj["valid"] == true);

    FamilyInstance b = family_B(1, {});
    Json fj = family_instance_json(b, false);
    CHECK(fj["family"] == "B");
    CHECK(fj["radicand"] == "2635");
    CHECK(fj["provenance"] == Json::array({"certified-by-theorem"}));
    CHECK(fj["certificate"]["type"] == "km");
    CHECK_FALSE(fj.contains("class_number"));

    attach_direct_check(b, {});
    Json fj2 = family_instance_json(b, false);
    CHECK(fj2["provenance"].size() == 2);
    CHECK(fj2["class_number"]["narrow_h"] == 24);

    CHECK(point_json(RationalPoint::at_infinity()) == Json{{"infinity", true}});
    Json pj = point_json(RationalPoint::affine(mpq_class(1, 2), mpq_class(-3)));
    CHECK(pj["x"] == "1/2");
    CHECK(pj["y"] == "-3");
}

TEST_CASE("records assemble with a stable key order") {
    VerificationRecord rec = make_record("unit:1", Json{{"kind", "unit"}},
                                         Json{{"alpha", 1}, {"beta", "two"}}, false);
    CHECK(rec.key == "unit:1");
    std::vector<std::string> keys;
    for (auto& [k, v] : rec.payload.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"schema", "key", "subject", "alpha", "beta",
                                           "toolkit_version"});
    CHECK(rec.payload["schema"] == std::string(record_schema));
    CHECK(rec.payload["toolkit_version"] == std::string(toolkit_version));
    CHECK_FALSE(rec.payload.contains("timestamp"));

    VerificationRecord stamped = make_record("unit:2", Json::object(), Json::object(), true);
    REQUIRE(stamped.payload.contains("timestamp"));
    std::string ts = stamped.payload["timestamp"].get<std::string>();
    CHECK(ts.size() == 20);
    CHECK(ts[4] == '-');
    CHECK(ts[10] == 'T');
    CHECK(ts.back() == 'Z');
}

TEST_CASE("render_records in all three formats") {
    FamilyInstance ok = family_B(1, {});
    attach_direct_check(ok, {});
    DirectCheckPolicy tight;
    tight.threshold = 1000;
    FamilyInstance skipped = family_A(1, {});
    attach_direct_check(skipped, tight);

    std::vector<VerificationRecord> recs;
    recs.push_back(make_record("family:B:1", Json{{"kind", "family-instance"}},
                               family_instance_json(ok, false), false));
    recs.push_back(make_record("family:A:1", Json{{"kind", "family-instance"}},
                               family_instance_json(skipped, false), false));

    std::string jl = render_records(recs, OutputFormat::json_lines);
    std::istringstream ss(jl);
    std::string line;
    int lines = 0;
    while (std::getline(ss, line)) {
        Json parsed = Json::parse(line);  // every line is standalone json
        CHECK(parsed.contains("key"));
        ++lines;
    }
    CHECK(lines == 2);

    std::string csv = render_records(recs, OutputFormat::csv);
    CHECK(csv.find("key,kind,valid,narrow_h,divisible_by_3,skip_reason\n") == 0);
    CHECK(csv.find("family:B:1,family-instance,true,24,true,") != std::string::npos);
    CHECK(csv.find("family:A:1,family-instance,true,,,") != std::string::npos);

    std::string pretty = render_records(recs, OutputFormat::pretty);
    CHECK(pretty.find("narrow_h=24") != std::string::npos);
    CHECK(pretty.find("skipped: ") != std::string::npos);

    // csv quoting for embedded commas and quotes
    std::vector<VerificationRecord> tricky;
    tricky.push_back(make_record("q:1", Json{{"kind", "x"}},
                                 Json{{"skip_reason", "a,b\"c"}}, false));
    std::string qcsv = render_records(tricky, OutputFormat::csv);
    CHECK(qcsv.find("\"a,b\"\"c\"") != std::string::npos);
}

TEST_CASE("persistence dedups by key and keeps foreign lines") {
    auto path = temp_file("quadclass-persist");
    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".cache");
    {
        std::ofstream pre(path);
        pre << "this line is not json\n";
        pre << R"({"key":"existing","payload":"original"})" << "\n";
    }

    std::vector<VerificationRecord> recs;
    recs.push_back({"existing", Json{{"key", "existing"}, {"payload", "replacement"}}});
    recs.push_back({"fresh", Json{{"key", "fresh"}, {"value", 7}}});
    persist_records(recs, path.string());

    auto lines = file_lines(path);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == "this line is not json");
    CHECK(lines[1].find("original") != std::string::npos);  // first occurrence wins
    CHECK(lines[2].find("fresh") != std::string::npos);

    persist_records(recs, path.string());  // idempotent second pass
    CHECK(file_lines(path).size() == 3);

    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".cache");
}

TEST_CASE("squarefree cache round trip and harvesting") {
    auto path = temp_file("quadclass-cache");
    std::filesystem::remove(path);

    SquarefreeCache cache;
    cache.store(squarefree_decompose(633465, {}));
    SquarefreeDecomposition incomplete;
    incomplete.n = 99;
    incomplete.complete = false;
    cache.store(incomplete);  // ignored
    REQUIRE(cache.entries.size() == 1);
    cache.save(path.string());

    auto lines = file_lines(path);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0] == "633465\t70385\t3");

    SquarefreeCache loaded = SquarefreeCache::load(path.string());
    auto hit = loaded.lookup(633465);
    REQUIRE(hit.has_value());
    CHECK(hit->kernel == 70385);
    CHECK(hit->square_root_part == 3);
    CHECK(hit->complete);
    CHECK_FALSE(loaded.lookup(7).has_value());

    // malformed lines are skipped, valid ones still load
    {
        std::ofstream out(path);
        out << "no tabs here\n" << "x\ty\tz\n" << "5\t5\t1\n";
    }
    SquarefreeCache partial = SquarefreeCache::load(path.string());
    CHECK(partial.entries.size() == 1);
    CHECK(partial.lookup(5).has_value());
    std::filesystem::remove(path);

    // persist harvests completed decompositions out of record bodies
    auto rec_path = temp_file("quadclass-harvest");
    std::filesystem::remove(rec_path);
    std::filesystem::remove(rec_path.string() + ".cache");
    Json body{{"field", Json{{"radicand", "48"},
                             {"kernel", "3"},
                             {"square_root_part", "4"},
                             {"complete", true}}}};
    persist_records({make_record("h:1", Json{{"kind", "x"}}, body, false)}, rec_path.string());
    SquarefreeCache harvested = SquarefreeCache::load(rec_path.string() + ".cache");
    auto entry = harvested.lookup(48);
    REQUIRE(entry.has_value());
    CHECK(entry->kernel == 3);
    CHECK(entry->square_root_part == 4);
    std::filesystem::remove(rec_path);
    std::filesystem::remove(rec_path.string() + ".cache");
}

TEST_CASE("run_parallel fills index-addressed slots and rethrows") {
    std::vector<long> slots(100, -1);
    run_parallel(4, slots.size(), [&](std::size_t i) { slots[i] = (long)(i * i); });
    for (std::size_t i = 0; i < slots.size(); ++i) CHECK(slots[i] == (long)(i * i));

    std::vector<long> seq(10, -1);
    run_parallel(0, seq.size(), [&](std::size_t i) { seq[i] = (long)i; });
    CHECK(seq[9] == 9);

    run_parallel(8, 0, [&](std::size_t) { throw std::runtime_error("never invoked"); });

    CHECK_THROWS_AS(run_parallel(4, 100,
                                 [&](std::size_t i) {
                                     if (i == 37) throw std::runtime_error("worker failure");
                                 }),
                    std::runtime_error);
}

TEST_CASE("environment-driven configuration") {
    CHECK(parse_output_format("json-lines") == OutputFormat::json_lines);
    CHECK(parse_output_format("csv") == OutputFormat::csv);
    CHECK(parse_output_format("pretty") == OutputFormat::pretty);
    CHECK_THROWS_AS(parse_output_format("yaml"), ConfigError);

    const char* vars[] = {"QUADCLASS_FACTORING_BUDGET", "QUADCLASS_FORM_CAP",
                          "QUADCLASS_THRESHOLD", "QUADCLASS_JOBS", "QUADCLASS_FORMAT"};
    for (const char* v : vars) unsetenv(v);

    RunConfig defaults = config_from_env();
    CHECK(defaults.factoring_budget == 1'000'000);
    CHECK(defaults.form_count_cap == 10'000'000);
    CHECK(defaults.direct_check_threshold == 1'000'000'000);
    CHECK(defaults.parallelism == 0);
    CHECK(defaults.output_format == OutputFormat::json_lines);

    setenv("QUADCLASS_FACTORING_BUDGET", "5000", 1);
    setenv("QUADCLASS_FORM_CAP", "1234", 1);
    setenv("QUADCLASS_THRESHOLD", "77", 1);
    setenv("QUADCLASS_JOBS", "3", 1);
    setenv("QUADCLASS_FORMAT", "csv", 1);
    RunConfig cfg = config_from_env();
    CHECK(cfg.factoring_budget == 5000);
    CHECK(cfg.form_count_cap == 1234);
    CHECK(cfg.direct_check_threshold == 77);
    CHECK(cfg.parallelism == 3);
    CHECK(cfg.output_format == OutputFormat::csv);

    setenv("QUADCLASS_JOBS", "abc", 1);
    CHECK_THROWS_AS(config_from_env(), ConfigError);
    setenv("QUADCLASS_JOBS", "3", 1);
    setenv("QUADCLASS_FORMAT", "nope", 1);
    CHECK_THROWS_AS(config_from_env(), ConfigError);

    for (const char* v : vars) unsetenv(v);
}

TEST_CASE("usage failures exit with code 1") {
    std::string out;
    CHECK(run_captured({"--help"}, out) == 0);
    CHECK(run_captured({"definitely-not-a-command"}, out) == 1);
    CHECK(run_captured({"verify-quadruple", "--k", "0"}, out) == 1);
    CHECK(run_captured({"verify-quadruple"}, out) == 1);                 // --k required
    CHECK(run_captured({"classnumber", "--radicand", "9"}, out) == 1);   // square radicand
    CHECK(run_captured({"classnumber", "--radicand", "2x"}, out) == 1);  // not an integer
    CHECK(run_captured({"scholz-check", "--d", "1"}, out) == 1);
    CHECK(run_captured({"verify-family", "A", "--from", "5", "--to", "3"}, out) == 1);
    CHECK(run_captured({"verify-family", "D", "--from", "1"}, out) == 1);
    CHECK(run_captured({"scan-distinct", "--from", "4", "--to", "2"}, out) == 1);
    CHECK(run_captured({"torsion", "--curve", "E9"}, out) == 1);
}

TEST_CASE("CLI record content at pinned inputs") {
    std::string out;
    REQUIRE(run_captured({"classnumber", "--radicand", "79", "--no-timestamps"}, out) == 0);
    Json rec = Json::parse(out);
    CHECK(rec["key"] == "classnumber:79");
    CHECK(rec["class_number"]["narrow_h"] == 6);
    CHECK(rec["class_number"]["h"] == 3);
    CHECK(rec["class_number"]["unit_norm"] == 1);
    CHECK(rec["field"]["kernel"] == "79");
    CHECK_FALSE(rec.contains("timestamp"));

    REQUIRE(run_captured({"classnumber", "--radicand", "-23", "--narrow", "--no-timestamps"},
                         out) == 0);
    rec = Json::parse(out);
    CHECK(rec["class_number"]["narrow_h"] == 3);
    CHECK(rec["note"].get<std::string>().find("coincide") != std::string::npos);

    REQUIRE(run_captured({"scholz-check", "--d", "79", "--no-timestamps"}, out) == 0);
    rec = Json::parse(out);
    CHECK(rec["verdict"] == "holds");
    CHECK(rec["premise"]["divisible_by_3"] == true);

    REQUIRE(run_captured({"verify-family", "B", "--from", "1", "--to", "3", "--no-timestamps"},
                         out) == 0);
    std::istringstream ss(out);
    std::string line;
    std::vector<Json> recs;
    while (std::getline(ss, line)) recs.push_back(Json::parse(line));
    REQUIRE(recs.size() == 3);
    CHECK(recs[0]["key"] == "family:B:1");
    CHECK(recs[2]["key"] == "family:B:3");
    for (const auto& r : recs) CHECK(r["certificate"]["valid"] == true);
}

TEST_CASE("CLI output is deterministic across parallelism") {
    std::string serial, parallel;
    REQUIRE(run_captured({"--jobs", "1", "--no-timestamps", "verify-quadruple", "--k", "1"},
                         serial) == 0);
    REQUIRE(run_captured({"--jobs", "4", "--no-timestamps", "verify-quadruple", "--k", "1"},
                         parallel) == 0);
    CHECK(serial == parallel);
    CHECK(serial.find("\"key\":\"quadruple:1\"") != std::string::npos);
    CHECK(serial.find("\"all_valid\":true") != std::string::npos);
    CHECK(serial.find("211155") != std::string::npos);
}

TEST_CASE("CLI persistence writes idempotent files with a cache sidecar") {
    auto path = temp_file("quadclass-cli-out");
    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".cache");

    std::string out;
    std::vector<std::string> args{"classnumber", "--radicand", "633465", "--no-timestamps",
                                  "--output", path.string()};
    REQUIRE(run_captured(args, out) == 0);
    auto lines = file_lines(path);
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].find("\"kernel\":\"70385\"") != std::string::npos);

    REQUIRE(run_captured(args, out) == 0);  // second run adds nothing
    CHECK(file_lines(path).size() == 1);

    SquarefreeCache cache = SquarefreeCache::load(path.string() + ".cache");
    auto hit = cache.lookup(633465);
    REQUIRE(hit.has_value());
    CHECK(hit->kernel == 70385);

    std::filesystem::remove(path);
    std::filesystem::remove(path.string() + ".cache");
}
