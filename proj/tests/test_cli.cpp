#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>

#include "support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
};

Result run(const std::string& args, const fs::path& dir) {
    const auto out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + FEDSUST_CLI_PATH + "\" " + args + " >\"" +
                            out.string() + "\" 2>\"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = testing::slurp(out);
    r.err = testing::slurp(err);
    fs::remove(out);
    fs::remove(err);
    return r;
}

std::string sc(const std::string& name) { return "\"" + testing::scenario(name).string() + "\""; }

std::size_t count_lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

bool empty_dir(const fs::path& p) { return !fs::exists(p) || fs::is_empty(p); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate") {
    const auto dir = testing::scratch("cli_validate");
    auto r = run("validate --config " + sc("uc_a.json"), dir);
    CHECK(r.code == 0);
    CHECK(r.out.rfind("ok:", 0) == 0);
    r = run("validate", dir);
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: usage:", 0) == 0);
    r = run("frobnicate", dir);
    CHECK(r.code == 1);
}

TEST_CASE("malformed config writes nothing") {
    const auto dir = testing::scratch("cli_bad");
    testing::spit(dir / "bad.json", "{\"num_clients\": 5, ");
    const auto out = dir / "out";
    auto r = run("score --config \"" + (dir / "bad.json").string() + "\" --out \"" + out.string() + "\"", dir);
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: validation:", 0) == 0);
    CHECK(count_lines(r.err) == 1);
    CHECK(empty_dir(out));

    auto j = json::parse(testing::slurp(testing::scenario("sim_small.json")));
    j["total_rounds"] = -3;
    testing::spit(dir / "neg.json", j.dump());
    r = run("simulate --config \"" + (dir / "neg.json").string() + "\" --out \"" + out.string() + "\"", dir);
    CHECK(r.code == 1);
    CHECK(r.err.find("total_rounds") != std::string::npos);
    CHECK(empty_dir(out));

    r = run("score --config \"" + (dir / "missing.json").string() + "\"", dir);
    CHECK(r.code == 1);
}

TEST_CASE("reference-data misses exit 2") {
    const auto dir = testing::scratch("cli_ref");
    auto j = json::parse(testing::slurp(testing::scenario("uc_a.json")));
    j["server_location"] = "QQ";
    testing::spit(dir / "c.json", j.dump());
    auto r = run("score --config \"" + (dir / "c.json").string() + "\" --out \"" + (dir / "out").string() + "\"", dir);
    CHECK(r.code == 2);
    CHECK(r.err == "error: reference-data: unknown grid: QQ\n");
    CHECK(empty_dir(dir / "out"));

    j = json::parse(testing::slurp(testing::scenario("uc_a.json")));
    j["client_hardware"] = json::array({{{"share", 1.0}, {"model", "Z80"}}});
    testing::spit(dir / "h.json", j.dump());
    r = run("validate --config \"" + (dir / "h.json").string() + "\"", dir);
    CHECK(r.code == 2);
    CHECK(r.err.find("Z80") != std::string::npos);
}

TEST_CASE("missing metric and partial mode") {
    const auto dir = testing::scratch("cli_partial");
    auto j = json::parse(testing::slurp(testing::scenario("uc_d.json")));
    j.erase("dataset_size");
    testing::spit(dir / "c.json", j.dump());
    const std::string cfg = "--config \"" + (dir / "c.json").string() + "\" --out \"" + (dir / "out").string() + "\"";
    auto r = run("score " + cfg, dir);
    CHECK(r.code == 1);
    CHECK(r.err.find("error: missing-metric:") == 0);
    CHECK(r.err.find("sustainability.federation_complexity.dataset_size") != std::string::npos);
    r = run("score --allow-partial " + cfg, dir);
    CHECK(r.code == 0);
    CHECK(r.out.find("(partial)") != std::string::npos);
    const auto doc = json::parse(testing::slurp(dir / "out" / "trust_report.json"));
    CHECK(doc["partial"] == true);
}

TEST_CASE("unwritable output exits 3") {
    const auto dir = testing::scratch("cli_io");
    testing::spit(dir / "file", "x");
    auto r = run("score --config " + sc("uc_a.json") + " --out \"" + (dir / "file").string() + "\"", dir);
    CHECK(r.code == 3);
    CHECK(r.err.rfind("error: io:", 0) == 0);
}

TEST_CASE("simulate writes three artifacts") {
    const auto dir = testing::scratch("cli_sim");
    auto r = run("simulate --config " + sc("sim_small.json") + " --out \"" + (dir / "a").string() + "\"", dir);
    REQUIRE(r.code == 0);
    const auto csv = testing::slurp(dir / "a" / "emissions.csv");
    CHECK(count_lines(csv) == 1 + 10 * 2 + 10);  // header, 2 clients and 1 server per round
    CHECK(fs::exists(dir / "a" / "factsheet.json"));
    CHECK(fs::exists(dir / "a" / "trust_report.json"));
    CHECK(r.out.find("estimated emissions:") != std::string::npos);
}

TEST_CASE("simulate is deterministic") {
    const auto dir = testing::scratch("cli_det");
    const auto cfg = "simulate --config " + sc("sim_small.json");
    REQUIRE(run(cfg + " --out \"" + (dir / "a").string() + "\"", dir).code == 0);
    REQUIRE(run(cfg + " --out \"" + (dir / "b").string() + "\"", dir).code == 0);
    REQUIRE(run(cfg + " --serial --out \"" + (dir / "c").string() + "\"", dir).code == 0);
    REQUIRE(run(cfg + " --threads 3 --out \"" + (dir / "d").string() + "\"", dir).code == 0);
    REQUIRE(run(cfg + " --seed 43 --out \"" + (dir / "e").string() + "\"", dir).code == 0);
    for (const char* f : {"emissions.csv", "trust_report.json", "factsheet.json"}) {
        CAPTURE(f);
        const auto a = testing::slurp(dir / "a" / f);
        CHECK(a == testing::slurp(dir / "b" / f));
        CHECK(a == testing::slurp(dir / "c" / f));
        CHECK(a == testing::slurp(dir / "d" / f));
    }
    CHECK(testing::slurp(dir / "a" / "emissions.csv") != testing::slurp(dir / "e" / "emissions.csv"));
}

TEST_CASE("compare") {
    const auto dir = testing::scratch("cli_cmp");
    auto r = run("compare --config " + sc("proposal_a.json") + " --config " + sc("proposal_b.json") +
                     " --pillars " + sc("pillars_proposal_a.json") + " --pillars " +
                     sc("pillars_proposal_b.json") + " --out \"" + dir.string() + "\"",
                 dir);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("ranking: B > A") != std::string::npos);
    const auto doc = json::parse(testing::slurp(dir / "compare.json"));
    CHECK(doc["winner"] == "B");
    r = run("compare --config " + sc("proposal_a.json") + " --out \"" + dir.string() + "\"", dir);
    CHECK(r.code == 1);
}

}  // TEST_SUITE
