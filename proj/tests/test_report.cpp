#include <doctest.h>

#include <regex>

#include "fedsust/assessment.hpp"
#include "fedsust/errors.hpp"
#include "support.hpp"

using namespace fedsust;
using nlohmann::json;

namespace {

FederationRun small_run() {
    AssessmentOptions o;
    o.pillars = load_pillar_inputs(testing::scenario("pillars_proposal_b.json"));
    return run_federation(testing::load_scenario("sim_small.json"), testing::reference(), o);
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("pillar inputs") {
    const auto p = parse_pillar_inputs(json::parse(
        R"({"privacy": 0.5, "fairness": {"score": 0.25}, "robustness": {"notions": {"a": 0.2, "b": 0.4}}})"));
    CHECK(*p.at("privacy").score == 0.5);
    CHECK(*p.at("fairness").score == 0.25);
    CHECK(p.at("robustness").notions.size() == 2);
    CHECK_THROWS_AS(parse_pillar_inputs(json::parse(R"({"ethics": 0.5})")), ValidationError);
    CHECK_THROWS_AS(parse_pillar_inputs(json::parse(R"({"privacy": 1.5})")), ValidationError);
    CHECK_THROWS_AS(parse_pillar_inputs(json::parse(R"({"privacy": "high"})")), ValidationError);

    auto tree = build_trust_tree(std::nullopt, p);
    const double s = aggregate(tree);
    CHECK(s == doctest::Approx((0.5 + 0.25 + 0.3) / 3));
    CHECK(tree.find("robustness.a") != nullptr);
}

TEST_CASE("trust report round-trips") {
    const auto run = small_run();
    const auto bytes = render_report(run.report);
    const auto back = parse_report(bytes);
    CHECK(back == run.report);
    CHECK(render_report(back) == bytes);
    CHECK(recompute_root(back) == *run.report.scores.score);
    CHECK(bytes.back() == '\n');

    const auto doc = json::parse(bytes);
    CHECK(doc["trust_score"].get<double>() == round_display(*run.report.scores.score));
    CHECK(doc["trust_score_raw"].get<double>() == *run.report.scores.score);
    CHECK(doc["emissions"]["total"]["records"].get<int>() == 30);
    CHECK(doc["partial"] == false);
}

TEST_CASE("a tampered report no longer recomputes to its root") {
    const auto run = small_run();
    auto doc = json::parse(render_report(run.report));
    std::function<bool(json&)> bump = [&](json& n) {
        if (n.contains("raw") && n["id"] == "sustainability.carbon_intensity.client") {
            n["raw"] = 795.0;
            return true;
        }
        if (n.contains("children"))
            for (auto& c : n["children"])
                if (bump(c)) return true;
        return false;
    };
    REQUIRE(bump(doc["scores"]));
    const auto tampered = parse_report(doc.dump());
    CHECK(recompute_root(tampered) < *run.report.scores.score);
}

TEST_CASE("identifiers in outputs are hashed") {
    const auto run = small_run();
    const auto fs = render_json(run.factsheet.to_json());
    const auto csv = run.simulation.state.emissions.to_csv();
    const std::regex raw_client(R"((client|label)-\d+)");
    CHECK_FALSE(std::regex_search(fs, raw_client));
    CHECK_FALSE(std::regex_search(csv, raw_client));
    const auto doc = json::parse(fs);
    for (const auto& [id, count] : doc["during_training"]["selection_counts"].items()) {
        CHECK(std::regex_match(id, std::regex("[0-9a-f]{16}")));
    }
    for (const auto& [id, count] : doc["during_training"]["class_distribution"].items()) {
        CHECK(std::regex_match(id, std::regex("[0-9a-f]{16}")));
    }
    // The seed feeds the salt, so it must not be echoed.
    CHECK(doc["pre_training"].find("seed") == doc["pre_training"].end());
}

TEST_CASE("factsheet completeness") {
    const auto run = small_run();
    CHECK(run.factsheet.absent_fields().empty());
    CHECK(run.factsheet.completeness() == 1.0);

    const auto config = testing::load_scenario("sim_small.json");
    const auto static_sheet = populate_factsheet(config, nullptr, nullptr);
    CHECK_FALSE(static_sheet.absent_fields().empty());
    CHECK(static_sheet.completeness() < 1.0);
    CHECK(static_sheet.completeness() > 0.0);
    CHECK_THROWS_AS(populate_factsheet(config, nullptr, nullptr, true), CompletenessError);
    const auto& absent = static_sheet.absent_fields();
    CHECK(std::find(absent.begin(), absent.end(), "during_training.selection_counts") != absent.end());
}

TEST_CASE("static assessment has no emissions") {
    const auto r = assess_config(testing::load_scenario("uc_d.json"), testing::reference(), {});
    CHECK_FALSE(r.emissions.has_value());
    const auto doc = json::parse(render_report(r));
    CHECK(doc["emissions"].is_null());
    CHECK(doc["scores"]["id"] == "trust");
    CHECK(doc["weights"]["sustainability.carbon_intensity"] == 0.5);
}

TEST_CASE("config digest is stable and seed-sensitive") {
    auto c = testing::load_scenario("sim_small.json");
    const auto d = config_digest(c);
    CHECK(d.size() == 16);
    CHECK(config_digest(testing::load_scenario("sim_small.json")) == d);
    c.total_rounds += 1;
    CHECK(config_digest(c) != d);
}

TEST_CASE("comparison") {
    const auto cmp = compare_proposals(
        testing::load_scenario("proposal_a.json"),
        load_pillar_inputs(testing::scenario("pillars_proposal_a.json")),
        testing::load_scenario("proposal_b.json"),
        load_pillar_inputs(testing::scenario("pillars_proposal_b.json")), testing::reference(), {});
    CHECK(cmp.winner == "B");
    CHECK(cmp.trust_delta == doctest::Approx(cmp.b.trust - cmp.a.trust));
    CHECK(cmp.pillar_deltas.size() == 7);
    CHECK(format_display(*cmp.a.trust_without_sustainability) == "0.58");
    CHECK(format_display(*cmp.b.trust_without_sustainability) == "0.63");
    CHECK(format_display(cmp.b.trust) == "0.65");
    const auto j = to_json(cmp);
    CHECK(j["winner"] == "B");
}

TEST_CASE("atomic write replaces the file") {
    const auto dir = testing::scratch("atomic");
    write_file_atomic(dir / "f.txt", "one");
    write_file_atomic(dir / "f.txt", "two");
    CHECK(testing::slurp(dir / "f.txt") == "two");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
    CHECK(files == 1);
}

}  // TEST_SUITE
