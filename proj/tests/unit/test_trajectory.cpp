#include <doctest.h>

#include <json.hpp>

#include "halluaudit/trajectory.hpp"

using namespace halluaudit;
using nlohmann::json;

namespace {

json minimal_fixture() {
    return json{
        {"schema_version", "1"},
        {"task_id", "T1"},
        {"query", "Find the venue"},
        {"loops",
         json::array({{{"index", 1},
                       {"plan_text", "Search for the venue."},
                       {"summary_text", "The venue is Harbor Hall."},
                       {"searches",
                        json::array({{{"query_string", "venue"},
                                      {"documents",
                                       json::array({{{"url", "https://a.example/1"},
                                                     {"title", "A"},
                                                     {"content", "The venue is Harbor Hall."}}})}}})}}})},
        {"final_report",
         {{"paragraphs", json::array({"The venue is Harbor Hall. [1]"})},
          {"citations", {{"[1]", "https://a.example/1"}}}}}};
}

}  // namespace

TEST_CASE("minimal fixture loads with one loop") {
    Trajectory t = load_trajectory(minimal_fixture().dump());
    REQUIRE(t.loops.size() == 1);
    CHECK(t.task_id == "T1");
    CHECK(t.loops[0].searches[0].documents[0].loop_index == 1);
    CHECK(t.final_report.paragraphs.size() == 1);
}

TEST_CASE("unordered loop indices are a schema error") {
    json fixture = minimal_fixture();
    json loop2 = fixture["loops"][0];
    loop2["index"] = 2;
    fixture["loops"] = json::array({loop2, fixture["loops"][0]});
    CHECK_THROWS_AS(load_trajectory(fixture.dump()), SchemaError);
}

TEST_CASE("zero loops is an empty-trajectory error") {
    json fixture = minimal_fixture();
    fixture["loops"] = json::array();
    CHECK_THROWS_AS(load_trajectory(fixture.dump()), EmptyTrajectoryError);
}

TEST_CASE("missing required field is a schema error") {
    json fixture = minimal_fixture();
    fixture.erase("query");
    CHECK_THROWS_AS(load_trajectory(fixture.dump()), SchemaError);
}

TEST_CASE("duplicate urls within a record collapse to the first") {
    json fixture = minimal_fixture();
    json doc = fixture["loops"][0]["searches"][0]["documents"][0];
    json dup = doc;
    dup["title"] = "duplicate";
    fixture["loops"][0]["searches"][0]["documents"] = json::array({doc, dup});
    Trajectory t = load_trajectory(fixture.dump());
    REQUIRE(t.loops[0].searches[0].documents.size() == 1);
    CHECK(t.loops[0].searches[0].documents[0].title == "A");
}

TEST_CASE("serialize then load round-trips and is canonical") {
    Trajectory t = load_trajectory(minimal_fixture().dump());
    std::string canonical = serialize_trajectory(t);
    Trajectory t2 = load_trajectory(canonical);
    CHECK(serialize_trajectory(t2) == canonical);
    CHECK(t2.loops.size() == t.loops.size());
    CHECK(t2.final_report.paragraphs == t.final_report.paragraphs);
}

TEST_CASE("load preserves loop and paragraph order") {
    json fixture = minimal_fixture();
    json loop2 = fixture["loops"][0];
    loop2["index"] = 2;
    loop2["plan_text"] = "Second loop plan.";
    fixture["loops"].push_back(loop2);
    fixture["final_report"]["paragraphs"] = json::array({"First paragraph.", "Second paragraph."});
    Trajectory t = load_trajectory(fixture.dump());
    REQUIRE(t.loops.size() == 2);
    CHECK(t.loops[0].index == 1);
    CHECK(t.loops[1].index == 2);
    CHECK(t.final_report.paragraphs[0] == "First paragraph.");
}

TEST_CASE("validation: clean fixture yields no issues") {
    Trajectory t = load_trajectory(minimal_fixture().dump());
    CHECK(validate_trajectory(t).empty());
}

TEST_CASE("validation: dangling citation marker reported") {
    json fixture = minimal_fixture();
    fixture["final_report"]["paragraphs"] = json::array({"Claimed fact. [3]"});
    Trajectory t = load_trajectory(fixture.dump());
    auto issues = validate_trajectory(t);
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].kind == ValidationIssue::Kind::citation_dangling);
    CHECK(issues[0].detail == "[3]");
}

TEST_CASE("validation: empty content and empty plan+summary") {
    json fixture = minimal_fixture();
    fixture["loops"][0]["searches"][0]["documents"][0]["content"] = "";
    fixture["loops"][0]["plan_text"] = "";
    fixture["loops"][0]["summary_text"] = "  ";
    fixture["final_report"]["paragraphs"] = json::array({"No citations here."});
    Trajectory t = load_trajectory(fixture.dump());
    auto issues = validate_trajectory(t);
    REQUIRE(issues.size() == 2);
    CHECK(issues[0].kind == ValidationIssue::Kind::empty_plan_and_summary);
    CHECK(issues[1].kind == ValidationIssue::Kind::empty_content);
    CHECK(issues[1].detail == "https://a.example/1");
}

TEST_CASE("citation canonicalization maps markers and bare urls") {
    FinalReport report;
    report.paragraphs = {"Fact one [1].", "See https://b.example/x for detail.",
                         "Unknown [7] marker."};
    report.citations = {{"[1]", "https://a.example/1"}};
    std::set<std::string> urls = {"https://a.example/1", "https://b.example/x"};
    std::vector<std::string> dangling;
    CitationMap map = canonicalize_citations(report, urls, &dangling);
    CHECK(map.at("[1]") == "https://a.example/1");
    CHECK(map.at("https://b.example/x") == "https://b.example/x");
    REQUIRE(dangling.size() == 1);
    CHECK(dangling[0] == "[7]");
}

TEST_CASE("accepted trajectories always carry contiguous 1..N indices") {
    for (int n = 1; n <= 5; ++n) {
        json fixture = minimal_fixture();
        fixture["loops"] = json::array();
        for (int i = 1; i <= n; ++i) {
            json loop = minimal_fixture()["loops"][0];
            loop["index"] = i;
            fixture["loops"].push_back(loop);
        }
        Trajectory t = load_trajectory(fixture.dump());
        for (int i = 0; i < n; ++i) CHECK(t.loops[i].index == i + 1);
    }
}
