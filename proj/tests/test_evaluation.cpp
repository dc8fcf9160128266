#include <doctest.h>

#include "oracle/oracle.hpp"
#include "pmchat/evaluation.hpp"
#include "support.hpp"

using namespace pmchat;

namespace {

std::vector<RatingRecord> reconstruction() {
    const auto imported = parse_ratings_csv(read_file(testing::fixture("ratings/reconstruction.csv")), "fixture");
    REQUIRE(imported.row_errors.empty());
    return imported.records;
}

int good(const DistributionReport& r, const std::string& group) {
    return r.groups.at(group).percent.at(RatingCategory::good);
}

}  // namespace

TEST_CASE("round-half-up percentages agree with the floating-point oracle") {
    CHECK(percent_round_half_up(1, 8) == 13);  // 12.5
    CHECK(percent_round_half_up(1, 200) == 1);  // 0.5
    CHECK(percent_round_half_up(20, 30) == 67);
    CHECK(percent_round_half_up(0, 0) == 0);
    for (std::size_t total = 1; total <= 400; ++total) {
        for (std::size_t count = 0; count <= total; ++count) {
            REQUIRE(percent_round_half_up(count, total) == oracle::percent(count, total));
        }
    }
}

TEST_CASE("category names") {
    CHECK(category_from_string("N.A.") == RatingCategory::na);
    CHECK(category_from_string("good") == RatingCategory::good);
    CHECK_FALSE(category_from_string("Excellent").has_value());
    CHECK(to_string(RatingCategory::mediocre) == "Mediocre");
}

TEST_CASE("reconstruction fixture reproduces the panel distributions") {
    const auto records = reconstruction();
    REQUIRE(records.size() == 100);

    const auto overall = distribution(records, GroupBy::overall);
    const auto& o = overall.groups.at("overall");
    CHECK(o.percent.at(RatingCategory::good) == 72);
    CHECK(o.percent.at(RatingCategory::mediocre) == 19);
    CHECK(o.percent.at(RatingCategory::bad) == 8);
    CHECK(o.percent.at(RatingCategory::na) == 1);

    const auto sector = distribution(records, GroupBy::sector);
    CHECK(good(sector, "Public Sector") == 67);
    CHECK(good(sector, "Service Sector") == 71);
    CHECK(good(sector, "Industrial Sector") == 77);
    CHECK(sector.groups.at("Public Sector").counts.at(RatingCategory::good) == 20);

    const auto gender = distribution(records, GroupBy::gender);
    CHECK(good(gender, "male") == 74);
    CHECK(good(gender, "female") == 70);
}

TEST_CASE("distribution reports counts alongside percentages") {
    const auto report = distribution(reconstruction(), GroupBy::sector);
    const auto j = report.to_json();
    CHECK(j["group_by"] == "sector");
    REQUIRE(j["groups"].size() == 3);
    CHECK(j["groups"][0]["group"] == "Industrial Sector");
    CHECK(j["groups"][0]["counts"]["Good"] == 27);
    CHECK(j["groups"][0]["total"] == 35);
    const auto text = report.to_text();
    CHECK(text.find("Public Sector") != std::string::npos);
    CHECK(text.find("67%") != std::string::npos);
}

TEST_CASE("filters, empty selections and style comparison") {
    const auto records = reconstruction();
    CHECK_THROWS_AS(distribution(records, GroupBy::overall, [](const RatingRecord&) { return false; }), Error);
    const auto c = compare_styles(records);
    REQUIRE(c.zero_shot.has_value());
    REQUIRE(c.optimized.has_value());
    REQUIRE(c.good_delta.has_value());
    CHECK(*c.good_delta == good(*c.optimized, "overall") - good(*c.zero_shot, "overall"));

    RatingRecord r;
    r.category = RatingCategory::bad;
    r.sector = "X";
    const auto unknown = distribution({r}, GroupBy::gender);
    CHECK(unknown.groups.contains("unknown"));
}

TEST_CASE("ratings CSV import collects row errors") {
    const auto out = parse_ratings_csv(
        "category,sector,gender,style,module\nGood,S,male,optimized,dashboard\nGreat,S,male,optimized,dashboard\n"
        "Bad,S,,zero_shot,bpmn\n");
    CHECK(out.records.size() == 1);
    CHECK(out.row_errors.size() == 2);
    CHECK_THROWS_AS(parse_ratings_csv("category,sector\nGood,S\n"), Error);
}

TEST_CASE("rating store appends with monotonic ids") {
    testing::TempDir dir;
    RatingStore store(dir.path());
    RatingRecord r;
    r.sector = "S";
    r.module = "dashboard";
    CHECK(store.record_rating(r) == "rt000001");
    CHECK(store.record_all({r, r}) == std::vector<std::string>{"rt000002", "rt000003"});
    RatingStore reopened(dir.path());
    const auto all = reopened.all();
    REQUIRE(all.size() == 3);
    CHECK(all[2].rating_id == "rt000003");
    CHECK(all[0].module == "dashboard");

    const auto j = to_json(all[0]);
    CHECK(rating_from_json(j).sector == "S");
    CHECK_THROWS_AS(rating_from_json(Json{{"category", "Superb"}}), Error);
}
