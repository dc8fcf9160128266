#include <doctest.h>

#include "oracle/oracle.hpp"
#include "pmchat/conformance.hpp"
#include "pmchat/discovery.hpp"
#include "support.hpp"

using namespace pmchat;

TEST_CASE("L1 directly-follows graph") {
    const auto dfg = build_dfg(testing::l1().log);
    CHECK(dfg.edges.size() == 4);
    CHECK(dfg.edge_count("A", "B") == 2);
    CHECK(dfg.edge_count("B", "C") == 2);
    CHECK(dfg.edge_count("B", "B") == 1);
    CHECK(dfg.edge_count("A", "C") == 1);
    CHECK(dfg.edge_count("C", "A") == 0);
    CHECK(dfg.total_edge_frequency() == 6);
    CHECK(dfg.start_activities == std::map<std::string, std::size_t>{{"A", 3}});
    CHECK(dfg.end_activities == std::map<std::string, std::size_t>{{"C", 3}});
    CHECK(dfg.activity_frequencies == std::map<std::string, std::size_t>{{"A", 3}, {"B", 3}, {"C", 3}});
}

TEST_CASE("L1 variants are all singletons, ordered lexicographically on ties") {
    const auto variants = extract_variants(testing::l1().log);
    REQUIRE(variants.size() == 3);
    CHECK(variants[0].activity_sequence == std::vector<std::string>{"A", "B", "B", "C"});
    CHECK(variants[1].activity_sequence == std::vector<std::string>{"A", "B", "C"});
    CHECK(variants[2].activity_sequence == std::vector<std::string>{"A", "C"});
    for (const auto& v : variants) CHECK(v.frequency == 1);
}

TEST_CASE("identical traces collapse into one variant") {
    std::string csv = "case_id,activity,timestamp\n";
    for (int i = 0; i < 5; ++i) {
        csv += std::to_string(i) + ",X,2024-01-01T00:00:00Z\n" + std::to_string(i) + ",Y,2024-01-01T01:00:00Z\n";
    }
    const auto variants = extract_variants(parse_csv(csv, {}, {}).log);
    REQUIRE(variants.size() == 1);
    CHECK(variants[0].frequency == 5);
    CHECK(variants[0].example_case_id == "0");
}

TEST_CASE("dependency measure by hand on L1") {
    const auto dfg = build_dfg(testing::l1().log);
    CHECK(dependency_measure(dfg, "A", "B") == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(dependency_measure(dfg, "B", "A") == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
    CHECK(dependency_measure(dfg, "B", "B") == 0.0);
    CHECK(dependency_measure(dfg, "A", "C") == doctest::Approx(0.5));
    CHECK(dependency_measure(dfg, "X", "Y") == 0.0);
}

TEST_CASE("discover_model thresholds on L1") {
    const auto log = testing::l1().log;
    const auto loose = discover_model(log, 0.0, 1);
    CHECK(loose.allowed_edges.size() == 4);
    CHECK(loose.allowed_edges.contains(Edge{"B", "B"}));
    CHECK(loose.allowed_starts == std::set<std::string>{"A"});
    CHECK(loose.allowed_ends == std::set<std::string>{"C"});
    CHECK(loose.activities == std::set<std::string>{"A", "B", "C"});

    const auto strict = discover_model(log, 0.0, 2);
    CHECK(strict.allowed_edges == std::set<Edge>{{"A", "B"}, {"B", "C"}});
    CHECK(strict.warnings.empty());

    const auto defaults = discover_model(log, 0.5, 2);
    CHECK(defaults.allowed_edges == std::set<Edge>{{"A", "B"}, {"B", "C"}});

    const auto none = discover_model(log, 0.9, 5);
    CHECK(none.allowed_edges.empty());
    REQUIRE(none.warnings.size() == 1);
    CHECK(none.warnings[0].find("degenerate") != std::string::npos);
}

TEST_CASE("discover_model validates thresholds") {
    const auto log = testing::l1().log;
    CHECK_THROWS_AS(discover_model(log, 1.0, 1), Error);
    CHECK_THROWS_AS(discover_model(log, -0.1, 1), Error);
    CHECK_THROWS_AS(discover_model(log, 0.5, 0), Error);
}

TEST_CASE("a reverse-dominated edge is still kept at threshold zero") {
    const std::string csv =
        "case_id,activity,timestamp\n"
        "1,a,2024-01-01T00:00:00Z\n1,b,2024-01-01T00:01:00Z\n"
        "2,b,2024-01-01T00:00:00Z\n2,a,2024-01-01T00:01:00Z\n"
        "3,b,2024-01-01T00:00:00Z\n3,a,2024-01-01T00:01:00Z\n";
    const auto log = parse_csv(csv, {}, {}).log;
    const auto dfg = build_dfg(log);
    CHECK(dependency_measure(dfg, "a", "b") < 0.0);
    CHECK(discover_model(log, 0.0, 1).allowed_edges.contains(Edge{"a", "b"}));
    CHECK_FALSE(discover_model(log, 0.1, 1).allowed_edges.contains(Edge{"a", "b"}));
}

TEST_CASE("random logs: DFG and variants agree with the enumeration oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const auto log = oracle::random_log(rng);
        const auto dfg = build_dfg(log);
        const auto expected = oracle::directly_follows(log);
        CHECK(dfg.edges.size() == expected.size());
        for (const auto& p : expected) CHECK(dfg.edge_count(p.from, p.to) == p.count);
        CHECK(dfg.total_edge_frequency() == log.event_count() - log.cases.size());

        const auto variants = extract_variants(log);
        const auto counted = oracle::variant_counts(log);
        CHECK(variants.size() == counted.size());
        std::size_t sum = 0;
        for (const auto& v : variants) {
            sum += v.frequency;
            bool matched = false;
            for (const auto& c : counted) matched = matched || (c.sequence == v.activity_sequence && c.count == v.frequency);
            CHECK(matched);
        }
        CHECK(sum == log.cases.size());
        for (std::size_t i = 1; i < variants.size(); ++i) CHECK(variants[i - 1].frequency >= variants[i].frequency);

        for (const auto& [a, _] : dfg.activity_frequencies) {
            for (const auto& [b, __] : dfg.activity_frequencies) {
                CHECK(dependency_measure(dfg, a, b) == -dependency_measure(dfg, b, a));
            }
        }
    }
}

TEST_CASE("model JSON round-trips and DOT output names every edge") {
    const auto log = testing::l1().log;
    const auto model = discover_model(log, 0.0, 1);
    const auto back = model_from_json(to_json(model));
    CHECK(back.allowed_edges == model.allowed_edges);
    CHECK(back.allowed_starts == model.allowed_starts);
    CHECK(back.activities == model.activities);
    CHECK_THROWS_AS(model_from_json(Json{{"activities", 3}}), Error);

    const auto dot = dfg_to_dot(build_dfg(log));
    CHECK(dot.rfind("digraph", 0) == 0);
    CHECK(dot.find("\"B\" -> \"B\"") != std::string::npos);
    CHECK(dot.find("\"A\" -> \"C\"") != std::string::npos);
}
