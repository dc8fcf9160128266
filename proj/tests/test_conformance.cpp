#include <doctest.h>

#include "oracle/oracle.hpp"
#include "pmchat/conformance.hpp"
#include "pmchat/discovery.hpp"
#include "support.hpp"

using namespace pmchat;

namespace {

Case make_case(const std::string& id, const std::vector<std::string>& activities) {
    Case c;
    c.case_id = id;
    auto t = testing::ts("2024-01-02T00:00:00Z");
    for (const auto& a : activities) {
        c.events.push_back(Event{id, a, t, std::nullopt, {}});
        t += std::chrono::minutes(1);
    }
    return c;
}

oracle::Moves oracle_moves(const ProcessModel& m, const Case& c) {
    std::vector<std::string> acts(m.activities.begin(), m.activities.end());
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& e : m.allowed_edges) edges.emplace_back(e.from, e.to);
    std::vector<std::string> starts(m.allowed_starts.begin(), m.allowed_starts.end());
    std::vector<std::string> ends(m.allowed_ends.begin(), m.allowed_ends.end());
    return oracle::replay_moves(acts, edges, starts, ends, oracle::trace(c));
}

}  // namespace

TEST_CASE("replay_case by hand on the L1 model") {
    const auto model = discover_model(testing::l1().log, 0.0, 1);

    const auto ok = replay_case(model, make_case("x", {"A", "B", "C"}));
    CHECK(ok.allowed_moves == 4);
    CHECK(ok.total_moves == 4);
    CHECK(ok.violations.empty());

    const auto acb = replay_case(model, make_case("x", {"A", "C", "B"}));
    CHECK(acb.allowed_moves == 2);
    CHECK(acb.total_moves == 4);
    REQUIRE(acb.violations.size() == 2);
    CHECK(acb.violations[0].kind == ViolationKind::disallowed_edge);
    CHECK(acb.violations[0].position == 2);
    CHECK(acb.violations[1].kind == ViolationKind::bad_end);

    const auto unknown = replay_case(model, make_case("x", {"X"}));
    CHECK(unknown.allowed_moves == 0);
    CHECK(unknown.total_moves == 2);
    REQUIRE(unknown.violations.size() == 2);
    for (const auto& v : unknown.violations) {
        CHECK(v.kind == ViolationKind::unknown_activity);
        CHECK(v.position == 0);
    }

    const auto mid_unknown = replay_case(model, make_case("x", {"A", "Q", "C"}));
    CHECK(mid_unknown.allowed_moves == 2);
    CHECK(mid_unknown.violations.size() == 2);
    for (const auto& v : mid_unknown.violations) CHECK(v.kind == ViolationKind::unknown_activity);
}

TEST_CASE("check_conformance pools moves over cases") {
    auto log = testing::l1().log;
    const auto model = discover_model(log, 0.0, 1);
    const auto self = check_conformance(model, log);
    CHECK(self.log_fitness == 1.0);
    CHECK(self.total_moves == 12);
    CHECK(self.violations.empty());
    CHECK(self.violating_case_count == 0);

    // Moves per case are length + 1: 4 + 5 + 3 for L1, plus 2 of 4 for [A,C,B].
    log.cases.push_back(make_case("case-004", {"A", "C", "B"}));
    const auto mixed = check_conformance(model, log);
    CHECK(mixed.allowed_moves == 14);
    CHECK(mixed.total_moves == 16);
    CHECK(mixed.log_fitness == doctest::Approx(14.0 / 16.0).epsilon(1e-12));
    CHECK(mixed.violating_case_count == 1);
    CHECK(mixed.per_case_fitness.at("case-004") == doctest::Approx(0.5));

    ProcessModel empty_edges = model;
    empty_edges.allowed_edges.clear();
    const auto starved = check_conformance(empty_edges, testing::l1().log);
    CHECK(starved.allowed_moves == 6);
    CHECK(starved.total_moves == 12);
    CHECK(starved.violating_case_count == 3);
}

TEST_CASE("conformance summary ranks kinds by count with enum-order ties") {
    ConformanceReport perfect;
    CHECK(conformance_summary(perfect, 3).text == "fitness 1.000, 0 violating cases");

    ConformanceReport r;
    r.log_fitness = 0.5;
    r.violating_case_count = 2;
    for (int i = 0; i < 3; ++i) r.violations.push_back({"c", 1, ViolationKind::disallowed_edge, ""});
    r.violations.push_back({"c", 1, ViolationKind::bad_end, ""});
    r.violations.push_back({"c", 0, ViolationKind::bad_start, ""});
    const auto s = conformance_summary(r, 3);
    REQUIRE(s.top_kinds.size() == 3);
    CHECK(s.top_kinds[0] == std::pair{ViolationKind::disallowed_edge, std::size_t{3}});
    CHECK(s.top_kinds[1].first == ViolationKind::bad_start);
    CHECK(s.top_kinds[2].first == ViolationKind::bad_end);
    CHECK(conformance_summary(r, 1).top_kinds.size() == 1);
    CHECK(s.text.find("fitness 0.500, 2 violating cases") == 0);
}

TEST_CASE("random logs: self-conformance, oracle move counts and injection monotonicity") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        auto log = oracle::random_log(rng, 30, 12);
        const auto model = discover_model(log, 0.0, 1);
        const auto self = check_conformance(model, log);
        CHECK(self.log_fitness == 1.0);

        const auto strict = discover_model(log, 0.5, 2);
        for (const auto& c : log.cases) {
            const auto r = replay_case(strict, c);
            const auto o = oracle_moves(strict, c);
            CHECK(r.allowed_moves == o.allowed);
            CHECK(r.total_moves == o.total);
            CHECK(r.allowed_moves + r.violations.size() == r.total_moves);
        }
        const auto report = check_conformance(strict, log);
        CHECK(report.log_fitness >= 0.0);
        CHECK(report.log_fitness <= 1.0);

        log.cases.push_back(make_case("zz-injected", {"Register", "Unseen"}));
        CHECK(check_conformance(model, log).log_fitness < self.log_fitness);
    }
}
