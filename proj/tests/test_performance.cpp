#include <doctest.h>

#include "oracle/oracle.hpp"
#include "pmchat/performance.hpp"
#include "support.hpp"

using namespace pmchat;
using namespace std::chrono_literals;

TEST_CASE("summarize: floored seconds, even-sized median averages the middle pair") {
    const auto s = summarize({Millis{4000}, Millis{1000}, Millis{2500}, Millis{3000}});
    CHECK(s.count == 4);
    CHECK(s.min == 1);
    CHECK(s.max == 4);
    CHECK(s.mean == 2);     // 10.5s / 4 = 2.625s
    CHECK(s.median == 2);   // (2.5 + 3) / 2 = 2.75s
    const auto odd = summarize({Millis{9000}, Millis{1000}, Millis{5000}});
    CHECK(odd.median == 5);
    CHECK(summarize({}).count == 0);
}

TEST_CASE("L1 case durations") {
    const auto d = case_durations(testing::l1().log);
    CHECK(d.per_case.at("case-001") == Millis{20min});
    CHECK(d.per_case.at("case-002") == Millis{12min});
    CHECK(d.per_case.at("case-003") == Millis{7min});
    CHECK(d.stats.min == 420);
    CHECK(d.stats.max == 1200);
    CHECK(d.stats.mean == 780);
    CHECK(d.stats.median == 720);
}

TEST_CASE("L1 edge waiting times and bottleneck ranking") {
    const auto stats = edge_waiting_stats(testing::l1().log);
    CHECK(stats.at(Edge{"A", "B"}).mean == 450);
    CHECK(stats.at(Edge{"B", "C"}).mean == 420);
    CHECK(stats.at(Edge{"A", "C"}).mean == 420);
    CHECK(stats.at(Edge{"B", "B"}).mean == 180);

    const auto top = identify_bottlenecks(stats, 10, 1);
    REQUIRE(top.size() == 4);
    CHECK(top[0].edge == Edge{"A", "B"});
    CHECK(top[1].edge == Edge{"B", "C"});  // ties on mean break by frequency
    CHECK(top[2].edge == Edge{"A", "C"});
    CHECK(top[3].edge == Edge{"B", "B"});

    const auto frequent = identify_bottlenecks(stats, 1, 2);
    REQUIRE(frequent.size() == 1);
    CHECK(frequent[0].edge == Edge{"A", "B"});
    CHECK(frequent[0].frequency == 2);
}

TEST_CASE("throughput buckets by day, Monday week and month, filling gaps with zero") {
    const std::string csv =
        "case_id,activity,timestamp\n"
        "1,A,2024-01-01T08:00:00Z\n"
        "2,A,2024-01-03T08:00:00Z\n"
        "3,A,2024-01-03T09:00:00Z\n"
        "4,A,2024-02-10T09:00:00Z\n";
    const auto log = parse_csv(csv, {}, {}).log;
    const auto daily = throughput(log, Bucket::day);
    REQUIRE(daily.size() == 41);
    CHECK(daily[0].completed_cases == 1);
    CHECK(daily[1].completed_cases == 0);
    CHECK(daily[2].completed_cases == 2);
    CHECK(format_timestamp(daily.back().bucket_start) == "2024-02-10T00:00:00Z");

    const auto weekly = throughput(log, Bucket::week);
    CHECK(format_timestamp(weekly.front().bucket_start) == "2024-01-01T00:00:00Z");
    CHECK(weekly.front().completed_cases == 3);
    CHECK(format_timestamp(weekly.back().bucket_start) == "2024-02-05T00:00:00Z");

    const auto monthly = throughput(log, Bucket::month);
    REQUIRE(monthly.size() == 2);
    CHECK(monthly[0].completed_cases == 3);
    CHECK(format_timestamp(monthly[1].bucket_start) == "2024-02-01T00:00:00Z");

    CHECK(bucket_from_string("week") == Bucket::week);
    CHECK_THROWS_AS(bucket_from_string("hour"), Error);
}

TEST_CASE("random logs: durations and waiting samples match a hand computation") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const auto log = oracle::random_log(rng, 20, 10);
        const auto d = case_durations(log);
        const auto waits = edge_waiting_samples(log);
        std::size_t samples = 0;
        for (const auto& [_, v] : waits) samples += v.size();
        CHECK(samples == log.event_count() - log.cases.size());
        for (const auto& c : log.cases) {
            pmchat::Timestamp lo = c.events.front().timestamp, hi = lo;
            for (const auto& e : c.events) {
                lo = std::min(lo, e.timestamp);
                hi = std::max(hi, e.timestamp);
            }
            CHECK(d.per_case.at(c.case_id) == hi - lo);
        }
        const auto report = performance_report(log, 3, 1);
        CHECK(report.bottlenecks.size() <= 3);
        CHECK(report.case_duration.count == log.cases.size());
    }
}
