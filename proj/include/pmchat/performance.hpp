#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pmchat/discovery.hpp"
#include "pmchat/eventlog.hpp"

namespace pmchat {

/// Summary of a duration sample, in whole seconds (floored).
/// Median of an even-sized sample is the mean of the two middle values.
struct DurationStats {
    std::size_t count = 0;
    std::int64_t min = 0;
    std::int64_t max = 0;
    std::int64_t mean = 0;
    std::int64_t median = 0;
};

DurationStats summarize(std::vector<Millis> samples);

struct CaseDurations {
    std::map<std::string, Millis> per_case;
    DurationStats stats;
};

struct Bottleneck {
    Edge edge;
    std::int64_t mean_waiting = 0;  ///< seconds
    std::size_t frequency = 0;
};

struct PerformanceReport {
    DurationStats case_duration;
    std::map<std::string, std::int64_t> per_case_durations;  ///< seconds
    std::map<Edge, DurationStats> edge_waiting;
    std::vector<Bottleneck> bottlenecks;
};

enum class Bucket { day, week, month };

Bucket bucket_from_string(const std::string& s);
std::string_view to_string(Bucket b);

struct ThroughputPoint {
    Timestamp bucket_start;
    std::size_t completed_cases = 0;
};

/// duration(case) = last timestamp - first timestamp.
CaseDurations case_durations(const EventLog& log);

/// Elapsed time between each consecutive event pair, grouped by directly-follows edge.
/// Single-timestamp events carry no service time, so this inter-event time is reported as waiting.
std::map<Edge, std::vector<Millis>> edge_waiting_samples(const EventLog& log);
std::map<Edge, DurationStats> edge_waiting_stats(const EventLog& log);

/// Edges with count >= min_frequency ranked by mean waiting (desc), then frequency (desc), then edge.
std::vector<Bottleneck> identify_bottlenecks(const std::map<Edge, DurationStats>& edge_stats, std::size_t top_k,
                                             std::size_t min_frequency);

/// Cases counted in the bucket holding their last event. Buckets between active ones are emitted with 0.
/// Weeks start on Monday (UTC).
std::vector<ThroughputPoint> throughput(const EventLog& log, Bucket bucket);

PerformanceReport performance_report(const EventLog& log, std::size_t top_k = 10, std::size_t min_frequency = 1);

Json to_json(const DurationStats& s);
Json to_json(const PerformanceReport& r);
Json to_json(const std::vector<ThroughputPoint>& series);

}  // namespace pmchat
