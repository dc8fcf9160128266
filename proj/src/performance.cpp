#include "pmchat/performance.hpp"

#include <algorithm>
#include <numeric>

namespace pmchat {

DurationStats summarize(std::vector<Millis> samples) {
    DurationStats s;
    if (samples.empty()) return s;
    std::sort(samples.begin(), samples.end());
    s.count = samples.size();
    s.min = floor_seconds(samples.front());
    s.max = floor_seconds(samples.back());
    const Millis total = std::accumulate(samples.begin(), samples.end(), Millis{0});
    s.mean = floor_seconds(total / static_cast<Millis::rep>(samples.size()));
    const std::size_t mid = samples.size() / 2;
    if (samples.size() % 2 == 1) {
        s.median = floor_seconds(samples[mid]);
    } else {
        s.median = floor_seconds((samples[mid - 1] + samples[mid]) / 2);
    }
    return s;
}

Bucket bucket_from_string(const std::string& s) {
    if (s == "day") return Bucket::day;
    if (s == "week") return Bucket::week;
    if (s == "month") return Bucket::month;
    throw Error(ErrorCode::validation, "bucket must be day, week or month");
}

std::string_view to_string(Bucket b) {
    switch (b) {
        case Bucket::day: return "day";
        case Bucket::week: return "week";
        case Bucket::month: return "month";
    }
    return "day";
}

CaseDurations case_durations(const EventLog& log) {
    CaseDurations out;
    std::vector<Millis> samples;
    for (const auto& c : log.cases) {
        if (c.events.empty()) continue;
        const Millis d = c.events.back().timestamp - c.events.front().timestamp;
        out.per_case[c.case_id] = d;
        samples.push_back(d);
    }
    out.stats = summarize(std::move(samples));
    return out;
}

std::map<Edge, std::vector<Millis>> edge_waiting_samples(const EventLog& log) {
    std::map<Edge, std::vector<Millis>> samples;
    for (const auto& c : log.cases) {
        for (std::size_t i = 1; i < c.events.size(); ++i) {
            samples[Edge{c.events[i - 1].activity, c.events[i].activity}].push_back(c.events[i].timestamp -
                                                                                    c.events[i - 1].timestamp);
        }
    }
    return samples;
}

std::map<Edge, DurationStats> edge_waiting_stats(const EventLog& log) {
    std::map<Edge, DurationStats> out;
    for (auto& [edge, samples] : edge_waiting_samples(log)) out[edge] = summarize(std::move(samples));
    return out;
}

std::vector<Bottleneck> identify_bottlenecks(const std::map<Edge, DurationStats>& edge_stats, std::size_t top_k,
                                             std::size_t min_frequency) {
    std::vector<Bottleneck> ranked;
    for (const auto& [edge, stats] : edge_stats) {
        if (stats.count >= min_frequency) ranked.push_back(Bottleneck{edge, stats.mean, stats.count});
    }
    std::sort(ranked.begin(), ranked.end(), [](const Bottleneck& a, const Bottleneck& b) {
        if (a.mean_waiting != b.mean_waiting) return a.mean_waiting > b.mean_waiting;
        if (a.frequency != b.frequency) return a.frequency > b.frequency;
        return a.edge < b.edge;
    });
    if (ranked.size() > top_k) ranked.resize(top_k);
    return ranked;
}

namespace {

using std::chrono::days;
using std::chrono::sys_days;

sys_days bucket_floor(Timestamp ts, Bucket b) {
    using namespace std::chrono;
    const sys_days d = floor<days>(ts);
    switch (b) {
        case Bucket::day: return d;
        case Bucket::week: {
            const weekday wd{d};
            return d - days{(wd.c_encoding() + 6) % 7};  // back to Monday
        }
        case Bucket::month: {
            const year_month_day ymd{d};
            return sys_days{ymd.year() / ymd.month() / 1};
        }
    }
    return d;
}

sys_days next_bucket(sys_days start, Bucket b) {
    using namespace std::chrono;
    switch (b) {
        case Bucket::day: return start + days{1};
        case Bucket::week: return start + days{7};
        case Bucket::month: {
            const year_month_day ymd{start};
            return sys_days{(ymd.year() / ymd.month() / 1) + months{1}};
        }
    }
    return start + days{1};
}

}  // namespace

std::vector<ThroughputPoint> throughput(const EventLog& log, Bucket bucket) {
    std::map<sys_days, std::size_t> counts;
    for (const auto& c : log.cases) {
        if (!c.events.empty()) ++counts[bucket_floor(c.events.back().timestamp, bucket)];
    }
    std::vector<ThroughputPoint> series;
    if (counts.empty()) return series;
    const sys_days last = counts.rbegin()->first;
    for (sys_days d = counts.begin()->first; d <= last; d = next_bucket(d, bucket)) {
        auto it = counts.find(d);
        series.push_back(ThroughputPoint{Timestamp{d}, it == counts.end() ? 0 : it->second});
    }
    return series;
}

PerformanceReport performance_report(const EventLog& log, std::size_t top_k, std::size_t min_frequency) {
    PerformanceReport r;
    auto durations = case_durations(log);
    r.case_duration = durations.stats;
    for (const auto& [id, d] : durations.per_case) r.per_case_durations[id] = floor_seconds(d);
    r.edge_waiting = edge_waiting_stats(log);
    r.bottlenecks = identify_bottlenecks(r.edge_waiting, top_k, min_frequency);
    return r;
}

Json to_json(const DurationStats& s) {
    return Json{{"count", s.count}, {"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"median", s.median}};
}

Json to_json(const PerformanceReport& r) {
    Json per_case = Json::object();
    for (const auto& [id, d] : r.per_case_durations) per_case[id] = d;
    Json waiting = Json::array();
    for (const auto& [edge, stats] : r.edge_waiting) {
        Json entry{{"from", edge.from}, {"to", edge.to}};
        entry.update(to_json(stats));
        waiting.push_back(std::move(entry));
    }
    Json bottlenecks = Json::array();
    for (const auto& b : r.bottlenecks) {
        bottlenecks.push_back(
            Json{{"from", b.edge.from}, {"to", b.edge.to}, {"mean_waiting", b.mean_waiting}, {"frequency", b.frequency}});
    }
    return Json{{"unit", "seconds"},
                {"case_duration", to_json(r.case_duration)},
                {"per_case_durations", per_case},
                {"edge_waiting", waiting},
                {"bottlenecks", bottlenecks}};
}

Json to_json(const std::vector<ThroughputPoint>& series) {
    Json out = Json::array();
    for (const auto& p : series) {
        out.push_back(Json{{"bucket_start", format_date(p.bucket_start)}, {"completed_cases", p.completed_cases}});
    }
    return out;
}

}  // namespace pmchat
