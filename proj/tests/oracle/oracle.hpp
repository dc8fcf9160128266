#pragma once

// Brute-force reference implementations. They deliberately avoid the library's
// own aggregation code: plain vectors, linear searches and nested loops.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pmchat/eventlog.hpp"

namespace oracle {

using pmchat::EventLog;

inline EventLog random_log(std::mt19937_64& rng, std::size_t max_cases = 50, std::size_t max_events = 20) {
    static const char* kActivities[] = {"Register", "Check", "Approve", "Reject", "Notify", "Archive", "Pay"};
    static const char* kPeople[] = {"ann", "ben", "cleo", "dov"};
    std::uniform_int_distribution<std::size_t> n_cases(1, max_cases);
    std::uniform_int_distribution<std::size_t> n_events(1, max_events);
    std::uniform_int_distribution<int> alphabet_size(2, 7);
    std::uniform_int_distribution<int> gap(0, 180);
    std::uniform_int_distribution<int> start_day(0, 60);
    std::bernoulli_distribution has_resource(0.8);

    const int alphabet = alphabet_size(rng);
    std::uniform_int_distribution<int> pick(0, alphabet - 1);
    std::uniform_int_distribution<int> person(0, 3);

    EventLog log;
    const std::size_t cases = n_cases(rng);
    for (std::size_t c = 0; c < cases; ++c) {
        pmchat::Case kase;
        kase.case_id = "k" + std::to_string(1000 + c);
        auto t = pmchat::Timestamp{} + std::chrono::hours(24 * (19723 + start_day(rng)));
        const std::size_t events = n_events(rng);
        for (std::size_t e = 0; e < events; ++e) {
            t += std::chrono::minutes(gap(rng));
            pmchat::Event ev;
            ev.case_id = kase.case_id;
            ev.activity = kActivities[pick(rng)];
            ev.timestamp = t;
            if (has_resource(rng)) ev.resource = kPeople[person(rng)];
            kase.events.push_back(ev);
        }
        log.cases.push_back(std::move(kase));
    }
    return pmchat::normalize(std::move(log));
}

inline std::vector<std::string> trace(const pmchat::Case& c) {
    std::vector<std::string> out;
    for (const auto& e : c.events) out.push_back(e.activity);
    return out;
}

struct Structural {
    std::size_t cases = 0;
    std::size_t activities = 0;
    std::size_t variants = 0;
    std::size_t rework_cases = 0;
};

inline Structural structural(const EventLog& log) {
    Structural s;
    std::vector<std::string> seen_activities;
    std::vector<std::vector<std::string>> seen_traces;
    for (const auto& c : log.cases) {
        ++s.cases;
        const auto t = trace(c);
        bool rework = false;
        for (std::size_t i = 0; i < t.size(); ++i) {
            for (std::size_t j = i + 1; j < t.size(); ++j) {
                if (t[i] == t[j]) rework = true;
            }
            bool known = false;
            for (const auto& a : seen_activities) known = known || a == t[i];
            if (!known) seen_activities.push_back(t[i]);
        }
        if (rework) ++s.rework_cases;
        bool known_trace = false;
        for (const auto& other : seen_traces) known_trace = known_trace || other == t;
        if (!known_trace) seen_traces.push_back(t);
    }
    s.activities = seen_activities.size();
    s.variants = seen_traces.size();
    return s;
}

inline std::pair<pmchat::Timestamp, pmchat::Timestamp> time_range(const EventLog& log) {
    bool first = true;
    pmchat::Timestamp lo{}, hi{};
    for (const auto& c : log.cases) {
        for (const auto& e : c.events) {
            if (first || e.timestamp < lo) lo = e.timestamp;
            if (first || e.timestamp > hi) hi = e.timestamp;
            first = false;
        }
    }
    return {lo, hi};
}

struct CountedPair {
    std::string from;
    std::string to;
    std::size_t count = 0;
};

inline std::vector<CountedPair> directly_follows(const EventLog& log) {
    std::vector<CountedPair> out;
    for (const auto& c : log.cases) {
        for (std::size_t i = 0; i + 1 < c.events.size(); ++i) {
            const auto& a = c.events[i].activity;
            const auto& b = c.events[i + 1].activity;
            bool found = false;
            for (auto& p : out) {
                if (p.from == a && p.to == b) {
                    ++p.count;
                    found = true;
                }
            }
            if (!found) out.push_back({a, b, 1});
        }
    }
    return out;
}

struct CountedTrace {
    std::vector<std::string> sequence;
    std::size_t count = 0;
};

inline std::vector<CountedTrace> variant_counts(const EventLog& log) {
    std::vector<CountedTrace> out;
    for (const auto& c : log.cases) {
        const auto t = trace(c);
        bool found = false;
        for (auto& v : out) {
            if (v.sequence == t) {
                ++v.count;
                found = true;
            }
        }
        if (!found) out.push_back({t, 1});
    }
    return out;
}

/// Token-free replay by hand: one start move, one move per consecutive pair,
/// one end move; a move is allowed when every activity it touches is known and
/// the start/edge/end is listed.
struct Moves {
    std::size_t allowed = 0;
    std::size_t total = 0;
};

inline Moves replay_moves(const std::vector<std::string>& activities, const std::vector<std::pair<std::string, std::string>>& edges,
                          const std::vector<std::string>& starts, const std::vector<std::string>& ends,
                          const std::vector<std::string>& t) {
    auto in = [](const std::vector<std::string>& v, const std::string& x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };
    Moves m;
    if (t.empty()) return m;
    m.total = t.size() + 1;
    if (in(activities, t.front()) && in(starts, t.front())) ++m.allowed;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const bool known = in(activities, t[i]) && in(activities, t[i + 1]);
        const bool listed = std::find(edges.begin(), edges.end(), std::make_pair(t[i], t[i + 1])) != edges.end();
        if (known && listed) ++m.allowed;
    }
    if (in(activities, t.back()) && in(ends, t.back())) ++m.allowed;
    return m;
}

/// Percent with halves rounded up, computed via long double as a cross-check.
inline int percent(std::size_t count, std::size_t total) {
    const long double exact = 100.0L * static_cast<long double>(count) / static_cast<long double>(total);
    const long double floor_part = static_cast<long double>(static_cast<std::int64_t>(exact));
    return static_cast<int>(floor_part) + (exact - floor_part >= 0.5L - 1e-12L ? 1 : 0);
}

}  // namespace oracle
