#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "pmchat/discovery.hpp"
#include "pmchat/eventlog.hpp"

namespace pmchat {

// Declaration order is the tie-break order in summaries.
enum class ViolationKind { unknown_activity, disallowed_edge, bad_start, bad_end };

std::string_view to_string(ViolationKind k);

struct Violation {
    std::string case_id;
    std::size_t position = 0;
    ViolationKind kind = ViolationKind::unknown_activity;
    std::string detail;
};

struct ReplayResult {
    std::size_t allowed_moves = 0;
    std::size_t total_moves = 0;
    std::vector<Violation> violations;

    double fitness() const;
};

struct ConformanceReport {
    std::map<std::string, double> per_case_fitness;
    double log_fitness = 1.0;
    std::size_t allowed_moves = 0;
    std::size_t total_moves = 0;
    std::vector<Violation> violations;
    std::size_t violating_case_count = 0;
};

/// Replays a case as one start check, one check per consecutive pair, and one end check.
/// Each failed check yields exactly one violation; unknown activities take precedence.
ReplayResult replay_case(const ProcessModel& model, const Case& c);

/// Aggregated in case_id order; log fitness is pooled over moves, not averaged over cases.
ConformanceReport check_conformance(const ProcessModel& model, const EventLog& log);

struct ConformanceSummary {
    double fitness = 1.0;
    std::size_t violating_cases = 0;
    std::vector<std::pair<ViolationKind, std::size_t>> top_kinds;
    std::string text;
};

ConformanceSummary conformance_summary(const ConformanceReport& report, std::size_t top_n);

Json to_json(const ConformanceReport& r);
Json to_json(const ConformanceSummary& s);

}  // namespace pmchat
