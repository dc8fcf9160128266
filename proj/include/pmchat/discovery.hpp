#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pmchat/eventlog.hpp"

namespace pmchat {

/// Directed pair of labels (activities or resources).
struct Edge {
    std::string from;
    std::string to;

    auto operator<=>(const Edge&) const = default;
};

std::string to_string(const Edge& e);

struct DirectlyFollowsGraph {
    std::map<std::string, std::size_t> activity_frequencies;
    std::map<Edge, std::size_t> edges;
    std::map<std::string, std::size_t> start_activities;
    std::map<std::string, std::size_t> end_activities;

    std::size_t edge_count(const std::string& from, const std::string& to) const;
    std::size_t total_edge_frequency() const;
};

struct Variant {
    std::vector<std::string> activity_sequence;
    std::size_t frequency = 0;
    std::string example_case_id;
};

struct ProcessModel {
    std::set<std::string> activities;
    std::set<Edge> allowed_edges;
    std::set<std::string> allowed_starts;
    std::set<std::string> allowed_ends;
    std::vector<std::string> warnings;
};

struct DiscoveryThresholds {
    double dependency = 0.5;
    std::size_t frequency = 2;
};

DirectlyFollowsGraph build_dfg(const EventLog& log);

/// Sorted by frequency descending, then lexicographically by sequence.
std::vector<Variant> extract_variants(const EventLog& log);

/// Heuristics-miner dependency (|a>b| - |b>a|) / (|a>b| + |b>a| + 1).
double dependency_measure(const DirectlyFollowsGraph& dfg, const std::string& a, const std::string& b);

/// Keeps DFG edges with frequency >= frequency_threshold and max(0, dependency) >=
/// dependency_threshold, plus starts/ends seen at least frequency_threshold times.
ProcessModel discover_model(const EventLog& log, double dependency_threshold, std::size_t frequency_threshold);
ProcessModel discover_model(const DirectlyFollowsGraph& dfg, double dependency_threshold,
                            std::size_t frequency_threshold);

Json to_json(const DirectlyFollowsGraph& dfg);
Json to_json(const Variant& v);
Json to_json(const ProcessModel& m);
ProcessModel model_from_json(const Json& j);

/// Graphviz rendering with edge labels and pen widths scaled by frequency.
std::string dfg_to_dot(const DirectlyFollowsGraph& dfg);

}  // namespace pmchat
