#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pmchat/discovery.hpp"
#include "pmchat/eventlog.hpp"

namespace pmchat {

/// Resource-to-resource handovers between consecutive events of a case.
/// A pair counts only when both events carry a resource; self-handovers count.
struct HandoverNetwork {
    std::set<std::string> resources;
    std::map<Edge, std::size_t> edges;
    std::vector<std::string> warnings;

    std::size_t total() const;
};

struct ResourceActivityMatrix {
    std::map<std::pair<std::string, std::string>, std::size_t> counts;  ///< (resource, activity)

    std::size_t total() const;
};

HandoverNetwork handover_network(const EventLog& log);
ResourceActivityMatrix resource_activity_matrix(const EventLog& log);

/// Events per resource, count descending then resource name.
std::vector<std::pair<std::string, std::size_t>> workload_stats(const EventLog& log);

Json to_json(const HandoverNetwork& n);
Json to_json(const ResourceActivityMatrix& m);

std::string handover_to_dot(const HandoverNetwork& n);

}  // namespace pmchat
