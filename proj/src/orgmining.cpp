#include "pmchat/orgmining.hpp"

#include <algorithm>
#include <sstream>

namespace pmchat {

std::size_t HandoverNetwork::total() const {
    std::size_t n = 0;
    for (const auto& [_, c] : edges) n += c;
    return n;
}

std::size_t ResourceActivityMatrix::total() const {
    std::size_t n = 0;
    for (const auto& [_, c] : counts) n += c;
    return n;
}

HandoverNetwork handover_network(const EventLog& log) {
    HandoverNetwork net;
    for (const auto& c : log.cases) {
        for (std::size_t i = 0; i < c.events.size(); ++i) {
            const auto& cur = c.events[i].resource;
            if (cur) net.resources.insert(*cur);
            if (i == 0) continue;
            const auto& prev = c.events[i - 1].resource;
            if (prev && cur) ++net.edges[Edge{*prev, *cur}];
        }
    }
    if (net.resources.empty()) net.warnings.push_back("no event carries a resource; handover network is empty");
    return net;
}

ResourceActivityMatrix resource_activity_matrix(const EventLog& log) {
    ResourceActivityMatrix m;
    for (const auto& c : log.cases) {
        for (const auto& e : c.events) {
            if (e.resource) ++m.counts[{*e.resource, e.activity}];
        }
    }
    return m;
}

std::vector<std::pair<std::string, std::size_t>> workload_stats(const EventLog& log) {
    std::map<std::string, std::size_t> per_resource;
    for (const auto& [key, n] : resource_activity_matrix(log).counts) per_resource[key.first] += n;
    std::vector<std::pair<std::string, std::size_t>> out(per_resource.begin(), per_resource.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

Json to_json(const HandoverNetwork& n) {
    Json edges = Json::array();
    for (const auto& [e, c] : n.edges) edges.push_back(Json{{"from", e.from}, {"to", e.to}, {"count", c}});
    return Json{{"resources", n.resources}, {"edges", edges}, {"warnings", n.warnings}};
}

Json to_json(const ResourceActivityMatrix& m) {
    Json cells = Json::array();
    for (const auto& [key, c] : m.counts) {
        cells.push_back(Json{{"resource", key.first}, {"activity", key.second}, {"count", c}});
    }
    return cells;
}

std::string handover_to_dot(const HandoverNetwork& n) {
    std::ostringstream os;
    os << "digraph handover {\n  node [shape=ellipse];\n";
    for (const auto& r : n.resources) os << "  \"" << r << "\";\n";
    for (const auto& [e, c] : n.edges) {
        os << "  \"" << e.from << "\" -> \"" << e.to << "\" [label=\"" << c << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace pmchat
