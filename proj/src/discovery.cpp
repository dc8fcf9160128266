#include "pmchat/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pmchat {

std::string to_string(const Edge& e) { return e.from + " -> " + e.to; }

std::size_t DirectlyFollowsGraph::edge_count(const std::string& from, const std::string& to) const {
    auto it = edges.find(Edge{from, to});
    return it == edges.end() ? 0 : it->second;
}

std::size_t DirectlyFollowsGraph::total_edge_frequency() const {
    std::size_t n = 0;
    for (const auto& [_, f] : edges) n += f;
    return n;
}

DirectlyFollowsGraph build_dfg(const EventLog& log) {
    DirectlyFollowsGraph dfg;
    for (const auto& c : log.cases) {
        if (c.events.empty()) continue;
        ++dfg.start_activities[c.events.front().activity];
        ++dfg.end_activities[c.events.back().activity];
        for (std::size_t i = 0; i < c.events.size(); ++i) {
            ++dfg.activity_frequencies[c.events[i].activity];
            if (i > 0) ++dfg.edges[Edge{c.events[i - 1].activity, c.events[i].activity}];
        }
    }
    return dfg;
}

std::vector<Variant> extract_variants(const EventLog& log) {
    std::map<std::vector<std::string>, Variant> by_sequence;
    for (const auto& c : log.cases) {
        std::vector<std::string> seq;
        seq.reserve(c.events.size());
        for (const auto& e : c.events) seq.push_back(e.activity);
        auto& v = by_sequence[seq];
        if (v.frequency == 0) {
            v.activity_sequence = seq;
            v.example_case_id = c.case_id;
        }
        ++v.frequency;
    }
    std::vector<Variant> out;
    out.reserve(by_sequence.size());
    for (auto& [_, v] : by_sequence) out.push_back(std::move(v));
    // by_sequence iterates lexicographically; a stable sort on frequency keeps that as the tie-break.
    std::stable_sort(out.begin(), out.end(),
                     [](const Variant& a, const Variant& b) { return a.frequency > b.frequency; });
    return out;
}

double dependency_measure(const DirectlyFollowsGraph& dfg, const std::string& a, const std::string& b) {
    const auto ab = static_cast<double>(dfg.edge_count(a, b));
    const auto ba = static_cast<double>(dfg.edge_count(b, a));
    return (ab - ba) / (ab + ba + 1.0);
}

ProcessModel discover_model(const DirectlyFollowsGraph& dfg, double dependency_threshold,
                            std::size_t frequency_threshold) {
    if (!(dependency_threshold >= 0.0 && dependency_threshold < 1.0)) {
        throw Error(ErrorCode::validation, "dependency threshold must lie in [0, 1)");
    }
    if (frequency_threshold == 0) throw Error(ErrorCode::validation, "frequency threshold must be positive");

    ProcessModel model;
    for (const auto& [activity, _] : dfg.activity_frequencies) model.activities.insert(activity);
    // Negative dependency only says the reverse direction is more frequent; it is
    // floored at 0 so a zero threshold keeps every observed edge.
    for (const auto& [edge, freq] : dfg.edges) {
        const double dependency = std::max(0.0, dependency_measure(dfg, edge.from, edge.to));
        if (freq >= frequency_threshold && dependency >= dependency_threshold) {
            model.allowed_edges.insert(edge);
        }
    }
    for (const auto& [activity, n] : dfg.start_activities) {
        if (n >= frequency_threshold) model.allowed_starts.insert(activity);
    }
    for (const auto& [activity, n] : dfg.end_activities) {
        if (n >= frequency_threshold) model.allowed_ends.insert(activity);
    }
    if (model.allowed_edges.empty() && !dfg.edges.empty()) {
        model.warnings.push_back("degenerate model: thresholds exclude every directly-follows edge");
    }
    return model;
}

ProcessModel discover_model(const EventLog& log, double dependency_threshold, std::size_t frequency_threshold) {
    return discover_model(build_dfg(log), dependency_threshold, frequency_threshold);
}

namespace {

Json count_map(const std::map<std::string, std::size_t>& m) {
    Json j = Json::object();
    for (const auto& [k, v] : m) j[k] = v;
    return j;
}

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

}  // namespace

Json to_json(const DirectlyFollowsGraph& dfg) {
    Json edges = Json::array();
    for (const auto& [edge, freq] : dfg.edges) {
        edges.push_back(Json{{"from", edge.from},
                             {"to", edge.to},
                             {"frequency", freq},
                             {"dependency", round3(dependency_measure(dfg, edge.from, edge.to))}});
    }
    return Json{{"activities", count_map(dfg.activity_frequencies)},
                {"edges", edges},
                {"start_activities", count_map(dfg.start_activities)},
                {"end_activities", count_map(dfg.end_activities)}};
}

Json to_json(const Variant& v) {
    return Json{{"activities", v.activity_sequence}, {"frequency", v.frequency}, {"example_case_id", v.example_case_id}};
}

Json to_json(const ProcessModel& m) {
    Json edges = Json::array();
    for (const auto& e : m.allowed_edges) edges.push_back(Json{{"from", e.from}, {"to", e.to}});
    return Json{{"activities", m.activities},
                {"allowed_edges", edges},
                {"allowed_starts", m.allowed_starts},
                {"allowed_ends", m.allowed_ends},
                {"warnings", m.warnings}};
}

ProcessModel model_from_json(const Json& j) {
    try {
        ProcessModel m;
        m.activities = j.at("activities").get<std::set<std::string>>();
        for (const auto& e : j.at("allowed_edges")) {
            m.allowed_edges.insert(Edge{e.at("from").get<std::string>(), e.at("to").get<std::string>()});
        }
        m.allowed_starts = j.at("allowed_starts").get<std::set<std::string>>();
        m.allowed_ends = j.at("allowed_ends").get<std::set<std::string>>();
        if (j.contains("warnings")) m.warnings = j["warnings"].get<std::vector<std::string>>();

        auto known = [&](const std::string& a) { return m.activities.contains(a); };
        for (const auto& e : m.allowed_edges) {
            if (!known(e.from) || !known(e.to)) {
                throw Error(ErrorCode::validation, "model edge " + to_string(e) + " references an unknown activity");
            }
        }
        for (const auto& a : m.allowed_starts) {
            if (!known(a)) throw Error(ErrorCode::validation, "model start '" + a + "' is not an activity");
        }
        for (const auto& a : m.allowed_ends) {
            if (!known(a)) throw Error(ErrorCode::validation, "model end '" + a + "' is not an activity");
        }
        return m;
    } catch (const Json::exception& ex) {
        throw Error(ErrorCode::validation, std::string("malformed process model: ") + ex.what());
    }
}

std::string dfg_to_dot(const DirectlyFollowsGraph& dfg) {
    std::size_t max_freq = 1;
    for (const auto& [_, f] : dfg.edges) max_freq = std::max(max_freq, f);

    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char ch : s) {
            if (ch == '"' || ch == '\\') out.push_back('\\');
            out.push_back(ch);
        }
        return out + "\"";
    };

    std::ostringstream os;
    os << "digraph dfg {\n  rankdir=LR;\n  node [shape=box];\n";
    os << "  \"__start__\" [shape=circle,label=\"\"];\n  \"__end__\" [shape=doublecircle,label=\"\"];\n";
    for (const auto& [a, n] : dfg.activity_frequencies) {
        os << "  " << quote(a) << " [label=" << quote(a + " (" + std::to_string(n) + ")") << "];\n";
    }
    for (const auto& [a, n] : dfg.start_activities) {
        os << "  \"__start__\" -> " << quote(a) << " [label=\"" << n << "\"];\n";
    }
    for (const auto& [edge, f] : dfg.edges) {
        const double width = 1.0 + 4.0 * static_cast<double>(f) / static_cast<double>(max_freq);
        std::ostringstream w;
        w.precision(2);
        w << std::fixed << width;
        os << "  " << quote(edge.from) << " -> " << quote(edge.to) << " [label=\"" << f << "\",penwidth=" << w.str()
           << "];\n";
    }
    for (const auto& [a, n] : dfg.end_activities) {
        os << "  " << quote(a) << " -> \"__end__\" [label=\"" << n << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace pmchat
