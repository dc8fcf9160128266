#include "pmchat/conformance.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace pmchat {

std::string_view to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::unknown_activity: return "unknown-activity";
        case ViolationKind::disallowed_edge: return "disallowed-edge";
        case ViolationKind::bad_start: return "bad-start";
        case ViolationKind::bad_end: return "bad-end";
    }
    return "unknown";
}

double ReplayResult::fitness() const {
    return total_moves == 0 ? 1.0 : static_cast<double>(allowed_moves) / static_cast<double>(total_moves);
}

ReplayResult replay_case(const ProcessModel& model, const Case& c) {
    ReplayResult r;
    if (c.events.empty()) return r;

    auto known = [&](const std::string& a) { return model.activities.contains(a); };
    auto check = [&](bool ok, std::size_t pos, ViolationKind kind, std::string detail) {
        ++r.total_moves;
        if (ok) {
            ++r.allowed_moves;
        } else {
            r.violations.push_back(Violation{c.case_id, pos, kind, std::move(detail)});
        }
    };

    const auto& first = c.events.front().activity;
    if (!known(first)) {
        check(false, 0, ViolationKind::unknown_activity, first);
    } else {
        check(model.allowed_starts.contains(first), 0, ViolationKind::bad_start, first);
    }

    for (std::size_t i = 1; i < c.events.size(); ++i) {
        const Edge e{c.events[i - 1].activity, c.events[i].activity};
        if (!known(e.from) || !known(e.to)) {
            check(false, i, ViolationKind::unknown_activity, known(e.from) ? e.to : e.from);
        } else {
            check(model.allowed_edges.contains(e), i, ViolationKind::disallowed_edge, to_string(e));
        }
    }

    const std::size_t last_pos = c.events.size() - 1;
    const auto& last = c.events.back().activity;
    if (!known(last)) {
        check(false, last_pos, ViolationKind::unknown_activity, last);
    } else {
        check(model.allowed_ends.contains(last), last_pos, ViolationKind::bad_end, last);
    }
    return r;
}

ConformanceReport check_conformance(const ProcessModel& model, const EventLog& log) {
    ConformanceReport report;
    for (const auto& c : log.cases) {
        auto r = replay_case(model, c);
        report.per_case_fitness[c.case_id] = r.fitness();
        report.allowed_moves += r.allowed_moves;
        report.total_moves += r.total_moves;
        if (r.allowed_moves < r.total_moves) ++report.violating_case_count;
        for (auto& v : r.violations) report.violations.push_back(std::move(v));
    }
    report.log_fitness = report.total_moves == 0
                             ? 1.0
                             : static_cast<double>(report.allowed_moves) / static_cast<double>(report.total_moves);
    return report;
}

ConformanceSummary conformance_summary(const ConformanceReport& report, std::size_t top_n) {
    ConformanceSummary s;
    s.fitness = report.log_fitness;
    s.violating_cases = report.violating_case_count;

    std::array<std::size_t, 4> counts{};
    for (const auto& v : report.violations) ++counts[static_cast<std::size_t>(v.kind)];
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] > 0) s.top_kinds.emplace_back(static_cast<ViolationKind>(k), counts[k]);
    }
    std::stable_sort(s.top_kinds.begin(), s.top_kinds.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (s.top_kinds.size() > top_n) s.top_kinds.resize(top_n);

    std::array<char, 96> head{};
    std::snprintf(head.data(), head.size(), "fitness %.3f, %zu violating cases", s.fitness, s.violating_cases);
    s.text = head.data();
    for (std::size_t i = 0; i < s.top_kinds.size(); ++i) {
        s.text += i == 0 ? "; top violations: " : ", ";
        s.text += std::string(to_string(s.top_kinds[i].first)) + ":" + std::to_string(s.top_kinds[i].second);
    }
    return s;
}

Json to_json(const ConformanceReport& r) {
    Json per_case = Json::object();
    for (const auto& [id, f] : r.per_case_fitness) per_case[id] = f;
    Json violations = Json::array();
    for (const auto& v : r.violations) {
        violations.push_back(Json{{"case_id", v.case_id},
                                  {"position", v.position},
                                  {"kind", to_string(v.kind)},
                                  {"detail", v.detail}});
    }
    return Json{{"log_fitness", r.log_fitness},
                {"allowed_moves", r.allowed_moves},
                {"total_moves", r.total_moves},
                {"violating_case_count", r.violating_case_count},
                {"per_case_fitness", per_case},
                {"violations", violations}};
}

Json to_json(const ConformanceSummary& s) {
    Json kinds = Json::array();
    for (const auto& [k, n] : s.top_kinds) kinds.push_back(Json{{"kind", to_string(k)}, {"count", n}});
    return Json{{"fitness", s.fitness}, {"violating_cases", s.violating_cases}, {"top_kinds", kinds}, {"text", s.text}};
}

}  // namespace pmchat
