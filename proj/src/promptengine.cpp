#include "pmchat/promptengine.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

namespace pmchat {

std::string_view to_string(AnalysisTask t) {
    switch (t) {
        case AnalysisTask::analytics: return "Analytics";
        case AnalysisTask::interpretation: return "Interpretation";
        case AnalysisTask::recommendations: return "Recommendations";
    }
    return "Analytics";
}

std::string_view to_string(PromptStyle s) {
    return s == PromptStyle::zero_shot ? "zero_shot" : "optimized";
}

AnalysisTask task_from_string(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "analytics") return AnalysisTask::analytics;
    if (lower == "interpretation" || lower == "interpretations") return AnalysisTask::interpretation;
    if (lower == "recommendations") return AnalysisTask::recommendations;
    throw Error(ErrorCode::validation, "unknown task '" + std::string(s) + "'",
                Json{{"allowed", {"Analytics", "Interpretation", "Recommendations"}}});
}

PromptStyle style_from_string(std::string_view s) {
    if (s == "zero_shot" || s == "zero-shot") return PromptStyle::zero_shot;
    if (s == "optimized") return PromptStyle::optimized;
    throw Error(ErrorCode::validation, "unknown prompt style '" + std::string(s) + "'",
                Json{{"allowed", {"zero_shot", "optimized"}}});
}

std::string_view task_directive(AnalysisTask t) {
    switch (t) {
        case AnalysisTask::analytics:
            return "Requested output: Analytics. Analyze the module data and report the key insights on process "
                   "performance and its metrics.";
        case AnalysisTask::interpretation:
            return "Requested output: Interpretations. Interpret the module data to identify trends, patterns and "
                   "outliers.";
        case AnalysisTask::recommendations:
            return "Requested output: Recommendations for Improvement. Suggest concrete, prioritized strategies to "
                   "optimize the process.";
    }
    return "";
}

std::size_t estimate_tokens(std::string_view text) { return (text.size() + 3) / 4; }

const std::vector<std::string>& section_headers(PromptStyle style) {
    static const std::vector<std::string> zero_shot{
        "Role",          "Task",         "Process",         "Organization",        "Sector",
        "KPIs",          "Objective",    "Considerations",  "Deliverables",        "Analysis Guidelines",
        "Additional Instructions", "Module Data"};
    static const std::vector<std::string> optimized{"Role",           "Task",      "Process",
                                                    "Organization",   "Analysis Focus", "Deep Dive",
                                                    "Recommendations", "Additional Considerations", "Module Data"};
    return style == PromptStyle::zero_shot ? zero_shot : optimized;
}

std::vector<std::string> scan_headers(std::string_view prompt) {
    std::set<std::string> known;
    for (auto style : {PromptStyle::zero_shot, PromptStyle::optimized}) {
        for (const auto& h : section_headers(style)) known.insert(h);
    }
    std::vector<std::string> found;
    bool section_start = true;
    std::size_t pos = 0;
    while (pos <= prompt.size()) {
        std::size_t eol = prompt.find('\n', pos);
        if (eol == std::string_view::npos) eol = prompt.size();
        const std::string_view line = prompt.substr(pos, eol - pos);
        if (line.empty()) {
            section_start = true;
        } else {
            if (section_start) {
                const auto colon = line.find(':');
                if (colon != std::string_view::npos && known.contains(std::string(line.substr(0, colon)))) {
                    found.emplace_back(line.substr(0, colon));
                }
            }
            section_start = false;
        }
        pos = eol + 1;
    }
    return found;
}

namespace {

std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string num(const Json& j) {
    if (j.is_number_integer() || j.is_number_unsigned()) return std::to_string(j.get<long long>());
    if (j.is_number_float()) return fixed(j.get<double>(), 3);
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

std::size_t weight_of(const Json& j, const char* key) {
    return j.contains(key) && j[key].is_number() ? j[key].get<std::size_t>() : 0;
}

void sort_rows(ModuleTable& t) {
    std::stable_sort(t.rows.begin(), t.rows.end(),
                     [](const TableRow& a, const TableRow& b) { return a.weight > b.weight; });
}

ModuleTable count_table(const std::string& title, const Json& counts, const std::string& unit) {
    ModuleTable t{title, {}};
    for (const auto& [k, v] : counts.items()) {
        t.rows.push_back({k + ": " + num(v) + unit, v.get<std::size_t>()});
    }
    sort_rows(t);
    return t;
}

std::string join(const Json& arr, const std::string& sep) {
    std::string out;
    for (const auto& v : arr) {
        if (!out.empty()) out += sep;
        out += v.get<std::string>();
    }
    return out.empty() ? "(none)" : out;
}

ModuleBlock dashboard_block(const Json& p) {
    ModuleBlock b{EngineModule::dashboard, "Dashboard Module", {}, {}};
    const auto& s = p.at("structural");
    const auto& t = p.at("temporal");
    b.lines.push_back("Structural Analysis: Total cases: " + num(s.at("total_cases")) +
                      ", Total activities: " + num(s.at("total_activities")) +
                      ", Total variants: " + num(s.at("total_variants")) +
                      ", Total cases with rework: " + num(s.at("total_cases_with_rework")) +
                      "; Temporal analysis: First event date: " + num(t.at("first_event_date")) +
                      ", Last event date: " + num(t.at("last_event_date")));
    b.lines.push_back("Observed time span: " + num(t.at("span_seconds")) + " seconds");
    if (p.contains("throughput_daily")) {
        ModuleTable tp{"Completed cases per day", {}};
        for (const auto& pt : p["throughput_daily"]) {
            tp.rows.push_back({num(pt.at("bucket_start")) + ": " + num(pt.at("completed_cases")),
                               weight_of(pt, "completed_cases")});
        }
        sort_rows(tp);
        b.tables.push_back(std::move(tp));
    }
    return b;
}

ModuleBlock discovery_block(const Json& p) {
    ModuleBlock b{EngineModule::discovery, "Process Discovery Module", {}, {}};
    const auto& dfg = p.at("dfg");
    const auto& model = p.at("model");
    std::size_t total_events = 0;
    for (const auto& [_, v] : dfg.at("activities").items()) total_events += v.get<std::size_t>();
    b.lines.push_back("Distinct activities: " + std::to_string(dfg.at("activities").size()) +
                      ", events: " + std::to_string(total_events) +
                      ", directly-follows edges: " + std::to_string(dfg.at("edges").size()) +
                      ", variants: " + std::to_string(p.at("variants").size()));
    std::string thresholds;
    if (p.contains("thresholds")) {
        thresholds = " (dependency >= " + fixed(p["thresholds"].at("dependency").get<double>(), 2) +
                     ", frequency >= " + num(p["thresholds"].at("frequency")) + ")";
    }
    b.lines.push_back("Discovered model" + thresholds + ": " + std::to_string(model.at("activities").size()) +
                      " activities, " + std::to_string(model.at("allowed_edges").size()) +
                      " allowed edges; start activities: " + join(model.at("allowed_starts"), ", ") +
                      "; end activities: " + join(model.at("allowed_ends"), ", "));
    for (const auto& w : model.value("warnings", Json::array())) b.lines.push_back("Warning: " + w.get<std::string>());

    ModuleTable variants{"Variants (activity sequence: cases)", {}};
    for (const auto& v : p.at("variants")) {
        variants.rows.push_back({join(v.at("activities"), " > ") + ": " + num(v.at("frequency")),
                                 weight_of(v, "frequency")});
    }
    sort_rows(variants);

    ModuleTable edges{"Directly-follows edges (frequency, dependency)", {}};
    for (const auto& e : dfg.at("edges")) {
        edges.rows.push_back({e.at("from").get<std::string>() + " -> " + e.at("to").get<std::string>() + ": " +
                                  num(e.at("frequency")) + ", dependency " + num(e.at("dependency")),
                              weight_of(e, "frequency")});
    }
    sort_rows(edges);

    b.tables.push_back(count_table("Activity frequencies", dfg.at("activities"), ""));
    b.tables.push_back(std::move(variants));
    b.tables.push_back(std::move(edges));
    b.tables.push_back(count_table("Start activities (cases)", dfg.at("start_activities"), ""));
    b.tables.push_back(count_table("End activities (cases)", dfg.at("end_activities"), ""));
    return b;
}

ModuleBlock performance_block(const Json& p) {
    ModuleBlock b{EngineModule::performance, "Performance Mining Module", {}, {}};
    const auto& cd = p.at("case_duration");
    b.lines.push_back("Case duration in seconds: cases " + num(cd.at("count")) + ", min " + num(cd.at("min")) +
                      ", median " + num(cd.at("median")) + ", mean " + num(cd.at("mean")) + ", max " +
                      num(cd.at("max")));
    b.lines.push_back("Waiting time is the elapsed time between consecutive events; service time is not recorded.");

    ModuleTable bottlenecks{"Bottlenecks (edge: mean waiting seconds, transitions)", {}};
    for (const auto& x : p.at("bottlenecks")) {
        bottlenecks.rows.push_back({x.at("from").get<std::string>() + " -> " + x.at("to").get<std::string>() + ": " +
                                        num(x.at("mean_waiting")) + " s, " + num(x.at("frequency")),
                                    weight_of(x, "frequency")});
    }
    // Bottlenecks keep their ranking; the weight only decides truncation.
    ModuleTable waiting{"Waiting time per edge in seconds (count, min, median, mean, max)", {}};
    for (const auto& x : p.at("edge_waiting")) {
        waiting.rows.push_back({x.at("from").get<std::string>() + " -> " + x.at("to").get<std::string>() + ": " +
                                    num(x.at("count")) + ", " + num(x.at("min")) + ", " + num(x.at("median")) +
                                    ", " + num(x.at("mean")) + ", " + num(x.at("max")),
                                weight_of(x, "count")});
    }
    sort_rows(waiting);
    b.tables.push_back(std::move(bottlenecks));
    b.tables.push_back(std::move(waiting));
    if (p.contains("throughput_weekly")) {
        ModuleTable tp{"Completed cases per week (week starting)", {}};
        for (const auto& pt : p["throughput_weekly"]) {
            tp.rows.push_back({num(pt.at("bucket_start")) + ": " + num(pt.at("completed_cases")),
                               weight_of(pt, "completed_cases")});
        }
        sort_rows(tp);
        b.tables.push_back(std::move(tp));
    }
    return b;
}

ModuleBlock conformance_block(const Json& p) {
    ModuleBlock b{EngineModule::conformance, "Conformance Checking Module", {}, {}};
    const auto& report = p.at("report");
    const auto& model = p.at("model");
    b.lines.push_back("Reference model: " + p.value("model_source", std::string("discovered")) + ", " +
                      std::to_string(model.at("activities").size()) + " activities, " +
                      std::to_string(model.at("allowed_edges").size()) + " allowed edges");
    b.lines.push_back("Log fitness: " + fixed(report.at("log_fitness").get<double>(), 3) + " (" +
                      num(report.at("allowed_moves")) + " of " + num(report.at("total_moves")) +
                      " replay moves allowed)");
    b.lines.push_back("Violating cases: " + num(report.at("violating_case_count")) + " of " +
                      std::to_string(report.at("per_case_fitness").size()));
    b.lines.push_back("Summary: " + p.at("summary").at("text").get<std::string>());

    std::map<std::string, std::size_t> kinds;
    std::map<std::string, std::size_t> details;
    for (const auto& v : report.at("violations")) {
        const auto kind = v.at("kind").get<std::string>();
        ++kinds[kind];
        ++details[kind + " " + v.at("detail").get<std::string>()];
    }
    ModuleTable kind_table{"Violations by kind", {}};
    for (const auto& [k, n] : kinds) kind_table.rows.push_back({k + ": " + std::to_string(n), n});
    sort_rows(kind_table);
    ModuleTable detail_table{"Most frequent deviations", {}};
    for (const auto& [d, n] : details) detail_table.rows.push_back({d + ": " + std::to_string(n), n});
    sort_rows(detail_table);
    b.tables.push_back(std::move(kind_table));
    b.tables.push_back(std::move(detail_table));
    return b;
}

ModuleBlock orgmining_block(const Json& p) {
    ModuleBlock b{EngineModule::orgmining, "Organizational Mining Module", {}, {}};
    const auto& handover = p.at("handover");
    b.lines.push_back("Resources (pseudonymized): " + std::to_string(handover.at("resources").size()) +
                      ", handover relations: " + std::to_string(handover.at("edges").size()));
    for (const auto& w : handover.value("warnings", Json::array())) b.lines.push_back("Warning: " + w.get<std::string>());

    ModuleTable workload{"Workload (resource: events)", {}};
    for (const auto& w : p.at("workload")) {
        workload.rows.push_back({w.at("resource").get<std::string>() + ": " + num(w.at("events")),
                                 weight_of(w, "events")});
    }
    sort_rows(workload);
    ModuleTable edges{"Handovers of work (from -> to: count)", {}};
    for (const auto& e : handover.at("edges")) {
        edges.rows.push_back({e.at("from").get<std::string>() + " -> " + e.at("to").get<std::string>() + ": " +
                                  num(e.at("count")),
                              weight_of(e, "count")});
    }
    sort_rows(edges);
    ModuleTable matrix{"Resource-activity counts", {}};
    for (const auto& c : p.at("resource_activity")) {
        matrix.rows.push_back({c.at("resource").get<std::string>() + " / " + c.at("activity").get<std::string>() +
                                   ": " + num(c.at("count")),
                               weight_of(c, "count")});
    }
    sort_rows(matrix);
    b.tables.push_back(std::move(workload));
    b.tables.push_back(std::move(edges));
    b.tables.push_back(std::move(matrix));
    return b;
}

std::string truncation_marker(std::size_t dropped) {
    return "- \xE2\x80\xA6 truncated " + std::to_string(dropped) + " rows\n";
}

// Rendering keeps a running byte count so the drop loop stays linear in rows.
class BlockRenderer {
public:
    explicit BlockRenderer(const std::vector<ModuleBlock>& blocks) : blocks_(blocks) {
        for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
            if (bi > 0) fixed_bytes_ += 1;  // blank line between blocks
            fixed_bytes_ += block_header(blocks_[bi]).size();
            for (const auto& line : blocks_[bi].lines) fixed_bytes_ += line.size() + 1;
            for (std::size_t ti = 0; ti < blocks_[bi].tables.size(); ++ti) {
                const auto& t = blocks_[bi].tables[ti];
                fixed_bytes_ += table_header(t).size();
                std::size_t rows_bytes = 0;
                for (const auto& r : t.rows) rows_bytes += r.text.size() + 3;  // "- " + text + "\n"
                tables_.push_back({bi, ti, t.rows.size(), rows_bytes});
            }
        }
    }

    std::size_t size() const {
        std::size_t n = fixed_bytes_;
        for (const auto& t : tables_) {
            n += t.kept_bytes;
            const std::size_t dropped = total_rows(t) - t.kept;
            if (dropped > 0) n += truncation_marker(dropped).size();
        }
        return n;
    }

    /// Drops the lowest-weight kept row across all tables; ties go to the later table.
    bool drop_one() {
        Slot* victim = nullptr;
        std::size_t best = 0;
        for (auto& t : tables_) {
            if (t.kept == 0) continue;
            const std::size_t w = row(t, t.kept - 1).weight;
            if (victim == nullptr || w <= best) {
                victim = &t;
                best = w;
            }
        }
        if (victim == nullptr) return false;
        victim->kept_bytes -= row(*victim, victim->kept - 1).text.size() + 3;
        --victim->kept;
        ++dropped_;
        return true;
    }

    std::size_t dropped() const { return dropped_; }

    std::string render() const {
        std::string out;
        out.reserve(size());
        std::size_t slot = 0;
        for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
            if (bi > 0) out += '\n';
            out += block_header(blocks_[bi]);
            for (const auto& line : blocks_[bi].lines) out += line + '\n';
            for (const auto& t : blocks_[bi].tables) {
                const Slot& s = tables_[slot++];
                out += table_header(t);
                for (std::size_t r = 0; r < s.kept; ++r) out += "- " + t.rows[r].text + '\n';
                if (s.kept < t.rows.size()) out += truncation_marker(t.rows.size() - s.kept);
            }
        }
        return out;
    }

private:
    struct Slot {
        std::size_t block;
        std::size_t table;
        std::size_t kept;
        std::size_t kept_bytes;
    };

    static std::string block_header(const ModuleBlock& b) { return "[" + b.title + "]\n"; }
    static std::string table_header(const ModuleTable& t) {
        return t.title + " (" + std::to_string(t.rows.size()) + " rows):\n";
    }
    const TableRow& row(const Slot& s, std::size_t i) const { return blocks_[s.block].tables[s.table].rows[i]; }
    std::size_t total_rows(const Slot& s) const { return blocks_[s.block].tables[s.table].rows.size(); }

    const std::vector<ModuleBlock>& blocks_;
    std::vector<Slot> tables_;
    std::size_t fixed_bytes_ = 0;
    std::size_t dropped_ = 0;
};

std::vector<ModuleBlock> blocks_for(const std::map<EngineModule, ModuleOutputRecord>& outputs) {
    if (outputs.empty()) throw Error(ErrorCode::validation, "no module outputs to analyze");
    std::vector<ModuleBlock> blocks;
    for (auto m : kAllModules) {
        auto it = outputs.find(m);
        if (it != outputs.end()) blocks.push_back(module_block(m, it->second.payload));
    }
    return blocks;
}

std::string section(const std::string& header, std::string_view content) {
    std::string out = header + ":";
    if (!content.empty()) {
        out += ' ';
        out += content;
    }
    return out + "\n\n";
}

std::string task_with_directive(const std::string& task, AnalysisTask t) {
    return task + " " + std::string(task_directive(t));
}

void require_fields(const std::string& role, const std::string& task) {
    auto blank = [](const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; };
    Json missing = Json::array();
    if (blank(role)) missing.push_back("Role");
    if (blank(task)) missing.push_back("Task");
    if (!missing.empty()) {
        throw Error(ErrorCode::validation, "required prompt sections are empty", Json{{"missing", missing}});
    }
}

template <typename Fields, typename Build, typename Shrink>
std::string fit_prompt(Fields fields, AnalysisTask task, const std::map<EngineModule, ModuleOutputRecord>& outputs,
                       const RenderBudget& budget, Build build, const std::vector<Shrink>& shrink_steps) {
    if (budget.max_prompt_tokens == 0) throw Error(ErrorCode::validation, "prompt budget must be positive");
    const std::size_t limit = budget.max_prompt_tokens * 4;
    const auto blocks = blocks_for(outputs);

    for (std::size_t step = 0;; ++step) {
        const std::size_t frame = build(fields, task, "").size();
        if (frame <= limit) {
            auto data = fit_module_data(blocks, limit - frame);
            if (data.fits) return build(fields, task, data.text);
        }
        if (step >= shrink_steps.size()) break;
        shrink_steps[step](fields);
    }
    throw Error(ErrorCode::budget, "prompt cannot fit the token budget",
                Json{{"max_prompt_tokens", budget.max_prompt_tokens}});
}

}  // namespace

ModuleBlock module_block(EngineModule module, const Json& payload) {
    try {
        switch (module) {
            case EngineModule::dashboard: return dashboard_block(payload);
            case EngineModule::discovery: return discovery_block(payload);
            case EngineModule::performance: return performance_block(payload);
            case EngineModule::conformance: return conformance_block(payload);
            case EngineModule::orgmining: return orgmining_block(payload);
        }
    } catch (const Json::exception& ex) {
        throw Error(ErrorCode::validation,
                    std::string(to_string(module)) + " payload cannot be rendered: " + ex.what());
    }
    throw Error(ErrorCode::internal, "unhandled module");
}

FittedModuleData fit_module_data(const std::vector<ModuleBlock>& blocks, std::size_t max_bytes) {
    BlockRenderer renderer(blocks);
    while (renderer.size() > max_bytes && renderer.drop_one()) {
    }
    return FittedModuleData{renderer.render(), renderer.dropped(), renderer.size() <= max_bytes};
}

std::string render_module_data(const std::map<EngineModule, ModuleOutputRecord>& outputs, const RenderBudget& budget) {
    if (budget.max_prompt_tokens == 0) throw Error(ErrorCode::validation, "prompt budget must be positive");
    auto data = fit_module_data(blocks_for(outputs), budget.max_prompt_tokens * 4);
    if (!data.fits) {
        throw Error(ErrorCode::budget, "module data exceeds the token budget even without table rows",
                    Json{{"max_prompt_tokens", budget.max_prompt_tokens}});
    }
    return data.text;
}

std::string build_zero_shot(const ZeroShotPromptFields& f, AnalysisTask task, std::string_view module_data) {
    require_fields(f.role, f.task);
    const auto& h = section_headers(PromptStyle::zero_shot);
    std::string out;
    out += section(h[0], f.role);
    out += section(h[1], task_with_directive(f.task, task));
    out += section(h[2], f.process);
    out += section(h[3], f.organization);
    out += section(h[4], f.sector);
    out += section(h[5], f.kpis);
    out += section(h[6], f.objective);
    out += section(h[7], f.considerations);
    out += section(h[8], f.deliverables);
    out += section(h[9], f.analysis_guidelines);
    out += section(h[10], f.additional_instructions);
    out += h[11] + ":\n";
    out += module_data;
    return out;
}

std::string build_optimized(const OptimizedPromptFields& f, AnalysisTask task, std::string_view module_data) {
    require_fields(f.role, f.task);
    const auto& h = section_headers(PromptStyle::optimized);
    std::string out;
    out += section(h[0], f.role);
    out += section(h[1], task_with_directive(f.task, task));
    out += section(h[2], f.process);
    out += section(h[3], f.organization);
    out += section(h[4], f.analysis_focus);
    out += section(h[5], f.deep_dive);
    out += section(h[6], f.recommendations);
    out += section(h[7], f.additional_considerations);
    out += h[8] + ":\n";
    out += module_data;
    return out;
}

std::string assemble_prompt(const ZeroShotPromptFields& fields, AnalysisTask task,
                            const std::map<EngineModule, ModuleOutputRecord>& outputs, const RenderBudget& budget) {
    using Shrink = void (*)(ZeroShotPromptFields&);
    const std::vector<Shrink> steps{
        [](ZeroShotPromptFields& f) { f.additional_instructions = std::string(kOmittedForLength); },
        [](ZeroShotPromptFields& f) { f.considerations = std::string(kOmittedForLength); },
    };
    return fit_prompt(fields, task, outputs, budget,
                      [](const ZeroShotPromptFields& f, AnalysisTask t, std::string_view d) {
                          return build_zero_shot(f, t, d);
                      },
                      steps);
}

std::string assemble_prompt(const OptimizedPromptFields& fields, AnalysisTask task,
                            const std::map<EngineModule, ModuleOutputRecord>& outputs, const RenderBudget& budget) {
    using Shrink = void (*)(OptimizedPromptFields&);
    const std::vector<Shrink> steps{
        [](OptimizedPromptFields& f) { f.additional_considerations = std::string(kOmittedForLength); },
    };
    return fit_prompt(fields, task, outputs, budget,
                      [](const OptimizedPromptFields& f, AnalysisTask t, std::string_view d) {
                          return build_optimized(f, t, d);
                      },
                      steps);
}

namespace {

struct ModuleWording {
    const char* task;
    const char* kpis;
    const char* focus;
    const char* deep_dive;
};

ModuleWording wording(EngineModule m) {
    switch (m) {
        case EngineModule::dashboard:
            return {"Review the Dashboard Module output, an overview of the process KPIs for the whole event log.",
                    "Total cases, total activities, total variants, total cases with rework, first event date, "
                    "last event date, observed time span and completed cases per day.",
                    "Process volume, variability and rework over the observed period.",
                    "Relate the number of variants and the rework count to the case volume, and comment on what the "
                    "time span and daily completions say about process load."};
        case EngineModule::discovery:
            return {"Review the Process Discovery Module output: the directly-follows graph, the process variants "
                    "and the discovered process model.",
                    "Activity frequencies, directly-follows edge frequencies and dependency scores, variants with "
                    "their case counts, start and end activities, and the discovered model.",
                    "The dominant control flow of the process and the variants that depart from it.",
                    "Compare the most frequent variant with the less frequent ones, look for loops and repeated "
                    "activities, and name the edges with weak or conflicting dependency scores."};
        case EngineModule::performance:
            return {"Review the Performance Mining Module output: case durations, waiting times between activities "
                    "and the ranked bottlenecks.",
                    "Case duration statistics, waiting time per directly-follows edge, ranked bottlenecks and "
                    "completed cases per week.",
                    "Where time is spent in the process and which transitions slow cases down.",
                    "Examine the top bottlenecks, the spread between median and mean durations, and whether slow "
                    "transitions are frequent or rare."};
        case EngineModule::conformance:
            return {"Review the Conformance Checking Module output: how well the recorded cases fit the reference "
                    "process model and where they deviate.",
                    "Log fitness, replay moves allowed and total, violating case count, and violations by kind and "
                    "by offending activity or edge.",
                    "Compliance of the observed behavior with the reference model.",
                    "Explain the most frequent deviations, whether they indicate model gaps or real non-compliance, "
                    "and how they affect fitness."};
        case EngineModule::orgmining:
            return {"Review the Organizational Mining Module output: handovers of work between resources and how "
                    "activities are distributed across them.",
                    "Workload per pseudonymized resource, handover counts between resources and resource-activity "
                    "counts.",
                    "How work is divided among resources and how it moves between them.",
                    "Identify overloaded resources, frequent handover chains and activities concentrated on a single "
                    "resource."};
    }
    return {"", "", "", ""};
}

}  // namespace

DefaultFields default_fields_for(const LogMetadata& metadata, EngineModule module, AnalysisTask task) {
    const ModuleWording w = wording(module);
    const std::string process = "The " + metadata.process_name + " process, as recorded in the event log.";
    const std::string organization = metadata.organization + ".";
    const std::string recommendations =
        task == AnalysisTask::recommendations
            ? "Give specific, prioritized improvement actions, each tied to the KPI values that motivate it and "
              "with its expected effect."
            : "Where the data points to a clear improvement opportunity, mention it briefly.";

    DefaultFields d;
    d.zero_shot.role = std::string(kDefaultRole);
    d.zero_shot.task = w.task;
    d.zero_shot.process = process;
    d.zero_shot.organization = organization;
    d.zero_shot.sector = metadata.sector + "; economic activity: " + metadata.economic_activity + ".";
    d.zero_shot.kpis = w.kpis;
    d.zero_shot.objective = "Explain what the KPIs reveal about how the process runs and where it can be improved.";
    d.zero_shot.considerations =
        "Base every statement on the module data below. The data is aggregated and resources are pseudonymized, "
        "so do not ask for individual case records.";
    d.zero_shot.deliverables =
        "A structured answer with short headed paragraphs and bullet points that cites the KPI values it uses.";
    d.zero_shot.analysis_guidelines =
        "Move from the overall picture to specific activities, edges or resources. State assumptions explicitly "
        "and keep the language accessible to non-specialists.";
    d.zero_shot.additional_instructions =
        "If values look inconsistent or incomplete, say so and suggest what additional data would resolve it.";

    d.optimized.role = std::string(kDefaultRole);
    d.optimized.task = w.task;
    d.optimized.process = process;
    d.optimized.organization = organization + " Sector: " + metadata.sector + ".";
    d.optimized.analysis_focus = w.focus;
    d.optimized.deep_dive = w.deep_dive;
    d.optimized.recommendations = recommendations;
    d.optimized.additional_considerations =
        "Resources are pseudonymized and only aggregated KPIs are provided. Flag any value that needs "
        "confirmation from the process owner.";
    return d;
}

}  // namespace pmchat
