#include "pmchat/eventlog.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>

namespace pmchat {

namespace {

std::string trimmed(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return std::string(s);
}

void sort_cases(std::vector<Case>& cases) {
    std::sort(cases.begin(), cases.end(), [](const Case& a, const Case& b) { return a.case_id < b.case_id; });
    for (auto& c : cases) {
        std::stable_sort(c.events.begin(), c.events.end(),
                         [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
    }
}

std::vector<Case> group_by_case(std::vector<Event> events) {
    std::vector<Case> cases;
    std::unordered_map<std::string, std::size_t> index;
    for (auto& e : events) {
        auto [it, inserted] = index.try_emplace(e.case_id, cases.size());
        if (inserted) cases.push_back(Case{e.case_id, {}});
        cases[it->second].events.push_back(std::move(e));
    }
    return cases;
}

}  // namespace

Json to_json(const LogMetadata& m) {
    return Json{{"sector", m.sector},
                {"economic_activity", m.economic_activity},
                {"process_name", m.process_name},
                {"organization", m.organization}};
}

LogMetadata metadata_from_json(const Json& j) {
    LogMetadata m;
    auto field = [&](const char* key, std::string& out) {
        if (j.contains(key) && j[key].is_string() && !j[key].get<std::string>().empty()) {
            out = j[key].get<std::string>();
        }
    };
    field("sector", m.sector);
    field("economic_activity", m.economic_activity);
    field("process_name", m.process_name);
    field("process", m.process_name);
    field("organization", m.organization);
    return m;
}

std::size_t EventLog::event_count() const {
    std::size_t n = 0;
    for (const auto& c : cases) n += c.events.size();
    return n;
}

const Case* EventLog::find_case(std::string_view case_id) const {
    auto it = std::lower_bound(cases.begin(), cases.end(), case_id,
                               [](const Case& c, std::string_view id) { return c.case_id < id; });
    if (it == cases.end() || it->case_id != case_id) return nullptr;
    return &*it;
}

std::string_view to_string(DropReason reason) {
    switch (reason) {
        case DropReason::empty_field: return "empty-field";
        case DropReason::bad_timestamp: return "bad-timestamp";
        case DropReason::duplicate: return "duplicate";
    }
    return "unknown";
}

std::size_t CleaningReport::count(DropReason r) const {
    auto it = dropped.find(r);
    return it == dropped.end() ? 0 : it->second;
}

std::size_t CleaningReport::total_dropped() const {
    std::size_t n = 0;
    for (const auto& [_, c] : dropped) n += c;
    return n;
}

Json to_json(const CleaningReport& r) {
    Json dropped = Json::object();
    for (const auto& [reason, n] : r.dropped) dropped[std::string(to_string(reason))] = n;
    return Json{{"input_rows", r.input_rows}, {"surviving_events", r.surviving_events}, {"dropped", dropped}};
}

CleaningReport cleaning_report(const ParseTrace& before, const EventLog& after) {
    CleaningReport r;
    r.input_rows = before.input_rows;
    r.surviving_events = after.event_count();
    for (auto reason : {DropReason::empty_field, DropReason::bad_timestamp, DropReason::duplicate}) {
        r.dropped[reason] = 0;
    }
    for (const auto& issue : before.issues) ++r.dropped[issue.reason];
    return r;
}

std::vector<std::vector<std::string>> read_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    bool row_has_content = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        // A bare line terminator produces no row.
        if (row_has_content || row.size() > 1 || !row.front().empty()) rows.push_back(std::move(row));
        row.clear();
        row_has_content = false;
    };

    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (!field_started) {
                    in_quotes = true;
                    field_started = true;
                    row_has_content = true;
                } else {
                    field.push_back(ch);
                }
                break;
            case ',':
                end_field();
                row_has_content = true;
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
                end_row();
                break;
            case '\n':
                end_row();
                break;
            default:
                field.push_back(ch);
                field_started = true;
                break;
        }
    }
    if (in_quotes) throw Error(ErrorCode::schema, "unterminated quoted field");
    if (field_started || !row.empty() || !field.empty()) end_row();
    return rows;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

ParseOutcome parse_csv(std::string_view raw_text, const ColumnMapping& mapping, const LogMetadata& metadata) {
    const auto rows = read_csv(raw_text);
    if (rows.empty()) throw Error(ErrorCode::schema, "CSV has no header row");

    const auto& header = rows.front();
    auto column_of = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trimmed(header[i]) == name) return i;
        }
        throw Error(ErrorCode::schema, "mapped column '" + name + "' not found in header",
                    Json{{"column", name}, {"header", header}});
    };
    const std::size_t case_col = column_of(mapping.case_column);
    const std::size_t activity_col = column_of(mapping.activity_column);
    const std::size_t ts_col = column_of(mapping.timestamp_column);
    std::optional<std::size_t> resource_col;
    if (mapping.resource_column) resource_col = column_of(*mapping.resource_column);

    std::vector<std::size_t> attribute_cols;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i != case_col && i != activity_col && i != ts_col && (!resource_col || i != *resource_col)) {
            attribute_cols.push_back(i);
        }
    }

    ParseOutcome out;
    out.trace.input_rows = rows.size() - 1;
    std::set<std::tuple<std::string, std::string, Timestamp, std::string>> seen;
    std::vector<Event> events;
    std::set<std::string> raw_values;
    std::size_t bad_timestamps = 0;

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        auto cell = [&](std::size_t col) { return col < row.size() ? trimmed(row[col]) : std::string(); };

        Event e;
        e.case_id = cell(case_col);
        e.activity = cell(activity_col);
        const std::string ts_text = cell(ts_col);
        if (e.case_id.empty() || e.activity.empty() || ts_text.empty()) {
            out.trace.issues.push_back({r, DropReason::empty_field, "empty case, activity or timestamp"});
            continue;
        }
        const auto ts = parse_timestamp(ts_text);
        if (!ts) {
            ++bad_timestamps;
            out.trace.issues.push_back({r, DropReason::bad_timestamp, "unparseable timestamp '" + ts_text + "'"});
            continue;
        }
        e.timestamp = *ts;
        std::string resource = resource_col ? cell(*resource_col) : std::string();
        if (!resource.empty()) e.resource = resource;

        if (!seen.emplace(e.case_id, e.activity, e.timestamp, resource).second) {
            out.trace.issues.push_back({r, DropReason::duplicate, "duplicate of an earlier row"});
            continue;
        }
        for (std::size_t col : attribute_cols) {
            std::string value = cell(col);
            if (!value.empty()) raw_values.insert(value);
            e.attributes.emplace(trimmed(header[col]), std::move(value));
        }
        if (e.resource) raw_values.insert(*e.resource);
        raw_values.insert(e.case_id);
        events.push_back(std::move(e));
    }

    if (out.trace.input_rows > 0 && bad_timestamps * 2 > out.trace.input_rows) {
        throw Error(ErrorCode::validation,
                    "more than half of the rows have unparseable timestamps",
                    Json{{"bad_rows", bad_timestamps}, {"input_rows", out.trace.input_rows}});
    }
    if (events.empty()) throw Error(ErrorCode::empty_log, "no rows survived cleaning");

    EventLog log;
    log.cases = group_by_case(std::move(events));
    log.metadata = metadata;
    out.log = normalize(std::move(log));
    out.report = cleaning_report(out.trace, out.log);

    // Activity labels and pseudonyms are aggregate vocabulary and legitimately reach prompts.
    for (const auto& c : out.log.cases) {
        for (const auto& e : c.events) raw_values.erase(e.activity);
    }
    for (const auto& [_, pseudo] : out.log.pseudonyms) raw_values.erase(pseudo);
    out.deny_entries = std::move(raw_values);
    return out;
}

EventLog normalize(EventLog log) {
    // Merge any repeated case ids before sorting.
    {
        std::vector<Event> all;
        for (auto& c : log.cases) {
            for (auto& e : c.events) {
                e.case_id = c.case_id;
                all.push_back(std::move(e));
            }
        }
        log.cases = group_by_case(std::move(all));
    }
    sort_cases(log.cases);

    std::map<std::string, std::string> renamed;  // current value -> new pseudonym
    for (auto& c : log.cases) {
        for (auto& e : c.events) {
            if (!e.resource) continue;
            auto [it, inserted] = renamed.try_emplace(*e.resource, std::string());
            if (inserted) it->second = "r" + std::to_string(renamed.size());
            e.resource = it->second;
        }
    }

    std::map<std::string, std::string> table;
    if (log.pseudonyms.empty()) {
        table = renamed;
    } else {
        for (const auto& [raw, old] : log.pseudonyms) {
            auto it = renamed.find(old);
            if (it != renamed.end()) table[raw] = it->second;
        }
    }
    log.pseudonyms = std::move(table);
    log.log_id = compute_log_id(log);
    return log;
}

EventLog filter_log(const EventLog& log, const FilterCriteria& criteria) {
    if (criteria.from && criteria.to && *criteria.from > *criteria.to) {
        throw Error(ErrorCode::validation, "filter range start is after its end");
    }
    if (criteria.empty()) return log;

    EventLog out;
    out.metadata = log.metadata;
    out.pseudonyms = log.pseudonyms;
    for (const auto& c : log.cases) {
        if (criteria.case_ids && !criteria.case_ids->contains(c.case_id)) continue;
        Case kept{c.case_id, {}};
        for (const auto& e : c.events) {
            if (criteria.from && e.timestamp < *criteria.from) continue;
            if (criteria.to && e.timestamp > *criteria.to) continue;
            if (criteria.activities && !criteria.activities->contains(e.activity)) continue;
            kept.events.push_back(e);
        }
        if (!kept.events.empty()) out.cases.push_back(std::move(kept));
    }
    if (out.cases.empty()) throw Error(ErrorCode::empty_log, "filter removed every event");
    out.log_id = compute_log_id(out);
    return out;
}

std::string canonical_events_csv(const EventLog& log) {
    std::string out = "case_id,activity,timestamp,resource\n";
    for (const auto& c : log.cases) {
        for (const auto& e : c.events) {
            out += csv_escape(c.case_id);
            out += ',';
            out += csv_escape(e.activity);
            out += ',';
            out += format_timestamp(e.timestamp);
            out += ',';
            if (e.resource) out += csv_escape(*e.resource);
            out += '\n';
        }
    }
    return out;
}

std::string compute_log_id(const EventLog& log) {
    return sha256_hex(canonical_events_csv(log), 12);
}

EventLog load_canonical(std::string_view events_csv, const LogMetadata& metadata,
                        std::map<std::string, std::string> pseudonyms) {
    const auto rows = read_csv(events_csv);
    const std::vector<std::string> expected{"case_id", "activity", "timestamp", "resource"};
    if (rows.empty() || rows.front() != expected) {
        throw Error(ErrorCode::schema, "not a canonical events.csv");
    }
    std::vector<Event> events;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != 4) throw Error(ErrorCode::schema, "canonical row " + std::to_string(r) + " is malformed");
        auto ts = parse_timestamp(row[2]);
        if (!ts) throw Error(ErrorCode::schema, "canonical row " + std::to_string(r) + " has a bad timestamp");
        Event e{row[0], row[1], *ts, std::nullopt, {}};
        if (!row[3].empty()) e.resource = row[3];
        events.push_back(std::move(e));
    }
    if (events.empty()) throw Error(ErrorCode::empty_log, "canonical log has no events");
    EventLog log;
    log.cases = group_by_case(std::move(events));
    sort_cases(log.cases);
    log.metadata = metadata;
    log.pseudonyms = std::move(pseudonyms);
    log.log_id = compute_log_id(log);
    return log;
}

}  // namespace pmchat
