#include "pmchat/dashboard.hpp"

#include <algorithm>
#include <set>

#include "pmchat/conformance.hpp"
#include "pmchat/orgmining.hpp"
#include "pmchat/performance.hpp"

namespace pmchat {

namespace fs = std::filesystem;

StructuralStats structural_stats(const EventLog& log) {
    StructuralStats s;
    std::set<std::string> activities;
    std::set<std::vector<std::string>> variants;
    for (const auto& c : log.cases) {
        std::vector<std::string> seq;
        std::set<std::string> seen;
        bool rework = false;
        for (const auto& e : c.events) {
            seq.push_back(e.activity);
            activities.insert(e.activity);
            rework |= !seen.insert(e.activity).second;
        }
        variants.insert(std::move(seq));
        if (rework) ++s.total_cases_with_rework;
    }
    s.total_cases = log.cases.size();
    s.total_activities = activities.size();
    s.total_variants = variants.size();
    return s;
}

TemporalStats temporal_stats(const EventLog& log) {
    TemporalStats t;
    bool first = true;
    for (const auto& c : log.cases) {
        for (const auto& e : c.events) {
            if (first || e.timestamp < t.first_event_date) t.first_event_date = e.timestamp;
            if (first || e.timestamp > t.last_event_date) t.last_event_date = e.timestamp;
            first = false;
        }
    }
    t.span = t.last_event_date - t.first_event_date;
    return t;
}

Json to_json(const StructuralStats& s) {
    return Json{{"total_cases", s.total_cases},
                {"total_activities", s.total_activities},
                {"total_variants", s.total_variants},
                {"total_cases_with_rework", s.total_cases_with_rework}};
}

Json to_json(const TemporalStats& t) {
    return Json{{"first_event_date", format_timestamp(t.first_event_date)},
                {"last_event_date", format_timestamp(t.last_event_date)},
                {"span_seconds", floor_seconds(t.span)}};
}

std::string_view to_string(EngineModule m) {
    switch (m) {
        case EngineModule::dashboard: return "dashboard";
        case EngineModule::discovery: return "discovery";
        case EngineModule::performance: return "performance";
        case EngineModule::conformance: return "conformance";
        case EngineModule::orgmining: return "orgmining";
    }
    return "dashboard";
}

EngineModule module_from_string(std::string_view s) {
    for (auto m : kAllModules) {
        if (to_string(m) == s) return m;
    }
    throw Error(ErrorCode::validation, "unknown module '" + std::string(s) + "'",
                Json{{"allowed", {"dashboard", "discovery", "performance", "conformance", "orgmining"}}});
}

Json compute_module_payload(const EventLog& log, EngineModule module, const EngineOptions& options) {
    const Json thresholds{{"dependency", options.thresholds.dependency}, {"frequency", options.thresholds.frequency}};
    switch (module) {
        case EngineModule::dashboard:
            return Json{{"structural", to_json(structural_stats(log))},
                        {"temporal", to_json(temporal_stats(log))},
                        {"throughput_daily", to_json(throughput(log, Bucket::day))}};
        case EngineModule::discovery: {
            const auto dfg = build_dfg(log);
            Json variants = Json::array();
            for (const auto& v : extract_variants(log)) variants.push_back(to_json(v));
            return Json{{"thresholds", thresholds},
                        {"dfg", to_json(dfg)},
                        {"variants", variants},
                        {"model", to_json(discover_model(dfg, options.thresholds.dependency,
                                                         options.thresholds.frequency))}};
        }
        case EngineModule::performance: {
            Json j = to_json(performance_report(log, options.bottleneck_top_k, options.bottleneck_min_frequency));
            j["throughput_weekly"] = to_json(throughput(log, Bucket::week));
            return j;
        }
        case EngineModule::conformance: {
            const bool user_model = options.reference_model.has_value();
            const ProcessModel model = user_model ? *options.reference_model
                                                  : discover_model(log, options.thresholds.dependency,
                                                                   options.thresholds.frequency);
            const auto report = check_conformance(model, log);
            return Json{{"model_source", user_model ? "user" : "discovered"},
                        {"thresholds", thresholds},
                        {"model", to_json(model)},
                        {"report", to_json(report)},
                        {"summary", to_json(conformance_summary(report, options.conformance_top_n))}};
        }
        case EngineModule::orgmining: {
            Json workload = Json::array();
            for (const auto& [r, n] : workload_stats(log)) workload.push_back(Json{{"resource", r}, {"events", n}});
            return Json{{"handover", to_json(handover_network(log))},
                        {"resource_activity", to_json(resource_activity_matrix(log))},
                        {"workload", workload}};
        }
    }
    throw Error(ErrorCode::internal, "unhandled module");
}

Json to_json(const ModuleOutputRecord& r) {
    return Json{{"log_id", r.log_id},
                {"module", to_string(r.module)},
                {"schema_version", r.schema_version},
                {"version", r.version},
                {"created_at", format_timestamp(r.created_at)},
                {"payload", r.payload}};
}

ModuleOutputRecord record_from_json(const Json& j) {
    try {
        ModuleOutputRecord r;
        r.log_id = j.at("log_id").get<std::string>();
        r.module = module_from_string(j.at("module").get<std::string>());
        r.schema_version = j.at("schema_version").get<int>();
        if (r.schema_version > kSchemaVersion) {
            throw Error(ErrorCode::validation,
                        "stored record has schema_version " + std::to_string(r.schema_version) +
                            ", this build reads up to " + std::to_string(kSchemaVersion));
        }
        r.version = j.value("version", 0);
        auto ts = parse_timestamp(j.at("created_at").get<std::string>());
        if (!ts) throw Error(ErrorCode::validation, "record created_at is not a timestamp");
        r.created_at = *ts;
        r.payload = j.at("payload");
        return r;
    } catch (const Json::exception& ex) {
        throw Error(ErrorCode::validation, std::string("malformed output record: ") + ex.what());
    }
}

void validate_payload(EngineModule module, const Json& payload, int schema_version) {
    if (schema_version < 1 || schema_version > kSchemaVersion) {
        throw Error(ErrorCode::validation, "unsupported schema_version " + std::to_string(schema_version));
    }
    if (!payload.is_object()) throw Error(ErrorCode::validation, "payload must be a JSON object");
    std::vector<const char*> required;
    switch (module) {
        case EngineModule::dashboard: required = {"structural", "temporal"}; break;
        case EngineModule::discovery: required = {"dfg", "variants", "model"}; break;
        case EngineModule::performance: required = {"case_duration", "edge_waiting", "bottlenecks"}; break;
        case EngineModule::conformance: required = {"model", "report", "summary"}; break;
        case EngineModule::orgmining: required = {"handover", "resource_activity", "workload"}; break;
    }
    for (const char* key : required) {
        if (!payload.contains(key)) {
            throw Error(ErrorCode::validation,
                        std::string(to_string(module)) + " payload is missing '" + key + "'",
                        Json{{"module", to_string(module)}, {"missing", key}});
        }
    }
}

KpiStore::KpiStore(fs::path data_dir, Clock clock) : data_dir_(std::move(data_dir)), clock_(std::move(clock)) {
    fs::create_directories(data_dir_ / "logs");
}

fs::path KpiStore::log_dir(const std::string& log_id) const {
    if (log_id.empty() || log_id.find_first_not_of("0123456789abcdef") != std::string::npos) {
        throw Error(ErrorCode::not_found, "unknown log '" + log_id + "'");
    }
    return data_dir_ / "logs" / log_id;
}

bool KpiStore::register_log(const EventLog& log, const std::set<std::string>& deny_entries) {
    std::lock_guard lock(write_mutex_);
    const auto dir = log_dir(log.log_id);
    const bool is_new = !fs::exists(dir / "events.csv");
    if (is_new) write_file_atomic(dir / "events.csv", canonical_events_csv(log));
    write_file_atomic(dir / "metadata.json", to_json(log.metadata).dump(2) + "\n");

    Json pseudonyms = Json::object();
    for (const auto& [raw, p] : log.pseudonyms) pseudonyms[raw] = p;
    write_file_atomic(dir / "pseudonyms.json", pseudonyms.dump(2) + "\n");

    std::set<std::string> deny = deny_entries;
    if (!is_new && fs::exists(dir / "deny_index.json")) {
        for (auto& e : Json::parse(read_file(dir / "deny_index.json"))) deny.insert(e.get<std::string>());
    }
    write_file_atomic(dir / "deny_index.json", Json(deny).dump(2) + "\n");
    return is_new;
}

bool KpiStore::has_log(const std::string& log_id) const {
    if (log_id.empty() || log_id.find_first_not_of("0123456789abcdef") != std::string::npos) return false;
    return fs::exists(data_dir_ / "logs" / log_id / "events.csv");
}

std::vector<std::string> KpiStore::list_logs() const {
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(data_dir_ / "logs")) {
        if (fs::exists(entry.path() / "events.csv")) ids.push_back(entry.path().filename().string());
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

void KpiStore::require_log(const std::string& log_id) const {
    if (!has_log(log_id)) throw Error(ErrorCode::not_found, "unknown log '" + log_id + "'", Json{{"log_id", log_id}});
}

LogMetadata KpiStore::load_metadata(const std::string& log_id) const {
    require_log(log_id);
    return metadata_from_json(Json::parse(read_file(log_dir(log_id) / "metadata.json")));
}

EventLog KpiStore::load_log(const std::string& log_id) const {
    require_log(log_id);
    const auto dir = log_dir(log_id);
    std::map<std::string, std::string> pseudonyms;
    if (fs::exists(dir / "pseudonyms.json")) {
        const Json stored = Json::parse(read_file(dir / "pseudonyms.json"));
        for (const auto& [raw, p] : stored.items()) {
            pseudonyms[raw] = p.get<std::string>();
        }
    }
    return load_canonical(read_file(dir / "events.csv"), load_metadata(log_id), std::move(pseudonyms));
}

std::set<std::string> KpiStore::load_deny_index(const std::string& log_id) const {
    require_log(log_id);
    const auto path = log_dir(log_id) / "deny_index.json";
    if (!fs::exists(path)) return {};
    return Json::parse(read_file(path)).get<std::set<std::string>>();
}

Json KpiStore::read_index(const std::string& log_id) const {
    const auto path = log_dir(log_id) / "outputs" / "index.json";
    if (!fs::exists(path)) return Json::object();
    return Json::parse(read_file(path));
}

std::string KpiStore::store_output(ModuleOutputRecord record) {
    require_log(record.log_id);
    validate_payload(record.module, record.payload, record.schema_version);

    std::lock_guard lock(write_mutex_);
    Json index = read_index(record.log_id);
    const std::string name(to_string(record.module));
    Json& entry = index[name];
    if (!entry.is_object()) entry = Json{{"latest", 0}, {"versions", Json::array()}};
    record.version = entry["latest"].get<int>() + 1;
    record.created_at = clock_();

    const auto dir = log_dir(record.log_id) / "outputs";
    const std::string file = name + ".v" + std::to_string(record.version) + ".json";
    write_file_atomic(dir / file, to_json(record).dump(2) + "\n");

    entry["latest"] = record.version;
    entry["versions"].push_back(
        Json{{"version", record.version}, {"file", file}, {"created_at", format_timestamp(record.created_at)}});
    write_file_atomic(dir / "index.json", index.dump(2) + "\n");
    return record.log_id + "/" + name + "/v" + std::to_string(record.version);
}

std::optional<ModuleOutputRecord> KpiStore::load_output(const std::string& log_id, EngineModule module,
                                                        std::optional<int> version) const {
    require_log(log_id);
    const Json index = read_index(log_id);
    const std::string name(to_string(module));
    if (!index.contains(name)) return std::nullopt;
    const int v = version.value_or(index[name]["latest"].get<int>());
    const auto path = log_dir(log_id) / "outputs" / (name + ".v" + std::to_string(v) + ".json");
    if (!fs::exists(path)) return std::nullopt;
    return record_from_json(Json::parse(read_file(path)));
}

std::map<EngineModule, ModuleOutputRecord> KpiStore::load_outputs(
    const std::string& log_id, const std::optional<std::set<EngineModule>>& modules) const {
    require_log(log_id);
    std::map<EngineModule, ModuleOutputRecord> out;
    for (auto m : kAllModules) {
        if (modules && !modules->contains(m)) continue;
        if (auto rec = load_output(log_id, m)) out.emplace(m, std::move(*rec));
    }
    return out;
}

std::vector<int> KpiStore::history(const std::string& log_id, EngineModule module) const {
    require_log(log_id);
    const Json index = read_index(log_id);
    std::vector<int> versions;
    const std::string name(to_string(module));
    if (index.contains(name)) {
        for (const auto& v : index[name]["versions"]) versions.push_back(v["version"].get<int>());
    }
    return versions;
}

}  // namespace pmchat
