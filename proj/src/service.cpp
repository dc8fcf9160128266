#include "pmchat/service.hpp"

#include <algorithm>
#include <cstdio>

namespace pmchat {

namespace fs = std::filesystem;

Json to_json(const Session& s) {
    Json history = Json::array();
    for (const auto& m : s.history) history.push_back(to_json(m));
    return Json{{"session_id", s.session_id},
                {"log_id", s.log_id},
                {"prompt_style", to_string(s.prompt_style)},
                {"created_at", format_timestamp(s.created_at)},
                {"analyses", s.analyses},
                {"history", history}};
}

Session session_from_json(const Json& j) {
    Session s;
    s.session_id = j.at("session_id").get<std::string>();
    s.log_id = j.at("log_id").get<std::string>();
    s.prompt_style = style_from_string(j.at("prompt_style").get<std::string>());
    s.created_at = parse_timestamp(j.at("created_at").get<std::string>()).value_or(Timestamp{});
    s.analyses = j.value("analyses", std::size_t{0});
    for (const auto& m : j.at("history")) s.history.push_back(message_from_json(m));
    return s;
}

namespace {

Json to_json(const NotAvailable& na) {
    return Json{{"kind", to_string(na.kind)}, {"last_error", na.last_error}, {"attempts", na.attempts}};
}

FailureKind failure_from_string(const std::string& s) {
    for (auto k : {FailureKind::timeout, FailureKind::rate_limit, FailureKind::server_error,
                   FailureKind::empty_content, FailureKind::bad_response, FailureKind::auth}) {
        if (to_string(k) == s) return k;
    }
    return FailureKind::server_error;
}

}  // namespace

Json to_json(const AnalysisResult& r) {
    Json j{{"session_id", r.session_id},
           {"index", r.index},
           {"module", to_string(r.module)},
           {"task", to_string(r.task)},
           {"prompt_text", r.prompt_text}};
    j["response"] = r.response ? Json(*r.response) : Json(nullptr);
    j["not_available"] = r.not_available ? to_json(*r.not_available) : Json(nullptr);
    j["latency_ms"] = r.latency.count();
    j["attempts"] = r.attempts;
    j["inputs"] = Json{{"module", to_string(r.inputs.module)},
                       {"output_version", r.inputs.output_version},
                       {"task", to_string(r.inputs.task)},
                       {"style", to_string(r.inputs.style)},
                       {"metadata", to_json(r.inputs.metadata)},
                       {"max_prompt_tokens", r.inputs.max_prompt_tokens}};
    return j;
}

AnalysisResult analysis_from_json(const Json& j) {
    AnalysisResult r;
    r.session_id = j.at("session_id").get<std::string>();
    r.index = j.at("index").get<std::size_t>();
    r.module = module_from_string(j.at("module").get<std::string>());
    r.task = task_from_string(j.at("task").get<std::string>());
    r.prompt_text = j.at("prompt_text").get<std::string>();
    if (j.at("response").is_string()) r.response = j["response"].get<std::string>();
    if (j.at("not_available").is_object()) {
        const auto& na = j["not_available"];
        r.not_available = NotAvailable{failure_from_string(na.at("kind").get<std::string>()),
                                       na.at("last_error").get<std::string>(), na.at("attempts").get<int>()};
    }
    r.latency = Millis{j.value("latency_ms", 0LL)};
    r.attempts = j.value("attempts", 0);
    const auto& in = j.at("inputs");
    r.inputs.module = module_from_string(in.at("module").get<std::string>());
    r.inputs.output_version = in.at("output_version").get<int>();
    r.inputs.task = task_from_string(in.at("task").get<std::string>());
    r.inputs.style = style_from_string(in.at("style").get<std::string>());
    r.inputs.metadata = metadata_from_json(in.at("metadata"));
    r.inputs.max_prompt_tokens = in.at("max_prompt_tokens").get<std::size_t>();
    return r;
}

std::vector<ChatMessage> window_history(const std::vector<ChatMessage>& messages, std::size_t budget_tokens) {
    auto tokens = [](const std::vector<ChatMessage>& ms) {
        std::size_t n = 0;
        for (const auto& m : ms) n += estimate_tokens(m.content);
        return n;
    };
    std::vector<ChatMessage> out = messages;
    const std::size_t first = !out.empty() && out.front().role == ChatRole::system ? 1 : 0;
    while (tokens(out) > budget_tokens && out.size() >= first + 3) {
        out.erase(out.begin() + static_cast<std::ptrdiff_t>(first), out.begin() + static_cast<std::ptrdiff_t>(first) + 2);
    }
    return out;
}

PmChatService::PmChatService(ServiceConfig config, std::shared_ptr<Transport> transport)
    : config_(std::move(config)),
      store_(config_.data_dir, config_.clock),
      ratings_(config_.data_dir),
      gateway_(std::move(transport)) {
    fs::create_directories(config_.data_dir / "sessions");
}

std::shared_ptr<std::mutex> PmChatService::lock_for(std::map<std::string, std::shared_ptr<std::mutex>>& locks,
                                                    const std::string& key) {
    std::lock_guard lock(locks_mutex_);
    auto& slot = locks[key];
    if (!slot) slot = std::make_shared<std::mutex>();
    return slot;
}

IngestResult PmChatService::ingest(std::string_view csv_text, const ColumnMapping& mapping,
                                   const LogMetadata& metadata) {
    auto parsed = parse_csv(csv_text, mapping, metadata);
    auto log_lock = lock_for(log_locks_, parsed.log.log_id);
    std::lock_guard guard(*log_lock);
    IngestResult r;
    r.log_id = parsed.log.log_id;
    r.is_new = store_.register_log(parsed.log, parsed.deny_entries);
    r.report = parsed.report;
    r.cases = parsed.log.cases.size();
    r.events = parsed.log.event_count();
    std::lock_guard deny_lock(deny_mutex_);
    deny_cache_.erase(r.log_id);
    return r;
}

AnalyzeResult PmChatService::analyze(const std::string& log_id, EngineModule module,
                                     const std::optional<ProcessModel>& reference_model) {
    auto log_lock = lock_for(log_locks_, log_id);
    std::lock_guard guard(*log_lock);
    const EventLog log = store_.load_log(log_id);
    EngineOptions options = config_.engine;
    if (reference_model) options.reference_model = reference_model;

    Json payload = compute_module_payload(log, module, options);
    if (auto latest = store_.load_output(log_id, module); latest && latest->payload == payload) {
        return AnalyzeResult{std::move(*latest), true};
    }
    ModuleOutputRecord record;
    record.log_id = log_id;
    record.module = module;
    record.payload = std::move(payload);
    store_.store_output(record);
    return AnalyzeResult{*store_.load_output(log_id, module), false};
}

ModuleOutputRecord PmChatService::ensure_output(const std::string& log_id, EngineModule module) {
    if (auto latest = store_.load_output(log_id, module)) return *latest;
    return analyze(log_id, module).record;
}

std::string PmChatService::prompt_for(const PromptInputs& inputs, const ModuleOutputRecord& record) const {
    const auto fields = default_fields_for(inputs.metadata, inputs.module, inputs.task);
    const std::map<EngineModule, ModuleOutputRecord> outputs{{inputs.module, record}};
    const RenderBudget budget{inputs.max_prompt_tokens};
    if (inputs.style == PromptStyle::zero_shot) return assemble_prompt(fields.zero_shot, inputs.task, outputs, budget);
    return assemble_prompt(fields.optimized, inputs.task, outputs, budget);
}

std::string PmChatService::build_prompt(const std::string& log_id, EngineModule module, PromptStyle style,
                                        AnalysisTask task) const {
    auto record = store_.load_output(log_id, module);
    if (!record) {
        throw Error(ErrorCode::precondition, std::string(to_string(module)) + " output missing",
                    Json{{"log_id", log_id}, {"module", to_string(module)}});
    }
    PromptInputs inputs{module, record->version, task, style, store_.load_metadata(log_id),
                        config_.prompt_budget.max_prompt_tokens};
    return prompt_for(inputs, *record);
}

std::string PmChatService::replay_prompt(const AnalysisResult& result) const {
    const auto session = get_session(result.session_id);
    auto record = store_.load_output(session.log_id, result.inputs.module, result.inputs.output_version);
    if (!record) throw Error(ErrorCode::not_found, "module output version used by the analysis is gone");
    return prompt_for(result.inputs, *record);
}

fs::path PmChatService::session_dir(const std::string& session_id) const {
    if (session_id.empty() || session_id.find_first_not_of("s0123456789") != std::string::npos) {
        throw Error(ErrorCode::not_found, "unknown session '" + session_id + "'");
    }
    return config_.data_dir / "sessions" / session_id;
}

void PmChatService::save_session(const Session& s) const {
    write_file_atomic(session_dir(s.session_id) / "session.json", to_json(s).dump(2) + "\n");
}

Session PmChatService::create_session(const std::string& log_id, PromptStyle style) {
    if (!store_.has_log(log_id)) {
        throw Error(ErrorCode::not_found, "unknown log '" + log_id + "'", Json{{"log_id", log_id}});
    }
    if (!store_.load_output(log_id, EngineModule::dashboard)) {
        throw Error(ErrorCode::precondition, "dashboard output missing",
                    Json{{"log_id", log_id}, {"missing_module", "dashboard"}});
    }
    std::lock_guard lock(session_create_mutex_);
    std::size_t n = 0;
    for (const auto& entry : fs::directory_iterator(config_.data_dir / "sessions")) {
        if (entry.is_directory()) ++n;
    }
    char id[32];
    std::snprintf(id, sizeof id, "s%06zu", n + 1);
    Session s{id, log_id, style, {}, config_.clock(), 0};
    save_session(s);
    return s;
}

Session PmChatService::get_session(const std::string& session_id) const {
    const auto path = session_dir(session_id) / "session.json";
    if (!fs::exists(path)) throw Error(ErrorCode::not_found, "unknown session '" + session_id + "'");
    return session_from_json(Json::parse(read_file(path)));
}

CompletionRequest PmChatService::request_for(const std::vector<ChatMessage>& messages) const {
    CompletionRequest req;
    req.messages = window_history(messages, config_.history_budget_tokens);
    req.model_name = config_.model_name;
    req.temperature = config_.temperature;
    req.max_output_tokens = config_.max_output_tokens;
    return req;
}

std::shared_ptr<const DenyIndex> PmChatService::deny_index(const std::string& log_id) const {
    std::lock_guard lock(deny_mutex_);
    auto& slot = deny_cache_[log_id];
    if (!slot) slot = std::make_shared<const DenyIndex>(store_.load_deny_index(log_id));
    return slot;
}

void PmChatService::guard_or_throw(const std::string& log_id, const CompletionRequest& request) const {
    const auto report = redaction_guard(request, *deny_index(log_id));
    if (!report.passed) {
        throw Error(ErrorCode::redaction, "message contains raw log values and was not sent", report.to_json());
    }
}

AnalysisResult PmChatService::run_analysis(const std::string& session_id, EngineModule module, AnalysisTask task) {
    auto session_lock = lock_for(session_locks_, session_id);
    std::lock_guard guard(*session_lock);
    Session session = get_session(session_id);

    auto record = store_.load_output(session.log_id, module);
    if (!record) {
        throw Error(ErrorCode::precondition, std::string(to_string(module)) + " output missing",
                    Json{{"log_id", session.log_id}, {"missing_module", to_string(module)}});
    }
    AnalysisResult result;
    result.session_id = session_id;
    result.index = session.analyses + 1;
    result.module = module;
    result.task = task;
    result.inputs = PromptInputs{module, record->version, task, session.prompt_style,
                                 store_.load_metadata(session.log_id), config_.prompt_budget.max_prompt_tokens};
    result.prompt_text = prompt_for(result.inputs, *record);

    std::vector<ChatMessage> turns = session.history;
    if (turns.empty()) turns.push_back(ChatMessage{ChatRole::system, std::string(kSystemPrompt)});
    turns.push_back(ChatMessage{ChatRole::user, result.prompt_text});
    const CompletionRequest request = request_for(turns);
    guard_or_throw(session.log_id, request);

    const auto outcome = gateway_.complete_with_retry(request, config_.retry);
    result.attempts = outcome.attempts;
    session.history = std::move(turns);
    if (outcome.ok()) {
        result.response = outcome.result().content;
        result.latency = outcome.result().latency;
        session.history.push_back(ChatMessage{ChatRole::assistant, outcome.result().content});
    } else {
        result.not_available = outcome.not_available();
    }
    session.analyses = result.index;

    char name[32];
    std::snprintf(name, sizeof name, "analysis-%04zu.json", result.index);
    write_file_atomic(session_dir(session_id) / "results" / name, to_json(result).dump(2) + "\n");
    save_session(session);

    if (result.not_available && config_.auto_rate_na) {
        RatingRecord na;
        na.source = session_id;
        na.module = std::string(to_string(module));
        na.prompt_style = session.prompt_style;
        na.category = RatingCategory::na;
        na.sector = result.inputs.metadata.sector;
        ratings_.record_rating(std::move(na));
    }
    return result;
}

FollowUpResult PmChatService::follow_up(const std::string& session_id, const std::string& user_text) {
    auto session_lock = lock_for(session_locks_, session_id);
    std::lock_guard guard(*session_lock);
    Session session = get_session(session_id);
    if (session.analyses == 0) {
        throw Error(ErrorCode::precondition, "session has no analysis yet; run one before asking follow-ups",
                    Json{{"session_id", session_id}});
    }
    if (user_text.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(ErrorCode::validation, "follow-up text is empty");
    }

    std::vector<ChatMessage> turns = session.history;
    turns.push_back(ChatMessage{ChatRole::user, user_text});
    const CompletionRequest request = request_for(turns);
    guard_or_throw(session.log_id, request);

    const auto outcome = gateway_.complete_with_retry(request, config_.retry);
    FollowUpResult out;
    session.history = std::move(turns);
    if (outcome.ok()) {
        ChatMessage reply{ChatRole::assistant, outcome.result().content};
        session.history.push_back(reply);
        out.reply = std::move(reply);
    } else {
        out.not_available = outcome.not_available();
    }
    save_session(session);
    return out;
}

std::vector<AnalysisResult> PmChatService::analyses(const std::string& session_id) const {
    get_session(session_id);
    std::vector<AnalysisResult> out;
    const auto dir = session_dir(session_id) / "results";
    if (!fs::exists(dir)) return out;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) out.push_back(analysis_from_json(Json::parse(read_file(f))));
    return out;
}

}  // namespace pmchat
