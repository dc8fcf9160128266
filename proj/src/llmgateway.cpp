#include "pmchat/llmgateway.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <thread>

#include "pmchat/promptengine.hpp"

namespace pmchat {

std::string_view to_string(ChatRole r) {
    switch (r) {
        case ChatRole::system: return "system";
        case ChatRole::user: return "user";
        case ChatRole::assistant: return "assistant";
    }
    return "user";
}

ChatRole role_from_string(std::string_view s) {
    if (s == "system") return ChatRole::system;
    if (s == "user") return ChatRole::user;
    if (s == "assistant") return ChatRole::assistant;
    throw Error(ErrorCode::validation, "unknown chat role '" + std::string(s) + "'");
}

Json to_json(const ChatMessage& m) { return Json{{"role", to_string(m.role)}, {"content", m.content}}; }

ChatMessage message_from_json(const Json& j) {
    return ChatMessage{role_from_string(j.at("role").get<std::string>()), j.at("content").get<std::string>()};
}

Millis RetryPolicy::delay_after(int attempt) const {
    const double scale = std::pow(backoff_factor, attempt - 1);
    return Millis{static_cast<Millis::rep>(std::llround(static_cast<double>(base_delay.count()) * scale))};
}

std::string_view to_string(FailureKind k) {
    switch (k) {
        case FailureKind::timeout: return "timeout";
        case FailureKind::rate_limit: return "rate_limit";
        case FailureKind::server_error: return "server_error";
        case FailureKind::empty_content: return "empty_content";
        case FailureKind::bad_response: return "bad_response";
        case FailureKind::auth: return "auth";
    }
    return "server_error";
}

bool is_retryable(FailureKind k) { return k != FailureKind::auth; }

Json encode_request(const CompletionRequest& request) {
    Json messages = Json::array();
    for (const auto& m : request.messages) messages.push_back(to_json(m));
    return Json{{"model", request.model_name},
                {"messages", messages},
                {"temperature", request.temperature},
                {"max_tokens", request.max_output_tokens}};
}

CompletionRequest decode_request(const Json& body) {
    CompletionRequest r;
    r.model_name = body.value("model", r.model_name);
    r.temperature = body.value("temperature", r.temperature);
    r.max_output_tokens = body.value("max_tokens", r.max_output_tokens);
    for (const auto& m : body.at("messages")) r.messages.push_back(message_from_json(m));
    return r;
}

Json encode_response(const std::string& model, const std::string& content, FinishReason finish) {
    return Json{{"model", model},
                {"choices",
                 Json::array({Json{{"index", 0},
                                   {"message", Json{{"role", "assistant"}, {"content", content}}},
                                   {"finish_reason", finish == FinishReason::truncated ? "length" : "stop"}}})}};
}

void validate_request(const CompletionRequest& request) {
    if (request.messages.empty()) throw Error(ErrorCode::validation, "completion request has no messages");
    bool has_user = false;
    for (std::size_t i = 0; i < request.messages.size(); ++i) {
        const auto& m = request.messages[i];
        if (m.role == ChatRole::system && i != 0) {
            throw Error(ErrorCode::validation, "only the first message may be a system message");
        }
        if (m.role != ChatRole::system && m.content.empty()) {
            throw Error(ErrorCode::validation, "user and assistant messages must have content");
        }
        has_user |= m.role == ChatRole::user;
    }
    if (!has_user) throw Error(ErrorCode::validation, "completion request has no user message");
    if (!(request.temperature >= 0.0 && request.temperature <= 2.0)) {
        throw Error(ErrorCode::validation, "temperature must lie in [0, 2]");
    }
    if (request.max_output_tokens == 0) throw Error(ErrorCode::validation, "max_output_tokens must be positive");
}

std::string MockTransport::reply_for(const CompletionRequest& request, const std::string& body) {
    std::string last_user;
    for (const auto& m : request.messages) {
        if (m.role == ChatRole::user) last_user = m.content;
    }
    const auto headers = scan_headers(last_user);
    std::string sections;
    for (const auto& h : headers) sections += (sections.empty() ? "" : ", ") + h;
    if (sections.empty()) sections = "none (follow-up question)";
    return "Mock analysis response. Messages received: " + std::to_string(request.messages.size()) +
           ". Prompt sections: " + sections + ". Last user turn length: " + std::to_string(last_user.size()) +
           " characters. Request digest: " + std::to_string(fnv1a64(body)) + ".";
}

TransportResponse MockTransport::post(const std::string& body) {
    FailureKind fault{};
    bool failing = false;
    {
        std::lock_guard lock(mutex_);
        bodies_.push_back(body);
        if (fail_forever_ || fail_remaining_ > 0) {
            failing = true;
            fault = fail_kind_;
            if (fail_remaining_ > 0) --fail_remaining_;
        }
    }
    CompletionRequest request;
    Json parsed;
    try {
        parsed = Json::parse(body);
        request = decode_request(parsed);
    } catch (const std::exception& ex) {
        return {400, Json{{"error", {{"message", ex.what()}}}}.dump()};
    }
    if (failing) {
        switch (fault) {
            case FailureKind::timeout: throw ProviderError(FailureKind::timeout, "mock transport timed out");
            case FailureKind::rate_limit: return {429, R"({"error":{"message":"rate limited"}})"};
            case FailureKind::auth: return {401, R"({"error":{"message":"invalid api key"}})"};
            case FailureKind::empty_content:
                return {200, encode_response(request.model_name, "", FinishReason::complete).dump()};
            case FailureKind::bad_response: return {200, "not json"};
            case FailureKind::server_error: return {500, R"({"error":{"message":"internal error"}})"};
        }
    }
    return {200, encode_response(request.model_name, reply_for(request, body), FinishReason::complete).dump()};
}

void MockTransport::fail_next(int count, FailureKind kind) {
    std::lock_guard lock(mutex_);
    fail_remaining_ = count;
    fail_forever_ = false;
    fail_kind_ = kind;
}

void MockTransport::fail_always(FailureKind kind) {
    std::lock_guard lock(mutex_);
    fail_forever_ = true;
    fail_kind_ = kind;
}

void MockTransport::clear_faults() {
    std::lock_guard lock(mutex_);
    fail_forever_ = false;
    fail_remaining_ = 0;
}

std::vector<std::string> MockTransport::recorded() const {
    std::lock_guard lock(mutex_);
    return bodies_;
}

std::size_t MockTransport::call_count() const {
    std::lock_guard lock(mutex_);
    return bodies_.size();
}

ProviderConfig ProviderConfig::from_env() {
    ProviderConfig c;
    auto env = [](const char* name, std::string& out) {
        if (const char* v = std::getenv(name); v != nullptr && *v != '\0') out = v;
    };
    env("PMCHAT_PROVIDER", c.provider);
    env("PMCHAT_LLM_BASE_URL", c.base_url);
    env("PMCHAT_LLM_MODEL", c.model);
    env("PMCHAT_LLM_API_KEY", c.api_key);
    if (c.provider != "mock" && c.provider != "remote") {
        throw Error(ErrorCode::validation, "PMCHAT_PROVIDER must be 'mock' or 'remote'");
    }
    return c;
}

HttpTransport::HttpTransport(ProviderConfig config) : config_(std::move(config)) {
    const auto scheme_end = config_.base_url.find("://");
    if (scheme_end == std::string::npos) throw Error(ErrorCode::validation, "base URL needs a scheme");
    const auto path_start = config_.base_url.find('/', scheme_end + 3);
    origin_ = config_.base_url.substr(0, path_start);
    path_ = path_start == std::string::npos ? std::string() : config_.base_url.substr(path_start);
    while (!path_.empty() && path_.back() == '/') path_.pop_back();
    path_ += "/chat/completions";
}

TransportResponse HttpTransport::post(const std::string& body) {
    httplib::Client client(origin_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout).count();
    client.set_connection_timeout(static_cast<time_t>(std::min<long long>(secs, 30)), 0);
    client.set_read_timeout(static_cast<time_t>(secs), 0);
    client.set_write_timeout(static_cast<time_t>(secs), 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
        const auto err = res.error();
        if (err == httplib::Error::Read || err == httplib::Error::Write || err == httplib::Error::ConnectionTimeout) {
            throw ProviderError(FailureKind::timeout, "provider request timed out (" + httplib::to_string(err) + ")");
        }
        throw ProviderError(FailureKind::server_error, "provider unreachable (" + httplib::to_string(err) + ")");
    }
    return {res->status, res->body};
}

std::shared_ptr<Transport> make_transport(const ProviderConfig& config) {
    if (config.provider == "remote") return std::make_shared<HttpTransport>(config);
    return std::make_shared<MockTransport>();
}

LlmGateway::LlmGateway(std::shared_ptr<Transport> transport, std::size_t max_concurrency, Sleeper sleeper)
    : transport_(std::move(transport)),
      slots_(static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(max_concurrency, 1, 1024))),
      sleeper_(std::move(sleeper)) {
    if (!sleeper_) sleeper_ = [](Millis d) { std::this_thread::sleep_for(d); };
}

CompletionResult LlmGateway::complete(const CompletionRequest& request) {
    validate_request(request);
    const std::string body = encode_request(request).dump();

    slots_.acquire();
    struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
    } release{slots_};

    const auto started = std::chrono::steady_clock::now();
    TransportResponse response = transport_->post(body);
    const auto latency = std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now() - started);

    if (response.status == 401 || response.status == 403) {
        throw ProviderError(FailureKind::auth, "provider rejected the credentials (HTTP " +
                                                   std::to_string(response.status) + ")");
    }
    if (response.status == 429) throw ProviderError(FailureKind::rate_limit, "provider rate limit (HTTP 429)");
    if (response.status == 408) throw ProviderError(FailureKind::timeout, "provider timeout (HTTP 408)");
    if (response.status < 200 || response.status >= 300) {
        throw ProviderError(FailureKind::server_error, "provider error (HTTP " + std::to_string(response.status) + ")");
    }

    CompletionResult result;
    try {
        const Json j = Json::parse(response.body);
        const Json& choice = j.at("choices").at(0);
        const Json& content = choice.at("message").at("content");
        result.content = content.is_string() ? content.get<std::string>() : std::string();
        result.finish_reason =
            choice.value("finish_reason", std::string("stop")) == "length" ? FinishReason::truncated
                                                                            : FinishReason::complete;
    } catch (const Json::exception& ex) {
        throw ProviderError(FailureKind::bad_response, std::string("unreadable provider response: ") + ex.what());
    }
    if (result.content.empty()) throw ProviderError(FailureKind::empty_content, "provider returned empty content");
    result.latency = latency;
    result.provider = transport_->name();
    return result;
}

RetryOutcome LlmGateway::complete_with_retry(const CompletionRequest& request, const RetryPolicy& policy) {
    if (policy.max_attempts < 1) throw Error(ErrorCode::validation, "retry policy needs at least one attempt");
    validate_request(request);

    RetryOutcome outcome{NotAvailable{}, 0, {}};
    NotAvailable last;
    for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
        outcome.attempts = attempt;
        try {
            outcome.value = complete(request);
            return outcome;
        } catch (const ProviderError& ex) {
            last = NotAvailable{ex.kind(), ex.what(), attempt};
            if (!ex.retryable()) break;
        } catch (const Error&) {
            throw;
        } catch (const std::exception& ex) {
            last = NotAvailable{FailureKind::server_error, ex.what(), attempt};
        }
        if (attempt < policy.max_attempts) {
            const Millis d = policy.delay_after(attempt);
            outcome.delays.push_back(d);
            sleeper_(d);
        }
    }
    outcome.value = last;
    return outcome;
}

DenyIndex::DenyIndex(const std::set<std::string>& entries) {
    nodes_.emplace_back();
    for (const auto& e : entries) {
        if (e.empty()) continue;
        int cur = 0;
        for (unsigned char ch : e) {
            auto it = nodes_[cur].next.find(ch);
            if (it == nodes_[cur].next.end()) {
                nodes_.emplace_back();
                const int created = static_cast<int>(nodes_.size()) - 1;
                nodes_[cur].next.emplace(ch, created);
                cur = created;
            } else {
                cur = it->second;
            }
        }
        nodes_[cur].entry = static_cast<int>(entries_.size());
        entries_.push_back(e);
    }

    std::queue<int> bfs;
    for (const auto& [_, child] : nodes_[0].next) bfs.push(child);
    while (!bfs.empty()) {
        const int u = bfs.front();
        bfs.pop();
        for (const auto& [ch, v] : nodes_[u].next) {
            int f = nodes_[u].fail;
            while (f != 0 && !nodes_[f].next.contains(ch)) f = nodes_[f].fail;
            auto it = nodes_[f].next.find(ch);
            nodes_[v].fail = (it != nodes_[f].next.end() && it->second != v) ? it->second : 0;
            const int fv = nodes_[v].fail;
            nodes_[v].output_link = nodes_[fv].entry >= 0 ? fv : nodes_[fv].output_link;
            bfs.push(v);
        }
    }
}

std::vector<std::string> DenyIndex::find_in(std::string_view text) const {
    if (entries_.empty()) return {};
    std::set<int> hits;
    int state = 0;
    for (unsigned char ch : text) {
        while (state != 0 && !nodes_[state].next.contains(ch)) state = nodes_[state].fail;
        if (auto it = nodes_[state].next.find(ch); it != nodes_[state].next.end()) state = it->second;
        for (int n = nodes_[state].entry >= 0 ? state : nodes_[state].output_link; n > 0; n = nodes_[n].output_link) {
            hits.insert(nodes_[n].entry);
        }
    }
    std::vector<std::string> out;
    for (int h : hits) out.push_back(entries_[h]);
    std::sort(out.begin(), out.end());
    return out;
}

std::string mask_value(std::string_view value) {
    if (value.empty()) return {};
    return std::string(1, value.front()) + std::string(value.size() - 1, '*');
}

Json RedactionReport::to_json() const {
    Json masked = Json::array();
    for (const auto& m : matches) masked.push_back(mask_value(m));
    return Json{{"passed", passed}, {"match_count", matches.size()}, {"matches", masked}};
}

RedactionReport redaction_guard(const CompletionRequest& request, const DenyIndex& deny_index) {
    std::set<std::string> found;
    for (const auto& m : request.messages) {
        for (auto& hit : deny_index.find_in(m.content)) found.insert(std::move(hit));
    }
    RedactionReport report;
    report.matches.assign(found.begin(), found.end());
    report.passed = report.matches.empty();
    return report;
}

}  // namespace pmchat
