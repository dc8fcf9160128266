#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pmchat/common.hpp"

namespace pmchat {

enum class ChatRole { system, user, assistant };

std::string_view to_string(ChatRole r);
ChatRole role_from_string(std::string_view s);

struct ChatMessage {
    ChatRole role = ChatRole::user;
    std::string content;

    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

Json to_json(const ChatMessage& m);
ChatMessage message_from_json(const Json& j);

struct CompletionRequest {
    std::vector<ChatMessage> messages;
    std::string model_name = "mock-analyst";
    double temperature = 0.2;
    std::size_t max_output_tokens = 1024;
};

enum class FinishReason { complete, truncated };

struct CompletionResult {
    std::string content;
    FinishReason finish_reason = FinishReason::complete;
    Millis latency{0};
    std::string provider;
};

struct RetryPolicy {
    int max_attempts = 3;
    Millis base_delay{1000};
    double backoff_factor = 2.0;

    /// Delay requested before attempt `attempt + 1`, for attempt >= 1.
    Millis delay_after(int attempt) const;
};

enum class FailureKind { timeout, rate_limit, server_error, empty_content, bad_response, auth };

std::string_view to_string(FailureKind k);

/// Transient kinds are retried; auth failures are fatal.
bool is_retryable(FailureKind k);

class ProviderError : public std::runtime_error {
public:
    ProviderError(FailureKind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    FailureKind kind() const noexcept { return kind_; }
    bool retryable() const noexcept { return is_retryable(kind_); }

private:
    FailureKind kind_;
};

/// Exhausted retries or a fatal provider failure. Maps to the NA rating category.
struct NotAvailable {
    FailureKind kind = FailureKind::server_error;
    std::string last_error;
    int attempts = 0;
};

struct RetryOutcome {
    std::variant<CompletionResult, NotAvailable> value;
    int attempts = 0;
    std::vector<Millis> delays;

    bool ok() const { return std::holds_alternative<CompletionResult>(value); }
    const CompletionResult& result() const { return std::get<CompletionResult>(value); }
    const NotAvailable& not_available() const { return std::get<NotAvailable>(value); }
};

// Wire format: OpenAI-style chat completions.
//   request  {"model", "messages": [{"role", "content"}], "temperature", "max_tokens"}
//   response {"model", "choices": [{"index", "message": {"role", "content"}, "finish_reason"}]}
// finish_reason "length" maps to truncated, anything else to complete.
Json encode_request(const CompletionRequest& request);
CompletionRequest decode_request(const Json& body);
Json encode_response(const std::string& model, const std::string& content, FinishReason finish);

struct TransportResponse {
    int status = 200;
    std::string body;
};

/// Moves one serialized request body to a provider. Throws ProviderError(timeout) on timeouts.
class Transport {
public:
    virtual ~Transport() = default;
    virtual TransportResponse post(const std::string& body) = 0;
    virtual std::string name() const = 0;
};

/// Offline provider. Answers with a fixed template naming the prompt's section
/// headers and a decimal digest of the request body, records every outbound body,
/// and can be scripted to fail.
class MockTransport : public Transport {
public:
    TransportResponse post(const std::string& body) override;
    std::string name() const override { return "mock"; }

    void fail_next(int count, FailureKind kind);
    void fail_always(FailureKind kind);
    void clear_faults();

    std::vector<std::string> recorded() const;
    std::size_t call_count() const;

    /// The deterministic reply text for a request.
    static std::string reply_for(const CompletionRequest& request, const std::string& body);

private:
    mutable std::mutex mutex_;
    std::vector<std::string> bodies_;
    int fail_remaining_ = 0;
    bool fail_forever_ = false;
    FailureKind fail_kind_ = FailureKind::server_error;
};

struct ProviderConfig {
    std::string provider = "mock";  ///< "mock" or "remote"
    std::string base_url = "https://api.openai.com/v1";
    std::string model = "mock-analyst";
    std::string api_key;
    Millis timeout{60000};
    std::size_t max_concurrency = 4;

    /// Reads PMCHAT_PROVIDER, PMCHAT_LLM_BASE_URL, PMCHAT_LLM_MODEL and PMCHAT_LLM_API_KEY.
    static ProviderConfig from_env();
};

/// POSTs to {base_url}/chat/completions with a bearer key.
class HttpTransport : public Transport {
public:
    explicit HttpTransport(ProviderConfig config);
    TransportResponse post(const std::string& body) override;
    std::string name() const override { return "remote"; }

private:
    ProviderConfig config_;
    std::string origin_;
    std::string path_;
};

std::shared_ptr<Transport> make_transport(const ProviderConfig& config);

using Sleeper = std::function<void(Millis)>;

class LlmGateway {
public:
    explicit LlmGateway(std::shared_ptr<Transport> transport, std::size_t max_concurrency = 4,
                        Sleeper sleeper = nullptr);

    /// One provider call. Throws Error(validation) on a malformed request and
    /// ProviderError on provider failures.
    CompletionResult complete(const CompletionRequest& request);

    /// Never throws ProviderError: exhaustion or a fatal failure yields NotAvailable.
    RetryOutcome complete_with_retry(const CompletionRequest& request, const RetryPolicy& policy = {});

    Transport& transport() { return *transport_; }

private:
    std::shared_ptr<Transport> transport_;
    std::counting_semaphore<1024> slots_;
    Sleeper sleeper_;
};

void validate_request(const CompletionRequest& request);

/// Raw values of one log (case ids, raw resource names, raw attribute values)
/// with a multi-pattern substring matcher over them.
class DenyIndex {
public:
    DenyIndex() = default;
    explicit DenyIndex(const std::set<std::string>& entries);

    /// Distinct entries occurring in text (case-sensitive), sorted.
    std::vector<std::string> find_in(std::string_view text) const;
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

private:
    struct Node {
        std::map<unsigned char, int> next;
        int fail = 0;
        int output_link = -1;  ///< nearest proper suffix node that ends an entry
        int entry = -1;
    };
    std::vector<std::string> entries_;
    std::vector<Node> nodes_;
};

struct RedactionReport {
    bool passed = true;
    std::vector<std::string> matches;

    /// Matches are masked (first character kept) so reports can be logged.
    Json to_json() const;
};

std::string mask_value(std::string_view value);

RedactionReport redaction_guard(const CompletionRequest& request, const DenyIndex& deny_index);

}  // namespace pmchat
