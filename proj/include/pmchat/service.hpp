#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pmchat/dashboard.hpp"
#include "pmchat/evaluation.hpp"
#include "pmchat/eventlog.hpp"
#include "pmchat/llmgateway.hpp"
#include "pmchat/promptengine.hpp"

namespace pmchat {

struct ServiceConfig {
    std::filesystem::path data_dir = "pmchat-data";
    RenderBudget prompt_budget;
    /// Sliding-window budget for the full message list sent on each turn.
    std::size_t history_budget_tokens = 16000;
    RetryPolicy retry;
    std::string model_name = "mock-analyst";
    double temperature = 0.2;
    std::size_t max_output_tokens = 1024;
    bool auto_rate_na = false;
    EngineOptions engine;
    Clock clock = system_now;
};

inline constexpr std::string_view kSystemPrompt =
    "You are the conversational assistant of a process mining platform. You receive aggregated, pseudonymized "
    "KPI outputs of the process mining engine modules, never raw event data, and answer as the persona and task "
    "each prompt describes.";

struct Session {
    std::string session_id;
    std::string log_id;
    PromptStyle prompt_style = PromptStyle::optimized;
    std::vector<ChatMessage> history;
    Timestamp created_at{};
    std::size_t analyses = 0;
};

Json to_json(const Session& s);
Session session_from_json(const Json& j);

/// Everything needed to rebuild the prompt of an analysis byte for byte.
struct PromptInputs {
    EngineModule module = EngineModule::dashboard;
    int output_version = 0;
    AnalysisTask task = AnalysisTask::analytics;
    PromptStyle style = PromptStyle::optimized;
    LogMetadata metadata;
    std::size_t max_prompt_tokens = 0;
};

struct AnalysisResult {
    std::string session_id;
    std::size_t index = 0;
    EngineModule module = EngineModule::dashboard;
    AnalysisTask task = AnalysisTask::analytics;
    std::string prompt_text;
    std::optional<std::string> response;
    std::optional<NotAvailable> not_available;
    Millis latency{0};
    int attempts = 0;
    PromptInputs inputs;
};

Json to_json(const AnalysisResult& r);
AnalysisResult analysis_from_json(const Json& j);

struct IngestResult {
    std::string log_id;
    bool is_new = true;
    CleaningReport report;
    std::size_t cases = 0;
    std::size_t events = 0;
};

struct AnalyzeResult {
    ModuleOutputRecord record;
    bool cache_hit = false;
};

struct FollowUpResult {
    std::optional<ChatMessage> reply;
    std::optional<NotAvailable> not_available;
};

/// Binds the engine, KPI store, prompt builder and gateway. Multiple sessions run
/// concurrently; operations on one session are serialized, as are analyze calls per log.
class PmChatService {
public:
    PmChatService(ServiceConfig config, std::shared_ptr<Transport> transport);

    const ServiceConfig& config() const { return config_; }
    KpiStore& store() { return store_; }
    RatingStore& ratings() { return ratings_; }
    LlmGateway& gateway() { return gateway_; }

    IngestResult ingest(std::string_view csv_text, const ColumnMapping& mapping, const LogMetadata& metadata);

    /// Computes and stores a module output; an unchanged payload is a cache hit and stores nothing.
    AnalyzeResult analyze(const std::string& log_id, EngineModule module,
                          const std::optional<ProcessModel>& reference_model = std::nullopt);

    /// Latest stored output, computing it first when absent.
    ModuleOutputRecord ensure_output(const std::string& log_id, EngineModule module);

    /// The prompt run_analysis would send, without a session or provider call.
    std::string build_prompt(const std::string& log_id, EngineModule module, PromptStyle style,
                             AnalysisTask task) const;

    Session create_session(const std::string& log_id, PromptStyle style);
    Session get_session(const std::string& session_id) const;

    AnalysisResult run_analysis(const std::string& session_id, EngineModule module, AnalysisTask task);
    FollowUpResult follow_up(const std::string& session_id, const std::string& user_text);

    std::vector<AnalysisResult> analyses(const std::string& session_id) const;

    /// Rebuilds a stored analysis prompt from its recorded inputs.
    std::string replay_prompt(const AnalysisResult& result) const;

private:
    std::filesystem::path session_dir(const std::string& session_id) const;
    void save_session(const Session& s) const;
    std::shared_ptr<std::mutex> lock_for(std::map<std::string, std::shared_ptr<std::mutex>>& locks,
                                         const std::string& key);
    std::string prompt_for(const PromptInputs& inputs, const ModuleOutputRecord& record) const;
    CompletionRequest request_for(const std::vector<ChatMessage>& messages) const;
    void guard_or_throw(const std::string& log_id, const CompletionRequest& request) const;
    std::shared_ptr<const DenyIndex> deny_index(const std::string& log_id) const;

    ServiceConfig config_;
    KpiStore store_;
    RatingStore ratings_;
    LlmGateway gateway_;

    std::mutex locks_mutex_;
    std::map<std::string, std::shared_ptr<std::mutex>> session_locks_;
    std::map<std::string, std::shared_ptr<std::mutex>> log_locks_;
    std::mutex session_create_mutex_;
    mutable std::mutex deny_mutex_;
    mutable std::map<std::string, std::shared_ptr<const DenyIndex>> deny_cache_;
};

/// Drops the oldest non-system turns two at a time until the estimate fits;
/// the system message and the newest turn are always kept.
std::vector<ChatMessage> window_history(const std::vector<ChatMessage>& messages, std::size_t budget_tokens);

}  // namespace pmchat
