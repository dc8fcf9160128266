#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pmchat/discovery.hpp"
#include "pmchat/eventlog.hpp"

namespace pmchat {

struct StructuralStats {
    std::size_t total_cases = 0;
    std::size_t total_activities = 0;
    std::size_t total_variants = 0;
    std::size_t total_cases_with_rework = 0;

    friend bool operator==(const StructuralStats&, const StructuralStats&) = default;
};

struct TemporalStats {
    Timestamp first_event_date{};
    Timestamp last_event_date{};
    Millis span{0};
};

/// A case has rework when any activity occurs at least twice, consecutively or not.
StructuralStats structural_stats(const EventLog& log);
TemporalStats temporal_stats(const EventLog& log);

Json to_json(const StructuralStats& s);
Json to_json(const TemporalStats& t);

enum class EngineModule { dashboard, discovery, performance, conformance, orgmining };

inline constexpr std::array<EngineModule, 5> kAllModules{EngineModule::dashboard, EngineModule::discovery,
                                                        EngineModule::performance, EngineModule::conformance,
                                                        EngineModule::orgmining};

std::string_view to_string(EngineModule m);
EngineModule module_from_string(std::string_view s);

struct EngineOptions {
    DiscoveryThresholds thresholds;
    std::size_t bottleneck_top_k = 10;
    std::size_t bottleneck_min_frequency = 1;
    std::size_t conformance_top_n = 3;
    /// Reference model for conformance; discovered from the log when absent.
    std::optional<ProcessModel> reference_model;
};

/// Computes the JSON KPI payload a module persists. Pure and deterministic.
Json compute_module_payload(const EventLog& log, EngineModule module, const EngineOptions& options = {});

inline constexpr int kSchemaVersion = 1;

struct ModuleOutputRecord {
    std::string log_id;
    EngineModule module = EngineModule::dashboard;
    Json payload;
    Timestamp created_at{};
    int schema_version = kSchemaVersion;
    int version = 0;  ///< assigned by the store
};

Json to_json(const ModuleOutputRecord& r);
ModuleOutputRecord record_from_json(const Json& j);

/// Rejects payloads missing the module's required top-level keys.
void validate_payload(EngineModule module, const Json& payload, int schema_version);

/// File-backed store under a data directory:
///
///   logs/{log_id}/events.csv            canonical normalized events
///   logs/{log_id}/metadata.json
///   logs/{log_id}/pseudonyms.json       raw resource -> pseudonym (local only)
///   logs/{log_id}/deny_index.json       raw values that must never reach a provider
///   logs/{log_id}/outputs/{module}.v{n}.json
///   logs/{log_id}/outputs/index.json    {"module": {"latest": n, "versions": [...]}}
///
/// Single writer per log; all writes go through a temp file and rename.
class KpiStore {
public:
    explicit KpiStore(std::filesystem::path data_dir, Clock clock = system_now);

    const std::filesystem::path& data_dir() const { return data_dir_; }
    std::filesystem::path log_dir(const std::string& log_id) const;

    /// Returns true if the log was new.
    bool register_log(const EventLog& log, const std::set<std::string>& deny_entries);
    bool has_log(const std::string& log_id) const;
    std::vector<std::string> list_logs() const;

    EventLog load_log(const std::string& log_id) const;
    LogMetadata load_metadata(const std::string& log_id) const;
    std::set<std::string> load_deny_index(const std::string& log_id) const;

    /// Returns "{log_id}/{module}/v{n}".
    std::string store_output(ModuleOutputRecord record);

    std::map<EngineModule, ModuleOutputRecord> load_outputs(
        const std::string& log_id, const std::optional<std::set<EngineModule>>& modules = std::nullopt) const;
    std::optional<ModuleOutputRecord> load_output(const std::string& log_id, EngineModule module,
                                                  std::optional<int> version = std::nullopt) const;
    std::vector<int> history(const std::string& log_id, EngineModule module) const;

private:
    void require_log(const std::string& log_id) const;
    Json read_index(const std::string& log_id) const;

    std::filesystem::path data_dir_;
    Clock clock_;
    mutable std::mutex write_mutex_;
};

}  // namespace pmchat
