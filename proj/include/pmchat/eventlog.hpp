#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pmchat/common.hpp"

namespace pmchat {

struct Event {
    std::string case_id;
    std::string activity;
    Timestamp timestamp{};
    std::optional<std::string> resource;
    std::map<std::string, std::string> attributes;
};

/// One process instance. Events are timestamp-sorted with input order kept on ties.
struct Case {
    std::string case_id;
    std::vector<Event> events;
};

struct LogMetadata {
    std::string sector = "unknown";
    std::string economic_activity = "unknown";
    std::string process_name = "unknown";
    std::string organization = "unknown";

    friend bool operator==(const LogMetadata&, const LogMetadata&) = default;
};

Json to_json(const LogMetadata& m);
LogMetadata metadata_from_json(const Json& j);

/// The normalized event log. Cases are ordered by case_id.
struct EventLog {
    std::string log_id;
    std::vector<Case> cases;
    LogMetadata metadata;
    /// raw resource name -> pseudonym (r1, r2, ...)
    std::map<std::string, std::string> pseudonyms;

    std::size_t event_count() const;
    const Case* find_case(std::string_view case_id) const;
};

struct ColumnMapping {
    std::string case_column = "case_id";
    std::string activity_column = "activity";
    std::string timestamp_column = "timestamp";
    std::optional<std::string> resource_column;
};

enum class DropReason { empty_field, bad_timestamp, duplicate };

std::string_view to_string(DropReason reason);

struct RowIssue {
    std::size_t row = 0;  ///< 1-based data row (header excluded)
    DropReason reason = DropReason::empty_field;
    std::string message;
};

/// What the parse stage saw before normalization.
struct ParseTrace {
    std::size_t input_rows = 0;
    std::vector<RowIssue> issues;
};

struct CleaningReport {
    std::size_t input_rows = 0;
    std::size_t surviving_events = 0;
    std::map<DropReason, std::size_t> dropped;  ///< all three reasons always present

    std::size_t count(DropReason r) const;
    std::size_t total_dropped() const;
};

Json to_json(const CleaningReport& r);

CleaningReport cleaning_report(const ParseTrace& before, const EventLog& after);

struct ParseOutcome {
    EventLog log;
    CleaningReport report;
    ParseTrace trace;
    /// Case ids, raw resource names and raw attribute values; never sent to a provider.
    std::set<std::string> deny_entries;
};

/// Parses an RFC 4180 CSV document (header row, ',' delimiter).
std::vector<std::vector<std::string>> read_csv(std::string_view text);

/// Quotes a field if it contains ',', '"', CR or LF.
std::string csv_escape(std::string_view field);

ParseOutcome parse_csv(std::string_view raw_text, const ColumnMapping& mapping, const LogMetadata& metadata);

/// Sorts cases and events, replaces resources with stable pseudonyms, recomputes log_id.
/// Idempotent.
EventLog normalize(EventLog log);

struct FilterCriteria {
    std::optional<Timestamp> from;  ///< inclusive
    std::optional<Timestamp> to;    ///< inclusive
    std::optional<std::set<std::string>> activities;
    std::optional<std::set<std::string>> case_ids;

    bool empty() const { return !from && !to && !activities && !case_ids; }
};

EventLog filter_log(const EventLog& log, const FilterCriteria& criteria);

/// Canonical `case_id,activity,timestamp,resource` serialization; log_id hashes this.
std::string canonical_events_csv(const EventLog& log);

std::string compute_log_id(const EventLog& log);

/// Rebuilds an EventLog from a canonical events.csv (as persisted by the store).
EventLog load_canonical(std::string_view events_csv, const LogMetadata& metadata,
                        std::map<std::string, std::string> pseudonyms = {});

}  // namespace pmchat
