#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace pmchat {

using Json = nlohmann::ordered_json;

/// Millisecond-precision UTC instant.
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using Millis = std::chrono::milliseconds;

enum class ErrorCode {
    schema,
    empty_log,
    validation,
    not_found,
    precondition,
    redaction,
    budget,
    provider,
    io,
    internal,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for contract violations; carries a machine-readable
/// code plus optional structured details for the HTTP error envelope.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, Json details = Json::object())
        : std::runtime_error(message), code_(code), details_(std::move(details)) {}

    ErrorCode code() const noexcept { return code_; }
    const Json& details() const noexcept { return details_; }

private:
    ErrorCode code_;
    Json details_;
};

// Timestamps. Accepted inputs:
//   2024-01-01T10:00:00Z / 2024-01-01T10:00:00+02:00 / 2024-01-01T10:00:00.250-0130
//   2024-01-01T10:00:00           (no offset: UTC)
//   2024-01-01 10:00:00           (UTC)
// Fractional seconds are truncated to milliseconds.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// ISO-8601 UTC with a trailing Z; milliseconds are printed only when non-zero.
std::string format_timestamp(Timestamp ts);

/// YYYY-MM-DD of the UTC day containing ts.
std::string format_date(Timestamp ts);

/// Whole seconds, floored (durations are never negative after normalization,
/// but flooring is still well-defined for negative inputs).
std::int64_t floor_seconds(Millis d);

/// First `hex_digits` hex characters of SHA-256(data).
std::string sha256_hex(std::string_view data, std::size_t hex_digits = 64);

/// Writes to a sibling temp file then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

using Clock = std::function<Timestamp()>;
Timestamp system_now();

/// 64-bit FNV-1a; used where a short non-cryptographic digest is enough.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace pmchat
