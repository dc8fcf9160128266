#pragma once

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

#include "pmchat/common.hpp"
#include "pmchat/eventlog.hpp"

namespace testing {

inline std::filesystem::path fixture(const std::string& relative) {
    return std::filesystem::path(PMCHAT_FIXTURES) / relative;
}

inline pmchat::ColumnMapping l1_mapping() {
    pmchat::ColumnMapping m;
    m.resource_column = "resource";
    return m;
}

inline pmchat::LogMetadata l1_metadata() {
    pmchat::LogMetadata m;
    m.sector = "Public Sector";
    m.economic_activity = "Municipal Services";
    m.process_name = "Issuance Of Municipal License";
    m.organization = "Example Municipality";
    return m;
}

inline std::string l1_csv() { return pmchat::read_file(fixture("logs/L1.csv")); }

inline pmchat::ParseOutcome l1() { return pmchat::parse_csv(l1_csv(), l1_mapping(), l1_metadata()); }

inline pmchat::Timestamp ts(const std::string& text) { return *pmchat::parse_timestamp(text); }

/// Fixed clock so stored records are byte-stable across runs.
inline pmchat::Timestamp fixed_now() { return ts("2024-06-01T12:00:00Z"); }

class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("pmchat-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace testing
