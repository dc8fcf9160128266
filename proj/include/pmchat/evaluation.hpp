#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pmchat/common.hpp"
#include "pmchat/promptengine.hpp"

namespace pmchat {

enum class RatingCategory { good, mediocre, bad, na };

inline constexpr std::array<RatingCategory, 4> kAllCategories{RatingCategory::good, RatingCategory::mediocre,
                                                             RatingCategory::bad, RatingCategory::na};

std::string_view to_string(RatingCategory c);
/// Accepts Good, Mediocre, Bad, NA and N.A. (case-insensitive).
std::optional<RatingCategory> category_from_string(std::string_view s);

struct RatingRecord {
    std::string rating_id;
    std::string source;  ///< session id or fixture tag
    std::string module;
    PromptStyle prompt_style = PromptStyle::optimized;
    RatingCategory category = RatingCategory::good;
    std::string sector;
    std::optional<std::string> expert_gender;
    std::optional<double> expert_experience_years;
};

Json to_json(const RatingRecord& r);
RatingRecord rating_from_json(const Json& j);

struct ImportResult {
    std::vector<RatingRecord> records;
    std::vector<std::string> row_errors;  ///< "row N: message"
};

/// Parses `category,sector,gender,style,module` CSV (extra columns such as
/// experience_years and source are read when present).
ImportResult parse_ratings_csv(std::string_view text, const std::string& source_tag = "import");

enum class GroupBy { overall, sector, gender, style };

GroupBy group_by_from_string(std::string_view s);
std::string_view to_string(GroupBy g);

struct CategoryShares {
    std::size_t total = 0;
    std::map<RatingCategory, std::size_t> counts;   ///< all four present
    std::map<RatingCategory, int> percent;          ///< round-half-up of the exact share
};

struct DistributionReport {
    GroupBy group_by = GroupBy::overall;
    std::map<std::string, CategoryShares> groups;  ///< lexicographic group order

    Json to_json() const;
    std::string to_text() const;
};

/// round(100 * count / total) with halves rounded up, in exact integer arithmetic.
int percent_round_half_up(std::size_t count, std::size_t total);

using RatingFilter = std::function<bool(const RatingRecord&)>;

/// Throws a not_found Error when no record matches.
DistributionReport distribution(const std::vector<RatingRecord>& records, GroupBy group_by,
                                const RatingFilter& filter = nullptr);

struct StyleComparison {
    std::optional<DistributionReport> zero_shot;
    std::optional<DistributionReport> optimized;
    std::optional<int> good_delta;  ///< optimized Good% - zero_shot Good%
};

StyleComparison compare_styles(const std::vector<RatingRecord>& records);

/// Append-only ratings file (JSON lines) under {data_dir}/ratings/ratings.jsonl.
class RatingStore {
public:
    explicit RatingStore(std::filesystem::path data_dir);

    std::string record_rating(RatingRecord record);
    std::vector<std::string> record_all(std::vector<RatingRecord> records);
    std::vector<RatingRecord> all() const;

private:
    std::string next_id_locked() const;

    std::filesystem::path file_;
    mutable std::mutex mutex_;
};

}  // namespace pmchat
