#include "pmchat/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pmchat/dashboard.hpp"
#include "pmchat/eventlog.hpp"

namespace pmchat {

std::string_view to_string(RatingCategory c) {
    switch (c) {
        case RatingCategory::good: return "Good";
        case RatingCategory::mediocre: return "Mediocre";
        case RatingCategory::bad: return "Bad";
        case RatingCategory::na: return "NA";
    }
    return "NA";
}

std::optional<RatingCategory> category_from_string(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "good") return RatingCategory::good;
    if (lower == "mediocre") return RatingCategory::mediocre;
    if (lower == "bad") return RatingCategory::bad;
    if (lower == "na" || lower == "n.a." || lower == "n/a") return RatingCategory::na;
    return std::nullopt;
}

Json to_json(const RatingRecord& r) {
    Json j{{"rating_id", r.rating_id},
           {"source", r.source},
           {"module", r.module},
           {"prompt_style", to_string(r.prompt_style)},
           {"category", to_string(r.category)},
           {"sector", r.sector}};
    j["expert_gender"] = r.expert_gender ? Json(*r.expert_gender) : Json(nullptr);
    j["expert_experience_years"] = r.expert_experience_years ? Json(*r.expert_experience_years) : Json(nullptr);
    return j;
}

RatingRecord rating_from_json(const Json& j) {
    RatingRecord r;
    try {
        r.rating_id = j.value("rating_id", std::string());
        r.source = j.value("source", std::string("api"));
        r.module = j.value("module", std::string());
        r.prompt_style = style_from_string(j.value("prompt_style", j.value("style", std::string("optimized"))));
        const auto cat = category_from_string(j.at("category").get<std::string>());
        if (!cat) {
            throw Error(ErrorCode::validation, "invalid category '" + j.at("category").get<std::string>() +
                                                   "' (expected Good, Mediocre, Bad or NA)");
        }
        r.category = *cat;
        r.sector = j.value("sector", std::string("unknown"));
        const char* gender_key = j.contains("expert_gender") ? "expert_gender" : "gender";
        if (j.contains(gender_key) && j[gender_key].is_string() && !j[gender_key].get<std::string>().empty()) {
            r.expert_gender = j[gender_key].get<std::string>();
        }
        if (j.contains("expert_experience_years") && j["expert_experience_years"].is_number()) {
            r.expert_experience_years = j["expert_experience_years"].get<double>();
        }
    } catch (const Json::exception& ex) {
        throw Error(ErrorCode::validation, std::string("malformed rating: ") + ex.what());
    }
    if (!r.module.empty()) module_from_string(r.module);
    return r;
}

ImportResult parse_ratings_csv(std::string_view text, const std::string& source_tag) {
    const auto rows = read_csv(text);
    if (rows.empty()) throw Error(ErrorCode::schema, "ratings CSV has no header row");
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < rows[0].size(); ++i) col[rows[0][i]] = i;
    for (const char* required : {"category", "sector", "gender", "style", "module"}) {
        if (!col.contains(required)) {
            throw Error(ErrorCode::schema, std::string("ratings CSV is missing column '") + required + "'",
                        Json{{"expected", "category,sector,gender,style,module"}});
        }
    }

    ImportResult out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        auto cell = [&](const std::string& name) -> std::string {
            auto it = col.find(name);
            return it != col.end() && it->second < row.size() ? row[it->second] : std::string();
        };
        try {
            RatingRecord rec;
            const auto cat = category_from_string(cell("category"));
            if (!cat) throw Error(ErrorCode::validation, "invalid category '" + cell("category") + "'");
            rec.category = *cat;
            rec.sector = cell("sector").empty() ? "unknown" : cell("sector");
            if (!cell("gender").empty()) rec.expert_gender = cell("gender");
            rec.prompt_style = style_from_string(cell("style"));
            rec.module = cell("module");
            if (!rec.module.empty()) module_from_string(rec.module);
            rec.source = cell("source").empty() ? source_tag : cell("source");
            if (const auto years = cell("experience_years"); !years.empty()) {
                rec.expert_experience_years = std::stod(years);
            }
            out.records.push_back(std::move(rec));
        } catch (const std::exception& ex) {
            out.row_errors.push_back("row " + std::to_string(r) + ": " + ex.what());
        }
    }
    return out;
}

GroupBy group_by_from_string(std::string_view s) {
    if (s == "overall") return GroupBy::overall;
    if (s == "sector") return GroupBy::sector;
    if (s == "gender") return GroupBy::gender;
    if (s == "style") return GroupBy::style;
    throw Error(ErrorCode::validation, "group_by must be overall, sector, gender or style");
}

std::string_view to_string(GroupBy g) {
    switch (g) {
        case GroupBy::overall: return "overall";
        case GroupBy::sector: return "sector";
        case GroupBy::gender: return "gender";
        case GroupBy::style: return "style";
    }
    return "overall";
}

int percent_round_half_up(std::size_t count, std::size_t total) {
    if (total == 0) return 0;
    return static_cast<int>((200 * count + total) / (2 * total));
}

DistributionReport distribution(const std::vector<RatingRecord>& records, GroupBy group_by,
                                const RatingFilter& filter) {
    DistributionReport report;
    report.group_by = group_by;
    for (const auto& r : records) {
        if (filter && !filter(r)) continue;
        std::string key;
        switch (group_by) {
            case GroupBy::overall: key = "overall"; break;
            case GroupBy::sector: key = r.sector; break;
            case GroupBy::gender: key = r.expert_gender.value_or("unknown"); break;
            case GroupBy::style: key = std::string(to_string(r.prompt_style)); break;
        }
        auto& g = report.groups[key];
        ++g.total;
        ++g.counts[r.category];
    }
    if (report.groups.empty()) throw Error(ErrorCode::not_found, "no ratings match the request");
    for (auto& [_, g] : report.groups) {
        for (auto c : kAllCategories) {
            g.counts.try_emplace(c, 0);
            g.percent[c] = percent_round_half_up(g.counts[c], g.total);
        }
    }
    return report;
}

Json DistributionReport::to_json() const {
    Json out{{"group_by", to_string(group_by)}, {"groups", Json::array()}};
    for (const auto& [name, g] : groups) {
        Json counts = Json::object();
        Json percent = Json::object();
        for (auto c : kAllCategories) {
            counts[std::string(to_string(c))] = g.counts.at(c);
            percent[std::string(to_string(c))] = g.percent.at(c);
        }
        out["groups"].push_back(Json{{"group", name}, {"total", g.total}, {"percent", percent}, {"counts", counts}});
    }
    return out;
}

std::string DistributionReport::to_text() const {
    std::size_t width = 5;
    for (const auto& [name, _] : groups) width = std::max(width, name.size());
    std::ostringstream os;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-*s %6s %9s %6s %6s %7s\n", static_cast<int>(width), "group", "Good", "Mediocre",
                  "Bad", "NA", "total");
    os << buf;
    for (const auto& [name, g] : groups) {
        auto cell = [&](RatingCategory c) {
            return std::to_string(g.percent.at(c)) + "% (" + std::to_string(g.counts.at(c)) + ")";
        };
        std::snprintf(buf, sizeof buf, "%-*s %6s %9s %6s %6s %7zu\n", static_cast<int>(width), name.c_str(),
                      (std::to_string(g.percent.at(RatingCategory::good)) + "%").c_str(),
                      (std::to_string(g.percent.at(RatingCategory::mediocre)) + "%").c_str(),
                      (std::to_string(g.percent.at(RatingCategory::bad)) + "%").c_str(),
                      (std::to_string(g.percent.at(RatingCategory::na)) + "%").c_str(), g.total);
        os << buf;
        os << std::string(width, ' ') << "  counts: Good " << cell(RatingCategory::good) << ", Mediocre "
           << cell(RatingCategory::mediocre) << ", Bad " << cell(RatingCategory::bad) << ", NA "
           << cell(RatingCategory::na) << "\n";
    }
    return os.str();
}

StyleComparison compare_styles(const std::vector<RatingRecord>& records) {
    StyleComparison out;
    auto side = [&](PromptStyle style) -> std::optional<DistributionReport> {
        const bool any = std::any_of(records.begin(), records.end(),
                                     [&](const RatingRecord& r) { return r.prompt_style == style; });
        if (!any) return std::nullopt;
        return distribution(records, GroupBy::overall,
                            [style](const RatingRecord& r) { return r.prompt_style == style; });
    };
    out.zero_shot = side(PromptStyle::zero_shot);
    out.optimized = side(PromptStyle::optimized);
    if (out.zero_shot && out.optimized) {
        out.good_delta = out.optimized->groups.at("overall").percent.at(RatingCategory::good) -
                         out.zero_shot->groups.at("overall").percent.at(RatingCategory::good);
    }
    return out;
}

RatingStore::RatingStore(std::filesystem::path data_dir) : file_(data_dir / "ratings" / "ratings.jsonl") {
    std::filesystem::create_directories(file_.parent_path());
}

std::string RatingStore::next_id_locked() const {
    std::size_t n = 0;
    if (std::filesystem::exists(file_)) {
        std::ifstream in(file_);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) ++n;
        }
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "rt%06zu", n + 1);
    return buf;
}

std::string RatingStore::record_rating(RatingRecord record) {
    return record_all({std::move(record)}).front();
}

std::vector<std::string> RatingStore::record_all(std::vector<RatingRecord> records) {
    std::lock_guard lock(mutex_);
    std::string next = next_id_locked();
    std::size_t seq = std::stoul(next.substr(2));
    std::ofstream out(file_, std::ios::app | std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot append to " + file_.string());
    std::vector<std::string> ids;
    for (auto& r : records) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "rt%06zu", seq++);
        r.rating_id = buf;
        out << to_json(r).dump() << '\n';
        ids.push_back(r.rating_id);
    }
    out.flush();
    if (!out) throw Error(ErrorCode::io, "short write to " + file_.string());
    return ids;
}

std::vector<RatingRecord> RatingStore::all() const {
    std::lock_guard lock(mutex_);
    std::vector<RatingRecord> out;
    if (!std::filesystem::exists(file_)) return out;
    std::ifstream in(file_);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) out.push_back(rating_from_json(Json::parse(line)));
    }
    return out;
}

}  // namespace pmchat
