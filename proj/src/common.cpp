#include "pmchat/common.hpp"

#include <openssl/evp.h>

#include <array>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace pmchat {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::schema: return "schema_error";
        case ErrorCode::empty_log: return "empty_log";
        case ErrorCode::validation: return "validation_error";
        case ErrorCode::not_found: return "not_found";
        case ErrorCode::precondition: return "precondition_failed";
        case ErrorCode::redaction: return "redaction_violation";
        case ErrorCode::budget: return "budget_exceeded";
        case ErrorCode::provider: return "provider_error";
        case ErrorCode::io: return "io_error";
        case ErrorCode::internal: return "internal_error";
    }
    return "internal_error";
}

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view s) : s_(s) {}

    bool done() const { return pos_ == s_.size(); }
    char peek() const { return done() ? '\0' : s_[pos_]; }

    bool digits(int count, int& out) {
        out = 0;
        for (int i = 0; i < count; ++i) {
            if (done() || s_[pos_] < '0' || s_[pos_] > '9') return false;
            out = out * 10 + (s_[pos_++] - '0');
        }
        return true;
    }

    bool expect(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    void advance() { ++pos_; }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    Cursor c(trim(text));
    int y, mo, d, h, mi, s;
    if (!c.digits(4, y) || !c.expect('-') || !c.digits(2, mo) || !c.expect('-') || !c.digits(2, d)) {
        return std::nullopt;
    }
    const bool iso = c.peek() == 'T';
    if (!iso && c.peek() != ' ') return std::nullopt;
    c.advance();
    if (!c.digits(2, h) || !c.expect(':') || !c.digits(2, mi) || !c.expect(':') || !c.digits(2, s)) {
        return std::nullopt;
    }
    int millis = 0;
    if (c.peek() == '.') {
        c.advance();
        int scale = 100, n = 0;
        while (c.peek() >= '0' && c.peek() <= '9') {
            if (scale > 0) millis += (c.peek() - '0') * scale;
            scale /= 10;
            c.advance();
            ++n;
        }
        if (n == 0) return std::nullopt;
    }
    int offset_minutes = 0;
    if (iso && !c.done()) {
        if (c.peek() == 'Z') {
            c.advance();
        } else if (c.peek() == '+' || c.peek() == '-') {
            const int sign = c.peek() == '-' ? -1 : 1;
            c.advance();
            int oh, om;
            if (!c.digits(2, oh)) return std::nullopt;
            c.expect(':');
            if (!c.digits(2, om)) return std::nullopt;
            if (oh > 23 || om > 59) return std::nullopt;
            offset_minutes = sign * (oh * 60 + om);
        } else {
            return std::nullopt;
        }
    }
    if (!c.done()) return std::nullopt;
    if (h > 23 || mi > 59 || s > 59) return std::nullopt;

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    auto tp = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} + milliseconds{millis};
    tp -= minutes{offset_minutes};
    return time_point_cast<milliseconds>(tp);
}

std::string format_timestamp(Timestamp ts) {
    using namespace std::chrono;
    const auto day_point = floor<days>(ts);
    const year_month_day ymd{day_point};
    const hh_mm_ss tod{ts - day_point};
    std::array<char, 40> buf{};
    const auto ms = tod.subseconds().count();
    if (ms != 0) {
        std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                      static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                      static_cast<int>(tod.seconds().count()), static_cast<int>(ms));
    } else {
        std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                      static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                      static_cast<int>(tod.seconds().count()));
    }
    return buf.data();
}

std::string format_date(Timestamp ts) {
    using namespace std::chrono;
    const year_month_day ymd{floor<days>(ts)};
    std::array<char, 16> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf.data();
}

std::int64_t floor_seconds(Millis d) {
    return std::chrono::floor<std::chrono::seconds>(d).count();
}

std::string sha256_hex(std::string_view data, std::size_t hex_digits) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::internal, "sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    if (hex_digits < out.size()) out.resize(hex_digits);
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    static std::atomic<unsigned> counter{0};
    std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()) % 100000) + "." +
           std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::io, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorCode::io, "short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error(ErrorCode::io, "cannot rename into " + path.string() + ": " + ec.message());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::not_found, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Timestamp system_now() {
    return std::chrono::time_point_cast<Millis>(std::chrono::system_clock::now());
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace pmchat
