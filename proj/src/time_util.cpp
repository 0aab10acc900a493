#include "redtide/time_util.hpp"

#include <cctype>
#include <cstdio>

namespace redtide {

namespace {

bool parse_int(const std::string& s, size_t pos, size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (size_t i = pos; i < pos + len; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

}  // namespace

std::optional<Date> parse_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    if (s.size() < 10) return std::nullopt;
    if (!parse_int(s, 0, 4, y) || s[4] != '-' || !parse_int(s, 5, 2, m) ||
        s[7] != '-' || !parse_int(s, 8, 2, d)) {
        return std::nullopt;
    }
    const auto ymd = std::chrono::year{y} / m / d;
    if (!ymd.ok()) return std::nullopt;
    return std::chrono::sys_days{ymd};
}

std::optional<UtcSeconds> parse_iso8601(const std::string& s) {
    if (s.size() < 19 || (s[10] != 'T' && s[10] != ' ')) return std::nullopt;
    const auto day = parse_date(s.substr(0, 10));
    if (!day) return std::nullopt;
    int hh = 0, mm = 0, ss = 0;
    if (!parse_int(s, 11, 2, hh) || s[13] != ':' || !parse_int(s, 14, 2, mm) ||
        s[16] != ':' || !parse_int(s, 17, 2, ss)) {
        return std::nullopt;
    }
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;

    long offset_sec = 0;
    size_t p = 19;
    if (p < s.size() && s[p] == '.') {  // fractional seconds: skip
        ++p;
        while (p < s.size() && std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
    }
    if (p < s.size()) {
        const char c = s[p];
        if (c == 'Z' || c == 'z') {
            ++p;
        } else if (c == '+' || c == '-') {
            int oh = 0, om = 0;
            if (!parse_int(s, p + 1, 2, oh)) return std::nullopt;
            size_t q = p + 3;
            if (q < s.size() && s[q] == ':') ++q;
            if (!parse_int(s, q, 2, om)) return std::nullopt;
            offset_sec = (oh * 3600L + om * 60L) * (c == '-' ? -1 : 1);
            p = q + 2;
        }
        if (p != s.size()) return std::nullopt;
    }
    const auto naive = std::chrono::sys_seconds{
        day->time_since_epoch() + std::chrono::seconds{hh * 3600 + mm * 60 + ss}};
    return naive - std::chrono::seconds{offset_sec};
}

std::string format_date(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()));
    return buf;
}

std::string format_iso8601(UtcSeconds t) {
    const auto day = std::chrono::floor<std::chrono::days>(t);
    const unsigned sec = static_cast<unsigned>((t - day).count());  // always [0, 86400)
    char buf[32];
    std::snprintf(buf, sizeof(buf), "T%02u:%02u:%02uZ", sec / 3600, (sec / 60) % 60,
                  sec % 60);
    return format_date(day) + buf;
}

Date local_date(UtcSeconds t, int utc_offset_hours) {
    return std::chrono::floor<std::chrono::days>(
        t + std::chrono::hours{utc_offset_hours});
}

}  // namespace redtide
