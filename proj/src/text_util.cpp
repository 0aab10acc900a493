#include "redtide/text_util.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace redtide {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string normalize_ws(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = true;  // swallow leading whitespace
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            out.push_back(static_cast<char>(std::tolower(c)));
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

bool starts_with_ci(const std::string& s, const std::string& prefix) {
    if (s.size() < prefix.size()) return false;
    for (size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) !=
            std::tolower(static_cast<unsigned char>(prefix[i]))) {
            return false;
        }
    }
    return true;
}

std::string strip_suffix_stem(const std::string& token) {
    const size_t n = token.size();
    auto ends = [&](const char* suf, size_t len) {
        return n >= len && token.compare(n - len, len, suf) == 0;
    };
    if (n > 4 && ends("ing", 3)) return token.substr(0, n - 3);
    if (n > 3 && ends("ed", 2)) return token.substr(0, n - 2);
    // sibilant plurals take -es: beaches, fishes, boxes, buzzes, glasses
    if (n > 4 && (ends("ches", 4) || ends("shes", 4) || ends("xes", 3) ||
                  ends("zes", 3) || ends("sses", 4))) {
        return token.substr(0, n - 2);
    }
    if (n > 3 && ends("s", 1) && !ends("ss", 2)) return token.substr(0, n - 1);
    return token;
}

}  // namespace redtide
