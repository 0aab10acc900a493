#pragma once

#include <string>
#include <vector>

namespace redtide {

std::string to_lower(std::string s);
std::string trim(const std::string& s);

/// Lowercases and collapses whitespace runs to single spaces.
std::string normalize_ws(const std::string& s);

std::vector<std::string> split(const std::string& s, char sep);

/// Splits on any whitespace, dropping empty pieces.
std::vector<std::string> split_ws(const std::string& s);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

bool starts_with_ci(const std::string& s, const std::string& prefix);

/// Light suffix stripper used for term-family matching: plural -s,
/// -ed, -ing. "killed"/"killing"/"kills" all reduce to "kill".
std::string strip_suffix_stem(const std::string& token);

}  // namespace redtide
