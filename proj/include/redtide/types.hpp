#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "redtide/time_util.hpp"

namespace redtide {

enum class TweetKind { original, reply, retweet };
enum class AccountClass { citizen, media, other, unknown };
enum class GeoSource { place, geoprofile };
enum class GeoLevel { region, county, city, zcta };
enum class LexiconClass { polarized, negator, amplifier, deamplifier, adversative };

const char* to_string(TweetKind k);
const char* to_string(AccountClass c);
const char* to_string(GeoSource s);
const char* to_string(GeoLevel l);
const char* to_string(LexiconClass c);

std::optional<TweetKind> tweet_kind_from(const std::string& s);
std::optional<AccountClass> account_class_from(const std::string& s);
std::optional<GeoLevel> geo_level_from(const std::string& s);
std::optional<LexiconClass> lexicon_class_from(const std::string& s);

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;
};

/// A tweet's location attribution. `unit_id` is filled once the label has
/// been resolved against the registry; until then it is empty and only
/// `raw_label` carries information.
struct GeoRef {
    std::string unit_id;
    GeoSource source = GeoSource::place;
    std::string raw_label;
};

struct Tweet {
    std::string id;
    UtcSeconds timestamp{};
    std::string text;
    TweetKind kind = TweetKind::original;
    AccountClass account_class = AccountClass::unknown;
    std::optional<bool> verified;
    std::string handle;  // optional; needed only for account overrides
    std::optional<GeoRef> place_match;
    std::optional<GeoRef> profile_match;
    std::optional<LatLon> coords;
};

/// One node of the locality hierarchy (region -> county -> city -> zcta).
struct GeoUnit {
    std::string id;
    GeoLevel level = GeoLevel::region;
    std::string name;
    std::string parent;       // empty for roots
    std::string metro_group;  // smoothing group; empty if none
    long long population = 0;
    LatLon centroid{};
    std::vector<LatLon> polygon;  // counties only; closed ring, first != last
};

struct BeachReport {
    std::string beach_id;
    std::string county_id;
    Date date{};
    int dead_fish = 0;    // 0..2
    int respiratory = 0;  // 0..3
};

struct KBrevisSample {
    std::string sample_id;
    Date date{};
    LatLon location{};
    double cells_per_liter = 0.0;
};

struct LexiconEntry {
    std::vector<std::string> phrase;  // lowercase tokens, 1..n
    LexiconClass cls = LexiconClass::polarized;
    double weight = 0.0;
};

inline constexpr int kDeadFishMax = 2;
inline constexpr int kRespiratoryMax = 3;

}  // namespace redtide
