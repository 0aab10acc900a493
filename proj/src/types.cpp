#include "redtide/types.hpp"

namespace redtide {

const char* to_string(TweetKind k) {
    switch (k) {
        case TweetKind::original: return "original";
        case TweetKind::reply: return "reply";
        case TweetKind::retweet: return "retweet";
    }
    return "?";
}

const char* to_string(AccountClass c) {
    switch (c) {
        case AccountClass::citizen: return "citizen";
        case AccountClass::media: return "media";
        case AccountClass::other: return "other";
        case AccountClass::unknown: return "unknown";
    }
    return "?";
}

const char* to_string(GeoSource s) {
    return s == GeoSource::place ? "place" : "geoprofile";
}

const char* to_string(GeoLevel l) {
    switch (l) {
        case GeoLevel::region: return "region";
        case GeoLevel::county: return "county";
        case GeoLevel::city: return "city";
        case GeoLevel::zcta: return "zcta";
    }
    return "?";
}

const char* to_string(LexiconClass c) {
    switch (c) {
        case LexiconClass::polarized: return "polarized";
        case LexiconClass::negator: return "negator";
        case LexiconClass::amplifier: return "amplifier";
        case LexiconClass::deamplifier: return "deamplifier";
        case LexiconClass::adversative: return "adversative";
    }
    return "?";
}

std::optional<TweetKind> tweet_kind_from(const std::string& s) {
    if (s == "original") return TweetKind::original;
    if (s == "reply") return TweetKind::reply;
    if (s == "retweet") return TweetKind::retweet;
    return std::nullopt;
}

std::optional<AccountClass> account_class_from(const std::string& s) {
    if (s == "citizen") return AccountClass::citizen;
    if (s == "media") return AccountClass::media;
    if (s == "other") return AccountClass::other;
    if (s == "unknown") return AccountClass::unknown;
    return std::nullopt;
}

std::optional<GeoLevel> geo_level_from(const std::string& s) {
    if (s == "region") return GeoLevel::region;
    if (s == "county") return GeoLevel::county;
    if (s == "city") return GeoLevel::city;
    if (s == "zcta") return GeoLevel::zcta;
    return std::nullopt;
}

std::optional<LexiconClass> lexicon_class_from(const std::string& s) {
    if (s == "polarized") return LexiconClass::polarized;
    if (s == "negator") return LexiconClass::negator;
    if (s == "amplifier") return LexiconClass::amplifier;
    if (s == "deamplifier") return LexiconClass::deamplifier;
    if (s == "adversative") return LexiconClass::adversative;
    return std::nullopt;
}

}  // namespace redtide
