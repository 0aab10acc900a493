#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "redtide/registry.hpp"
#include "redtide/types.hpp"

namespace redtide {

enum class TweetFormat { jsonl, csv };

struct RecordError {
    size_t line = 0;
    std::string message;
};

template <typename T>
struct ParseResult {
    std::vector<T> records;
    std::vector<RecordError> errors;
    size_t input_records = 0;  // parseable or not
};

struct BoundingBox {
    double lat_min = -90.0, lat_max = 90.0;
    double lon_min = -180.0, lon_max = 180.0;
    bool contains(const LatLon& p) const {
        return p.lat >= lat_min && p.lat <= lat_max && p.lon >= lon_min &&
               p.lon <= lon_max;
    }
};

/// Southwest Florida coast; K. brevis samples outside it are rejected.
inline constexpr BoundingBox kDefaultBBox{24.0, 31.5, -88.0, -79.0};

/// Reads tweets from JSONL (one object per line) or CSV. Malformed
/// records are reported with their line numbers and skipped; nothing is
/// dropped silently. Records missing every geo field and duplicate ids
/// are record-level errors. Throws only when the file cannot be read.
ParseResult<Tweet> parse_tweets(const std::filesystem::path& path, TweetFormat format);

ParseResult<BeachReport> parse_beach_reports(const std::filesystem::path& path);
ParseResult<KBrevisSample> parse_kbrevis_samples(const std::filesystem::path& path,
                                                 const BoundingBox& bbox = kDefaultBBox);

ParseResult<LexiconEntry> parse_lexicon(const std::filesystem::path& path,
                                        double default_amplifier_delta = 0.8,
                                        double default_deamplifier_delta = 0.6);

/// Loads geo_registry.csv and, when given, attaches county rings from the
/// polygon file. Registry invariant violations throw.
GeoRegistry parse_geo_registry(const std::filesystem::path& registry_csv,
                               const std::filesystem::path& polygons_json = {});

/// Optional beach coordinate table (beach_id,lat,lon). Beaches missing
/// from it can still aggregate at county level but never attach to
/// cities or ZCTAs by radius.
struct BeachLocation {
    std::string beach_id;
    LatLon location{};
};
ParseResult<BeachLocation> parse_beach_locations(const std::filesystem::path& path);

/// Serializes tweets so that re-parsing yields field-identical records.
void write_tweets_jsonl(const std::vector<Tweet>& tweets, std::ostream& out);
std::string tweet_to_jsonl(const Tweet& t);

}  // namespace redtide
