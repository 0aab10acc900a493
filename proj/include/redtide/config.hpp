#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace redtide {

/// Every numeric constant of the pipeline lives here so experiments can
/// override them; defaults reproduce the published analysis. Loaded from
/// a flat key=value file with '#' comments, then overridden by CLI
/// --set key=value flags.
struct RunConfig {
    // input paths
    std::string tweets;
    std::string tweets_format = "jsonl";  // jsonl | csv
    std::string beach;
    std::string kbrevis;
    std::string beaches;  // optional beach coordinate table
    std::string registry;
    std::string polygons;  // optional county ring file
    std::string lexicon;
    std::string lexicon_patch;      // optional
    std::string political_phrases;  // optional
    std::string account_overrides;  // optional
    std::string concern_dir;        // optional
    std::string out_dir = "out";

    // study window and bucketing
    std::string window_start = "2018-05-15";
    std::string window_end = "2019-05-15";
    int tz_offset_hours = -5;

    // panel selection
    std::string levels = "total,county,city,zcta";
    std::string freqs = "weekly,3day,daily";
    std::string match = "all";        // all | explicit
    std::string account = "everyone"; // everyone | citizen | media
    bool per_capita_metric = true;

    // sentiment engine
    double question_weight = 0.25;
    double ellipsis_penalty = 0.15;
    double amplifier_delta = 0.8;
    double deamplifier_delta = 0.6;
    double shifter_floor = -0.9;
    double adversative_before = 1.25;
    double adversative_after = 0.75;
    int context_before = 4;
    int context_after = 2;
    std::string sentence_aggregation = "sum";  // sum | mean

    // geospatial
    double beach_radius_mi = 10.0;
    double sample_assign_max_mi = 30.0;
    double per_capita_scale = 100000.0;
    double bin_close_mi = 25.0;
    double bin_far_mi = 50.0;
    std::string shared_unit = "tampa_bay_shared";
    std::string shared_members = "hillsborough,pinellas";
    std::string shared_label = "tampa bay";
    std::string shared_alias_target;  // empty: first shared member

    // condition data
    double bbox_lat_min = 24.0;
    double bbox_lat_max = 31.5;
    double bbox_lon_min = -88.0;
    double bbox_lon_max = -79.0;
    int kbrevis_top_n = 5;
    std::string kbrevis_stat = "mean";  // mean | sum | max

    // analytics
    double high_impact_cells = 1.0e6;
    double tukey_alpha = 0.05;
    std::string log_zero = "exclude";  // exclude | epsilon
    double log_epsilon = 1.0e-6;
    int shift = 0;  // -1 lag, 0 concurrent, +1 lead
    std::string metric = "count";        // count | sentiment
    std::string condition = "dead_fish"; // dead_fish | respiratory | kbrevis
    std::string distance_level = "city";
    int threads = 1;
};

/// Keys accepted by the config file, `--set` overrides, and the
/// canonical dump — kept in one table so they cannot drift apart.
struct ConfigField {
    const char* name;
    enum class Kind { text, real, integer, boolean } kind;
    void* ptr;
};
std::vector<ConfigField> config_fields(RunConfig& config);

RunConfig load_config(const std::filesystem::path& path);
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

/// Deterministic "key=value\n" dump in declaration order.
std::string config_canonical(const RunConfig& config);
uint64_t config_hash(const RunConfig& config);

}  // namespace redtide
