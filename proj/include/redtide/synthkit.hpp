#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "redtide/time_util.hpp"
#include "redtide/types.hpp"

namespace redtide::synthkit {

struct SynthCounty {
    std::string id;
    std::string name;
    long long population = 500000;
    LatLon centroid{};
};

/// Ground-truth parameters for a generated corpus. Same spec (and seed)
/// always produces byte-identical files; the generator runs on the
/// project's own xorshift64* stream, never platform RNGs.
struct SynthSpec {
    uint64_t seed = 1;
    Date window_start{};
    Date window_end{};
    std::vector<SynthCounty> counties;

    /// Target pooled correlation between weekly per-capita tweet counts
    /// and dead-fish levels. |rho| == 1 switches to an exact
    /// deterministic coupling (tweet counts are an integer multiple of
    /// the condition reports).
    double coupling_rho = 0.0;
    double distance_decay = 0.0;  // per mile, applied to expected counts
    double retweet_base = 0.3;
    double retweet_distance_slope = 0.0;  // per mile
    double political_noise_rate = 0.0;    // fraction of tweets that are nickname-only

    double per_capita_rate = 5.0;      // expected tweets per 100k per week
    double noise_amplitude = 0.35;     // relative sd of the count channel
    double condition_amplitude = 0.35; // sd of the dead-fish latent level
    double explicit_fraction = 0.7;    // place-matched share
    int beaches_per_county = 3;
    int samples_per_county_week = 3;
    int deterministic_multiplier = 3;  // tweets per report point when |rho| == 1
    bool emit_cities = false;          // add a city+zcta child per county
    bool emit_impact_sites = true;     // one >1e6 cells/L site per week
    int tz_offset_hours = -5;
    double polygon_half_deg = 0.3;     // county box half-width
};

struct SynthSummary {
    size_t regular_tweets = 0;
    size_t political_tweets = 0;
    size_t beach_rows = 0;
    size_t kbrevis_rows = 0;
    size_t weeks = 0;
};

SynthSpec load_synth_spec(const std::filesystem::path& json_path);

/// Convenience geometry: counties on a north-south line, 1 degree apart,
/// equal populations, window an exact number of weeks.
SynthSpec make_line_spec(uint64_t seed, int n_counties, int weeks);

/// Writes tweets.jsonl, beach.csv, kbrevis.csv, beaches.csv,
/// geo_registry.csv, county_polygons.json and truth.json into out_dir.
/// Throws on an infeasible spec (|rho| > 1, rho combined with distance
/// decay, rates outside their ranges).
SynthSummary generate(const SynthSpec& spec, const std::filesystem::path& out_dir);

}  // namespace redtide::synthkit
