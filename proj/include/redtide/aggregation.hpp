#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "redtide/cleaning.hpp"
#include "redtide/geospatial.hpp"
#include "redtide/parsers.hpp"
#include "redtide/registry.hpp"

namespace redtide {

enum class Frequency { daily = 1, three_day = 3, weekly = 7 };
enum class MatchFilter { explicit_only, all };
enum class AccountFilter { everyone, citizen, media };

const char* to_string(Frequency f);
const char* to_string(MatchFilter m);
std::optional<Frequency> frequency_from(const std::string& s);
std::optional<MatchFilter> match_filter_from(const std::string& s);
std::optional<AccountFilter> account_filter_from(const std::string& s);

struct TimeBucket {
    int index = 0;
    Date start{};
    int length_days = 0;  // < frequency length on the final partial bucket
    bool partial = false;
};

/// Consecutive buckets tiling [start, end] (inclusive), anchored at the
/// window start; the final partial bucket is kept and flagged.
std::vector<TimeBucket> bucketize(Date start, Date end, Frequency freq);

struct PanelCell {
    double tweet_count = 0.0;  // credit-shared, fractional
    double per_capita_count = 0.0;
    double sentiment_total = 0.0;
    double per_capita_sentiment = 0.0;
    double retweet_count = 0.0;
    double dead_fish = 0.0;
    double respiratory = 0.0;
    double kbrevis = 0.0;
    bool has_tweets = false;
    bool has_conditions = false;
    bool condition_empty = true;   // no beach reports fell in the bucket
    bool kbrevis_defined = false;  // county/region levels only
};

struct Panel {
    GeoLevel level = GeoLevel::county;
    Frequency freq = Frequency::weekly;
    MatchFilter match = MatchFilter::all;
    Date window_start{};
    Date window_end{};
    std::vector<TimeBucket> buckets;
    std::map<std::pair<std::string, int>, PanelCell> cells;  // sorted for stable output

    int bucket_of(Date day) const;  // -1 when outside the window
    double total_tweet_count() const;
};

struct AggregationOptions {
    double per_capita_scale = 100000.0;
    double beach_radius_miles = 10.0;
    double sample_max_centroid_miles = 30.0;
    int kbrevis_top_n = 5;
    enum class KbrevisStat { mean, sum, max };
    KbrevisStat kbrevis_stat = KbrevisStat::mean;
    SharedUnitMap shared_units;
};

struct UnplacedTweet {
    std::string tweet_id;
    std::string unit_id;
    std::string reason;
};

struct TweetPanel {
    Panel panel;
    std::vector<UnplacedTweet> unplaced;  // unresolvable at the requested level
};

/// Folds credit-shared tweet mass into (unit, bucket) cells at the
/// requested level; city/zcta attributions roll up to county/region as
/// needed. Tweets that cannot be expressed at the level (e.g. a county
/// attribution in a city panel) are reported, never silently dropped.
TweetPanel aggregate_tweets(const std::vector<CleanedTweet>& tweets,
                            const GeoRegistry& registry, GeoLevel level, Frequency freq,
                            Date window_start, Date window_end, MatchFilter match,
                            AccountFilter account, const AggregationOptions& opt);

/// Dense condition panel over all units of the level: county dead-fish /
/// respiratory cells average that county's beach-day reports; city/zcta
/// cells average beaches within the radius (zero otherwise); K. brevis is
/// the mean of the top-N cell counts per county/region bucket and is
/// undefined below county level.
Panel aggregate_conditions(const std::vector<BeachReport>& reports,
                           const std::vector<KBrevisSample>& samples,
                           const std::vector<BeachLocation>& beach_locations,
                           const GeoRegistry& registry, GeoLevel level, Frequency freq,
                           Date window_start, Date window_end,
                           const AggregationOptions& opt);

/// Full outer join on (unit, bucket); a side with no cell contributes
/// zeros and keeps its has_* flag false. Levels and frequencies must
/// match.
Panel join_panels(const Panel& tweet_panel, const Panel& condition_panel);

}  // namespace redtide
