#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "redtide/aggregation.hpp"
#include "redtide/stats.hpp"

namespace redtide {

enum class Metric { count, sentiment };
enum class Condition { dead_fish, respiratory, kbrevis };

const char* to_string(Metric m);
const char* to_string(Condition c);
std::optional<Metric> metric_from(const std::string& s);
std::optional<Condition> condition_from(const std::string& s);

struct CorrelationResult {
    double r = 0.0;
    size_t n = 0;
};

/// Pooled Pearson correlation over all (unit, bucket) cells of a joined
/// panel. `shift` pairs the metric at bucket t with the condition at
/// t + shift inside each unit's own series (+1 = lead, -1 = lag, 0 =
/// concurrent); buckets lacking a shifted partner drop out. Throws via
/// stats::pearson when fewer than 3 pairs remain or variance vanishes.
CorrelationResult panel_correlation(const Panel& joined, Metric metric,
                                    Condition condition, int shift = 0,
                                    bool per_capita_metric = true);

struct GridEntry {
    GeoLevel level;
    Frequency freq;
    std::optional<double> r;
    size_t n = 0;
    std::string error;  // set when r is missing
};

struct CorrelationGrid {
    Metric metric = Metric::count;
    MatchFilter match = MatchFilter::all;
    Condition condition = Condition::dead_fish;
    int shift = 0;
    std::vector<GridEntry> entries;

    const GridEntry* find(GeoLevel level, Frequency freq) const;
};

/// One pooled r per (level, frequency) cell; per-cell failures propagate
/// as missing entries carrying the reason.
CorrelationGrid correlation_grid(
    const std::map<std::pair<GeoLevel, Frequency>, Panel>& joined_panels, Metric metric,
    MatchFilter match, Condition condition, int shift = 0, bool per_capita_metric = true);

/// Sample locations whose cell count strictly exceeds the threshold,
/// keyed by weekly bucket index. Weeks with no qualifying site are absent.
std::map<int, std::vector<LatLon>> high_impact_sites(
    const std::vector<KBrevisSample>& samples, Date window_start, Date window_end,
    double threshold_cells_per_liter = 1e6);

struct DistanceRecord {
    std::string unit_id;
    int bucket = 0;
    double distance_miles = 0.0;
    double per_capita_count = 0.0;
    DistanceBin bin = DistanceBin::close;
};

/// City-week records for the distance analysis: distance is the minimum
/// geodesic distance from the city centroid to any of that week's
/// high-impact sites; zero-count city-weeks are excluded (their log is
/// undefined) unless log_epsilon > 0, in which case ln(x + eps) is used.
std::vector<DistanceRecord> distance_records(
    const Panel& city_weekly_panel, const std::map<int, std::vector<LatLon>>& sites,
    const GeoRegistry& registry, double close_upper_mi = 25.0, double far_lower_mi = 50.0);

struct RegressionFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double p_value = 1.0;
    size_t n = 0;
};

/// OLS of ln(per-capita count) on distance with a two-sided slope t test.
RegressionFit distance_regression(const std::vector<DistanceRecord>& records,
                                  double log_epsilon = 0.0);

struct BinContrast {
    DistanceBin bin_a;
    DistanceBin bin_b;
    double diff = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

/// Tukey pairwise CIs on mean logged per-capita counts across the three
/// distance bins.
std::vector<BinContrast> bin_contrasts(const std::vector<DistanceRecord>& records,
                                       double alpha = 0.05, double log_epsilon = 0.0);

struct RetweetPoint {
    double lat = 0.0;
    double lon = 0.0;
    int bucket = 0;
    double distance_miles = 0.0;
    double fraction = 0.0;  // retweets / total at this coordinate pair
    size_t total = 0;
};

struct RetweetDistanceResult {
    std::vector<RetweetPoint> points;
    RegressionFit fit;              // fraction on distance
    double corpus_retweet_fraction = 0.0;
};

/// Weekly per-coordinate retweet fractions against distance to the
/// nearest high-impact site. Only tweets carrying exact coordinates
/// participate; locations in weeks without sites are skipped.
RetweetDistanceResult retweet_fraction_by_distance(
    const std::vector<CleanedTweet>& tweets,
    const std::map<int, std::vector<LatLon>>& sites, Date window_start, Date window_end);

}  // namespace redtide
