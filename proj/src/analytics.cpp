#include "redtide/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace redtide {

const char* to_string(Metric m) { return m == Metric::count ? "count" : "sentiment"; }

const char* to_string(Condition c) {
    switch (c) {
        case Condition::dead_fish: return "dead_fish";
        case Condition::respiratory: return "respiratory";
        case Condition::kbrevis: return "kbrevis";
    }
    return "?";
}

std::optional<Metric> metric_from(const std::string& s) {
    if (s == "count") return Metric::count;
    if (s == "sentiment") return Metric::sentiment;
    return std::nullopt;
}

std::optional<Condition> condition_from(const std::string& s) {
    if (s == "dead_fish") return Condition::dead_fish;
    if (s == "respiratory") return Condition::respiratory;
    if (s == "kbrevis") return Condition::kbrevis;
    return std::nullopt;
}

namespace {

double metric_value(const PanelCell& cell, Metric m, bool per_capita) {
    switch (m) {
        case Metric::count: return per_capita ? cell.per_capita_count : cell.tweet_count;
        case Metric::sentiment:
            return per_capita ? cell.per_capita_sentiment : cell.sentiment_total;
    }
    return 0.0;
}

double condition_value(const PanelCell& cell, Condition c) {
    switch (c) {
        case Condition::dead_fish: return cell.dead_fish;
        case Condition::respiratory: return cell.respiratory;
        case Condition::kbrevis: return cell.kbrevis;
    }
    return 0.0;
}

}  // namespace

CorrelationResult panel_correlation(const Panel& joined, Metric metric,
                                    Condition condition, int shift,
                                    bool per_capita_metric) {
    if (condition == Condition::kbrevis && joined.level != GeoLevel::county &&
        joined.level != GeoLevel::region) {
        throw std::invalid_argument("kbrevis condition undefined below county level");
    }
    // Per-unit series indexed by bucket, then pooled after shifting.
    std::map<std::string, std::map<int, const PanelCell*>> by_unit;
    for (const auto& [key, cell] : joined.cells) {
        by_unit[key.first][key.second] = &cell;
    }
    std::vector<double> xs, ys;
    for (const auto& [unit, series] : by_unit) {
        for (const auto& [bucket, cell] : series) {
            const auto partner = series.find(bucket + shift);
            if (partner == series.end()) continue;  // boundary bucket
            xs.push_back(metric_value(*cell, metric, per_capita_metric));
            ys.push_back(condition_value(*partner->second, condition));
        }
    }
    CorrelationResult out;
    out.n = xs.size();
    out.r = stats::pearson(xs, ys);
    return out;
}

const GridEntry* CorrelationGrid::find(GeoLevel level, Frequency freq) const {
    for (const auto& e : entries) {
        if (e.level == level && e.freq == freq) return &e;
    }
    return nullptr;
}

CorrelationGrid correlation_grid(
    const std::map<std::pair<GeoLevel, Frequency>, Panel>& joined_panels, Metric metric,
    MatchFilter match, Condition condition, int shift, bool per_capita_metric) {
    CorrelationGrid grid;
    grid.metric = metric;
    grid.match = match;
    grid.condition = condition;
    grid.shift = shift;
    for (const auto& [key, panel] : joined_panels) {
        GridEntry e;
        e.level = key.first;
        e.freq = key.second;
        try {
            const auto res =
                panel_correlation(panel, metric, condition, shift, per_capita_metric);
            e.r = res.r;
            e.n = res.n;
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        grid.entries.push_back(std::move(e));
    }
    return grid;
}

std::map<int, std::vector<LatLon>> high_impact_sites(
    const std::vector<KBrevisSample>& samples, Date window_start, Date window_end,
    double threshold_cells_per_liter) {
    std::map<int, std::vector<LatLon>> out;
    for (const auto& s : samples) {
        if (s.date < window_start || s.date > window_end) continue;
        if (!(s.cells_per_liter > threshold_cells_per_liter)) continue;  // strict
        const int week = static_cast<int>((s.date - window_start).count()) / 7;
        out[week].push_back(s.location);
    }
    return out;
}

std::vector<DistanceRecord> distance_records(
    const Panel& city_weekly_panel, const std::map<int, std::vector<LatLon>>& sites,
    const GeoRegistry& registry, double close_upper_mi, double far_lower_mi) {
    std::vector<DistanceRecord> out;
    for (const auto& [key, cell] : city_weekly_panel.cells) {
        const auto week_sites = sites.find(key.second);
        if (week_sites == sites.end() || week_sites->second.empty()) continue;
        const GeoUnit* unit = registry.find(key.first);
        if (!unit) continue;
        double dmin = std::numeric_limits<double>::infinity();
        for (const auto& site : week_sites->second) {
            dmin = std::min(dmin, geodesic_miles(unit->centroid, site));
        }
        DistanceRecord rec;
        rec.unit_id = key.first;
        rec.bucket = key.second;
        rec.distance_miles = dmin;
        rec.per_capita_count = cell.per_capita_count;
        rec.bin = bin_distance(dmin, close_upper_mi, far_lower_mi);
        out.push_back(std::move(rec));
    }
    return out;
}

namespace {

std::vector<std::pair<double, double>> logged_pairs(
    const std::vector<DistanceRecord>& records, double log_epsilon) {
    std::vector<std::pair<double, double>> out;
    for (const auto& r : records) {
        if (log_epsilon > 0.0) {
            out.emplace_back(r.distance_miles, std::log(r.per_capita_count + log_epsilon));
        } else if (r.per_capita_count > 0.0) {
            out.emplace_back(r.distance_miles, std::log(r.per_capita_count));
        }
    }
    return out;
}

}  // namespace

RegressionFit distance_regression(const std::vector<DistanceRecord>& records,
                                  double log_epsilon) {
    const auto pairs = logged_pairs(records, log_epsilon);
    std::vector<double> xs, ys;
    xs.reserve(pairs.size());
    ys.reserve(pairs.size());
    for (const auto& [d, y] : pairs) {
        xs.push_back(d);
        ys.push_back(y);
    }
    const auto fit = stats::ols(xs, ys);
    return RegressionFit{fit.slope, fit.intercept, fit.r_squared, fit.p_value, fit.n};
}

std::vector<BinContrast> bin_contrasts(const std::vector<DistanceRecord>& records,
                                       double alpha, double log_epsilon) {
    std::vector<std::vector<double>> groups(3);
    for (const auto& [d, y] : logged_pairs(records, log_epsilon)) {
        groups[static_cast<int>(bin_distance(d))].push_back(y);
    }
    for (size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].size() < 2) {
            throw std::runtime_error(std::string("bin_contrasts: bin '") +
                                     to_string(static_cast<DistanceBin>(i)) +
                                     "' has fewer than 2 records");
        }
    }
    const auto contrasts = stats::tukey_contrasts(groups, alpha);
    std::vector<BinContrast> out;
    for (const auto& c : contrasts) {
        out.push_back({static_cast<DistanceBin>(c.group_a),
                       static_cast<DistanceBin>(c.group_b), c.diff, c.lower, c.upper});
    }
    return out;
}

RetweetDistanceResult retweet_fraction_by_distance(
    const std::vector<CleanedTweet>& tweets,
    const std::map<int, std::vector<LatLon>>& sites, Date window_start, Date window_end) {
    struct Counts {
        size_t total = 0;
        size_t retweets = 0;
    };
    std::map<std::tuple<int, double, double>, Counts> by_location;
    size_t corpus_total = 0, corpus_retweets = 0;
    for (const auto& ct : tweets) {
        ++corpus_total;
        corpus_retweets += ct.tweet.kind == TweetKind::retweet;
        if (!ct.tweet.coords) continue;
        if (ct.local_day < window_start || ct.local_day > window_end) continue;
        const int week = static_cast<int>((ct.local_day - window_start).count()) / 7;
        auto& c = by_location[{week, ct.tweet.coords->lat, ct.tweet.coords->lon}];
        ++c.total;
        c.retweets += ct.tweet.kind == TweetKind::retweet;
    }

    RetweetDistanceResult out;
    out.corpus_retweet_fraction =
        corpus_total == 0 ? 0.0
                          : static_cast<double>(corpus_retweets) /
                                static_cast<double>(corpus_total);

    std::vector<double> xs, ys;
    for (const auto& [key, counts] : by_location) {
        const auto& [week, lat, lon] = key;
        const auto week_sites = sites.find(week);
        if (week_sites == sites.end() || week_sites->second.empty()) continue;
        if (counts.total == 0) continue;
        double dmin = std::numeric_limits<double>::infinity();
        for (const auto& site : week_sites->second) {
            dmin = std::min(dmin, geodesic_miles(LatLon{lat, lon}, site));
        }
        RetweetPoint p;
        p.lat = lat;
        p.lon = lon;
        p.bucket = week;
        p.distance_miles = dmin;
        p.total = counts.total;
        p.fraction = static_cast<double>(counts.retweets) / static_cast<double>(counts.total);
        xs.push_back(p.distance_miles);
        ys.push_back(p.fraction);
        out.points.push_back(std::move(p));
    }
    if (xs.size() >= 3) {
        try {
            const auto fit = stats::ols(xs, ys);
            out.fit = RegressionFit{fit.slope, fit.intercept, fit.r_squared, fit.p_value,
                                    fit.n};
        } catch (const std::exception&) {
            out.fit = RegressionFit{};  // degenerate geometry; points still reported
        }
    }
    return out;
}

}  // namespace redtide
