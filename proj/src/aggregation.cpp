#include "redtide/aggregation.hpp"

#include <algorithm>
#include <stdexcept>

namespace redtide {

const char* to_string(Frequency f) {
    switch (f) {
        case Frequency::daily: return "daily";
        case Frequency::three_day: return "3day";
        case Frequency::weekly: return "weekly";
    }
    return "?";
}

const char* to_string(MatchFilter m) {
    return m == MatchFilter::explicit_only ? "explicit" : "all";
}

std::optional<Frequency> frequency_from(const std::string& s) {
    if (s == "daily") return Frequency::daily;
    if (s == "3day" || s == "three_day" || s == "3-day") return Frequency::three_day;
    if (s == "weekly") return Frequency::weekly;
    return std::nullopt;
}

std::optional<MatchFilter> match_filter_from(const std::string& s) {
    if (s == "explicit" || s == "explicit_only") return MatchFilter::explicit_only;
    if (s == "all") return MatchFilter::all;
    return std::nullopt;
}

std::optional<AccountFilter> account_filter_from(const std::string& s) {
    if (s == "everyone" || s == "all") return AccountFilter::everyone;
    if (s == "citizen" || s == "citizens") return AccountFilter::citizen;
    if (s == "media") return AccountFilter::media;
    return std::nullopt;
}

std::vector<TimeBucket> bucketize(Date start, Date end, Frequency freq) {
    if (start > end) throw std::runtime_error("bucketize: inverted window");
    const int len = static_cast<int>(freq);
    const int total_days = static_cast<int>((end - start).count()) + 1;
    std::vector<TimeBucket> out;
    for (int offset = 0, index = 0; offset < total_days; offset += len, ++index) {
        TimeBucket b;
        b.index = index;
        b.start = start + std::chrono::days{offset};
        b.length_days = std::min(len, total_days - offset);
        b.partial = b.length_days < len;
        out.push_back(b);
    }
    return out;
}

int Panel::bucket_of(Date day) const {
    if (day < window_start || day > window_end) return -1;
    return static_cast<int>((day - window_start).count()) / static_cast<int>(freq);
}

double Panel::total_tweet_count() const {
    double sum = 0.0;
    for (const auto& [key, cell] : cells) sum += cell.tweet_count;
    return sum;
}

namespace {

bool account_passes(AccountClass cls, AccountFilter filter) {
    switch (filter) {
        case AccountFilter::everyone: return true;
        case AccountFilter::citizen: return cls == AccountClass::citizen;
        case AccountFilter::media: return cls == AccountClass::media;
    }
    return false;
}

void fill_per_capita(Panel& panel, const GeoRegistry& registry, double scale) {
    for (auto& [key, cell] : panel.cells) {
        if (!registry.contains(key.first)) continue;
        cell.per_capita_count = per_capita(cell.tweet_count, key.first, registry, scale);
        cell.per_capita_sentiment =
            per_capita(cell.sentiment_total, key.first, registry, scale);
    }
}

double kbrevis_statistic(std::vector<double>& cells, int top_n,
                         AggregationOptions::KbrevisStat stat) {
    if (cells.empty()) return 0.0;
    std::sort(cells.begin(), cells.end(), std::greater<>());
    const size_t n = std::min<size_t>(top_n, cells.size());
    switch (stat) {
        case AggregationOptions::KbrevisStat::max:
            return cells.front();
        case AggregationOptions::KbrevisStat::sum: {
            double s = 0.0;
            for (size_t i = 0; i < n; ++i) s += cells[i];
            return s;
        }
        case AggregationOptions::KbrevisStat::mean: {
            double s = 0.0;
            for (size_t i = 0; i < n; ++i) s += cells[i];
            return s / static_cast<double>(n);
        }
    }
    return 0.0;
}

}  // namespace

TweetPanel aggregate_tweets(const std::vector<CleanedTweet>& tweets,
                            const GeoRegistry& registry, GeoLevel level, Frequency freq,
                            Date window_start, Date window_end, MatchFilter match,
                            AccountFilter account, const AggregationOptions& opt) {
    TweetPanel result;
    Panel& panel = result.panel;
    panel.level = level;
    panel.freq = freq;
    panel.match = match;
    panel.window_start = window_start;
    panel.window_end = window_end;
    panel.buckets = bucketize(window_start, window_end, freq);

    for (const auto& ct : tweets) {
        if (match == MatchFilter::explicit_only && ct.unit.source != GeoSource::place) {
            continue;
        }
        if (!account_passes(ct.tweet.account_class, account)) continue;
        const int bucket = panel.bucket_of(ct.local_day);
        if (bucket < 0) {
            result.unplaced.push_back({ct.tweet.id, ct.unit.unit_id, "outside panel window"});
            continue;
        }
        CreditVector credit;
        try {
            credit = credit_share(ct.unit.unit_id, registry, opt.shared_units);
        } catch (const std::exception& e) {
            result.unplaced.push_back({ct.tweet.id, ct.unit.unit_id, e.what()});
            continue;
        }
        for (const auto& [credited_unit, weight] : credit) {
            const auto target = registry.ancestor_at(credited_unit, level);
            if (!target) {
                result.unplaced.push_back(
                    {ct.tweet.id, credited_unit,
                     std::string("no ancestor at level ") + to_string(level)});
                continue;
            }
            PanelCell& cell = panel.cells[{*target, bucket}];
            cell.tweet_count += weight;
            cell.sentiment_total += weight * ct.sentiment;
            if (ct.tweet.kind == TweetKind::retweet) cell.retweet_count += weight;
            cell.has_tweets = true;
        }
    }
    fill_per_capita(panel, registry, opt.per_capita_scale);
    return result;
}

Panel aggregate_conditions(const std::vector<BeachReport>& reports,
                           const std::vector<KBrevisSample>& samples,
                           const std::vector<BeachLocation>& beach_locations,
                           const GeoRegistry& registry, GeoLevel level, Frequency freq,
                           Date window_start, Date window_end,
                           const AggregationOptions& opt) {
    Panel panel;
    panel.level = level;
    panel.freq = freq;
    panel.window_start = window_start;
    panel.window_end = window_end;
    panel.buckets = bucketize(window_start, window_end, freq);

    std::unordered_map<std::string, LatLon> beach_coords;
    for (const auto& b : beach_locations) beach_coords[b.beach_id] = b.location;

    const auto units = registry.at_level(level);
    for (const auto* u : units) {
        for (const auto& b : panel.buckets) {
            panel.cells[{u->id, b.index}].has_conditions = true;
        }
    }

    // Beach attachment per unit: county/region by hierarchy, city/zcta by
    // centroid radius (beaches without coordinates cannot attach there).
    const bool by_radius = level == GeoLevel::city || level == GeoLevel::zcta;
    struct Accum {
        double dead_sum = 0, resp_sum = 0;
        size_t n = 0;
    };
    std::map<std::pair<std::string, int>, Accum> accum;

    for (const auto& r : reports) {
        const int bucket = panel.bucket_of(r.date);
        if (bucket < 0) continue;
        if (by_radius) {
            const auto it = beach_coords.find(r.beach_id);
            if (it == beach_coords.end()) continue;
            for (const auto* u : units) {
                if (geodesic_miles(u->centroid, it->second) > opt.beach_radius_miles) continue;
                Accum& a = accum[{u->id, bucket}];
                a.dead_sum += r.dead_fish;
                a.resp_sum += r.respiratory;
                ++a.n;
            }
        } else {
            const auto target = registry.ancestor_at(r.county_id, level);
            if (!target) continue;
            Accum& a = accum[{*target, bucket}];
            a.dead_sum += r.dead_fish;
            a.resp_sum += r.respiratory;
            ++a.n;
        }
    }
    for (const auto& [key, a] : accum) {
        PanelCell& cell = panel.cells[key];
        cell.dead_fish = a.dead_sum / static_cast<double>(a.n);
        cell.respiratory = a.resp_sum / static_cast<double>(a.n);
        cell.condition_empty = false;
    }

    if (level == GeoLevel::county || level == GeoLevel::region) {
        std::map<std::pair<std::string, int>, std::vector<double>> kb;
        for (const auto& s : samples) {
            const int bucket = panel.bucket_of(s.date);
            if (bucket < 0) continue;
            const std::string county =
                assign_sample_to_county(s, registry, opt.sample_max_centroid_miles);
            if (county.empty()) continue;
            const auto target = registry.ancestor_at(county, level);
            if (!target) continue;
            kb[{*target, bucket}].push_back(s.cells_per_liter);
        }
        for (auto& [key, cells] : kb) {
            PanelCell& cell = panel.cells[key];
            cell.kbrevis = kbrevis_statistic(cells, opt.kbrevis_top_n, opt.kbrevis_stat);
            cell.kbrevis_defined = true;
        }
    }
    return panel;
}

Panel join_panels(const Panel& tweet_panel, const Panel& condition_panel) {
    if (tweet_panel.level != condition_panel.level ||
        tweet_panel.freq != condition_panel.freq ||
        tweet_panel.window_start != condition_panel.window_start ||
        tweet_panel.window_end != condition_panel.window_end) {
        throw std::runtime_error("join_panels: level/frequency/window mismatch");
    }
    Panel out = tweet_panel;
    for (const auto& [key, cond] : condition_panel.cells) {
        PanelCell& cell = out.cells[key];  // zero tweet side if absent
        cell.dead_fish = cond.dead_fish;
        cell.respiratory = cond.respiratory;
        cell.kbrevis = cond.kbrevis;
        cell.has_conditions = cond.has_conditions;
        cell.condition_empty = cond.condition_empty;
        cell.kbrevis_defined = cond.kbrevis_defined;
    }
    return out;
}

}  // namespace redtide
