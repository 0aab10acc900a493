#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "redtide/analytics.hpp"
#include "redtide/rng.hpp"
#include "redtide/stats.hpp"

using namespace redtide;

namespace {

const Date kStart = *parse_date("2018-05-15");

Panel make_panel(GeoLevel level, Frequency freq, int buckets) {
    Panel p;
    p.level = level;
    p.freq = freq;
    p.window_start = kStart;
    p.window_end = kStart + std::chrono::days{buckets * static_cast<int>(freq) - 1};
    p.buckets = bucketize(p.window_start, p.window_end, freq);
    return p;
}

GeoRegistry line_registry(int n_cities) {
    std::vector<GeoUnit> units{
        {"r", GeoLevel::region, "R", "", "", 1000000L * n_cities, {26.0, -82.3}, {}},
    };
    for (int i = 0; i < n_cities; ++i) {
        const std::string cid = "k" + std::to_string(i);
        units.push_back({cid, GeoLevel::county, "K" + std::to_string(i), "r", "", 1000000,
                         {26.0 + 0.2 * i, -82.3}, {}});
        units.push_back({cid + "_city", GeoLevel::city, "City " + std::to_string(i), cid,
                         "", 1000000, {26.0 + 0.2 * i, -82.3}, {}});
    }
    return GeoRegistry(std::move(units));
}

}  // namespace

TEST_CASE("panel_correlation: identity coupling gives r = 1") {
    auto panel = make_panel(GeoLevel::county, Frequency::weekly, 10);
    Rng rng(41);
    for (int u = 0; u < 4; ++u) {
        for (int b = 0; b < 10; ++b) {
            PanelCell cell;
            cell.per_capita_count = rng.next_unit() * 5.0;
            cell.dead_fish = cell.per_capita_count;  // identical series
            panel.cells[{"u" + std::to_string(u), b}] = cell;
        }
    }
    const auto res = panel_correlation(panel, Metric::count, Condition::dead_fish, 0);
    CHECK(res.r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.n == 40);
}

TEST_CASE("panel_correlation shift pairs the metric with the shifted condition") {
    auto panel = make_panel(GeoLevel::county, Frequency::three_day, 12);
    Rng rng(42);
    // metric equals the NEXT bucket's condition: a constructed lead of +1
    std::vector<double> series(13);
    for (auto& v : series) v = rng.next_unit();
    for (int b = 0; b < 12; ++b) {
        PanelCell cell;
        cell.per_capita_count = series[b + 1];
        cell.dead_fish = series[b];
        panel.cells[{"only", b}] = cell;
    }
    const auto lead = panel_correlation(panel, Metric::count, Condition::dead_fish, +1);
    CHECK(lead.r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(lead.n == 11);  // boundary bucket dropped

    const auto lag = panel_correlation(panel, Metric::count, Condition::dead_fish, -1);
    CHECK(lag.n == 11);
    CHECK(lag.r < 1.0);
}

TEST_CASE("panel_correlation(shift=0) equals pearson on the flattened vectors") {
    auto panel = make_panel(GeoLevel::county, Frequency::weekly, 8);
    Rng rng(43);
    std::vector<double> xs, ys;
    for (int u = 0; u < 5; ++u) {
        for (int b = 0; b < 8; ++b) {
            PanelCell cell;
            cell.per_capita_count = rng.next_normal();
            cell.dead_fish = 0.5 * cell.per_capita_count + rng.next_normal();
            panel.cells[{"u" + std::to_string(u), b}] = cell;
            xs.push_back(cell.per_capita_count);
            ys.push_back(cell.dead_fish);
        }
    }
    const auto res = panel_correlation(panel, Metric::count, Condition::dead_fish, 0);
    CHECK(res.r == doctest::Approx(stats::pearson(xs, ys)).epsilon(1e-12));
}

TEST_CASE("panel_correlation rejects kbrevis below county level") {
    auto panel = make_panel(GeoLevel::city, Frequency::weekly, 5);
    CHECK_THROWS_AS(panel_correlation(panel, Metric::count, Condition::kbrevis, 0),
                    std::invalid_argument);
}

TEST_CASE("panel_correlation needs at least 3 surviving pairs") {
    auto panel = make_panel(GeoLevel::county, Frequency::weekly, 3);
    for (int b = 0; b < 3; ++b) {
        PanelCell cell;
        cell.per_capita_count = b;
        cell.dead_fish = b;
        panel.cells[{"u", b}] = cell;
    }
    // shifting a 3-bucket series leaves 2 pairs
    CHECK_THROWS_AS(panel_correlation(panel, Metric::count, Condition::dead_fish, +1),
                    std::invalid_argument);
    CHECK_NOTHROW(panel_correlation(panel, Metric::count, Condition::dead_fish, 0));
}

TEST_CASE("independent series stay near zero correlation") {
    // |r| < 0.1 at n = 2000 in at least 95% of seeds
    int small = 0;
    const int seeds = 40;
    for (int seed = 0; seed < seeds; ++seed) {
        Rng rng(1000 + seed);
        auto panel = make_panel(GeoLevel::county, Frequency::weekly, 200);
        for (int u = 0; u < 10; ++u) {
            for (int b = 0; b < 200; ++b) {
                PanelCell cell;
                cell.per_capita_count = rng.next_normal();
                cell.dead_fish = rng.next_normal();  // independent
                panel.cells[{"u" + std::to_string(u), b}] = cell;
            }
        }
        const auto res = panel_correlation(panel, Metric::count, Condition::dead_fish, 0);
        REQUIRE(res.n == 2000);
        if (std::fabs(res.r) < 0.1) ++small;
    }
    CHECK(small >= static_cast<int>(0.95 * seeds));
}

TEST_CASE("correlation_grid: identity-coupled data fills every entry with 1") {
    std::map<std::pair<GeoLevel, Frequency>, Panel> panels;
    Rng rng(44);
    for (const auto level : {GeoLevel::region, GeoLevel::county}) {
        for (const auto freq : {Frequency::weekly, Frequency::daily}) {
            auto panel = make_panel(level, freq, 12);
            for (int b = 0; b < 12; ++b) {
                PanelCell cell;
                cell.per_capita_count = rng.next_unit();
                cell.dead_fish = 2.0 * cell.per_capita_count;
                panel.cells[{"u", b}] = cell;
            }
            panels[{level, freq}] = std::move(panel);
        }
    }
    const auto grid =
        correlation_grid(panels, Metric::count, MatchFilter::all, Condition::dead_fish);
    REQUIRE(grid.entries.size() == 4);
    for (const auto& e : grid.entries) {
        REQUIRE(e.r.has_value());
        CHECK(*e.r == doctest::Approx(1.0).epsilon(1e-12));
    }

    // a failing cell propagates its reason instead of vanishing
    auto broken = make_panel(GeoLevel::zcta, Frequency::weekly, 5);
    PanelCell flat;
    flat.per_capita_count = 1.0;
    flat.dead_fish = 1.0;
    for (int b = 0; b < 5; ++b) broken.cells[{"z", b}] = flat;
    panels[{GeoLevel::zcta, Frequency::weekly}] = broken;
    const auto grid2 =
        correlation_grid(panels, Metric::count, MatchFilter::all, Condition::dead_fish);
    const auto* entry = grid2.find(GeoLevel::zcta, Frequency::weekly);
    REQUIRE(entry);
    CHECK(!entry->r.has_value());
    CHECK(!entry->error.empty());
}

TEST_CASE("high_impact_sites honours the strict threshold per week") {
    std::vector<KBrevisSample> samples;
    auto add = [&](const std::string& id, int day, double cells) {
        KBrevisSample s;
        s.sample_id = id;
        s.date = kStart + std::chrono::days{day};
        s.location = {27.0, -82.5};
        s.cells_per_liter = cells;
        samples.push_back(s);
    };
    add("below", 0, 9e5);
    add("above", 7, 1.2e6);
    add("exact", 14, 1e6);  // strictly greater required

    const auto sites = high_impact_sites(samples, kStart, kStart + std::chrono::days{27});
    CHECK(sites.count(0) == 0);
    REQUIRE(sites.count(1) == 1);
    CHECK(sites.at(1).size() == 1);
    CHECK(sites.count(2) == 0);
}

TEST_CASE("distance regression recovers a planted exact exponential") {
    const auto registry = line_registry(10);
    auto panel = make_panel(GeoLevel::city, Frequency::weekly, 1);
    const LatLon site = registry.at("k0_city").centroid;
    std::map<int, std::vector<LatLon>> sites{{0, {site}}};

    for (int i = 0; i < 10; ++i) {
        const std::string cid = "k" + std::to_string(i) + "_city";
        const double d = geodesic_miles(registry.at(cid).centroid, site);
        PanelCell cell;
        cell.per_capita_count = std::exp(-0.05 * d);
        panel.cells[{cid, 0}] = cell;
    }
    const auto records = distance_records(panel, sites, registry);
    REQUIRE(records.size() == 10);
    const auto fit = distance_regression(records);
    CHECK(fit.slope == doctest::Approx(-0.05).epsilon(1e-9));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.n == 10);

    SUBCASE("zero-count records are excluded from the log fit") {
        panel.cells[{"k9_city", 0}].per_capita_count = 0.0;
        const auto with_zero = distance_records(panel, sites, registry);
        const auto fit2 = distance_regression(with_zero);
        CHECK(fit2.n == 9);
    }

    SUBCASE("epsilon mode keeps zero records") {
        panel.cells[{"k9_city", 0}].per_capita_count = 0.0;
        const auto with_zero = distance_records(panel, sites, registry);
        const auto fit3 = distance_regression(with_zero, 1e-6);
        CHECK(fit3.n == 10);
    }
}

TEST_CASE("distance regression p-values are uniform under a permutation null") {
    // Kolmogorov-Smirnov check against U(0,1) at the 1% critical value.
    Rng rng(45);
    const int n = 40, perms = 200;
    std::vector<double> d(n), y(n);
    for (int i = 0; i < n; ++i) {
        d[i] = rng.next_unit() * 80.0;
        y[i] = rng.next_normal();  // independent of distance
    }
    std::vector<double> pvalues;
    std::vector<double> yperm = y;
    for (int p = 0; p < perms; ++p) {
        for (int i = n - 1; i > 0; --i) {
            std::swap(yperm[i], yperm[rng.next_below(i + 1)]);
        }
        std::vector<DistanceRecord> records;
        for (int i = 0; i < n; ++i) {
            DistanceRecord r;
            r.distance_miles = d[i];
            r.per_capita_count = std::exp(yperm[i]);
            records.push_back(r);
        }
        pvalues.push_back(distance_regression(records).p_value);
    }
    std::sort(pvalues.begin(), pvalues.end());
    double ks = 0.0;
    for (int i = 0; i < perms; ++i) {
        const double empirical_hi = static_cast<double>(i + 1) / perms;
        const double empirical_lo = static_cast<double>(i) / perms;
        ks = std::max({ks, std::fabs(empirical_hi - pvalues[i]),
                       std::fabs(pvalues[i] - empirical_lo)});
    }
    CHECK(ks < 1.63 / std::sqrt(static_cast<double>(perms)));
}

TEST_CASE("bin_contrasts covers planted differences") {
    Rng rng(46);
    std::vector<DistanceRecord> records;
    // close ~ exp(0), medium ~ exp(-1), far ~ exp(-2), sigma 0.5, n=50 each
    const double bin_distance_values[3] = {10.0, 35.0, 70.0};
    const double bin_means[3] = {0.0, -1.0, -2.0};
    for (int g = 0; g < 3; ++g) {
        for (int i = 0; i < 50; ++i) {
            DistanceRecord r;
            r.distance_miles = bin_distance_values[g];
            r.per_capita_count = std::exp(bin_means[g] + 0.5 * rng.next_normal());
            r.bin = static_cast<DistanceBin>(g);
            records.push_back(r);
        }
    }
    const auto contrasts = bin_contrasts(records, 0.05);
    REQUIRE(contrasts.size() == 3);
    // medium - close is contrast (close, medium) negated; find it
    const auto& cm = contrasts[0];  // (close, medium): diff = mean_c - mean_m ~ +1
    CHECK(cm.bin_a == DistanceBin::close);
    CHECK(cm.bin_b == DistanceBin::medium);
    CHECK(cm.lower <= 1.0);
    CHECK(1.0 <= cm.upper);

    SUBCASE("a bin with fewer than two records is an error") {
        std::vector<DistanceRecord> few(records.begin(), records.begin() + 60);
        CHECK_THROWS_AS(bin_contrasts(few, 0.05), std::runtime_error);
    }
}

TEST_CASE("retweet fractions by coordinate pair and distance") {
    std::map<int, std::vector<LatLon>> sites{{0, {{26.0, -82.3}}}};
    std::vector<CleanedTweet> tweets;
    auto add = [&](double lat, double lon, TweetKind kind) {
        CleanedTweet ct;
        ct.tweet.id = std::to_string(tweets.size());
        ct.tweet.kind = kind;
        ct.tweet.coords = LatLon{lat, lon};
        ct.local_day = kStart + std::chrono::days{2};
        tweets.push_back(ct);
    };
    SUBCASE("all retweets give fraction 1.0") {
        for (int i = 0; i < 5; ++i) add(26.5, -82.3, TweetKind::retweet);
        const auto res = retweet_fraction_by_distance(tweets, sites, kStart,
                                                      kStart + std::chrono::days{6});
        REQUIRE(res.points.size() == 1);
        CHECK(res.points[0].fraction == 1.0);
        CHECK(res.corpus_retweet_fraction == 1.0);
    }
    SUBCASE("planted increasing fraction recovers a positive slope") {
        // near pod: 1 of 5 retweets; mid pod: 3 of 5; far pod: 5 of 5
        for (int i = 0; i < 5; ++i) add(26.1, -82.3, i < 1 ? TweetKind::retweet : TweetKind::original);
        for (int i = 0; i < 5; ++i) add(26.6, -82.3, i < 3 ? TweetKind::retweet : TweetKind::original);
        for (int i = 0; i < 5; ++i) add(27.2, -82.3, TweetKind::retweet);
        const auto res = retweet_fraction_by_distance(tweets, sites, kStart,
                                                      kStart + std::chrono::days{6});
        REQUIRE(res.points.size() == 3);
        CHECK(res.fit.slope > 0.0);
        CHECK(res.corpus_retweet_fraction == doctest::Approx(9.0 / 15.0));
    }
}
