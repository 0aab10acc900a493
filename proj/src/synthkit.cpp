#include "redtide/synthkit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "redtide/geospatial.hpp"
#include "redtide/io_util.hpp"
#include "redtide/rng.hpp"

namespace redtide::synthkit {

using nlohmann::json;

namespace {

struct CountyState {
    SynthCounty spec;
    std::vector<LatLon> pods;     // fixed coordinate pads for tweet coords
    std::vector<LatLon> beaches;  // beach locations
};

void validate(const SynthSpec& spec) {
    if (spec.counties.empty()) throw std::runtime_error("synth: no counties");
    if (spec.window_start > spec.window_end) throw std::runtime_error("synth: inverted window");
    if (std::fabs(spec.coupling_rho) > 1.0) {
        throw std::runtime_error("synth: coupling_rho outside [-1, 1]");
    }
    if (spec.distance_decay < 0.0) throw std::runtime_error("synth: negative distance_decay");
    if (spec.coupling_rho != 0.0 && spec.distance_decay > 0.0) {
        throw std::runtime_error(
            "synth: infeasible spec: distance decay adds count variance uncorrelated "
            "with conditions, so the planted rho cannot be attained; use separate specs");
    }
    if (spec.political_noise_rate < 0.0 || spec.political_noise_rate >= 1.0) {
        throw std::runtime_error("synth: political_noise_rate outside [0, 1)");
    }
    if (spec.per_capita_rate <= 0.0) throw std::runtime_error("synth: per_capita_rate <= 0");
    if (spec.beaches_per_county < 1) throw std::runtime_error("synth: need >= 1 beach per county");
    for (const auto& c : spec.counties) {
        if (c.population <= 0) throw std::runtime_error("synth: county without population");
    }
}

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

// Integer reports whose bucket mean is round(target * n) / n, spread as
// evenly as possible: quantization error <= 1/(2n) with no sampling noise.
std::vector<int> spread_reports(double target, int n, int max_value) {
    const long long total =
        std::llround(clamp(target, 0.0, double(max_value)) * n);
    const int base = static_cast<int>(total / n);
    const int rem = static_cast<int>(total % n);
    std::vector<int> out(n, base);
    for (int i = 0; i < rem; ++i) out[i] += 1;
    for (auto& v : out) v = std::min(v, max_value);
    return out;
}

std::string pad_id(const char* prefix, size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%08zu", prefix, n);
    return buf;
}

const char* kPositiveTemplates[] = {
    "no signs of red tide at %s beach today",
    "red tide is gone from %s, water looks great",
    "good news, no more red tide near %s",
};
const char* kNegativeTemplates[] = {
    "dead fish everywhere at %s, red tide is bad",
    "red tide smell at %s is horrible, eyes burning",
    "the red tide hit %s hard, water is discolored...",
    "is the red tide really bad at %s today?",
};
const char* kNeutralTemplates[] = {
    "red tide update for %s this morning",
    "checking redtide conditions near %s",
};
const char* kPoliticalTemplates[] = {
    "red tide rick is at it again #vote",
    "the red tide party rally is downtown tonight",
};

std::string fill_template(const char* tpl, const std::string& name) {
    std::string out;
    for (const char* p = tpl; *p; ++p) {
        if (p[0] == '%' && p[1] == 's') {
            out += name;
            ++p;
        } else {
            out.push_back(*p);
        }
    }
    return out;
}

}  // namespace

SynthSpec load_synth_spec(const std::filesystem::path& json_path) {
    const json j = json::parse(read_file(json_path));
    SynthSpec spec;
    spec.seed = j.value("seed", 1ULL);
    const auto& window = j.at("window");
    const auto start = parse_date(window.at("start").get<std::string>());
    const auto end = parse_date(window.at("end").get<std::string>());
    if (!start || !end) throw std::runtime_error("synth spec: bad window dates");
    spec.window_start = *start;
    spec.window_end = *end;
    spec.coupling_rho = j.value("coupling_rho", 0.0);
    spec.distance_decay = j.value("distance_decay", 0.0);
    spec.retweet_base = j.value("retweet_base", 0.3);
    spec.retweet_distance_slope = j.value("retweet_distance_slope", 0.0);
    spec.political_noise_rate = j.value("political_noise_rate", 0.0);
    spec.per_capita_rate = j.value("per_capita_rate", 5.0);
    spec.noise_amplitude = j.value("noise_amplitude", 0.35);
    spec.condition_amplitude = j.value("condition_amplitude", 0.35);
    spec.explicit_fraction = j.value("explicit_fraction", 0.7);
    spec.beaches_per_county = j.value("beaches_per_county", 3);
    spec.samples_per_county_week = j.value("samples_per_county_week", 3);
    spec.deterministic_multiplier = j.value("deterministic_multiplier", 3);
    spec.emit_cities = j.value("emit_cities", false);
    spec.emit_impact_sites = j.value("emit_impact_sites", true);
    spec.tz_offset_hours = j.value("tz_offset_hours", -5);
    spec.polygon_half_deg = j.value("polygon_half_deg", 0.3);
    for (const auto& c : j.at("counties")) {
        SynthCounty county;
        county.id = c.at("id").get<std::string>();
        county.name = c.value("name", county.id);
        county.population = c.at("population").get<long long>();
        county.centroid = LatLon{c.at("centroid_lat").get<double>(),
                                 c.at("centroid_lon").get<double>()};
        spec.counties.push_back(std::move(county));
    }
    return spec;
}

SynthSpec make_line_spec(uint64_t seed, int n_counties, int weeks) {
    SynthSpec spec;
    spec.seed = seed;
    spec.window_start = *parse_date("2018-05-15");
    spec.window_end = spec.window_start + std::chrono::days{weeks * 7 - 1};
    for (int i = 0; i < n_counties; ++i) {
        SynthCounty c;
        c.id = pad_id("c", i);
        c.name = "County " + std::to_string(i);
        c.population = 500000;
        c.centroid = LatLon{26.0 + i * 1.0, -82.3};
        spec.counties.push_back(std::move(c));
    }
    return spec;
}

SynthSummary generate(const SynthSpec& spec, const std::filesystem::path& out_dir) {
    validate(spec);
    Rng rng(spec.seed);
    std::filesystem::create_directories(out_dir);

    const int total_days = static_cast<int>((spec.window_end - spec.window_start).count()) + 1;
    const int weeks = (total_days + 6) / 7;
    const bool deterministic = std::fabs(spec.coupling_rho) == 1.0;
    const double rho = spec.coupling_rho;

    std::vector<CountyState> counties;
    for (const auto& c : spec.counties) {
        CountyState st;
        st.spec = c;
        st.pods = {c.centroid,
                   LatLon{c.centroid.lat + 0.03, c.centroid.lon + 0.02},
                   LatLon{c.centroid.lat - 0.02, c.centroid.lon + 0.04}};
        for (int b = 0; b < spec.beaches_per_county; ++b) {
            st.beaches.push_back(LatLon{c.centroid.lat + 0.02 * b, c.centroid.lon - 0.01});
        }
        counties.push_back(std::move(st));
    }

    // --- registry ---------------------------------------------------------
    long long region_pop = 0;
    double lat_sum = 0, lon_sum = 0;
    for (const auto& c : spec.counties) {
        region_pop += c.population;
        lat_sum += c.centroid.lat;
        lon_sum += c.centroid.lon;
    }
    std::ostringstream registry;
    registry << "id,level,name,parent,metro_group,population,centroid_lat,centroid_lon\n";
    registry << "region_synth,region,Synthetic Region,,," << region_pop << ","
             << format_double(lat_sum / spec.counties.size()) << ","
             << format_double(lon_sum / spec.counties.size()) << "\n";
    for (const auto& c : spec.counties) {
        registry << c.id << ",county," << c.name << ",region_synth,," << c.population << ","
                 << format_double(c.centroid.lat) << "," << format_double(c.centroid.lon)
                 << "\n";
        if (spec.emit_cities) {
            registry << c.id << "_city,city," << c.name << " City," << c.id << "," << c.id
                     << "_metro," << c.population << "," << format_double(c.centroid.lat)
                     << "," << format_double(c.centroid.lon) << "\n";
            registry << c.id << "_zcta,zcta," << c.name << " ZCTA," << c.id << "_city,"
                     << c.id << "_metro," << c.population << ","
                     << format_double(c.centroid.lat) << ","
                     << format_double(c.centroid.lon) << "\n";
        }
    }
    atomic_write(out_dir / "geo_registry.csv",
                 [&](std::ostream& out) { out << registry.str(); });

    json polygons = json::object();
    polygons["features"] = json::array();
    for (const auto& c : spec.counties) {
        const double h = spec.polygon_half_deg;
        json feature;
        feature["unit"] = c.id;
        feature["ring"] = json::array();
        const double lat = c.centroid.lat, lon = c.centroid.lon;
        for (const auto& [dlat, dlon] :
             std::vector<std::pair<double, double>>{
                 {-h, -h}, {-h, h}, {h, h}, {h, -h}, {-h, -h}}) {
            feature["ring"].push_back({lon + dlon, lat + dlat});  // geojson order
        }
        polygons["features"].push_back(std::move(feature));
    }
    atomic_write(out_dir / "county_polygons.json",
                 [&](std::ostream& out) { out << polygons.dump(2) << "\n"; });

    std::ostringstream beaches_csv;
    beaches_csv << "beach_id,lat,lon\n";
    for (const auto& st : counties) {
        for (size_t b = 0; b < st.beaches.size(); ++b) {
            beaches_csv << st.spec.id << "_b" << b << ","
                        << format_double(st.beaches[b].lat) << ","
                        << format_double(st.beaches[b].lon) << "\n";
        }
    }
    atomic_write(out_dir / "beaches.csv",
                 [&](std::ostream& out) { out << beaches_csv.str(); });

    // --- coupled condition + tweet generation ------------------------------
    SynthSummary summary;
    summary.weeks = weeks;
    std::ostringstream beach_csv, kbrevis_csv, tweets;
    beach_csv << "beach_id,county_id,date,dead_fish,respiratory\n";
    kbrevis_csv << "sample_id,date,lat,lon,cells_per_liter\n";

    size_t tweet_seq = 0, sample_seq = 0;

    for (int w = 0; w < weeks; ++w) {
        const Date week_start = spec.window_start + std::chrono::days{w * 7};
        const int bucket_days =
            std::min(7, total_days - w * 7);

        // One high-impact site per week near the first county.
        LatLon site = counties.front().spec.centroid;
        if (spec.emit_impact_sites) {
            site.lat += (rng.next_unit() - 0.5) * 0.1;
            site.lon += (rng.next_unit() - 0.5) * 0.1;
            kbrevis_csv << pad_id("s", sample_seq++) << "," << format_date(week_start) << ","
                        << format_double(site.lat) << "," << format_double(site.lon) << ","
                        << format_double(2.0e6 + rng.next_unit() * 1.0e6) << "\n";
            ++summary.kbrevis_rows;
        }

        for (const auto& st : counties) {
            const double z1 = rng.next_normal();
            const double eps = rng.next_normal();
            const double z2 = deterministic
                                  ? z1
                                  : rho * z1 + std::sqrt(1.0 - rho * rho) * eps;

            const double mu_dead =
                clamp(1.0 + spec.condition_amplitude * z1, 0.0, double(kDeadFishMax));
            const double mu_resp =
                clamp(1.5 + 1.5 * spec.condition_amplitude * z1, 0.0, double(kRespiratoryMax));

            // Per beach-day integer reports; slot order (day, beach).
            const int slots = bucket_days * spec.beaches_per_county;
            const auto dead_reports = spread_reports(mu_dead, slots, kDeadFishMax);
            const auto resp_reports = spread_reports(mu_resp, slots, kRespiratoryMax);
            std::vector<int> daily_dead_sum(bucket_days, 0);
            for (int d = 0; d < bucket_days; ++d) {
                for (int b = 0; b < spec.beaches_per_county; ++b) {
                    const int slot = d * spec.beaches_per_county + b;
                    beach_csv << st.spec.id << "_b" << b << "," << st.spec.id << ","
                              << format_date(week_start + std::chrono::days{d}) << ","
                              << dead_reports[slot] << "," << resp_reports[slot] << "\n";
                    daily_dead_sum[d] += dead_reports[slot];
                    ++summary.beach_rows;
                }
            }

            // Background water samples, capped below the impact threshold.
            for (int s = 0; s < spec.samples_per_county_week; ++s) {
                const LatLon loc{st.spec.centroid.lat + (rng.next_unit() - 0.5) * 0.2,
                                 st.spec.centroid.lon + (rng.next_unit() - 0.5) * 0.2};
                const double cells =
                    std::min(9.0e5, mu_dead * 4.0e5 * (0.5 + rng.next_unit()));
                kbrevis_csv << pad_id("s", sample_seq++) << ","
                            << format_date(week_start + std::chrono::days{static_cast<int>(
                                               rng.next_below(bucket_days))})
                            << "," << format_double(loc.lat) << "," << format_double(loc.lon)
                            << "," << format_double(cells) << "\n";
                ++summary.kbrevis_rows;
            }

            // Tweet counts per day of this bucket.
            const double d_site = geodesic_miles(st.spec.centroid, site);
            std::vector<long long> daily_counts(bucket_days, 0);
            if (deterministic) {
                for (int d = 0; d < bucket_days; ++d) {
                    const long long s = daily_dead_sum[d];
                    daily_counts[d] = spec.deterministic_multiplier *
                                      (rho > 0 ? s
                                               : 2LL * spec.beaches_per_county - s);
                }
            } else {
                const double expected = spec.per_capita_rate * st.spec.population / 1e5 *
                                        (1.0 + spec.noise_amplitude * z2) *
                                        (bucket_days / 7.0) *
                                        std::exp(-spec.distance_decay * d_site);
                const long long c = std::max(0LL, std::llround(expected));
                for (long long i = 0; i < c; ++i) {
                    daily_counts[rng.next_below(bucket_days)] += 1;
                }
            }

            for (int d = 0; d < bucket_days; ++d) {
                const Date day = week_start + std::chrono::days{d};
                for (long long i = 0; i < daily_counts[d]; ++i) {
                    const size_t pod = rng.next_below(st.pods.size());
                    const LatLon coords = st.pods[pod];
                    const double pod_dist = geodesic_miles(coords, site);
                    const bool retweet =
                        rng.next_unit() <
                        clamp(spec.retweet_base + spec.retweet_distance_slope * pod_dist,
                              0.02, 0.98);
                    const bool reply = !retweet && rng.next_unit() < 0.1;
                    const bool media = rng.next_unit() < 0.05;
                    const bool place = rng.next_unit() < spec.explicit_fraction;
                    const long sec = 21600 + static_cast<long>(rng.next_below(50400));
                    const UtcSeconds ts =
                        UtcSeconds{std::chrono::duration_cast<std::chrono::seconds>(
                            day.time_since_epoch())} +
                        std::chrono::seconds{sec - spec.tz_offset_hours * 3600L};

                    const char* tpl = nullptr;
                    if (mu_dead > 1.2) {
                        tpl = kNegativeTemplates[rng.next_below(4)];
                    } else if (mu_dead < 0.8) {
                        tpl = kPositiveTemplates[rng.next_below(3)];
                    } else {
                        tpl = kNeutralTemplates[rng.next_below(2)];
                    }
                    const std::string unit_ref =
                        spec.emit_cities ? st.spec.id + "_zcta" : st.spec.id;

                    json jt;
                    jt["id"] = pad_id("t", tweet_seq++);
                    jt["created_at"] = format_iso8601(ts);
                    jt["text"] = fill_template(tpl, st.spec.name);
                    jt["kind"] = retweet ? "retweet" : (reply ? "reply" : "original");
                    jt["verified"] = media;
                    if (place) jt["place_unit"] = unit_ref;
                    else jt["profile_label"] = unit_ref;
                    jt["lat"] = std::round(coords.lat * 1e4) / 1e4;
                    jt["lon"] = std::round(coords.lon * 1e4) / 1e4;
                    tweets << jt.dump() << "\n";
                    ++summary.regular_tweets;

                    if (spec.political_noise_rate > 0.0 &&
                        rng.next_unit() <
                            spec.political_noise_rate / (1.0 - spec.political_noise_rate)) {
                        json jp;
                        jp["id"] = pad_id("t", tweet_seq++);
                        jp["created_at"] = format_iso8601(ts);
                        jp["text"] = kPoliticalTemplates[rng.next_below(2)];
                        jp["kind"] = "original";
                        jp["verified"] = false;
                        jp["profile_label"] = unit_ref;
                        tweets << jp.dump() << "\n";
                        ++summary.political_tweets;
                    }
                }
            }
        }
    }

    atomic_write(out_dir / "beach.csv", [&](std::ostream& out) { out << beach_csv.str(); });
    atomic_write(out_dir / "kbrevis.csv",
                 [&](std::ostream& out) { out << kbrevis_csv.str(); });
    atomic_write(out_dir / "tweets.jsonl", [&](std::ostream& out) { out << tweets.str(); });

    json truth;
    truth["seed"] = spec.seed;
    truth["window"] = {{"start", format_date(spec.window_start)},
                       {"end", format_date(spec.window_end)}};
    truth["coupling_rho"] = spec.coupling_rho;
    truth["distance_decay"] = spec.distance_decay;
    truth["retweet_base"] = spec.retweet_base;
    truth["retweet_distance_slope"] = spec.retweet_distance_slope;
    truth["political_noise_rate"] = spec.political_noise_rate;
    truth["per_capita_rate"] = spec.per_capita_rate;
    truth["noise_amplitude"] = spec.noise_amplitude;
    truth["condition_amplitude"] = spec.condition_amplitude;
    truth["counties"] = spec.counties.size();
    truth["weeks"] = weeks;
    truth["regular_tweets"] = summary.regular_tweets;
    truth["political_tweets"] = summary.political_tweets;
    truth["tz_offset_hours"] = spec.tz_offset_hours;
    atomic_write(out_dir / "truth.json",
                 [&](std::ostream& out) { out << truth.dump(2) << "\n"; });

    return summary;
}

}  // namespace redtide::synthkit
