#include <doctest.h>

#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "redtide/parsers.hpp"
#include "redtide/rng.hpp"

using namespace redtide;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / ("redtide_test_" + name);
    std::ofstream out(path, std::ios::trunc);
    out << content;
    return path;
}

const char* kDataDir = REDTIDE_DATA_DIR;

}  // namespace

TEST_CASE("parse_tweets maps jsonl fields onto the domain type") {
    const auto path = write_temp(
        "tweets_basic.jsonl",
        R"({"id":"1","created_at":"2018-08-06T14:00:00Z","text":"red tide at Siesta Key","kind":"original","verified":false,"place_unit":"sarasota"})"
        "\n"
        R"({"id":"2","created_at":"2018-08-06T15:00:00Z","text":"ugh red tide","profile_label":"Tampa Bay"})"
        "\n");
    const auto result = parse_tweets(path, TweetFormat::jsonl);
    REQUIRE(result.records.size() == 2);
    CHECK(result.errors.empty());

    const Tweet& place = result.records[0];
    REQUIRE(place.place_match);
    CHECK(place.place_match->raw_label == "sarasota");
    CHECK(place.place_match->source == GeoSource::place);
    CHECK(!place.profile_match);
    CHECK(place.kind == TweetKind::original);
    REQUIRE(place.verified);
    CHECK(*place.verified == false);

    const Tweet& profile = result.records[1];
    REQUIRE(profile.profile_match);
    CHECK(profile.profile_match->raw_label == "Tampa Bay");
    CHECK(profile.profile_match->source == GeoSource::geoprofile);
    CHECK(!profile.verified.has_value());
}

TEST_CASE("parse_tweets: empty file yields empty list and zero errors") {
    const auto path = write_temp("tweets_empty.jsonl", "");
    const auto result = parse_tweets(path, TweetFormat::jsonl);
    CHECK(result.records.empty());
    CHECK(result.errors.empty());
    CHECK(result.input_records == 0);
}

TEST_CASE("parse_tweets reports malformed and geo-less records with line numbers") {
    const auto path = write_temp(
        "tweets_bad.jsonl",
        R"({"id":"1","created_at":"2018-08-06T14:00:00Z","text":"ok","place_unit":"sarasota"})"
        "\n"
        "{not json}\n"
        R"({"id":"3","created_at":"2018-08-06T14:00:00Z","text":"no geo fields"})"
        "\n"
        R"({"id":"4","created_at":"bad stamp","text":"x","place_unit":"sarasota"})"
        "\n"
        R"({"id":"1","created_at":"2018-08-06T15:00:00Z","text":"dup","place_unit":"sarasota"})"
        "\n");
    const auto result = parse_tweets(path, TweetFormat::jsonl);
    CHECK(result.records.size() == 1);
    REQUIRE(result.errors.size() == 4);
    CHECK(result.errors[0].line == 2);
    CHECK(result.errors[1].line == 3);
    CHECK(result.errors[1].message == "record missing all geo fields");
    CHECK(result.errors[2].line == 4);
    CHECK(result.errors[3].message.find("duplicate id") != std::string::npos);
    // nothing dropped silently
    CHECK(result.records.size() + result.errors.size() == result.input_records);
}

TEST_CASE("parse_tweets csv format") {
    const auto path = write_temp(
        "tweets.csv",
        "id,created_at,text,kind,verified,place_unit,profile_label,lat,lon\n"
        "1,2018-08-06T14:00:00Z,\"red tide, dead fish\",retweet,true,sarasota,,27.1,-82.4\n"
        "2,2018-08-06T15:00:00Z,hello red tide,original,false,,Venice,,\n");
    const auto result = parse_tweets(path, TweetFormat::csv);
    REQUIRE(result.records.size() == 2);
    CHECK(result.records[0].kind == TweetKind::retweet);
    CHECK(result.records[0].text == "red tide, dead fish");
    REQUIRE(result.records[0].coords);
    CHECK(result.records[0].coords->lat == 27.1);
    CHECK(result.records[1].profile_match->raw_label == "Venice");
}

TEST_CASE("tweet jsonl round-trip is field-identical") {
    Rng rng(2024);
    std::vector<Tweet> tweets;
    for (int i = 0; i < 80; ++i) {
        Tweet t;
        t.id = "t" + std::to_string(i);
        t.timestamp = *parse_iso8601("2018-08-06T00:00:00Z") +
                      std::chrono::seconds{static_cast<long>(rng.next_below(86400 * 200))};
        t.text = rng.next_unit() < 0.5 ? "red tide is bad..." : "No red tide? great!";
        t.kind = static_cast<TweetKind>(rng.next_below(3));
        if (rng.next_unit() < 0.7) t.verified = rng.next_unit() < 0.5;
        if (rng.next_unit() < 0.3) t.handle = "user" + std::to_string(i);
        if (rng.next_unit() < 0.6) t.place_match = GeoRef{"", GeoSource::place, "sarasota"};
        if (!t.place_match || rng.next_unit() < 0.5) {
            t.profile_match = GeoRef{"", GeoSource::geoprofile, "Tampa Bay"};
        }
        if (rng.next_unit() < 0.4) {
            t.coords = LatLon{27.0 + rng.next_unit(), -82.9 + rng.next_unit()};
        }
        tweets.push_back(std::move(t));
    }
    std::ostringstream buf;
    write_tweets_jsonl(tweets, buf);
    const auto path = write_temp("roundtrip.jsonl", buf.str());
    const auto reparsed = parse_tweets(path, TweetFormat::jsonl);
    REQUIRE(reparsed.errors.empty());
    REQUIRE(reparsed.records.size() == tweets.size());
    for (size_t i = 0; i < tweets.size(); ++i) {
        const Tweet& a = tweets[i];
        const Tweet& b = reparsed.records[i];
        CHECK(a.id == b.id);
        CHECK(a.timestamp == b.timestamp);
        CHECK(a.text == b.text);
        CHECK(a.kind == b.kind);
        CHECK(a.verified == b.verified);
        CHECK(a.handle == b.handle);
        CHECK(a.place_match.has_value() == b.place_match.has_value());
        if (a.place_match) CHECK(a.place_match->raw_label == b.place_match->raw_label);
        CHECK(a.profile_match.has_value() == b.profile_match.has_value());
        if (a.profile_match) CHECK(a.profile_match->raw_label == b.profile_match->raw_label);
        CHECK(a.coords.has_value() == b.coords.has_value());
        if (a.coords) {
            CHECK(a.coords->lat == b.coords->lat);
            CHECK(a.coords->lon == b.coords->lon);
        }
    }
}

TEST_CASE("parse_beach_reports validates index ranges") {
    const auto path = write_temp("beach.csv",
                                 "beach_id,county_id,date,dead_fish,respiratory\n"
                                 "siesta_key,sarasota,2018-08-06,2,3\n"
                                 "siesta_key,sarasota,2018-08-07,5,1\n"
                                 "siesta_key,sarasota,2018-08-08,1,4\n"
                                 "siesta_key,sarasota,not-a-date,1,1\n");
    const auto result = parse_beach_reports(path);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].dead_fish == 2);
    CHECK(result.records[0].respiratory == 3);
    REQUIRE(result.errors.size() == 3);
    CHECK(result.errors[0].message.find("dead_fish") != std::string::npos);
    CHECK(result.errors[1].message.find("respiratory") != std::string::npos);
}

TEST_CASE("parse_kbrevis_samples checks bounding box and sign") {
    const auto path = write_temp("kbrevis.csv",
                                 "sample_id,date,lat,lon,cells_per_liter\n"
                                 "k1,2018-08-06,27.27,-82.55,1.2e6\n"
                                 "k2,2018-08-06,40.0,-82.55,1000\n"
                                 "k3,2018-08-06,27.30,-82.60,-5\n");
    const auto result = parse_kbrevis_samples(path);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].cells_per_liter == 1.2e6);
    // containment oracle: the accepted point is inside the configured box
    CHECK(kDefaultBBox.contains(result.records[0].location));
    REQUIRE(result.errors.size() == 2);
    CHECK(result.errors[0].message.find("bounding box") != std::string::npos);
    CHECK(result.errors[1].message.find("negative") != std::string::npos);
}

TEST_CASE("parse_lexicon accepts reference entries and flags violations") {
    const auto path = write_temp("lex.csv",
                                 "phrase,class,weight\n"
                                 "gorgeous,polarized,1.0\n"
                                 "no signs of red tide,polarized,1.0\n"
                                 "loud,polarized,1.5\n"
                                 "mystery,emphasizer,0.5\n"
                                 "very,amplifier,\n");
    const auto result = parse_lexicon(path);
    REQUIRE(result.records.size() == 3);
    CHECK(result.records[0].weight == 1.0);
    CHECK(result.records[1].phrase ==
          std::vector<std::string>{"no", "signs", "of", "red", "tide"});
    CHECK(result.records[2].cls == LexiconClass::amplifier);
    CHECK(result.records[2].weight == 0.8);  // default delta
    REQUIRE(result.errors.size() == 2);
    CHECK(result.errors[0].message.find("[-1, 1]") != std::string::npos);
    CHECK(result.errors[1].message.find("unknown class") != std::string::npos);
}

TEST_CASE("shipped geo registry loads with expected shape") {
    const auto registry = parse_geo_registry(fs::path(kDataDir) / "geo_registry.csv",
                                             fs::path(kDataDir) / "county_polygons.json");
    CHECK(registry.count_at_level(GeoLevel::county) == 5);
    CHECK(registry.count_at_level(GeoLevel::city) == 15);
    CHECK(registry.count_at_level(GeoLevel::zcta) == 7);
    CHECK(registry.at("hillsborough").population == 1460000);
    CHECK(registry.at("pinellas").population == 973000);
    CHECK(registry.at("pasco").population == 539000);
    CHECK(registry.at("sarasota").population == 426000);
    CHECK(registry.at("manatee").population == 400000);
    CHECK(registry.at("sarasota").polygon.size() >= 3);

    // registry lookups are total over the sample corpus labels
    for (const char* label : {"Venice", "Tampa Bay Surrounding Area", "Bradenton Beach",
                              "33606", "Sarasota", "hillsborough"}) {
        CHECK(registry.find_by_label(label) != nullptr);
    }
    // ambiguous names resolve to the coarser unit
    CHECK(registry.find_by_label("Sarasota")->id == "sarasota");
    CHECK(registry.find_by_label("sarasota")->level == GeoLevel::county);
}

TEST_CASE("registry rejects hierarchy violations") {
    auto make_units = [](const std::string& zcta_parent) {
        return std::vector<GeoUnit>{
            {"r", GeoLevel::region, "R", "", "", 100, {27, -82}, {}},
            {"c1", GeoLevel::county, "C1", "r", "", 100, {27, -82}, {}},
            {"city1", GeoLevel::city, "City1", "c1", "", 50, {27, -82}, {}},
            {"z1", GeoLevel::zcta, "Z1", zcta_parent, "", 10, {27, -82}, {}},
        };
    };
    CHECK_NOTHROW(GeoRegistry(make_units("city1")));
    // zcta hanging directly off a county skips the city level
    CHECK_THROWS_WITH_AS(GeoRegistry(make_units("c1")),
                         doctest::Contains("hierarchy violation"), std::runtime_error);
    CHECK_THROWS_AS(GeoRegistry(make_units("nowhere")), std::runtime_error);
}

TEST_CASE("registry rejects missing population and bad polygons") {
    std::vector<GeoUnit> units{
        {"r", GeoLevel::region, "R", "", "", 0, {27, -82}, {}},
        {"c1", GeoLevel::county, "C1", "r", "", 0, {27, -82}, {}},
    };
    CHECK_THROWS_WITH_AS(GeoRegistry{units}, doctest::Contains("missing population"),
                         std::runtime_error);

    units[1].population = 100;
    units[1].polygon = {{27, -82}, {28, -82}};  // two vertices: open ring
    CHECK_THROWS_WITH_AS(GeoRegistry{units}, doctest::Contains("open polygon"),
                         std::runtime_error);

    units[1].polygon = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};  // bowtie
    CHECK_THROWS_WITH_AS(GeoRegistry{units}, doctest::Contains("self-intersecting"),
                         std::runtime_error);

    units[1].polygon = {{0, 0}, {0, 1}, {1, 1}, {1, 0}, {0, 0}};  // closed square
    CHECK_NOTHROW(GeoRegistry{units});
}

TEST_CASE("registry ancestor walk and metro denominators") {
    const auto registry = parse_geo_registry(fs::path(kDataDir) / "geo_registry.csv");
    CHECK(*registry.ancestor_at("z34242", GeoLevel::county) == "sarasota");
    CHECK(*registry.ancestor_at("z34242", GeoLevel::city) == "sarasota_city");
    CHECK(*registry.ancestor_at("bradenton", GeoLevel::region) == "gulf_coast");
    CHECK(!registry.ancestor_at("sarasota", GeoLevel::city));  // cannot descend

    // Bradenton Beach divides by the whole Bradenton metro population.
    const long long metro = 59439 + 4444 + 5300 + 1035 + 968;
    CHECK(registry.denominator_population("bradenton_beach") == metro);
    CHECK(registry.denominator_population("z34205") == metro);
    CHECK(registry.denominator_population("manatee") == 400000);
}
