#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "redtide/io_util.hpp"
#include "redtide/pipeline.hpp"

using namespace redtide;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kDataDir = REDTIDE_DATA_DIR;
const char* kBinary = REDTIDE_BINARY;

RunConfig sample_config(const std::string& out_name) {
    RunConfig config;
    const fs::path data = kDataDir;
    config.tweets = (data / "sample/tweets.jsonl").string();
    config.beach = (data / "sample/beach.csv").string();
    config.kbrevis = (data / "sample/kbrevis.csv").string();
    config.beaches = (data / "beaches.csv").string();
    config.registry = (data / "geo_registry.csv").string();
    config.polygons = (data / "county_polygons.json").string();
    config.lexicon = (data / "lexicon.csv").string();
    config.lexicon_patch = (data / "lexicon_patch.csv").string();
    config.political_phrases = (data / "political_phrases.txt").string();
    config.account_overrides = (data / "account_overrides.csv").string();
    config.concern_dir = data.string();
    config.out_dir = (fs::temp_directory_path() / out_name).string();
    fs::remove_all(config.out_dir);
    return config;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(kBinary) + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("config: file loading, overrides, canonical hash") {
    const fs::path path = fs::temp_directory_path() / "redtide_test.conf";
    {
        std::ofstream out(path, std::ios::trunc);
        out << "# comment\n"
               "window_start = 2018-06-01\n"
               "question_weight = 0.5\n"
               "per_capita_metric = false\n"
               "threads = 4\n";
    }
    auto config = load_config(path);
    CHECK(config.window_start == "2018-06-01");
    CHECK(config.question_weight == 0.5);
    CHECK(config.per_capita_metric == false);
    CHECK(config.threads == 4);

    set_config_value(config, "question_weight", "0.25");
    CHECK(config.question_weight == 0.25);
    CHECK_THROWS_AS(set_config_value(config, "no_such_key", "1"), std::runtime_error);
    CHECK_THROWS_AS(set_config_value(config, "threads", "abc"), std::runtime_error);

    const auto h1 = config_hash(config);
    CHECK(h1 == config_hash(config));
    set_config_value(config, "threads", "8");
    CHECK(h1 != config_hash(config));
}

TEST_CASE("sample corpus: cleaning report matches hand-derived counts") {
    const auto inputs = load_inputs(sample_config("redtide_pipe_clean"),
                                    {.tweets = true, .lexicon = true});
    REQUIRE(inputs.record_errors.empty());
    REQUIRE(inputs.tweets.size() == 14);

    const auto cleaned = stage_clean(inputs);
    CHECK(cleaned.report.input_count == 14);
    CHECK(cleaned.report.excluded_political == 1);   // s007
    CHECK(cleaned.report.out_of_window == 1);        // s012
    CHECK(cleaned.report.unresolved_geo == 0);
    CHECK(cleaned.report.admitted == 12);
    CHECK(cleaned.report.deduped == 1);              // s011 carries both matches
    CHECK(cleaned.report.reassigned_tampa_bay == 2); // s006, s010
    CHECK(cleaned.report.conserved());

    // place precedence: s011 lands on its place unit
    for (const auto& ct : cleaned.tweets) {
        if (ct.tweet.id == "s011") {
            CHECK(ct.unit.unit_id == "sarasota_city");
            CHECK(ct.unit.source == GeoSource::place);
        }
        if (ct.tweet.id == "s005") CHECK(ct.tweet.account_class == AccountClass::media);
        if (ct.tweet.id == "s010") CHECK(ct.tweet.account_class == AccountClass::other);
        if (ct.tweet.id == "s002") CHECK(ct.tweet.account_class == AccountClass::citizen);
    }
}

TEST_CASE("sample corpus: county panel masses and shared credit") {
    auto config = sample_config("redtide_pipe_panel");
    const auto inputs = load_inputs(config, {.tweets = true, .conditions = true,
                                             .lexicon = true});
    auto cleaned = stage_clean(inputs);
    stage_score(inputs, cleaned);

    const auto panel =
        stage_tweet_panel(inputs, cleaned.tweets, GeoLevel::county, Frequency::weekly,
                          MatchFilter::all, AccountFilter::everyone);
    CHECK(panel.unplaced.empty());
    CHECK(panel.panel.total_tweet_count() == doctest::Approx(12.0).epsilon(1e-9));

    double hillsborough = 0, pinellas = 0, sarasota = 0, manatee = 0;
    for (const auto& [key, cell] : panel.panel.cells) {
        if (key.first == "hillsborough") hillsborough += cell.tweet_count;
        if (key.first == "pinellas") pinellas += cell.tweet_count;
        if (key.first == "sarasota") sarasota += cell.tweet_count;
        if (key.first == "manatee") manatee += cell.tweet_count;
    }
    const double w = 1460000.0 / (1460000.0 + 973000.0);
    CHECK(hillsborough == doctest::Approx(1.0 + 2.0 * w).epsilon(1e-9));
    CHECK(pinellas == doctest::Approx(1.0 + 2.0 * (1.0 - w)).epsilon(1e-9));
    CHECK(sarasota == doctest::Approx(6.0).epsilon(1e-9));
    CHECK(manatee == doctest::Approx(2.0).epsilon(1e-9));

    const auto explicit_panel =
        stage_tweet_panel(inputs, cleaned.tweets, GeoLevel::county, Frequency::weekly,
                          MatchFilter::explicit_only, AccountFilter::everyone);
    CHECK(explicit_panel.panel.total_tweet_count() == doctest::Approx(6.0).epsilon(1e-9));
}

TEST_CASE("sample corpus: joined panel carries conditions") {
    auto config = sample_config("redtide_pipe_join");
    const auto inputs =
        load_inputs(config, {.tweets = true, .conditions = true, .lexicon = true});
    auto cleaned = stage_clean(inputs);
    const auto joined =
        stage_joined_panel(inputs, cleaned.tweets, GeoLevel::county, Frequency::weekly,
                           MatchFilter::all, AccountFilter::everyone);
    // the sample beach data covers 2018-08-06..12 with sarasota heaviest
    bool found_sarasota_conditions = false;
    for (const auto& [key, cell] : joined.cells) {
        if (key.first == "sarasota" && !cell.condition_empty) {
            found_sarasota_conditions = true;
            CHECK(cell.dead_fish > 0.0);
            CHECK(cell.dead_fish <= 2.0);
            CHECK(cell.respiratory <= 3.0);
        }
    }
    CHECK(found_sarasota_conditions);
}

TEST_CASE("cli: stage composability and manifest stability") {
    const fs::path out_a = fs::temp_directory_path() / "redtide_cli_report";
    const fs::path out_b = fs::temp_directory_path() / "redtide_cli_stages";
    fs::remove_all(out_a);
    fs::remove_all(out_b);
    const std::string base =
        "--config " + (fs::path(kDataDir).parent_path() / "data/redtide.conf").string() +
        " --set registry=" + (fs::path(kDataDir) / "geo_registry.csv").string();

    // config paths inside redtide.conf are relative to the repo root
    const std::string repo_root = fs::path(kDataDir).parent_path().string();
    const std::string cd_prefix = "cd " + repo_root + " && " + std::string(kBinary);
    auto shell = [&](const std::string& args) {
        const std::string cmd = cd_prefix + " " + args + " >/dev/null 2>&1";
        return std::system(cmd.c_str());
    };

    REQUIRE(shell("report --config data/redtide.conf --set out_dir=" + out_a.string()) == 0);
    REQUIRE(shell("clean --config data/redtide.conf --set out_dir=" + out_b.string()) == 0);
    REQUIRE(shell("aggregate --config data/redtide.conf --set out_dir=" + out_b.string()) ==
            0);
    REQUIRE(shell("correlate --config data/redtide.conf --set out_dir=" + out_b.string()) ==
            0);

    // stage composability: report output equals the individually run stages
    CHECK(read_file(out_a / "cleaned.jsonl") == read_file(out_b / "cleaned.jsonl"));
    CHECK(read_file(out_a / "panel.csv") == read_file(out_b / "panel.csv"));
    CHECK(read_file(out_a / "grid.csv") == read_file(out_b / "grid.csv"));

    // deterministic manifest: rerunning report leaves the same bytes
    const std::string manifest_before = read_file(out_a / "run_manifest.json");
    REQUIRE(shell("report --config data/redtide.conf --set out_dir=" + out_a.string()) == 0);
    CHECK(read_file(out_a / "run_manifest.json") == manifest_before);

    // no partially written artifacts survive
    for (const auto& entry : fs::directory_iterator(out_a)) {
        CHECK(entry.path().extension() != ".tmp");
    }

    // expected artifact set
    for (const char* f : {"cleaned.jsonl", "cleaning_report.json", "scored.jsonl",
                          "panel.csv", "grid.csv", "heatmap.svg", "run_manifest.json"}) {
        CHECK(fs::exists(out_a / f));
    }
}

TEST_CASE("cli: remaining subcommands run on the demo corpus") {
    const std::string repo_root = fs::path(kDataDir).parent_path().string();
    auto shell = [&](const std::string& args) {
        const std::string cmd = "cd " + repo_root + " && " + std::string(kBinary) + " " +
                                args + " >/dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    const fs::path out = fs::temp_directory_path() / "redtide_cli_rest";
    fs::remove_all(out);
    const std::string base = " --config data/redtide.conf --set out_dir=" + out.string();

    REQUIRE(shell("ingest" + base) == 0);
    CHECK(fs::exists(out / "ingested.jsonl"));
    CHECK(fs::exists(out / "ingest_report.json"));
    const auto ingest = json::parse(read_file(out / "ingest_report.json"));
    CHECK(ingest["tweets"] == 14);
    CHECK(ingest["counties"] == 5);

    REQUIRE(shell("sentiment" + base) == 0);
    CHECK(fs::exists(out / "scored.jsonl"));

    REQUIRE(shell("topics" + base) == 0);
    CHECK(fs::exists(out / "concerns.csv"));
    CHECK(fs::exists(out / "top_terms.csv"));
    const auto concerns = read_file(out / "concerns.csv");
    CHECK(concerns.find("environment") != std::string::npos);

    REQUIRE(shell("distance" + base) == 0);
    CHECK(fs::exists(out / "scatter.csv"));
    CHECK(fs::exists(out / "fit.json"));
    CHECK(fs::exists(out / "bins.json"));
}

TEST_CASE("cli: synth subcommand generates a runnable corpus") {
    const fs::path dir = fs::temp_directory_path() / "redtide_cli_synth";
    fs::remove_all(dir);
    const fs::path spec = dir / "spec.json";
    fs::create_directories(dir);
    atomic_write(spec, [](std::ostream& out) {
        out << R"({"seed": 3, "window": {"start": "2018-05-15", "end": "2018-06-25"},
                   "coupling_rho": 0.9, "per_capita_rate": 6.0,
                   "counties": [
                     {"id": "a", "population": 500000, "centroid_lat": 26.4, "centroid_lon": -82.2},
                     {"id": "b", "population": 500000, "centroid_lat": 27.4, "centroid_lon": -82.2}
                   ]})";
    });
    REQUIRE(run_cli("synth --spec " + spec.string() + " --out " + (dir / "corpus").string()) ==
            0);
    for (const char* f : {"tweets.jsonl", "beach.csv", "kbrevis.csv", "geo_registry.csv",
                          "truth.json"}) {
        CHECK(fs::exists(dir / "corpus" / f));
    }

    // and the generated corpus runs through the pipeline
    RunConfig config;
    config.tweets = (dir / "corpus/tweets.jsonl").string();
    config.beach = (dir / "corpus/beach.csv").string();
    config.kbrevis = (dir / "corpus/kbrevis.csv").string();
    config.beaches = (dir / "corpus/beaches.csv").string();
    config.registry = (dir / "corpus/geo_registry.csv").string();
    config.polygons = (dir / "corpus/county_polygons.json").string();
    config.window_start = "2018-05-15";
    config.window_end = "2018-06-25";
    config.levels = "total,county";
    config.freqs = "weekly";
    const auto inputs = load_inputs(config, {.tweets = true, .conditions = true});
    REQUIRE(inputs.record_errors.empty());
    const auto cleaned = stage_clean(inputs);
    CHECK(cleaned.report.admitted == inputs.tweets.size());
    const auto joined =
        stage_joined_panel(inputs, cleaned.tweets, GeoLevel::county, Frequency::weekly,
                           MatchFilter::all, AccountFilter::everyone);
    const auto res = panel_correlation(joined, Metric::count, Condition::dead_fish, 0);
    CHECK(res.n == 2 * 6);
    CHECK(res.r > 0.3);  // rho 0.9 planted at desk scale
}

TEST_CASE("scoring output is identical regardless of thread count") {
    auto config = sample_config("redtide_pipe_threads");
    config.threads = 1;
    const auto inputs = load_inputs(config, {.tweets = true, .lexicon = true});
    auto one = stage_clean(inputs);
    stage_score(inputs, one);

    auto config4 = config;
    config4.threads = 4;
    const auto inputs4 = load_inputs(config4, {.tweets = true, .lexicon = true});
    auto four = stage_clean(inputs4);
    stage_score(inputs4, four);

    REQUIRE(one.tweets.size() == four.tweets.size());
    for (size_t i = 0; i < one.tweets.size(); ++i) {
        CHECK(one.tweets[i].sentiment == four.tweets[i].sentiment);
    }
}

TEST_CASE("cli: a political-only corpus cleans to an empty set, counted in the report") {
    const fs::path dir = fs::temp_directory_path() / "redtide_cli_political";
    fs::remove_all(dir);
    fs::create_directories(dir);
    atomic_write(dir / "tweets.jsonl", [](std::ostream& out) {
        out << R"({"id":"1","created_at":"2018-08-06T14:00:00Z","text":"Red Tide Rick must go","profile_label":"Sarasota"})"
            << "\n"
            << R"({"id":"2","created_at":"2018-08-07T14:00:00Z","text":"red tide party strikes again","profile_label":"Venice"})"
            << "\n";
    });
    const std::string args =
        "clean --set tweets=" + (dir / "tweets.jsonl").string() +
        " --set registry=" + (fs::path(kDataDir) / "geo_registry.csv").string() +
        " --set political_phrases=" +
        (fs::path(kDataDir) / "political_phrases.txt").string() +
        " --set out_dir=" + (dir / "out").string();
    REQUIRE(run_cli(args) == 0);
    CHECK(read_file(dir / "out/cleaned.jsonl").empty());
    const auto report = json::parse(read_file(dir / "out/cleaning_report.json"));
    CHECK(report["input_count"] == 2);
    CHECK(report["excluded_political"] == 2);
    CHECK(report["admitted"] == 0);
}

TEST_CASE("cli: bad config exits 1, record errors exit 2") {
    CHECK(run_cli("clean --set registry=/nonexistent.csv --set tweets=/nope.jsonl") != 0);

    // a corpus with one malformed line still writes artifacts but exits 2
    const fs::path dir = fs::temp_directory_path() / "redtide_cli_exit2";
    fs::remove_all(dir);
    fs::create_directories(dir);
    atomic_write(dir / "tweets.jsonl", [](std::ostream& out) {
        out << R"({"id":"1","created_at":"2018-08-06T14:00:00Z","text":"red tide","place_unit":"sarasota"})"
            << "\n{broken\n";
    });
    const std::string args =
        "clean --set tweets=" + (dir / "tweets.jsonl").string() +
        " --set registry=" + (fs::path(kDataDir) / "geo_registry.csv").string() +
        " --set out_dir=" + (dir / "out").string();
    const int rc = run_cli(args);
    CHECK(WEXITSTATUS(rc) == 2);
    CHECK(fs::exists(dir / "out/cleaned.jsonl"));
    CHECK(fs::exists(dir / "out/validation_report.json"));
}
