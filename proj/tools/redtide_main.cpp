#include <climits>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "redtide/csv.hpp"
#include "redtide/io_util.hpp"
#include "redtide/pipeline.hpp"
#include "redtide/svg.hpp"
#include "redtide/synthkit.hpp"
#include "redtide/text_util.hpp"

namespace fs = std::filesystem;
using namespace redtide;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitData = 2;

struct CliState {
    std::string config_path;
    std::vector<std::string> overrides;
    // dedicated flags; applied after --set so they win
    std::string out, level, freq, match, account, metric, condition;
    int shift = INT_MIN;
    int threads = 0;
    RunConfig config;

    void materialize() {
        if (!config_path.empty()) config = load_config(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw std::runtime_error("--set expects key=value, got '" + kv + "'");
            }
            set_config_value(config, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
        }
        if (!out.empty()) config.out_dir = out;
        if (!level.empty()) config.levels = level;
        if (!freq.empty()) config.freqs = freq;
        if (!match.empty()) config.match = match;
        if (!account.empty()) config.account = account;
        if (!metric.empty()) config.metric = metric;
        if (!condition.empty()) config.condition = condition;
        if (shift != INT_MIN) config.shift = shift;
        if (threads > 0) config.threads = threads;
    }
};

void write_validation_report(const fs::path& out_dir, const LoadedInputs& inputs) {
    json j;
    j["record_errors"] = json::array();
    for (const auto& [file, err] : inputs.record_errors) {
        j["record_errors"].push_back(
            {{"file", file}, {"line", err.line}, {"message", err.message}});
    }
    j["count"] = inputs.record_errors.size();
    atomic_write(out_dir / "validation_report.json",
                 [&](std::ostream& out) { out << j.dump(2) << "\n"; });
}

int finish(const std::string& command, const LoadedInputs& inputs) {
    const fs::path out_dir = inputs.config.out_dir;
    emit_manifest(out_dir / "run_manifest.json", command, inputs.config);
    if (!inputs.record_errors.empty()) {
        write_validation_report(out_dir, inputs);
        std::cerr << command << ": " << inputs.record_errors.size()
                  << " record-level validation errors (see validation_report.json)\n";
        return kExitData;
    }
    return kExitOk;
}

MatchFilter config_match(const RunConfig& c) {
    const auto m = match_filter_from(c.match);
    if (!m) throw std::runtime_error("config: unknown match '" + c.match + "'");
    return *m;
}

AccountFilter config_account(const RunConfig& c) {
    const auto a = account_filter_from(c.account);
    if (!a) throw std::runtime_error("config: unknown account filter '" + c.account + "'");
    return *a;
}

int cmd_ingest(CliState& state) {
    InputNeeds needs{.tweets = true, .conditions = true};
    needs.lexicon = !state.config.lexicon.empty();
    needs.vocabularies = !state.config.concern_dir.empty();
    const auto inputs = load_inputs(state.config, needs);
    const fs::path out_dir = inputs.config.out_dir;
    atomic_write(out_dir / "ingested.jsonl",
                 [&](std::ostream& out) { write_tweets_jsonl(inputs.tweets, out); });
    json j;
    j["tweets"] = inputs.tweets.size();
    j["beach_reports"] = inputs.beach_reports.size();
    j["kbrevis_samples"] = inputs.kbrevis.size();
    j["geo_units"] = inputs.registry.units().size();
    j["counties"] = inputs.registry.count_at_level(GeoLevel::county);
    j["cities"] = inputs.registry.count_at_level(GeoLevel::city);
    j["zctas"] = inputs.registry.count_at_level(GeoLevel::zcta);
    j["record_errors"] = inputs.record_errors.size();
    atomic_write(out_dir / "ingest_report.json",
                 [&](std::ostream& out) { out << j.dump(2) << "\n"; });
    std::cout << "ingested " << inputs.tweets.size() << " tweets, "
              << inputs.beach_reports.size() << " beach reports, "
              << inputs.kbrevis.size() << " samples; registry: "
              << j["counties"] << " counties, " << j["cities"] << " cities, "
              << j["zctas"] << " zctas\n";
    return finish("ingest", inputs);
}

int cmd_clean(CliState& state) {
    const auto inputs = load_inputs(state.config, {.tweets = true});
    const auto cleaned = stage_clean(inputs);
    const fs::path out_dir = inputs.config.out_dir;
    emit_cleaned_jsonl(out_dir / "cleaned.jsonl", cleaned.tweets);
    emit_cleaning_report(out_dir / "cleaning_report.json", cleaned.report,
                         cleaned.rejections);
    std::cout << "admitted " << cleaned.report.admitted << " of "
              << cleaned.report.input_count << " tweets (political "
              << cleaned.report.excluded_political << ", out-of-window "
              << cleaned.report.out_of_window << ", unresolved "
              << cleaned.report.unresolved_geo << ")\n";
    return finish("clean", inputs);
}

int cmd_sentiment(CliState& state) {
    const auto inputs = load_inputs(state.config, {.tweets = true, .lexicon = true});
    auto cleaned = stage_clean(inputs);
    const auto scores = stage_score_detailed(inputs, cleaned);
    emit_scored_jsonl(fs::path(inputs.config.out_dir) / "scored.jsonl", scores);
    std::cout << "scored " << scores.size() << " tweets\n";
    return finish("sentiment", inputs);
}

int cmd_aggregate(CliState& state) {
    InputNeeds needs{.tweets = true, .conditions = true};
    needs.lexicon = !state.config.lexicon.empty();
    const auto inputs = load_inputs(state.config, needs);
    auto cleaned = stage_clean(inputs);
    if (needs.lexicon) stage_score(inputs, cleaned);

    std::vector<Panel> panels;
    for (const auto level : parse_levels(inputs.config.levels)) {
        for (const auto freq : parse_freqs(inputs.config.freqs)) {
            panels.push_back(stage_joined_panel(inputs, cleaned.tweets, level, freq,
                                                config_match(inputs.config),
                                                config_account(inputs.config)));
        }
    }
    emit_panels_csv(fs::path(inputs.config.out_dir) / "panel.csv", panels);
    std::cout << "wrote " << panels.size() << " panels\n";
    return finish("aggregate", inputs);
}

int cmd_correlate(CliState& state) {
    InputNeeds needs{.tweets = true, .conditions = true};
    needs.lexicon = !state.config.lexicon.empty();
    const auto inputs = load_inputs(state.config, needs);
    auto cleaned = stage_clean(inputs);
    if (needs.lexicon) stage_score(inputs, cleaned);

    const auto levels = parse_levels(inputs.config.levels);
    const auto freqs = parse_freqs(inputs.config.freqs);
    const auto metric = metric_from(inputs.config.metric);
    const auto condition = condition_from(inputs.config.condition);
    if (!metric) throw std::runtime_error("config: unknown metric");
    if (!condition) throw std::runtime_error("config: unknown condition");

    const auto panels = build_grid_panels(inputs, cleaned.tweets, levels, freqs,
                                          config_match(inputs.config),
                                          config_account(inputs.config));
    const auto grid =
        correlation_grid(panels, *metric, config_match(inputs.config), *condition,
                         inputs.config.shift, inputs.config.per_capita_metric);
    const fs::path out_dir = inputs.config.out_dir;
    emit_grid_csv(out_dir / "grid.csv", grid);
    const std::string title = std::string(to_string(*metric)) + " (" +
                              to_string(config_match(inputs.config)) + ") vs " +
                              to_string(*condition);
    atomic_write(out_dir / "heatmap.svg", [&](std::ostream& out) {
        out << heatmap_svg(grid, levels, freqs, title);
    });
    for (const auto& e : grid.entries) {
        std::cout << level_token(e.level) << "/" << to_string(e.freq) << ": ";
        if (e.r) std::cout << format_double(*e.r) << " (n=" << e.n << ")\n";
        else std::cout << "n/a (" << e.error << ")\n";
    }
    return finish("correlate", inputs);
}

// Each artifact computes independently; a sub-analysis that cannot run
// on this corpus (empty bin, too few records) reports its reason inside
// its own JSON instead of aborting the stage.
void run_distance_stage(const LoadedInputs& inputs,
                        const std::vector<CleanedTweet>& tweets) {
    const fs::path out_dir = inputs.config.out_dir;
    const auto level = level_from_token(inputs.config.distance_level);
    if (!level) throw std::runtime_error("config: unknown distance_level");

    const auto sites = high_impact_sites(inputs.kbrevis, inputs.window_start,
                                         inputs.window_end, inputs.config.high_impact_cells);
    const auto joined =
        stage_joined_panel(inputs, tweets, *level, Frequency::weekly,
                           config_match(inputs.config), config_account(inputs.config));
    const auto records =
        distance_records(joined, sites, inputs.registry, inputs.config.bin_close_mi,
                         inputs.config.bin_far_mi);
    emit_scatter_csv(out_dir / "scatter.csv", records);

    const double eps = inputs.config.log_zero == "epsilon" ? inputs.config.log_epsilon : 0.0;
    auto error_json = [&](const fs::path& path, const std::string& what) {
        json j;
        j["error"] = what;
        atomic_write(path, [&](std::ostream& out) { out << j.dump(2) << "\n"; });
        std::cerr << path.filename().string() << ": " << what << "\n";
    };
    try {
        const auto fit = distance_regression(records, eps);
        emit_fit_json(out_dir / "fit.json", fit);
        std::cout << "distance fit: slope " << format_double(fit.slope) << " p "
                  << format_double(fit.p_value) << " n " << fit.n << "\n";
    } catch (const std::exception& e) {
        error_json(out_dir / "fit.json", e.what());
    }
    try {
        const auto contrasts = bin_contrasts(records, inputs.config.tukey_alpha, eps);
        emit_bins_json(out_dir / "bins.json", contrasts);
    } catch (const std::exception& e) {
        error_json(out_dir / "bins.json", e.what());
    }
    const auto rt =
        retweet_fraction_by_distance(tweets, sites, inputs.window_start, inputs.window_end);
    json j;
    j["corpus_retweet_fraction"] = rt.corpus_retweet_fraction;
    j["points"] = rt.points.size();
    j["slope"] = rt.fit.slope;
    j["p_value"] = rt.fit.p_value;
    atomic_write(out_dir / "retweet_fraction.json",
                 [&](std::ostream& out) { out << j.dump(2) << "\n"; });
}

int cmd_distance(CliState& state) {
    InputNeeds needs{.tweets = true, .conditions = true};
    const auto inputs = load_inputs(state.config, needs);
    auto cleaned = stage_clean(inputs);
    run_distance_stage(inputs, cleaned.tweets);
    return finish("distance", inputs);
}

int cmd_topics(CliState& state) {
    InputNeeds needs{.tweets = true, .lexicon = true, .vocabularies = true};
    const auto inputs = load_inputs(state.config, needs);
    auto cleaned = stage_clean(inputs);
    const fs::path out_dir = inputs.config.out_dir;

    const auto stats = categorize(cleaned.tweets, inputs.vocabularies, inputs.window_start,
                                  inputs.window_end);
    atomic_write(out_dir / "concerns.csv", [&](std::ostream& out) {
        out << "category,unique_terms,mentions\n";
        for (const auto& s : stats) {
            out << to_string(s.category) << "," << s.unique_terms_hit << ","
                << s.mention_count << "\n";
        }
    });
    atomic_write(out_dir / "concerns_timeline.csv", [&](std::ostream& out) {
        out << "category,week_index,week_start,tweets\n";
        for (const auto& s : stats) {
            for (const auto& [week, n] : s.tweets_per_bucket) {
                out << to_string(s.category) << "," << week << ","
                    << format_date(inputs.window_start + std::chrono::days{week * 7}) << ","
                    << n << "\n";
            }
        }
    });

    atomic_write(out_dir / "top_terms.csv", [&](std::ostream& out) {
        out << "unit,sign,rank,term,count,per_capita\n";
        for (const auto* county : inputs.registry.at_level(GeoLevel::county)) {
            const auto top = top_polarized_terms(cleaned.tweets, inputs.lexicon, county->id,
                                                 inputs.registry,
                                                 inputs.agg_options.shared_units, 10,
                                                 inputs.config.per_capita_scale);
            for (size_t i = 0; i < top.positive.size(); ++i) {
                out << county->id << ",positive," << i + 1 << ","
                    << csv_escape(top.positive[i].term) << ","
                    << format_double(top.positive[i].count) << ","
                    << format_double(top.positive[i].per_capita) << "\n";
            }
            for (size_t i = 0; i < top.negative.size(); ++i) {
                out << county->id << ",negative," << i + 1 << ","
                    << csv_escape(top.negative[i].term) << ","
                    << format_double(top.negative[i].count) << ","
                    << format_double(top.negative[i].per_capita) << "\n";
            }
        }
    });
    std::cout << "topics written for " << stats.size() << " categories\n";
    return finish("topics", inputs);
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir) {
    const auto spec = synthkit::load_synth_spec(spec_path);
    const auto summary = synthkit::generate(spec, out_dir);
    std::cout << "generated " << summary.regular_tweets << " tweets (+"
              << summary.political_tweets << " political noise), " << summary.beach_rows
              << " beach rows, " << summary.kbrevis_rows << " samples over "
              << summary.weeks << " weeks\n";
    return kExitOk;
}

int cmd_report(CliState& state) {
    InputNeeds needs{.tweets = true, .conditions = true};
    needs.lexicon = !state.config.lexicon.empty();
    needs.vocabularies = !state.config.concern_dir.empty();
    const auto inputs = load_inputs(state.config, needs);
    const fs::path out_dir = inputs.config.out_dir;

    auto cleaned = stage_clean(inputs);
    emit_cleaned_jsonl(out_dir / "cleaned.jsonl", cleaned.tweets);
    emit_cleaning_report(out_dir / "cleaning_report.json", cleaned.report,
                         cleaned.rejections);
    if (needs.lexicon) {
        const auto scores = stage_score_detailed(inputs, cleaned);
        emit_scored_jsonl(out_dir / "scored.jsonl", scores);
    }

    const auto levels = parse_levels(inputs.config.levels);
    const auto freqs = parse_freqs(inputs.config.freqs);
    const auto match = config_match(inputs.config);
    const auto account = config_account(inputs.config);

    const auto grid_panels =
        build_grid_panels(inputs, cleaned.tweets, levels, freqs, match, account);
    std::vector<Panel> panels;
    for (const auto level : levels) {
        for (const auto freq : freqs) panels.push_back(grid_panels.at({level, freq}));
    }
    emit_panels_csv(out_dir / "panel.csv", panels);

    const auto metric = metric_from(inputs.config.metric);
    const auto condition = condition_from(inputs.config.condition);
    const auto grid = correlation_grid(grid_panels, *metric, match, *condition,
                                       inputs.config.shift,
                                       inputs.config.per_capita_metric);
    emit_grid_csv(out_dir / "grid.csv", grid);
    atomic_write(out_dir / "heatmap.svg", [&](std::ostream& out) {
        out << heatmap_svg(grid, levels, freqs,
                           std::string(to_string(*metric)) + " vs " +
                               to_string(*condition));
    });

    run_distance_stage(inputs, cleaned.tweets);

    if (needs.vocabularies && needs.lexicon) {
        const auto stats = categorize(cleaned.tweets, inputs.vocabularies,
                                      inputs.window_start, inputs.window_end);
        atomic_write(out_dir / "concerns.csv", [&](std::ostream& out) {
            out << "category,unique_terms,mentions\n";
            for (const auto& s : stats) {
                out << to_string(s.category) << "," << s.unique_terms_hit << ","
                    << s.mention_count << "\n";
            }
        });
    }
    std::cout << "report complete: " << cleaned.report.admitted << " tweets over "
              << panels.size() << " panels\n";
    return finish("report", inputs);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Localized social-media impact assessment for red tide events"};
    app.require_subcommand(1);
    app.fallthrough();

    CliState state;
    app.add_option("--config", state.config_path, "key=value config file");
    app.add_option("--set", state.overrides, "override a config key (key=value)")
        ->take_all();
    app.add_option("--out", state.out, "output directory");
    app.add_option("--level", state.level, "locality levels (total,county,city,zcta)");
    app.add_option("--freq", state.freq, "time frequencies (weekly,3day,daily)");
    app.add_option("--match", state.match, "match filter: all | explicit");
    app.add_option("--account", state.account, "account filter: everyone | citizen | media");
    app.add_option("--metric", state.metric, "metric: count | sentiment");
    app.add_option("--condition", state.condition,
                   "condition: dead_fish | respiratory | kbrevis");
    app.add_option("--shift", state.shift, "bucket shift: -1 lag, 0 concurrent, +1 lead");
    app.add_option("--threads", state.threads, "within-stage parallelism");

    std::string synth_spec, synth_out = "synth_out";

    auto* ingest = app.add_subcommand("ingest", "parse and validate all inputs");
    auto* clean = app.add_subcommand("clean", "apply the cleaning pipeline");
    auto* sentiment = app.add_subcommand("sentiment", "score cleaned tweets");
    auto* aggregate = app.add_subcommand("aggregate", "build spatiotemporal panels");
    auto* correlate = app.add_subcommand("correlate", "panel correlation grids");
    auto* distance = app.add_subcommand("distance", "distance-decay analysis");
    auto* topics = app.add_subcommand("topics", "concern categories and top terms");
    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    synth->add_option("--spec", synth_spec, "synth spec JSON")->required();
    synth->add_option("--out", synth_out, "output directory");
    auto* report = app.add_subcommand("report", "run every stage");

    CLI11_PARSE(app, argc, argv);

    try {
        state.materialize();
        if (ingest->parsed()) return cmd_ingest(state);
        if (clean->parsed()) return cmd_clean(state);
        if (sentiment->parsed()) return cmd_sentiment(state);
        if (aggregate->parsed()) return cmd_aggregate(state);
        if (correlate->parsed()) return cmd_correlate(state);
        if (distance->parsed()) return cmd_distance(state);
        if (topics->parsed()) return cmd_topics(state);
        if (synth->parsed()) return cmd_synth(synth_spec, synth_out);
        if (report->parsed()) return cmd_report(state);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
