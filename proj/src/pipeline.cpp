#include "redtide/pipeline.hpp"

#include <fstream>
#include <thread>

#include <json.hpp>

#include "redtide/csv.hpp"
#include "redtide/io_util.hpp"
#include "redtide/text_util.hpp"

namespace redtide {

using nlohmann::json;

std::optional<GeoLevel> level_from_token(const std::string& s) {
    if (s == "total" || s == "region") return GeoLevel::region;
    return geo_level_from(s);
}

const char* level_token(GeoLevel level) {
    return level == GeoLevel::region ? "total" : to_string(level);
}

std::vector<GeoLevel> parse_levels(const std::string& csv_list) {
    std::vector<GeoLevel> out;
    for (const auto& tok : split(csv_list, ',')) {
        const std::string t = trim(tok);
        if (t.empty()) continue;
        const auto level = level_from_token(to_lower(t));
        if (!level) throw std::runtime_error("unknown level '" + t + "'");
        out.push_back(*level);
    }
    if (out.empty()) throw std::runtime_error("no levels configured");
    return out;
}

std::vector<Frequency> parse_freqs(const std::string& csv_list) {
    std::vector<Frequency> out;
    for (const auto& tok : split(csv_list, ',')) {
        const std::string t = trim(tok);
        if (t.empty()) continue;
        const auto freq = frequency_from(to_lower(t));
        if (!freq) throw std::runtime_error("unknown frequency '" + t + "'");
        out.push_back(*freq);
    }
    if (out.empty()) throw std::runtime_error("no frequencies configured");
    return out;
}

namespace {

std::vector<std::string> read_phrase_file(const std::filesystem::path& path) {
    std::vector<std::string> out;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (!t.empty() && t[0] != '#') out.push_back(t);
    }
    return out;
}

std::map<std::string, AccountClass> read_account_overrides(
    const std::filesystem::path& path) {
    std::map<std::string, AccountClass> out;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    CsvReader reader(in);
    const auto header = reader.next();  // handle,class
    (void)header;
    while (auto row = reader.next()) {
        if (row->fields.size() < 2) continue;
        const auto cls = account_class_from(to_lower(trim(row->fields[1])));
        if (!cls || (*cls != AccountClass::media && *cls != AccountClass::other)) {
            throw std::runtime_error("account override line " +
                                     std::to_string(row->line_number) +
                                     ": class must be media or other");
        }
        out[to_lower(trim(row->fields[0]))] = *cls;
    }
    return out;
}

void collect_errors(LoadedInputs& inputs, const std::string& file,
                    const std::vector<RecordError>& errors) {
    for (const auto& e : errors) inputs.record_errors.emplace_back(file, e);
}

}  // namespace

LoadedInputs load_inputs(const RunConfig& config, const InputNeeds& needs) {
    LoadedInputs inputs;
    inputs.config = config;

    const auto start = parse_date(config.window_start);
    const auto end = parse_date(config.window_end);
    if (!start || !end) throw std::runtime_error("config: bad window dates");
    if (*start > *end) throw std::runtime_error("config: inverted study window");
    inputs.window_start = *start;
    inputs.window_end = *end;

    if (config.registry.empty()) throw std::runtime_error("config: registry path required");
    inputs.registry =
        parse_geo_registry(config.registry, std::filesystem::path{config.polygons});

    // Shared-area machinery, active only when the registry carries the unit.
    std::vector<std::string> members;
    for (const auto& m : split(config.shared_members, ',')) {
        const std::string t = trim(m);
        if (!t.empty()) members.push_back(t);
    }
    SharedUnitMap shared;
    if (!config.shared_unit.empty() && inputs.registry.contains(config.shared_unit)) {
        for (const auto& m : members) {
            if (!inputs.registry.contains(m)) {
                throw std::runtime_error("config: shared member '" + m +
                                         "' missing from registry");
            }
        }
        if (members.empty()) {
            throw std::runtime_error("config: shared unit without members");
        }
        shared[config.shared_unit] = members;
    }

    inputs.cleaning.window_start = inputs.window_start;
    inputs.cleaning.window_end = inputs.window_end;
    inputs.cleaning.tz_offset_hours = config.tz_offset_hours;
    inputs.cleaning.shared_label = config.shared_label;
    inputs.cleaning.shared_unit_id = shared.empty() ? "" : config.shared_unit;
    if (!shared.empty()) {
        const std::string target = config.shared_alias_target.empty()
                                       ? members.front()
                                       : config.shared_alias_target;
        if (inputs.registry.contains(target)) {
            inputs.cleaning.profile_aliases[normalize_ws(config.shared_label)] = target;
        }
    }
    if (!config.political_phrases.empty()) {
        inputs.cleaning.political_phrases = read_phrase_file(config.political_phrases);
    } else {
        inputs.cleaning.political_phrases = {"red tide rick", "redtide rick",
                                             "red tide party", "redtide party"};
    }
    if (!config.account_overrides.empty()) {
        inputs.cleaning.account_overrides = read_account_overrides(config.account_overrides);
    }

    inputs.sentiment_params.window_before = config.context_before;
    inputs.sentiment_params.window_after = config.context_after;
    inputs.sentiment_params.shifter_floor = config.shifter_floor;
    inputs.sentiment_params.adversative_before_factor = config.adversative_before;
    inputs.sentiment_params.adversative_after_factor = config.adversative_after;
    inputs.sentiment_params.question_weight = config.question_weight;
    inputs.sentiment_params.ellipsis_penalty = config.ellipsis_penalty;
    inputs.sentiment_params.mean_aggregation = config.sentence_aggregation == "mean";

    inputs.agg_options.per_capita_scale = config.per_capita_scale;
    inputs.agg_options.beach_radius_miles = config.beach_radius_mi;
    inputs.agg_options.sample_max_centroid_miles = config.sample_assign_max_mi;
    inputs.agg_options.kbrevis_top_n = config.kbrevis_top_n;
    inputs.agg_options.shared_units = shared;
    if (config.kbrevis_stat == "mean") {
        inputs.agg_options.kbrevis_stat = AggregationOptions::KbrevisStat::mean;
    } else if (config.kbrevis_stat == "sum") {
        inputs.agg_options.kbrevis_stat = AggregationOptions::KbrevisStat::sum;
    } else if (config.kbrevis_stat == "max") {
        inputs.agg_options.kbrevis_stat = AggregationOptions::KbrevisStat::max;
    } else {
        throw std::runtime_error("config: unknown kbrevis_stat '" + config.kbrevis_stat + "'");
    }

    if (needs.tweets) {
        if (config.tweets.empty()) throw std::runtime_error("config: tweets path required");
        const TweetFormat format = config.tweets_format == "csv" ? TweetFormat::csv
                                                                 : TweetFormat::jsonl;
        auto parsed = parse_tweets(config.tweets, format);
        inputs.tweets = std::move(parsed.records);
        collect_errors(inputs, config.tweets, parsed.errors);
    }
    if (needs.conditions) {
        if (!config.beach.empty()) {
            auto parsed = parse_beach_reports(config.beach);
            inputs.beach_reports = std::move(parsed.records);
            collect_errors(inputs, config.beach, parsed.errors);
        }
        if (!config.kbrevis.empty()) {
            const BoundingBox bbox{config.bbox_lat_min, config.bbox_lat_max,
                                   config.bbox_lon_min, config.bbox_lon_max};
            auto parsed = parse_kbrevis_samples(config.kbrevis, bbox);
            inputs.kbrevis = std::move(parsed.records);
            collect_errors(inputs, config.kbrevis, parsed.errors);
        }
        if (!config.beaches.empty()) {
            auto parsed = parse_beach_locations(config.beaches);
            inputs.beach_locations = std::move(parsed.records);
            collect_errors(inputs, config.beaches, parsed.errors);
        }
    }
    if (needs.lexicon) {
        if (config.lexicon.empty()) throw std::runtime_error("config: lexicon path required");
        auto parsed = parse_lexicon(config.lexicon, config.amplifier_delta,
                                    config.deamplifier_delta);
        collect_errors(inputs, config.lexicon, parsed.errors);
        inputs.lexicon = Lexicon(parsed.records);
        if (!config.lexicon_patch.empty()) {
            auto patch = parse_lexicon_patch(config.lexicon_patch, config.amplifier_delta,
                                             config.deamplifier_delta);
            collect_errors(inputs, config.lexicon_patch, patch.errors);
            inputs.lexicon = apply_domain_customization(inputs.lexicon, patch.records);
        }
    }
    if (needs.vocabularies && !config.concern_dir.empty()) {
        inputs.vocabularies = load_concern_vocabularies(config.concern_dir);
    }
    return inputs;
}

CleanResult stage_clean(const LoadedInputs& inputs) {
    return clean_corpus(inputs.tweets, inputs.registry, inputs.cleaning);
}

namespace {

void score_tweets(const LoadedInputs& inputs, CleanResult& cleaned,
                  std::vector<ScoredText>* details) {
    if (details) details->resize(cleaned.tweets.size());
    auto score_range = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            auto& ct = cleaned.tweets[i];
            auto scored = score_tweet(ct.tweet, inputs.lexicon, inputs.sentiment_params);
            ct.sentiment = scored.total;
            if (details) (*details)[i] = std::move(scored);
        }
    };
    const int threads = std::max(1, inputs.config.threads);
    if (threads == 1 || cleaned.tweets.size() < 1024) {
        score_range(0, cleaned.tweets.size());
        return;
    }
    std::vector<std::thread> pool;
    const size_t chunk = (cleaned.tweets.size() + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const size_t begin = t * chunk;
        const size_t end = std::min(cleaned.tweets.size(), begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(score_range, begin, end);
    }
    for (auto& th : pool) th.join();
}

}  // namespace

void stage_score(const LoadedInputs& inputs, CleanResult& cleaned) {
    score_tweets(inputs, cleaned, nullptr);
}

std::vector<ScoredText> stage_score_detailed(const LoadedInputs& inputs,
                                             CleanResult& cleaned) {
    std::vector<ScoredText> details;
    score_tweets(inputs, cleaned, &details);
    return details;
}

TweetPanel stage_tweet_panel(const LoadedInputs& inputs,
                             const std::vector<CleanedTweet>& tweets, GeoLevel level,
                             Frequency freq, MatchFilter match, AccountFilter account) {
    return aggregate_tweets(tweets, inputs.registry, level, freq, inputs.window_start,
                            inputs.window_end, match, account, inputs.agg_options);
}

Panel stage_condition_panel(const LoadedInputs& inputs, GeoLevel level, Frequency freq) {
    return aggregate_conditions(inputs.beach_reports, inputs.kbrevis,
                                inputs.beach_locations, inputs.registry, level, freq,
                                inputs.window_start, inputs.window_end,
                                inputs.agg_options);
}

Panel stage_joined_panel(const LoadedInputs& inputs,
                         const std::vector<CleanedTweet>& tweets, GeoLevel level,
                         Frequency freq, MatchFilter match, AccountFilter account) {
    const auto tweet_panel = stage_tweet_panel(inputs, tweets, level, freq, match, account);
    const auto condition_panel = stage_condition_panel(inputs, level, freq);
    return join_panels(tweet_panel.panel, condition_panel);
}

std::map<std::pair<GeoLevel, Frequency>, Panel> build_grid_panels(
    const LoadedInputs& inputs, const std::vector<CleanedTweet>& tweets,
    const std::vector<GeoLevel>& levels, const std::vector<Frequency>& freqs,
    MatchFilter match, AccountFilter account) {
    std::map<std::pair<GeoLevel, Frequency>, Panel> out;
    for (const auto level : levels) {
        for (const auto freq : freqs) {
            out[{level, freq}] =
                stage_joined_panel(inputs, tweets, level, freq, match, account);
        }
    }
    return out;
}

// --- emission --------------------------------------------------------------

void emit_cleaned_jsonl(const std::filesystem::path& path,
                        const std::vector<CleanedTweet>& tweets) {
    atomic_write(path, [&](std::ostream& out) {
        for (const auto& ct : tweets) {
            json j = json::parse(tweet_to_jsonl(ct.tweet));
            j["resolved_unit"] = ct.unit.unit_id;
            j["resolved_source"] = to_string(ct.unit.source);
            out << j.dump() << "\n";
        }
    });
}

void emit_cleaning_report(const std::filesystem::path& path, const CleaningReport& report,
                          const std::vector<Rejection>& rejections) {
    atomic_write(path, [&](std::ostream& out) {
        json j;
        j["input_count"] = report.input_count;
        j["excluded_political"] = report.excluded_political;
        j["deduped"] = report.deduped;
        j["reassigned_tampa_bay"] = report.reassigned_tampa_bay;
        j["out_of_window"] = report.out_of_window;
        j["unresolved_geo"] = report.unresolved_geo;
        j["admitted"] = report.admitted;
        j["conserved"] = report.conserved();
        j["rejections"] = json::array();
        for (const auto& r : rejections) {
            j["rejections"].push_back({{"tweet_id", r.tweet_id}, {"reason", r.reason}});
        }
        out << j.dump(2) << "\n";
    });
}

void emit_scored_jsonl(const std::filesystem::path& path,
                       const std::vector<ScoredText>& scores) {
    atomic_write(path, [&](std::ostream& out) {
        for (const auto& s : scores) {
            json j;
            j["tweet_id"] = s.tweet_id;
            j["total"] = s.total;
            j["sentence_scores"] = s.sentence_scores;
            j["question_flags"] = s.question_flags;
            j["ellipsis_runs"] = s.ellipsis_runs;
            out << j.dump() << "\n";
        }
    });
}

void emit_panels_csv(const std::filesystem::path& path, const std::vector<Panel>& panels) {
    atomic_write(path, [&](std::ostream& out) {
        out << "unit,level,bucket_start,freq,match,count,per_capita,sentiment,"
               "per_capita_sentiment,dead_fish,respiratory,kbrevis,retweets\n";
        for (const auto& panel : panels) {
            for (const auto& [key, cell] : panel.cells) {
                const auto& bucket = panel.buckets[key.second];
                out << key.first << "," << level_token(panel.level) << ","
                    << format_date(bucket.start) << "," << to_string(panel.freq) << ","
                    << to_string(panel.match) << "," << format_double(cell.tweet_count)
                    << "," << format_double(cell.per_capita_count) << ","
                    << format_double(cell.sentiment_total) << ","
                    << format_double(cell.per_capita_sentiment) << ","
                    << format_double(cell.dead_fish) << ","
                    << format_double(cell.respiratory) << ","
                    << (cell.kbrevis_defined ? format_double(cell.kbrevis) : "") << ","
                    << format_double(cell.retweet_count) << "\n";
            }
        }
    });
}

void emit_grid_csv(const std::filesystem::path& path, const CorrelationGrid& grid) {
    atomic_write(path, [&](std::ostream& out) {
        out << "level,freq,metric,match,condition,shift,r,n,error\n";
        for (const auto& e : grid.entries) {
            out << level_token(e.level) << "," << to_string(e.freq) << ","
                << to_string(grid.metric) << "," << to_string(grid.match) << ","
                << to_string(grid.condition) << "," << grid.shift << ","
                << (e.r ? format_double(*e.r) : "") << "," << e.n << ","
                << csv_escape(e.error) << "\n";
        }
    });
}

void emit_fit_json(const std::filesystem::path& path, const RegressionFit& fit) {
    atomic_write(path, [&](std::ostream& out) {
        json j;
        j["slope"] = fit.slope;
        j["intercept"] = fit.intercept;
        j["r_squared"] = fit.r_squared;
        j["p_value"] = fit.p_value;
        j["n"] = fit.n;
        out << j.dump(2) << "\n";
    });
}

void emit_scatter_csv(const std::filesystem::path& path,
                      const std::vector<DistanceRecord>& records) {
    atomic_write(path, [&](std::ostream& out) {
        out << "unit,bucket,distance_miles,per_capita_count,bin\n";
        for (const auto& r : records) {
            out << r.unit_id << "," << r.bucket << "," << format_double(r.distance_miles)
                << "," << format_double(r.per_capita_count) << "," << to_string(r.bin)
                << "\n";
        }
    });
}

void emit_bins_json(const std::filesystem::path& path,
                    const std::vector<BinContrast>& contrasts) {
    atomic_write(path, [&](std::ostream& out) {
        json arr = json::array();
        for (const auto& c : contrasts) {
            arr.push_back({{"bin_a", to_string(c.bin_a)},
                           {"bin_b", to_string(c.bin_b)},
                           {"diff", c.diff},
                           {"lower", c.lower},
                           {"upper", c.upper}});
        }
        out << arr.dump(2) << "\n";
    });
}

void emit_manifest(const std::filesystem::path& path, const std::string& command,
                   const RunConfig& config) {
    json j;
    j["tool"] = kToolVersion;
    j["command"] = command;
    j["config_hash"] = hex64(config_hash(config));
    j["config"] = json::object();
    RunConfig mut = config;
    for (const auto& f : config_fields(mut)) {
        switch (f.kind) {
            case ConfigField::Kind::text:
                j["config"][f.name] = *static_cast<std::string*>(f.ptr);
                break;
            case ConfigField::Kind::real:
                j["config"][f.name] = *static_cast<double*>(f.ptr);
                break;
            case ConfigField::Kind::integer:
                j["config"][f.name] = *static_cast<int*>(f.ptr);
                break;
            case ConfigField::Kind::boolean:
                j["config"][f.name] = *static_cast<bool*>(f.ptr);
                break;
        }
    }
    j["inputs"] = json::array();
    for (const std::string* p :
         {&config.tweets, &config.beach, &config.kbrevis, &config.beaches,
          &config.registry, &config.polygons, &config.lexicon, &config.lexicon_patch,
          &config.political_phrases, &config.account_overrides}) {
        if (p->empty() || !std::filesystem::exists(*p)) continue;
        const std::string content = read_file(*p);
        j["inputs"].push_back({{"path", *p},
                               {"bytes", content.size()},
                               {"fnv64", hex64(fnv1a64(content))}});
    }
    atomic_write(path, [&](std::ostream& out) { out << j.dump(2) << "\n"; });
}

}  // namespace redtide
