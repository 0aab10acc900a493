#pragma once

#include <map>
#include <string>
#include <vector>

#include "redtide/aggregation.hpp"
#include "redtide/analytics.hpp"
#include "redtide/cleaning.hpp"
#include "redtide/config.hpp"
#include "redtide/parsers.hpp"
#include "redtide/sentiment.hpp"
#include "redtide/topics.hpp"

namespace redtide {

inline constexpr const char* kToolVersion = "redtide 0.1.0";

/// Which input families a stage needs; unneeded paths may stay empty.
struct InputNeeds {
    bool tweets = false;
    bool conditions = false;
    bool lexicon = false;
    bool vocabularies = false;
};

struct LoadedInputs {
    RunConfig config;
    GeoRegistry registry;
    Lexicon lexicon;
    std::vector<Tweet> tweets;
    std::vector<BeachReport> beach_reports;
    std::vector<KBrevisSample> kbrevis;
    std::vector<BeachLocation> beach_locations;
    std::vector<ConcernVocabulary> vocabularies;

    CleaningConfig cleaning;
    SentimentParams sentiment_params;
    AggregationOptions agg_options;
    Date window_start{};
    Date window_end{};

    /// Record-level validation errors, tagged by source file.
    std::vector<std::pair<std::string, RecordError>> record_errors;
};

/// Parses configured inputs and derives the per-module option structs.
/// Configuration problems (missing files, bad enums, inverted window)
/// throw; record-level data problems accumulate in record_errors.
LoadedInputs load_inputs(const RunConfig& config, const InputNeeds& needs);

/// "total" (region), "county", "city", "zcta".
std::optional<GeoLevel> level_from_token(const std::string& s);
const char* level_token(GeoLevel level);

std::vector<GeoLevel> parse_levels(const std::string& csv_list);
std::vector<Frequency> parse_freqs(const std::string& csv_list);

CleanResult stage_clean(const LoadedInputs& inputs);

/// Scores every cleaned tweet with the domain lexicon; honours
/// config.threads, output independent of thread count.
void stage_score(const LoadedInputs& inputs, CleanResult& cleaned);

/// Like stage_score but also returns the per-sentence detail for
/// scored.jsonl, scoring each tweet exactly once.
std::vector<ScoredText> stage_score_detailed(const LoadedInputs& inputs,
                                             CleanResult& cleaned);

TweetPanel stage_tweet_panel(const LoadedInputs& inputs,
                             const std::vector<CleanedTweet>& tweets, GeoLevel level,
                             Frequency freq, MatchFilter match, AccountFilter account);

Panel stage_condition_panel(const LoadedInputs& inputs, GeoLevel level, Frequency freq);

Panel stage_joined_panel(const LoadedInputs& inputs,
                         const std::vector<CleanedTweet>& tweets, GeoLevel level,
                         Frequency freq, MatchFilter match, AccountFilter account);

std::map<std::pair<GeoLevel, Frequency>, Panel> build_grid_panels(
    const LoadedInputs& inputs, const std::vector<CleanedTweet>& tweets,
    const std::vector<GeoLevel>& levels, const std::vector<Frequency>& freqs,
    MatchFilter match, AccountFilter account);

// --- artifact emission (all atomic) ---------------------------------------

void emit_cleaned_jsonl(const std::filesystem::path& path,
                        const std::vector<CleanedTweet>& tweets);
void emit_cleaning_report(const std::filesystem::path& path, const CleaningReport& report,
                          const std::vector<Rejection>& rejections);
void emit_scored_jsonl(const std::filesystem::path& path,
                       const std::vector<ScoredText>& scores);
/// One combined CSV; each row names its own level/freq/match.
void emit_panels_csv(const std::filesystem::path& path, const std::vector<Panel>& panels);
void emit_grid_csv(const std::filesystem::path& path, const CorrelationGrid& grid);
void emit_fit_json(const std::filesystem::path& path, const RegressionFit& fit);
void emit_scatter_csv(const std::filesystem::path& path,
                      const std::vector<DistanceRecord>& records);
void emit_bins_json(const std::filesystem::path& path,
                    const std::vector<BinContrast>& contrasts);

/// Deterministic run manifest: command, config hash and canonical dump,
/// input digests, tool version. No timestamps, so reruns hash equal.
void emit_manifest(const std::filesystem::path& path, const std::string& command,
                   const RunConfig& config);

}  // namespace redtide
