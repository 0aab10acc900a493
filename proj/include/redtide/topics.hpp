#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "redtide/cleaning.hpp"
#include "redtide/geospatial.hpp"
#include "redtide/sentiment.hpp"

namespace redtide {

enum class Concern { environment, health, economy, government };
const char* to_string(Concern c);

struct ConcernVocabulary {
    Concern category = Concern::environment;
    /// Lowercase terms; multi-word phrases allowed. Matching is
    /// stem-insensitive (plural -s, -ed, -ing) unless disabled.
    std::vector<std::vector<std::string>> terms;
};

/// Loads concern_{environment,health,economy,government}.txt from a
/// directory (one term per line, '#' comments). A term appearing in two
/// categories is a load-time error: the categories are disjoint.
std::vector<ConcernVocabulary> load_concern_vocabularies(
    const std::filesystem::path& dir, bool stem = true);

struct ConcernStats {
    Concern category = Concern::environment;
    size_t unique_terms_hit = 0;
    size_t mention_count = 0;
    /// Tweets mentioning the category at least once, per weekly bucket.
    std::map<int, size_t> tweets_per_bucket;
};

std::vector<ConcernStats> categorize(const std::vector<CleanedTweet>& tweets,
                                     const std::vector<ConcernVocabulary>& vocabularies,
                                     Date window_start, Date window_end, bool stem = true);

struct TermFrequency {
    std::string term;       // canonical phrase text
    double count = 0.0;     // credit-shared occurrences in the unit
    double per_capita = 0.0;
};

struct TopTerms {
    std::string unit_id;
    std::vector<TermFrequency> positive;
    std::vector<TermFrequency> negative;
};

/// Top-k positive and negative polarized lexicon terms per unit, counts
/// credit-shared and normalized per 100k population. Ties break
/// lexicographically.
TopTerms top_polarized_terms(const std::vector<CleanedTweet>& tweets,
                             const Lexicon& lexicon, const std::string& unit_id,
                             const GeoRegistry& registry,
                             const SharedUnitMap& shared_units, size_t k = 10,
                             double per_capita_scale = 100000.0);

}  // namespace redtide
