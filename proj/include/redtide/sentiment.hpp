#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "redtide/parsers.hpp"
#include "redtide/types.hpp"

namespace redtide {

/// Scoring constants. The paper fixes the question weight (0.25) and the
/// ellipsis penalty (0.15); the window shape and shifter deltas follow
/// the reference engine's defaults and every one of them is
/// config-overridable.
struct SentimentParams {
    int window_before = 4;
    int window_after = 2;
    double shifter_floor = -0.9;  // lower clamp for summed amp/deamp deltas
    double adversative_before_factor = 1.25;
    double adversative_after_factor = 0.75;
    double question_weight = 0.25;
    double ellipsis_penalty = 0.15;
    bool mean_aggregation = false;  // per-tweet total: sum (default) or mean
};

struct Sentence {
    std::vector<std::string> tokens;
    bool question = false;
};

struct TokenizedText {
    std::vector<Sentence> sentences;
    int ellipsis_runs = 0;
};

/// Sentence split on {. ! ?}; URLs stay whole (periods inside them do not
/// terminate), hashtags lose their '#', maximal runs of 2+ periods are
/// counted as ellipsis runs and removed. A single period between digits
/// is part of the number.
TokenizedText tokenize(const std::string& text);

/// Phrase-indexed lexicon with longest-match-first lookup. Matched
/// phrases consume their tokens, so "no signs of red tide" cannot also
/// fire the inner "no" negator.
class Lexicon {
  public:
    Lexicon() = default;
    explicit Lexicon(const std::vector<LexiconEntry>& entries);

    void upsert(LexiconEntry entry);  // last write wins
    bool remove(const std::vector<std::string>& phrase);

    const LexiconEntry* lookup(const std::vector<std::string>& phrase) const;

    struct Match {
        const LexiconEntry* entry = nullptr;
        size_t length = 0;
    };
    /// Longest phrase starting at tokens[pos]; entry==nullptr if none.
    Match longest_match(const std::vector<std::string>& tokens, size_t pos) const;

    size_t size() const { return entries_.size(); }
    std::vector<const LexiconEntry*> entries_of(LexiconClass cls) const;

  private:
    std::map<std::vector<std::string>, LexiconEntry> entries_;
    size_t max_phrase_len_ = 0;
};

struct ScoredText {
    std::string tweet_id;
    std::vector<double> sentence_scores;
    std::vector<bool> question_flags;
    int ellipsis_runs = 0;
    double total = 0.0;
};

double score_sentence(const Sentence& sentence, const Lexicon& lexicon,
                      const SentimentParams& params = {});

ScoredText score_text(const std::string& tweet_id, const std::string& text,
                      const Lexicon& lexicon, const SentimentParams& params = {});

inline ScoredText score_tweet(const Tweet& t, const Lexicon& lexicon,
                              const SentimentParams& params = {}) {
    return score_text(t.id, t.text, lexicon, params);
}

struct LexiconPatchRow {
    enum class Op { add, override_entry, remove };
    Op op = Op::add;
    LexiconEntry entry;
};

/// lexicon_patch.csv rows: op,phrase,class,weight with op in
/// {add, override, remove}. remove rows need only the phrase.
ParseResult<LexiconPatchRow> parse_lexicon_patch(const std::filesystem::path& path,
                                                 double default_amplifier_delta = 0.8,
                                                 double default_deamplifier_delta = 0.6);

/// Applies patch rows in file order; later rows win.
Lexicon apply_domain_customization(const Lexicon& base,
                                   const std::vector<LexiconPatchRow>& patch);

}  // namespace redtide
