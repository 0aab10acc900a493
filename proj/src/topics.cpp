#include "redtide/topics.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include "redtide/text_util.hpp"

namespace redtide {

const char* to_string(Concern c) {
    switch (c) {
        case Concern::environment: return "environment";
        case Concern::health: return "health";
        case Concern::economy: return "economy";
        case Concern::government: return "government";
    }
    return "?";
}

namespace {

constexpr Concern kAllConcerns[] = {Concern::environment, Concern::health,
                                    Concern::economy, Concern::government};

std::vector<std::string> stem_tokens(const std::vector<std::string>& tokens, bool stem) {
    if (!stem) return tokens;
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(strip_suffix_stem(t));
    return out;
}

// Phrase key -> (category index, term index within its vocabulary).
using TermIndex = std::map<std::vector<std::string>, std::pair<size_t, size_t>>;

TermIndex build_term_index(const std::vector<ConcernVocabulary>& vocabularies, bool stem) {
    TermIndex index;
    for (size_t vi = 0; vi < vocabularies.size(); ++vi) {
        for (size_t ti = 0; ti < vocabularies[vi].terms.size(); ++ti) {
            const auto key = stem_tokens(vocabularies[vi].terms[ti], stem);
            const auto [it, inserted] = index.emplace(key, std::make_pair(vi, ti));
            if (!inserted && it->second.first != vi) {
                throw std::runtime_error(
                    "concern term '" + join(vocabularies[vi].terms[ti], " ") +
                    "' appears in both " +
                    to_string(vocabularies[it->second.first].category) + " and " +
                    to_string(vocabularies[vi].category));
            }
        }
    }
    return index;
}

std::vector<std::string> tweet_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    for (const auto& sentence : tokenize(text).sentences) {
        tokens.insert(tokens.end(), sentence.tokens.begin(), sentence.tokens.end());
    }
    return tokens;
}

}  // namespace

std::vector<ConcernVocabulary> load_concern_vocabularies(const std::filesystem::path& dir,
                                                         bool stem) {
    std::vector<ConcernVocabulary> out;
    for (const Concern c : kAllConcerns) {
        const auto path = dir / (std::string("concern_") + to_string(c) + ".txt");
        std::ifstream in(path);
        if (!in) continue;
        ConcernVocabulary vocab;
        vocab.category = c;
        std::string line;
        while (std::getline(in, line)) {
            const std::string term = trim(line);
            if (term.empty() || term[0] == '#') continue;
            vocab.terms.push_back(split_ws(normalize_ws(term)));
        }
        out.push_back(std::move(vocab));
    }
    build_term_index(out, stem);  // disjointness check at load time
    return out;
}

std::vector<ConcernStats> categorize(const std::vector<CleanedTweet>& tweets,
                                     const std::vector<ConcernVocabulary>& vocabularies,
                                     Date window_start, Date window_end, bool stem) {
    const TermIndex index = build_term_index(vocabularies, stem);
    size_t max_len = 1;
    for (const auto& [key, ref] : index) max_len = std::max(max_len, key.size());

    std::vector<ConcernStats> stats(vocabularies.size());
    std::vector<std::set<size_t>> terms_hit(vocabularies.size());
    for (size_t i = 0; i < vocabularies.size(); ++i) {
        stats[i].category = vocabularies[i].category;
    }

    for (const auto& ct : tweets) {
        const auto tokens = stem_tokens(tweet_tokens(ct.tweet.text), stem);
        std::vector<bool> mentioned(vocabularies.size(), false);
        for (size_t pos = 0; pos < tokens.size(); ++pos) {
            // Longest phrase first so "red tide cleanup" style phrases win
            // over their single-word prefixes.
            const size_t limit = std::min(max_len, tokens.size() - pos);
            std::vector<std::string> probe;
            size_t matched_len = 0;
            std::pair<size_t, size_t> matched_ref;
            for (size_t len = 1; len <= limit; ++len) {
                probe.push_back(tokens[pos + len - 1]);
                const auto it = index.find(probe);
                if (it != index.end()) {
                    matched_len = len;
                    matched_ref = it->second;
                }
            }
            if (matched_len == 0) continue;
            ++stats[matched_ref.first].mention_count;
            terms_hit[matched_ref.first].insert(matched_ref.second);
            mentioned[matched_ref.first] = true;
            pos += matched_len - 1;
        }
        if (ct.local_day >= window_start && ct.local_day <= window_end) {
            const int week = static_cast<int>((ct.local_day - window_start).count()) / 7;
            for (size_t i = 0; i < mentioned.size(); ++i) {
                if (mentioned[i]) ++stats[i].tweets_per_bucket[week];
            }
        }
    }
    for (size_t i = 0; i < stats.size(); ++i) {
        stats[i].unique_terms_hit = terms_hit[i].size();
    }
    return stats;
}

TopTerms top_polarized_terms(const std::vector<CleanedTweet>& tweets,
                             const Lexicon& lexicon, const std::string& unit_id,
                             const GeoRegistry& registry,
                             const SharedUnitMap& shared_units, size_t k,
                             double per_capita_scale) {
    const GeoLevel level = registry.at(unit_id).level;
    std::map<std::string, std::pair<double, double>> counts;  // term -> (count, weight sign)

    for (const auto& ct : tweets) {
        double unit_weight = 0.0;
        for (const auto& [credited, w] : credit_share(ct.unit.unit_id, registry, shared_units)) {
            const auto target = registry.ancestor_at(credited, level);
            if (target && *target == unit_id) unit_weight += w;
        }
        if (unit_weight <= 0.0) continue;

        for (const auto& sentence : tokenize(ct.tweet.text).sentences) {
            const auto& tokens = sentence.tokens;
            for (size_t pos = 0; pos < tokens.size();) {
                const auto m = lexicon.longest_match(tokens, pos);
                if (!m.entry || m.entry->cls != LexiconClass::polarized ||
                    m.entry->weight == 0.0) {
                    pos += m.entry ? m.length : 1;
                    continue;
                }
                auto& slot = counts[join(m.entry->phrase, " ")];
                slot.first += unit_weight;
                slot.second = m.entry->weight;
                pos += m.length;
            }
        }
    }

    auto take_top = [&](bool positive) {
        std::vector<TermFrequency> list;
        for (const auto& [term, cw] : counts) {
            if (positive != (cw.second > 0.0)) continue;
            TermFrequency tf;
            tf.term = term;
            tf.count = cw.first;
            tf.per_capita = per_capita(cw.first, unit_id, registry, per_capita_scale);
            list.push_back(std::move(tf));
        }
        std::sort(list.begin(), list.end(), [](const TermFrequency& a, const TermFrequency& b) {
            if (a.count != b.count) return a.count > b.count;
            return a.term < b.term;
        });
        if (list.size() > k) list.resize(k);
        return list;
    };

    TopTerms out;
    out.unit_id = unit_id;
    out.positive = take_top(true);
    out.negative = take_top(false);
    return out;
}

}  // namespace redtide
