#include "redtide/sentiment.hpp"

#include <cctype>
#include <cmath>
#include <fstream>

#include "redtide/csv.hpp"
#include "redtide/text_util.hpp"

namespace redtide {

namespace {

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_url(const std::string& chunk) {
    return starts_with_ci(chunk, "http://") || starts_with_ci(chunk, "https://") ||
           starts_with_ci(chunk, "www.");
}

// Edge cleanup: leading strip keeps '#', '@' and apostrophes; trailing
// strip keeps alphanumerics and apostrophes. Internal punctuation stays.
std::string clean_token(std::string tok) {
    size_t a = 0, b = tok.size();
    auto keep_lead = [](unsigned char c) {
        return std::isalnum(c) || c == '#' || c == '@' || c == '\'';
    };
    auto keep_trail = [](unsigned char c) { return std::isalnum(c) || c == '\''; };
    while (a < b && !keep_lead(static_cast<unsigned char>(tok[a]))) ++a;
    while (b > a && !keep_trail(static_cast<unsigned char>(tok[b - 1]))) --b;
    tok = tok.substr(a, b - a);
    while (!tok.empty() && tok.front() == '#') tok.erase(tok.begin());
    return to_lower(std::move(tok));
}

}  // namespace

TokenizedText tokenize(const std::string& text) {
    TokenizedText out;
    Sentence current;

    auto push_token = [&](std::string raw) {
        if (raw.empty()) return;
        std::string tok = clean_token(std::move(raw));
        if (!tok.empty()) current.tokens.push_back(std::move(tok));
    };
    auto close_sentence = [&](bool question) {
        if (!current.tokens.empty()) {
            current.question = question;
            out.sentences.push_back(std::move(current));
        }
        current = Sentence{};
    };

    for (const std::string& chunk : split_ws(text)) {
        if (is_url(chunk)) {
            current.tokens.push_back(to_lower(chunk));
            continue;
        }
        std::string buf;
        for (size_t i = 0; i < chunk.size(); ++i) {
            const char c = chunk[i];
            if (!is_terminator(c)) {
                buf.push_back(c);
                continue;
            }
            // Decimal point guard: lone '.' between digits stays in the token.
            if (c == '.' && i > 0 && i + 1 < chunk.size() &&
                std::isdigit(static_cast<unsigned char>(chunk[i - 1])) &&
                std::isdigit(static_cast<unsigned char>(chunk[i + 1]))) {
                buf.push_back(c);
                continue;
            }
            size_t j = i;
            int periods = 0;
            bool question = false;
            while (j < chunk.size() && is_terminator(chunk[j])) {
                periods += chunk[j] == '.';
                question |= chunk[j] == '?';
                ++j;
            }
            push_token(std::move(buf));
            buf.clear();
            if (periods >= 2) ++out.ellipsis_runs;
            close_sentence(question);
            i = j - 1;
        }
        push_token(std::move(buf));
    }
    close_sentence(false);
    return out;
}

Lexicon::Lexicon(const std::vector<LexiconEntry>& entries) {
    for (const auto& e : entries) upsert(e);
}

void Lexicon::upsert(LexiconEntry entry) {
    max_phrase_len_ = std::max(max_phrase_len_, entry.phrase.size());
    entries_[entry.phrase] = std::move(entry);
}

bool Lexicon::remove(const std::vector<std::string>& phrase) {
    return entries_.erase(phrase) > 0;
}

const LexiconEntry* Lexicon::lookup(const std::vector<std::string>& phrase) const {
    const auto it = entries_.find(phrase);
    return it == entries_.end() ? nullptr : &it->second;
}

Lexicon::Match Lexicon::longest_match(const std::vector<std::string>& tokens,
                                      size_t pos) const {
    std::vector<std::string> probe;
    const size_t limit = std::min(max_phrase_len_, tokens.size() - pos);
    Match best;
    for (size_t len = 1; len <= limit; ++len) {
        probe.push_back(tokens[pos + len - 1]);
        if (const auto* e = lookup(probe)) best = {e, len};
    }
    return best;
}

std::vector<const LexiconEntry*> Lexicon::entries_of(LexiconClass cls) const {
    std::vector<const LexiconEntry*> out;
    for (const auto& [phrase, e] : entries_) {
        if (e.cls == cls) out.push_back(&e);
    }
    return out;
}

double score_sentence(const Sentence& sentence, const Lexicon& lexicon,
                      const SentimentParams& params) {
    const auto& tokens = sentence.tokens;
    const size_t n = tokens.size();
    if (n == 0) return 0.0;

    struct TokenMatch {
        size_t start;
        size_t length;
        const LexiconEntry* entry;
    };
    std::vector<TokenMatch> matches;
    std::vector<bool> in_polarized(n, false);
    for (size_t pos = 0; pos < n;) {
        const auto m = lexicon.longest_match(tokens, pos);
        if (!m.entry) {
            ++pos;
            continue;
        }
        matches.push_back({pos, m.length, m.entry});
        if (m.entry->cls == LexiconClass::polarized) {
            for (size_t i = pos; i < pos + m.length; ++i) in_polarized[i] = true;
        }
        pos += m.length;
    }

    double sum = 0.0;
    for (const auto& pm : matches) {
        if (pm.entry->cls != LexiconClass::polarized) continue;

        // Window: the nearest `window_before` tokens before the match and
        // `window_after` after it, skipping tokens held by other
        // polarized matches.
        std::vector<bool> in_window(n, false);
        int need = params.window_before;
        for (size_t i = pm.start; i > 0 && need > 0;) {
            --i;
            if (in_polarized[i]) continue;
            in_window[i] = true;
            --need;
        }
        need = params.window_after;
        for (size_t i = pm.start + pm.length; i < n && need > 0; ++i) {
            if (in_polarized[i]) continue;
            in_window[i] = true;
            --need;
        }

        int negators = 0;
        double delta_sum = 0.0;
        bool adversative_before = false, adversative_after = false;
        for (const auto& sm : matches) {
            if (&sm == &pm || sm.entry->cls == LexiconClass::polarized) continue;
            if (sm.entry->cls == LexiconClass::adversative) {
                if (sm.start + sm.length <= pm.start) adversative_before = true;
                if (sm.start >= pm.start + pm.length) adversative_after = true;
                continue;
            }
            bool touches_window = false;
            for (size_t i = sm.start; i < sm.start + sm.length; ++i) {
                if (in_window[i]) {
                    touches_window = true;
                    break;
                }
            }
            if (!touches_window) continue;
            switch (sm.entry->cls) {
                case LexiconClass::negator: ++negators; break;
                case LexiconClass::amplifier: delta_sum += sm.entry->weight; break;
                case LexiconClass::deamplifier: delta_sum -= sm.entry->weight; break;
                default: break;
            }
        }

        double adjusted = pm.entry->weight;
        if (negators % 2 != 0) adjusted = -adjusted;
        adjusted *= 1.0 + std::max(params.shifter_floor, delta_sum);
        if (adversative_before) adjusted *= params.adversative_before_factor;
        if (adversative_after) adjusted *= params.adversative_after_factor;
        sum += adjusted;
    }

    double score = sum / std::sqrt(static_cast<double>(n));
    if (sentence.question) score *= params.question_weight;
    return score;
}

ScoredText score_text(const std::string& tweet_id, const std::string& text,
                      const Lexicon& lexicon, const SentimentParams& params) {
    ScoredText out;
    out.tweet_id = tweet_id;
    const TokenizedText tk = tokenize(text);
    out.ellipsis_runs = tk.ellipsis_runs;
    double sum = 0.0;
    for (const auto& s : tk.sentences) {
        const double v = score_sentence(s, lexicon, params);
        out.sentence_scores.push_back(v);
        out.question_flags.push_back(s.question);
        sum += v;
    }
    if (params.mean_aggregation && !out.sentence_scores.empty()) {
        sum /= static_cast<double>(out.sentence_scores.size());
    }
    out.total = sum - params.ellipsis_penalty * out.ellipsis_runs;
    return out;
}

ParseResult<LexiconPatchRow> parse_lexicon_patch(const std::filesystem::path& path,
                                                 double default_amplifier_delta,
                                                 double default_deamplifier_delta) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    CsvReader reader(in);
    ParseResult<LexiconPatchRow> result;
    const auto header = reader.next();
    if (!header || header->fields.empty() || to_lower(trim(header->fields[0])) != "op") {
        throw std::runtime_error("lexicon patch csv: bad header in " + path.string());
    }
    while (auto row = reader.next()) {
        ++result.input_records;
        auto field = [&](size_t i) {
            return i < row->fields.size() ? trim(row->fields[i]) : std::string{};
        };
        LexiconPatchRow pr;
        const std::string op = to_lower(field(0));
        if (op == "add") pr.op = LexiconPatchRow::Op::add;
        else if (op == "override") pr.op = LexiconPatchRow::Op::override_entry;
        else if (op == "remove") pr.op = LexiconPatchRow::Op::remove;
        else {
            result.errors.push_back({row->line_number, "unknown op '" + op + "'"});
            continue;
        }
        pr.entry.phrase = split_ws(normalize_ws(field(1)));
        if (pr.entry.phrase.empty()) {
            result.errors.push_back({row->line_number, "empty phrase"});
            continue;
        }
        if (pr.op != LexiconPatchRow::Op::remove) {
            const auto cls = lexicon_class_from(to_lower(field(2)));
            if (!cls) {
                result.errors.push_back({row->line_number, "unknown class tag '" + field(2) + "'"});
                continue;
            }
            pr.entry.cls = *cls;
            const std::string w = field(3);
            double weight = 0.0;
            const bool have = !w.empty() && [&] {
                try {
                    size_t p = 0;
                    weight = std::stod(w, &p);
                    return p == w.size();
                } catch (...) {
                    return false;
                }
            }();
            switch (pr.entry.cls) {
                case LexiconClass::polarized:
                    if (!have || weight < -1.0 || weight > 1.0) {
                        result.errors.push_back(
                            {row->line_number, "polarized weight outside [-1, 1]"});
                        continue;
                    }
                    pr.entry.weight = weight;
                    break;
                case LexiconClass::amplifier:
                    pr.entry.weight = have ? std::fabs(weight) : default_amplifier_delta;
                    break;
                case LexiconClass::deamplifier:
                    pr.entry.weight = have ? std::fabs(weight) : default_deamplifier_delta;
                    break;
                default:
                    pr.entry.weight = 1.0;
            }
        }
        result.records.push_back(std::move(pr));
    }
    return result;
}

Lexicon apply_domain_customization(const Lexicon& base,
                                   const std::vector<LexiconPatchRow>& patch) {
    Lexicon out = base;
    for (const auto& row : patch) {
        switch (row.op) {
            case LexiconPatchRow::Op::add:
            case LexiconPatchRow::Op::override_entry:
                out.upsert(row.entry);
                break;
            case LexiconPatchRow::Op::remove:
                out.remove(row.entry.phrase);
                break;
        }
    }
    return out;
}

}  // namespace redtide
