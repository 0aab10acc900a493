#include "redtide/cleaning.hpp"

#include <stdexcept>

#include "redtide/text_util.hpp"

namespace redtide {

namespace {

const char* kMentionForms[] = {"red tide", "redtide"};

std::string normalize_for_matching(const std::string& text) {
    std::string no_hash;
    no_hash.reserve(text.size());
    for (char c : text) {
        if (c != '#') no_hash.push_back(c);
    }
    return normalize_ws(no_hash);
}

struct Interval {
    size_t begin, end;
};

std::vector<Interval> find_all(const std::string& haystack, const std::string& needle) {
    std::vector<Interval> out;
    if (needle.empty()) return out;
    size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        out.push_back({pos, pos + needle.size()});
        ++pos;
    }
    return out;
}

}  // namespace

bool is_political_only(const std::string& text,
                       const std::vector<std::string>& political_phrases) {
    const std::string norm = normalize_for_matching(text);

    std::vector<Interval> phrase_spans;
    for (const auto& phrase : political_phrases) {
        const std::string p = normalize_for_matching(phrase);
        for (const auto& iv : find_all(norm, p)) phrase_spans.push_back(iv);
    }

    for (const char* mention : kMentionForms) {
        for (const auto& m : find_all(norm, mention)) {
            bool covered = false;
            for (const auto& p : phrase_spans) {
                if (m.begin >= p.begin && m.end <= p.end) {
                    covered = true;
                    break;
                }
            }
            if (!covered) return false;  // a standalone red-tide reference
        }
    }
    return true;
}

std::optional<GeoRef> resolve_location(const Tweet& tweet, const GeoRegistry& registry,
                                       const CleaningConfig& config) {
    auto resolve = [&](const GeoRef& ref) -> std::optional<GeoRef> {
        GeoRef out = ref;
        if (!out.unit_id.empty() && registry.contains(out.unit_id)) return out;
        if (registry.contains(out.raw_label)) {
            out.unit_id = out.raw_label;
            return out;
        }
        if (const auto* u = registry.find_by_label(out.raw_label)) {
            out.unit_id = u->id;
            return out;
        }
        if (out.source == GeoSource::geoprofile) {
            const auto it = config.profile_aliases.find(normalize_ws(out.raw_label));
            if (it != config.profile_aliases.end() && registry.contains(it->second)) {
                out.unit_id = it->second;
                return out;
            }
        }
        return std::nullopt;
    };

    if (tweet.place_match) {
        if (auto r = resolve(*tweet.place_match)) return r;
    }
    if (tweet.profile_match) {
        if (auto r = resolve(*tweet.profile_match)) return r;
    }
    return std::nullopt;
}

GeoRef reassign_tampa_bay(GeoRef ref, const GeoRegistry& registry,
                          const CleaningConfig& config) {
    if (ref.source != GeoSource::geoprofile) return ref;
    if (config.shared_label.empty() || config.shared_unit_id.empty()) return ref;
    if (normalize_ws(ref.raw_label) != normalize_ws(config.shared_label)) return ref;
    if (!registry.contains(config.shared_unit_id)) return ref;
    ref.unit_id = config.shared_unit_id;
    return ref;
}

bool in_window(UtcSeconds timestamp, Date start, Date end, int tz_offset_hours) {
    const Date day = local_date(timestamp, tz_offset_hours);
    return day >= start && day <= end;
}

AccountClass classify_account(std::optional<bool> verified, const std::string& handle,
                              const std::map<std::string, AccountClass>& overrides) {
    if (!verified.has_value()) return AccountClass::unknown;
    if (!*verified) return AccountClass::citizen;
    const auto it = overrides.find(to_lower(handle));
    if (it != overrides.end()) return it->second;
    return AccountClass::media;
}

CleanResult clean_corpus(const std::vector<Tweet>& tweets, const GeoRegistry& registry,
                         const CleaningConfig& config) {
    if (config.window_start > config.window_end) {
        throw std::runtime_error("cleaning: inverted study window");
    }
    CleanResult result;
    result.report.input_count = tweets.size();

    for (const Tweet& original : tweets) {
        if (is_political_only(original.text, config.political_phrases)) {
            ++result.report.excluded_political;
            result.rejections.push_back({original.id, "political-nickname-only reference"});
            continue;
        }

        Tweet t = original;
        if (t.place_match && t.profile_match) ++result.report.deduped;

        auto resolved = resolve_location(t, registry, config);
        if (!resolved) {
            ++result.report.unresolved_geo;
            result.rejections.push_back({t.id, "no resolvable geo reference"});
            continue;
        }
        GeoRef unit = reassign_tampa_bay(*resolved, registry, config);
        if (unit.unit_id != resolved->unit_id) ++result.report.reassigned_tampa_bay;

        if (!in_window(t.timestamp, config.window_start, config.window_end,
                       config.tz_offset_hours)) {
            ++result.report.out_of_window;
            result.rejections.push_back({t.id, "outside study window"});
            continue;
        }

        t.account_class = classify_account(t.verified, t.handle, config.account_overrides);
        if (t.place_match && t.place_match->raw_label == unit.raw_label &&
            unit.source == GeoSource::place) {
            t.place_match->unit_id = unit.unit_id;
        }
        if (t.profile_match && unit.source == GeoSource::geoprofile) {
            t.profile_match->unit_id = unit.unit_id;
        }

        CleanedTweet ct;
        ct.local_day = local_date(t.timestamp, config.tz_offset_hours);
        ct.unit = unit;
        ct.tweet = std::move(t);
        result.tweets.push_back(std::move(ct));
        ++result.report.admitted;
    }
    return result;
}

}  // namespace redtide
