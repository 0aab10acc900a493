#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "redtide/registry.hpp"
#include "redtide/time_util.hpp"
#include "redtide/types.hpp"

namespace redtide {

struct CleaningConfig {
    /// Political nicknames, matched case-insensitively on
    /// whitespace-normalized text with '#' stripped. Extensible via
    /// political_phrases.txt.
    std::vector<std::string> political_phrases;

    /// Verified handles that are not media (government, politicians, ...).
    std::map<std::string, AccountClass> account_overrides;

    /// Geoprofile labels that do not name a registry unit directly
    /// (label -> unit id). Ships with "tampa bay" pointing at the county
    /// the collection service would have picked.
    std::map<std::string, std::string> profile_aliases;

    /// Geoprofile refs whose label normalizes to `shared_label` are
    /// re-pointed to `shared_unit_id`; place matches never are.
    std::string shared_label = "tampa bay";
    std::string shared_unit_id = "tampa_bay_shared";

    Date window_start{};
    Date window_end{};
    int tz_offset_hours = -5;
};

/// True when every red-tide mention ("red tide"/"redtide") in the text
/// sits inside one of the political phrases, i.e. the tweet has no
/// standalone reference to the event itself.
bool is_political_only(const std::string& text,
                       const std::vector<std::string>& political_phrases);

/// Place match wins over geoprofile; labels resolve against the registry
/// by id, then name, then (geoprofile only) the alias table. nullopt when
/// nothing resolves.
std::optional<GeoRef> resolve_location(const Tweet& tweet, const GeoRegistry& registry,
                                       const CleaningConfig& config);

/// Applies the shared-area reassignment to a resolved ref.
GeoRef reassign_tampa_bay(GeoRef ref, const GeoRegistry& registry,
                          const CleaningConfig& config);

/// Inclusive on both window ends, evaluated on the local civil date.
bool in_window(UtcSeconds timestamp, Date start, Date end, int tz_offset_hours);

AccountClass classify_account(std::optional<bool> verified, const std::string& handle,
                              const std::map<std::string, AccountClass>& overrides);

struct CleanedTweet {
    Tweet tweet;    // place/profile unit ids filled where resolvable
    GeoRef unit;    // final attribution
    Date local_day{};
    double sentiment = 0.0;  // filled by the scoring stage
};

struct CleaningReport {
    size_t input_count = 0;
    size_t excluded_political = 0;
    size_t deduped = 0;  // carried both match kinds; place retained
    size_t reassigned_tampa_bay = 0;
    size_t out_of_window = 0;
    size_t unresolved_geo = 0;
    size_t admitted = 0;

    /// admitted + every categorized rejection == input (dedup/reassign
    /// change attribution, not counts).
    bool conserved() const {
        return admitted + excluded_political + out_of_window + unresolved_geo ==
               input_count;
    }
};

struct Rejection {
    std::string tweet_id;
    std::string reason;
};

struct CleanResult {
    std::vector<CleanedTweet> tweets;
    CleaningReport report;
    std::vector<Rejection> rejections;
};

/// Full cleaning pipeline: political exclusion, location resolution with
/// place precedence, shared-area reassignment, study-window filter,
/// account classification. Throws on an inverted window.
CleanResult clean_corpus(const std::vector<Tweet>& tweets, const GeoRegistry& registry,
                         const CleaningConfig& config);

}  // namespace redtide
