#include "redtide/parsers.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "redtide/csv.hpp"
#include "redtide/io_util.hpp"
#include "redtide/text_util.hpp"

namespace redtide {

using nlohmann::json;

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path.string());
    return in;
}

bool parse_double_field(const std::string& s, double& out) {
    try {
        size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size() && std::isfinite(out);
    } catch (...) {
        return false;
    }
}

bool parse_ll_field(const std::string& s, long long& out) {
    try {
        size_t pos = 0;
        out = std::stoll(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

// Maps a header row to column indices; returns false if any required
// column is absent.
bool map_header(const CsvRow& header, const std::vector<std::string>& required,
                std::unordered_map<std::string, size_t>& cols) {
    for (size_t i = 0; i < header.fields.size(); ++i) {
        cols[to_lower(trim(header.fields[i]))] = i;
    }
    for (const auto& name : required) {
        if (!cols.count(name)) return false;
    }
    return true;
}

std::string field_of(const CsvRow& row, const std::unordered_map<std::string, size_t>& cols,
                     const std::string& name) {
    const auto it = cols.find(name);
    if (it == cols.end() || it->second >= row.fields.size()) return {};
    return trim(row.fields[it->second]);
}

bool tweet_from_json(const json& j, size_t line, Tweet& t, std::string& err) {
    if (!j.is_object()) {
        err = "not a JSON object";
        return false;
    }
    if (!j.contains("id") || !j.contains("created_at") || !j.contains("text")) {
        err = "missing required field (id/created_at/text)";
        return false;
    }
    t.id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
    if (t.id.empty()) {
        err = "empty id";
        return false;
    }
    const auto ts = parse_iso8601(j["created_at"].get<std::string>());
    if (!ts) {
        err = "unparseable created_at";
        return false;
    }
    t.timestamp = *ts;
    t.text = j["text"].get<std::string>();

    t.kind = TweetKind::original;
    if (j.contains("kind") && !j["kind"].is_null()) {
        const auto k = tweet_kind_from(j["kind"].get<std::string>());
        if (!k) {
            err = "unknown kind '" + j["kind"].get<std::string>() + "'";
            return false;
        }
        t.kind = *k;
    }
    if (j.contains("verified") && !j["verified"].is_null()) {
        t.verified = j["verified"].get<bool>();
    }
    if (j.contains("handle") && !j["handle"].is_null()) {
        t.handle = j["handle"].get<std::string>();
    }
    if (j.contains("account_class") && !j["account_class"].is_null()) {
        const auto c = account_class_from(j["account_class"].get<std::string>());
        if (c) t.account_class = *c;
    }
    if (j.contains("place_unit") && !j["place_unit"].is_null()) {
        const std::string label = j["place_unit"].get<std::string>();
        if (!label.empty()) t.place_match = GeoRef{"", GeoSource::place, label};
    }
    if (j.contains("profile_label") && !j["profile_label"].is_null()) {
        const std::string label = j["profile_label"].get<std::string>();
        if (!label.empty()) t.profile_match = GeoRef{"", GeoSource::geoprofile, label};
    }
    if (t.place_match && j.contains("place_resolved")) {
        t.place_match->unit_id = j["place_resolved"].get<std::string>();
    }
    if (t.profile_match && j.contains("profile_resolved")) {
        t.profile_match->unit_id = j["profile_resolved"].get<std::string>();
    }
    if (j.contains("lat") && j.contains("lon") && !j["lat"].is_null() && !j["lon"].is_null()) {
        t.coords = LatLon{j["lat"].get<double>(), j["lon"].get<double>()};
    }
    if (!t.place_match && !t.profile_match) {
        err = "record missing all geo fields";
        return false;
    }
    (void)line;
    return true;
}

}  // namespace

ParseResult<Tweet> parse_tweets(const std::filesystem::path& path, TweetFormat format) {
    auto in = open_or_throw(path);
    ParseResult<Tweet> result;
    std::unordered_set<std::string> seen_ids;

    auto admit = [&](Tweet&& t, size_t line) {
        if (!seen_ids.insert(t.id).second) {
            result.errors.push_back({line, "duplicate id '" + t.id + "'"});
            return;
        }
        result.records.push_back(std::move(t));
    };

    if (format == TweetFormat::jsonl) {
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (trim(line).empty()) continue;
            ++result.input_records;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) {
                result.errors.push_back({lineno, "malformed JSON"});
                continue;
            }
            Tweet t;
            std::string err;
            if (!tweet_from_json(j, lineno, t, err)) {
                result.errors.push_back({lineno, err});
                continue;
            }
            admit(std::move(t), lineno);
        }
        return result;
    }

    CsvReader reader(in);
    const auto header = reader.next();
    std::unordered_map<std::string, size_t> cols;
    if (!header || !map_header(*header, {"id", "created_at", "text"}, cols)) {
        throw std::runtime_error("tweets csv: missing header (id,created_at,text,...) in " +
                                 path.string());
    }
    while (auto row = reader.next()) {
        ++result.input_records;
        json j = json::object();
        auto put = [&](const char* name) {
            const std::string v = field_of(*row, cols, name);
            if (!v.empty()) j[name] = v;
        };
        put("id");
        put("created_at");
        put("text");
        put("kind");
        put("place_unit");
        put("profile_label");
        put("handle");
        const std::string verified = to_lower(field_of(*row, cols, "verified"));
        if (!verified.empty()) j["verified"] = (verified == "true" || verified == "1");
        const std::string lat = field_of(*row, cols, "lat");
        const std::string lon = field_of(*row, cols, "lon");
        double latv = 0, lonv = 0;
        if (!lat.empty() && !lon.empty() && parse_double_field(lat, latv) &&
            parse_double_field(lon, lonv)) {
            j["lat"] = latv;
            j["lon"] = lonv;
        }
        Tweet t;
        std::string err;
        if (!tweet_from_json(j, row->line_number, t, err)) {
            result.errors.push_back({row->line_number, err});
            continue;
        }
        admit(std::move(t), row->line_number);
    }
    return result;
}

ParseResult<BeachReport> parse_beach_reports(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    CsvReader reader(in);
    ParseResult<BeachReport> result;
    const auto header = reader.next();
    std::unordered_map<std::string, size_t> cols;
    if (!header ||
        !map_header(*header, {"beach_id", "county_id", "date", "dead_fish", "respiratory"},
                    cols)) {
        throw std::runtime_error("beach csv: bad header in " + path.string());
    }
    while (auto row = reader.next()) {
        ++result.input_records;
        BeachReport r;
        r.beach_id = field_of(*row, cols, "beach_id");
        r.county_id = field_of(*row, cols, "county_id");
        const auto date = parse_date(field_of(*row, cols, "date"));
        long long df = -1, resp = -1;
        if (r.beach_id.empty() || r.county_id.empty()) {
            result.errors.push_back({row->line_number, "missing beach_id/county_id"});
            continue;
        }
        if (!date) {
            result.errors.push_back({row->line_number, "unparseable date"});
            continue;
        }
        if (!parse_ll_field(field_of(*row, cols, "dead_fish"), df) || df < 0 ||
            df > kDeadFishMax) {
            result.errors.push_back(
                {row->line_number, "dead_fish outside 0-" + std::to_string(kDeadFishMax)});
            continue;
        }
        if (!parse_ll_field(field_of(*row, cols, "respiratory"), resp) || resp < 0 ||
            resp > kRespiratoryMax) {
            result.errors.push_back(
                {row->line_number, "respiratory outside 0-" + std::to_string(kRespiratoryMax)});
            continue;
        }
        r.date = *date;
        r.dead_fish = static_cast<int>(df);
        r.respiratory = static_cast<int>(resp);
        result.records.push_back(std::move(r));
    }
    return result;
}

ParseResult<KBrevisSample> parse_kbrevis_samples(const std::filesystem::path& path,
                                                 const BoundingBox& bbox) {
    auto in = open_or_throw(path);
    CsvReader reader(in);
    ParseResult<KBrevisSample> result;
    const auto header = reader.next();
    std::unordered_map<std::string, size_t> cols;
    if (!header ||
        !map_header(*header, {"sample_id", "date", "lat", "lon", "cells_per_liter"}, cols)) {
        throw std::runtime_error("kbrevis csv: bad header in " + path.string());
    }
    while (auto row = reader.next()) {
        ++result.input_records;
        KBrevisSample s;
        s.sample_id = field_of(*row, cols, "sample_id");
        const auto date = parse_date(field_of(*row, cols, "date"));
        double lat = 0, lon = 0, cells = 0;
        if (s.sample_id.empty() || !date) {
            result.errors.push_back({row->line_number, "missing sample_id or bad date"});
            continue;
        }
        if (!parse_double_field(field_of(*row, cols, "lat"), lat) ||
            !parse_double_field(field_of(*row, cols, "lon"), lon)) {
            result.errors.push_back({row->line_number, "unparseable coordinates"});
            continue;
        }
        if (!parse_double_field(field_of(*row, cols, "cells_per_liter"), cells) || cells < 0) {
            result.errors.push_back({row->line_number, "negative or bad cell count"});
            continue;
        }
        s.location = LatLon{lat, lon};
        if (!bbox.contains(s.location)) {
            result.errors.push_back({row->line_number, "coordinates outside bounding box"});
            continue;
        }
        s.date = *date;
        s.cells_per_liter = cells;
        result.records.push_back(std::move(s));
    }
    return result;
}

ParseResult<LexiconEntry> parse_lexicon(const std::filesystem::path& path,
                                        double default_amplifier_delta,
                                        double default_deamplifier_delta) {
    auto in = open_or_throw(path);
    CsvReader reader(in);
    ParseResult<LexiconEntry> result;
    const auto header = reader.next();
    std::unordered_map<std::string, size_t> cols;
    if (!header || !map_header(*header, {"phrase", "class"}, cols)) {
        throw std::runtime_error("lexicon csv: bad header in " + path.string());
    }
    while (auto row = reader.next()) {
        ++result.input_records;
        LexiconEntry e;
        e.phrase = split_ws(normalize_ws(field_of(*row, cols, "phrase")));
        if (e.phrase.empty()) {
            result.errors.push_back({row->line_number, "empty phrase"});
            continue;
        }
        const std::string cls = to_lower(field_of(*row, cols, "class"));
        const auto c = lexicon_class_from(cls);
        if (!c) {
            result.errors.push_back({row->line_number, "unknown class tag '" + cls + "'"});
            continue;
        }
        e.cls = *c;
        const std::string w = field_of(*row, cols, "weight");
        double weight = 0.0;
        bool have_weight = !w.empty() && parse_double_field(w, weight);
        if (!w.empty() && !have_weight) {
            result.errors.push_back({row->line_number, "unparseable weight"});
            continue;
        }
        switch (e.cls) {
            case LexiconClass::polarized:
                if (!have_weight || weight < -1.0 || weight > 1.0) {
                    result.errors.push_back(
                        {row->line_number, "polarized weight outside [-1, 1]"});
                    continue;
                }
                e.weight = weight;
                break;
            case LexiconClass::amplifier:
            case LexiconClass::deamplifier: {
                const double dflt = e.cls == LexiconClass::amplifier
                                        ? default_amplifier_delta
                                        : default_deamplifier_delta;
                e.weight = have_weight ? std::fabs(weight) : dflt;
                if (e.weight <= 0.0) {
                    result.errors.push_back({row->line_number, "non-positive factor delta"});
                    continue;
                }
                break;
            }
            default:
                e.weight = 1.0;
        }
        result.records.push_back(std::move(e));
    }
    return result;
}

ParseResult<BeachLocation> parse_beach_locations(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    CsvReader reader(in);
    ParseResult<BeachLocation> result;
    const auto header = reader.next();
    std::unordered_map<std::string, size_t> cols;
    if (!header || !map_header(*header, {"beach_id", "lat", "lon"}, cols)) {
        throw std::runtime_error("beaches csv: bad header in " + path.string());
    }
    while (auto row = reader.next()) {
        ++result.input_records;
        BeachLocation b;
        b.beach_id = field_of(*row, cols, "beach_id");
        double lat = 0, lon = 0;
        if (b.beach_id.empty() || !parse_double_field(field_of(*row, cols, "lat"), lat) ||
            !parse_double_field(field_of(*row, cols, "lon"), lon)) {
            result.errors.push_back({row->line_number, "bad beach location row"});
            continue;
        }
        b.location = LatLon{lat, lon};
        result.records.push_back(std::move(b));
    }
    return result;
}

GeoRegistry parse_geo_registry(const std::filesystem::path& registry_csv,
                               const std::filesystem::path& polygons_json) {
    auto in = open_or_throw(registry_csv);
    CsvReader reader(in);
    const auto header = reader.next();
    std::unordered_map<std::string, size_t> cols;
    if (!header ||
        !map_header(*header,
                    {"id", "level", "name", "parent", "metro_group", "population",
                     "centroid_lat", "centroid_lon"},
                    cols)) {
        throw std::runtime_error("geo registry csv: bad header in " + registry_csv.string());
    }
    std::vector<GeoUnit> units;
    while (auto row = reader.next()) {
        GeoUnit u;
        u.id = field_of(*row, cols, "id");
        const auto level = geo_level_from(to_lower(field_of(*row, cols, "level")));
        if (!level) {
            throw std::runtime_error("geo registry line " + std::to_string(row->line_number) +
                                     ": unknown level");
        }
        u.level = *level;
        u.name = field_of(*row, cols, "name");
        u.parent = field_of(*row, cols, "parent");
        u.metro_group = field_of(*row, cols, "metro_group");
        const std::string pop = field_of(*row, cols, "population");
        if (!pop.empty() && !parse_ll_field(pop, u.population)) {
            throw std::runtime_error("geo registry line " + std::to_string(row->line_number) +
                                     ": bad population");
        }
        double lat = 0, lon = 0;
        if (!parse_double_field(field_of(*row, cols, "centroid_lat"), lat) ||
            !parse_double_field(field_of(*row, cols, "centroid_lon"), lon)) {
            throw std::runtime_error("geo registry line " + std::to_string(row->line_number) +
                                     ": bad centroid");
        }
        u.centroid = LatLon{lat, lon};
        units.push_back(std::move(u));
    }

    if (!polygons_json.empty()) {
        const json doc = json::parse(read_file(polygons_json));
        std::unordered_map<std::string, std::vector<LatLon>> rings;
        const json& features = doc.contains("features") ? doc["features"] : doc;
        for (const auto& f : features) {
            std::string unit_id;
            if (f.contains("properties") && f["properties"].contains("unit")) {
                unit_id = f["properties"]["unit"].get<std::string>();
            } else if (f.contains("unit")) {
                unit_id = f["unit"].get<std::string>();
            }
            if (unit_id.empty()) {
                throw std::runtime_error("polygon feature without a unit id");
            }
            const json* coords = nullptr;
            if (f.contains("geometry") && f["geometry"].contains("coordinates")) {
                coords = &f["geometry"]["coordinates"][0];  // outer ring
            } else if (f.contains("ring")) {
                coords = &f["ring"];
            }
            if (!coords) throw std::runtime_error("polygon feature without coordinates: " + unit_id);
            std::vector<LatLon> ring;
            for (const auto& pt : *coords) {
                // GeoJSON order: [lon, lat]
                ring.push_back(LatLon{pt[1].get<double>(), pt[0].get<double>()});
            }
            rings[unit_id] = std::move(ring);
        }
        for (auto& u : units) {
            const auto it = rings.find(u.id);
            if (it == rings.end()) continue;
            if (u.level != GeoLevel::county) {
                throw std::runtime_error("polygon attached to non-county unit " + u.id);
            }
            u.polygon = it->second;
            rings.erase(it);
        }
        if (!rings.empty()) {
            throw std::runtime_error("polygon for unknown unit " + rings.begin()->first);
        }
    }
    return GeoRegistry(std::move(units));
}

std::string tweet_to_jsonl(const Tweet& t) {
    json j;
    j["id"] = t.id;
    j["created_at"] = format_iso8601(t.timestamp);
    j["text"] = t.text;
    j["kind"] = to_string(t.kind);
    if (t.verified) j["verified"] = *t.verified;
    if (!t.handle.empty()) j["handle"] = t.handle;
    if (t.place_match) {
        j["place_unit"] = t.place_match->raw_label;
        if (!t.place_match->unit_id.empty()) j["place_resolved"] = t.place_match->unit_id;
    }
    if (t.profile_match) {
        j["profile_label"] = t.profile_match->raw_label;
        if (!t.profile_match->unit_id.empty())
            j["profile_resolved"] = t.profile_match->unit_id;
    }
    if (t.coords) {
        j["lat"] = t.coords->lat;
        j["lon"] = t.coords->lon;
    }
    if (t.account_class != AccountClass::unknown) {
        j["account_class"] = to_string(t.account_class);
    }
    return j.dump();
}

void write_tweets_jsonl(const std::vector<Tweet>& tweets, std::ostream& out) {
    for (const auto& t : tweets) out << tweet_to_jsonl(t) << "\n";
}

}  // namespace redtide
