#include "redtide/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "redtide/io_util.hpp"
#include "redtide/text_util.hpp"

namespace redtide {

std::vector<ConfigField> config_fields(RunConfig& c) {
    using K = ConfigField::Kind;
    return {
        {"tweets", K::text, &c.tweets},
        {"tweets_format", K::text, &c.tweets_format},
        {"beach", K::text, &c.beach},
        {"kbrevis", K::text, &c.kbrevis},
        {"beaches", K::text, &c.beaches},
        {"registry", K::text, &c.registry},
        {"polygons", K::text, &c.polygons},
        {"lexicon", K::text, &c.lexicon},
        {"lexicon_patch", K::text, &c.lexicon_patch},
        {"political_phrases", K::text, &c.political_phrases},
        {"account_overrides", K::text, &c.account_overrides},
        {"concern_dir", K::text, &c.concern_dir},
        {"out_dir", K::text, &c.out_dir},
        {"window_start", K::text, &c.window_start},
        {"window_end", K::text, &c.window_end},
        {"tz_offset_hours", K::integer, &c.tz_offset_hours},
        {"levels", K::text, &c.levels},
        {"freqs", K::text, &c.freqs},
        {"match", K::text, &c.match},
        {"account", K::text, &c.account},
        {"per_capita_metric", K::boolean, &c.per_capita_metric},
        {"question_weight", K::real, &c.question_weight},
        {"ellipsis_penalty", K::real, &c.ellipsis_penalty},
        {"amplifier_delta", K::real, &c.amplifier_delta},
        {"deamplifier_delta", K::real, &c.deamplifier_delta},
        {"shifter_floor", K::real, &c.shifter_floor},
        {"adversative_before", K::real, &c.adversative_before},
        {"adversative_after", K::real, &c.adversative_after},
        {"context_before", K::integer, &c.context_before},
        {"context_after", K::integer, &c.context_after},
        {"sentence_aggregation", K::text, &c.sentence_aggregation},
        {"beach_radius_mi", K::real, &c.beach_radius_mi},
        {"sample_assign_max_mi", K::real, &c.sample_assign_max_mi},
        {"per_capita_scale", K::real, &c.per_capita_scale},
        {"bin_close_mi", K::real, &c.bin_close_mi},
        {"bin_far_mi", K::real, &c.bin_far_mi},
        {"shared_unit", K::text, &c.shared_unit},
        {"shared_members", K::text, &c.shared_members},
        {"shared_label", K::text, &c.shared_label},
        {"shared_alias_target", K::text, &c.shared_alias_target},
        {"bbox_lat_min", K::real, &c.bbox_lat_min},
        {"bbox_lat_max", K::real, &c.bbox_lat_max},
        {"bbox_lon_min", K::real, &c.bbox_lon_min},
        {"bbox_lon_max", K::real, &c.bbox_lon_max},
        {"kbrevis_top_n", K::integer, &c.kbrevis_top_n},
        {"kbrevis_stat", K::text, &c.kbrevis_stat},
        {"high_impact_cells", K::real, &c.high_impact_cells},
        {"tukey_alpha", K::real, &c.tukey_alpha},
        {"log_zero", K::text, &c.log_zero},
        {"log_epsilon", K::real, &c.log_epsilon},
        {"shift", K::integer, &c.shift},
        {"metric", K::text, &c.metric},
        {"condition", K::text, &c.condition},
        {"distance_level", K::text, &c.distance_level},
        {"threads", K::integer, &c.threads},
    };
}

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
    for (const auto& f : config_fields(config)) {
        if (key != f.name) continue;
        switch (f.kind) {
            case ConfigField::Kind::text:
                *static_cast<std::string*>(f.ptr) = value;
                return;
            case ConfigField::Kind::real:
                try {
                    *static_cast<double*>(f.ptr) = std::stod(value);
                } catch (...) {
                    throw std::runtime_error("config: bad number for " + key);
                }
                return;
            case ConfigField::Kind::integer:
                try {
                    *static_cast<int*>(f.ptr) = std::stoi(value);
                } catch (...) {
                    throw std::runtime_error("config: bad integer for " + key);
                }
                return;
            case ConfigField::Kind::boolean: {
                const std::string v = to_lower(value);
                if (v == "true" || v == "1" || v == "yes") {
                    *static_cast<bool*>(f.ptr) = true;
                } else if (v == "false" || v == "0" || v == "no") {
                    *static_cast<bool*>(f.ptr) = false;
                } else {
                    throw std::runtime_error("config: bad boolean for " + key);
                }
                return;
            }
        }
    }
    throw std::runtime_error("config: unknown key '" + key + "'");
}

RunConfig load_config(const std::filesystem::path& path) {
    RunConfig config;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path.string());
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key=value");
        }
        set_config_value(config, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return config;
}

std::string config_canonical(const RunConfig& config) {
    RunConfig& mut = const_cast<RunConfig&>(config);
    std::ostringstream out;
    for (const auto& f : config_fields(mut)) {
        out << f.name << "=";
        switch (f.kind) {
            case ConfigField::Kind::text: out << *static_cast<std::string*>(f.ptr); break;
            case ConfigField::Kind::real:
                out << format_double(*static_cast<double*>(f.ptr));
                break;
            case ConfigField::Kind::integer: out << *static_cast<int*>(f.ptr); break;
            case ConfigField::Kind::boolean:
                out << (*static_cast<bool*>(f.ptr) ? "true" : "false");
                break;
        }
        out << "\n";
    }
    return out.str();
}

uint64_t config_hash(const RunConfig& config) { return fnv1a64(config_canonical(config)); }

}  // namespace redtide
