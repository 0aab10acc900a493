#include "redtide/registry.hpp"

#include <stdexcept>

#include "redtide/text_util.hpp"

namespace redtide {

namespace {

int level_rank(GeoLevel l) {
    switch (l) {
        case GeoLevel::region: return 0;
        case GeoLevel::county: return 1;
        case GeoLevel::city: return 2;
        case GeoLevel::zcta: return 3;
    }
    return -1;
}

// Proper intersection of segments (a,b) and (c,d).
bool segments_cross(const LatLon& a, const LatLon& b, const LatLon& c, const LatLon& d) {
    auto orient = [](const LatLon& p, const LatLon& q, const LatLon& r) {
        const double v = (q.lon - p.lon) * (r.lat - p.lat) - (q.lat - p.lat) * (r.lon - p.lon);
        return (v > 0) - (v < 0);
    };
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    return o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

}  // namespace

GeoRegistry::GeoRegistry(std::vector<GeoUnit> units) : units_(std::move(units)) {
    for (size_t i = 0; i < units_.size(); ++i) {
        auto& u = units_[i];
        if (u.id.empty()) throw std::runtime_error("geo unit with empty id");
        if (!by_id_.emplace(u.id, i).second) {
            throw std::runtime_error("duplicate geo unit id: " + u.id);
        }
        // Drop an explicit closing vertex; the ring is stored open.
        if (u.polygon.size() >= 2 &&
            u.polygon.front().lat == u.polygon.back().lat &&
            u.polygon.front().lon == u.polygon.back().lon) {
            u.polygon.pop_back();
        }
    }
    for (size_t i = 0; i < units_.size(); ++i) {
        const auto& u = units_[i];
        // Geoprofile labels are vague, so on a name collision (Sarasota
        // city inside Sarasota county) the coarser unit wins. Keys use the
        // same normalization as find_by_label.
        for (const std::string& key : {normalize_ws(u.id), normalize_ws(u.name)}) {
            if (key.empty()) continue;
            auto it = by_label_.find(key);
            if (it == by_label_.end()) {
                by_label_.emplace(key, i);
            } else if (level_rank(u.level) < level_rank(units_[it->second].level)) {
                it->second = i;
            }
        }
        if (u.level == GeoLevel::city && !u.metro_group.empty()) {
            metro_pop_[u.metro_group] += u.population;
        }
    }
    validate();
}

void GeoRegistry::validate() const {
    for (const auto& u : units_) {
        if (u.population < 0) {
            throw std::runtime_error("negative population on unit " + u.id);
        }
        if (u.level != GeoLevel::region && u.population == 0) {
            throw std::runtime_error("missing population on denominator unit " + u.id);
        }
        if (u.parent.empty()) {
            if (u.level != GeoLevel::region) {
                throw std::runtime_error("non-region unit without parent: " + u.id);
            }
        } else {
            const auto it = by_id_.find(u.parent);
            if (it == by_id_.end()) {
                throw std::runtime_error("unknown parent '" + u.parent + "' on unit " + u.id);
            }
            const auto& p = units_[it->second];
            if (level_rank(p.level) != level_rank(u.level) - 1) {
                throw std::runtime_error("hierarchy violation: " + u.id + " (" +
                                         to_string(u.level) + ") under " + p.id +
                                         " (" + to_string(p.level) + ")");
            }
        }
        if (!u.polygon.empty()) {
            const auto& ring = u.polygon;
            if (ring.size() < 3) {
                throw std::runtime_error("open polygon ring on unit " + u.id);
            }
            const size_t n = ring.size();
            for (size_t i = 0; i < n; ++i) {
                for (size_t j = i + 1; j < n; ++j) {
                    if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // adjacent
                    if (segments_cross(ring[i], ring[(i + 1) % n], ring[j],
                                       ring[(j + 1) % n])) {
                        throw std::runtime_error("self-intersecting polygon on unit " + u.id);
                    }
                }
            }
        }
    }
}

bool GeoRegistry::contains(const std::string& id) const {
    return by_id_.count(id) != 0;
}

const GeoUnit* GeoRegistry::find(const std::string& id) const {
    const auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &units_[it->second];
}

const GeoUnit& GeoRegistry::at(const std::string& id) const {
    const auto* u = find(id);
    if (!u) throw std::runtime_error("unknown geo unit: " + id);
    return *u;
}

const GeoUnit* GeoRegistry::find_by_label(const std::string& label) const {
    const auto it = by_label_.find(normalize_ws(label));
    return it == by_label_.end() ? nullptr : &units_[it->second];
}

std::vector<const GeoUnit*> GeoRegistry::at_level(GeoLevel level) const {
    std::vector<const GeoUnit*> out;
    for (const auto& u : units_) {
        if (u.level == level) out.push_back(&u);
    }
    return out;
}

size_t GeoRegistry::count_at_level(GeoLevel level) const {
    return at_level(level).size();
}

std::optional<std::string> GeoRegistry::ancestor_at(const std::string& id,
                                                    GeoLevel level) const {
    const GeoUnit* u = find(id);
    int guard = 0;
    while (u) {
        if (u->level == level) return u->id;
        if (level_rank(u->level) < level_rank(level)) return std::nullopt;
        if (u->parent.empty() || ++guard > 8) return std::nullopt;
        u = find(u->parent);
    }
    return std::nullopt;
}

long long GeoRegistry::metro_population(const std::string& group) const {
    const auto it = metro_pop_.find(group);
    return it == metro_pop_.end() ? 0 : it->second;
}

long long GeoRegistry::denominator_population(const std::string& id) const {
    const GeoUnit& u = at(id);
    if (u.level == GeoLevel::city || u.level == GeoLevel::zcta) {
        if (!u.metro_group.empty()) {
            const long long mp = metro_population(u.metro_group);
            if (mp > 0) return mp;
        }
        if (u.level == GeoLevel::zcta && !u.parent.empty()) {
            return denominator_population(u.parent);
        }
    }
    return u.population;
}

}  // namespace redtide
