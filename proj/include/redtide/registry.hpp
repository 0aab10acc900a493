#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "redtide/types.hpp"

namespace redtide {

/// Immutable lookup structure over the locality hierarchy. Validates the
/// forest shape, level-consistent parentage and polygon rings at build
/// time; all queries afterwards are read-only and thread-safe.
class GeoRegistry {
  public:
    GeoRegistry() = default;

    /// Throws std::runtime_error describing the first violation found
    /// (parent cycle, level inversion, open or self-intersecting ring).
    explicit GeoRegistry(std::vector<GeoUnit> units);

    const std::vector<GeoUnit>& units() const { return units_; }
    bool contains(const std::string& id) const;
    const GeoUnit* find(const std::string& id) const;
    const GeoUnit& at(const std::string& id) const;

    /// Case-insensitive match on unit name or id.
    const GeoUnit* find_by_label(const std::string& label) const;

    std::vector<const GeoUnit*> at_level(GeoLevel level) const;
    size_t count_at_level(GeoLevel level) const;

    /// Walks the parent chain (self included) until a unit of `level` is
    /// found. Empty result when the chain passes that level (e.g. asking
    /// for the city ancestor of a county).
    std::optional<std::string> ancestor_at(const std::string& id, GeoLevel level) const;

    /// Metro-smoothed per-capita denominator: for city/zcta levels the
    /// combined population of all cities in the unit's metro group, the
    /// unit's own population otherwise.
    long long denominator_population(const std::string& id) const;

    /// Combined population of city-level units carrying this metro group.
    long long metro_population(const std::string& group) const;

  private:
    void validate() const;

    std::vector<GeoUnit> units_;
    std::unordered_map<std::string, size_t> by_id_;
    std::unordered_map<std::string, size_t> by_label_;
    std::unordered_map<std::string, long long> metro_pop_;
};

}  // namespace redtide
