#pragma once

#include <map>
#include <string>
#include <vector>

#include "redtide/registry.hpp"
#include "redtide/types.hpp"

namespace redtide {

inline constexpr double kEarthRadiusMiles = 3958.7613;

/// Great-circle (haversine) distance in miles. Spherical Earth; at the
/// sub-100-mile ranges this pipeline works with the ellipsoidal
/// correction is far below a distance-bin width.
/// Throws std::invalid_argument for out-of-range coordinates.
double geodesic_miles(const LatLon& a, const LatLon& b,
                      double radius_miles = kEarthRadiusMiles);

/// Even-odd ray casting; vertices and boundary points count as inside.
bool point_in_ring(const LatLon& p, const std::vector<LatLon>& ring);

/// County assignment for a water sample: polygon containment first (ties
/// on shared boundaries break to the lexicographically smallest county
/// id), then nearest county centroid within `max_centroid_miles`, else
/// empty ("unassigned").
std::string assign_sample_to_county(const KBrevisSample& sample,
                                    const GeoRegistry& registry,
                                    double max_centroid_miles = 30.0);

/// Fractional attribution of one tweet across geo units; weights sum to 1.
using CreditVector = std::map<std::string, double>;

/// Membership of synthetic shared units (e.g. the greater Tampa Bay
/// area), keyed by shared unit id.
using SharedUnitMap = std::map<std::string, std::vector<std::string>>;

/// Ordinary units credit themselves fully; shared units split across
/// their members proportional to registry populations.
CreditVector credit_share(const std::string& unit_id, const GeoRegistry& registry,
                          const SharedUnitMap& shared_units);

/// count / denominator-population * scale, with metro smoothing for
/// city/zcta units. Throws on a nonpositive denominator.
double per_capita(double count, const std::string& unit_id, const GeoRegistry& registry,
                  double scale = 100000.0);

enum class DistanceBin { close = 0, medium = 1, far = 2 };
const char* to_string(DistanceBin b);

/// close = [0,25), medium = [25,50], far = (50,inf); both boundary
/// distances land in medium. Throws on negative input.
DistanceBin bin_distance(double miles, double close_upper_mi = 25.0,
                         double far_lower_mi = 50.0);

}  // namespace redtide
