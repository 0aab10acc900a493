#include "redtide/geospatial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace redtide {

namespace {
constexpr double kPi = 3.14159265358979323846;
double deg2rad(double d) { return d * kPi / 180.0; }
}  // namespace

double geodesic_miles(const LatLon& a, const LatLon& b, double radius_miles) {
    for (const auto& p : {a, b}) {
        if (p.lat < -90.0 || p.lat > 90.0 || p.lon < -180.0 || p.lon > 180.0) {
            throw std::invalid_argument("coordinates out of range");
        }
    }
    const double lat1 = deg2rad(a.lat), lat2 = deg2rad(b.lat);
    const double u = std::sin((lat2 - lat1) / 2.0);
    const double v = std::sin(deg2rad(b.lon - a.lon) / 2.0);
    const double h = u * u + std::cos(lat1) * std::cos(lat2) * v * v;
    return 2.0 * radius_miles * std::asin(std::min(1.0, std::sqrt(h)));
}

bool point_in_ring(const LatLon& p, const std::vector<LatLon>& ring) {
    const size_t n = ring.size();
    if (n < 3) return false;
    bool inside = false;
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
        const LatLon& a = ring[j];
        const LatLon& b = ring[i];
        // On-vertex and on-edge points count as inside.
        if (p.lat == b.lat && p.lon == b.lon) return true;
        const double cross = (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon);
        if (cross == 0.0 && p.lon >= std::min(a.lon, b.lon) && p.lon <= std::max(a.lon, b.lon) &&
            p.lat >= std::min(a.lat, b.lat) && p.lat <= std::max(a.lat, b.lat)) {
            return true;
        }
        const bool straddles = (b.lat > p.lat) != (a.lat > p.lat);
        if (straddles) {
            const double x_at = (a.lon - b.lon) * (p.lat - b.lat) / (a.lat - b.lat) + b.lon;
            if (p.lon < x_at) inside = !inside;
        }
    }
    return inside;
}

std::string assign_sample_to_county(const KBrevisSample& sample, const GeoRegistry& registry,
                                    double max_centroid_miles) {
    std::string best_contained;
    for (const auto* county : registry.at_level(GeoLevel::county)) {
        if (county->polygon.empty()) continue;
        if (point_in_ring(sample.location, county->polygon)) {
            if (best_contained.empty() || county->id < best_contained) {
                best_contained = county->id;
            }
        }
    }
    if (!best_contained.empty()) return best_contained;

    std::string nearest;
    double best = max_centroid_miles;
    for (const auto* county : registry.at_level(GeoLevel::county)) {
        const double d = geodesic_miles(sample.location, county->centroid);
        if (d < best || (d == best && (nearest.empty() || county->id < nearest))) {
            best = d;
            nearest = county->id;
        }
    }
    return nearest;  // empty means unassigned
}

CreditVector credit_share(const std::string& unit_id, const GeoRegistry& registry,
                          const SharedUnitMap& shared_units) {
    const auto it = shared_units.find(unit_id);
    if (it == shared_units.end()) {
        if (!registry.contains(unit_id)) {
            throw std::runtime_error("credit_share: unknown unit " + unit_id);
        }
        return {{unit_id, 1.0}};
    }
    long long total = 0;
    for (const auto& member : it->second) {
        const auto& u = registry.at(member);
        if (u.population <= 0) {
            throw std::runtime_error("credit_share: shared member without population: " + member);
        }
        total += u.population;
    }
    if (it->second.empty() || total <= 0) {
        throw std::runtime_error("credit_share: shared unit with no members: " + unit_id);
    }
    CreditVector out;
    for (const auto& member : it->second) {
        out[member] = static_cast<double>(registry.at(member).population) /
                      static_cast<double>(total);
    }
    return out;
}

double per_capita(double count, const std::string& unit_id, const GeoRegistry& registry,
                  double scale) {
    const long long denom = registry.denominator_population(unit_id);
    if (denom <= 0) {
        throw std::runtime_error("per_capita: zero population denominator for " + unit_id);
    }
    return count / static_cast<double>(denom) * scale;
}

const char* to_string(DistanceBin b) {
    switch (b) {
        case DistanceBin::close: return "close";
        case DistanceBin::medium: return "medium";
        case DistanceBin::far: return "far";
    }
    return "?";
}

DistanceBin bin_distance(double miles, double close_upper_mi, double far_lower_mi) {
    if (miles < 0.0) throw std::invalid_argument("negative distance");
    if (miles < close_upper_mi) return DistanceBin::close;
    if (miles <= far_lower_mi) return DistanceBin::medium;
    return DistanceBin::far;
}

}  // namespace redtide
