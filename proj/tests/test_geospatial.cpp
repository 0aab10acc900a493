#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "redtide/geospatial.hpp"
#include "redtide/rng.hpp"

using namespace redtide;

namespace {

GeoRegistry two_county_registry(long long pop_a, long long pop_b) {
    std::vector<GeoUnit> units{
        {"r", GeoLevel::region, "Region", "", "", pop_a + pop_b, {27.5, -82.5}, {}},
        {"shared", GeoLevel::region, "Shared", "", "", 0, {27.5, -82.5}, {}},
        {"alpha", GeoLevel::county, "Alpha", "r", "", pop_a, {27.0, -82.5},
         {{26.8, -82.8}, {26.8, -82.2}, {27.2, -82.2}, {27.2, -82.8}}},
        {"beta", GeoLevel::county, "Beta", "r", "", pop_b, {27.6, -82.5},
         {{27.2, -82.8}, {27.2, -82.2}, {28.0, -82.2}, {28.0, -82.8}}},
    };
    return GeoRegistry(std::move(units));
}

}  // namespace

TEST_CASE("geodesic distance matches the precomputed oracle") {
    // Sarasota <-> Tampa centroids, oracle evaluated independently
    // before the implementation existed.
    const double d = geodesic_miles({27.3364, -82.5307}, {27.9506, -82.4572});
    CHECK(d == doctest::Approx(42.67495552132001).epsilon(1e-9));
    CHECK(geodesic_miles({27.3364, -82.5307}, {27.3364, -82.5307}) == 0.0);
}

TEST_CASE("geodesic distance is symmetric and nonnegative") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const LatLon a{rng.next_unit() * 170.0 - 85.0, rng.next_unit() * 360.0 - 180.0};
        const LatLon b{rng.next_unit() * 170.0 - 85.0, rng.next_unit() * 360.0 - 180.0};
        const double dab = geodesic_miles(a, b);
        const double dba = geodesic_miles(b, a);
        CHECK(dab >= 0.0);
        CHECK(dab == doctest::Approx(dba).epsilon(1e-12));
    }
}

TEST_CASE("geodesic distance satisfies the triangle inequality") {
    Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        const LatLon a{rng.next_unit() * 170.0 - 85.0, rng.next_unit() * 360.0 - 180.0};
        const LatLon b{rng.next_unit() * 170.0 - 85.0, rng.next_unit() * 360.0 - 180.0};
        const LatLon c{rng.next_unit() * 170.0 - 85.0, rng.next_unit() * 360.0 - 180.0};
        CHECK(geodesic_miles(a, c) <= geodesic_miles(a, b) + geodesic_miles(b, c) + 1e-6);
    }
}

TEST_CASE("geodesic rejects out-of-range coordinates") {
    CHECK_THROWS_AS(geodesic_miles({91.0, 0.0}, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(geodesic_miles({0.0, 181.0}, {0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("point_in_ring handles interior, exterior, vertex and edge") {
    const std::vector<LatLon> square{{0, 0}, {0, 10}, {10, 10}, {10, 0}};
    CHECK(point_in_ring({5, 5}, square));
    CHECK(!point_in_ring({15, 5}, square));
    CHECK(point_in_ring({0, 0}, square));   // vertex counts as inside
    CHECK(point_in_ring({0, 5}, square));   // edge counts as inside
    CHECK(point_in_ring({5, 10}, square));
}

TEST_CASE("sample assignment: containment, boundary tie-break, nearest fallback") {
    const auto registry = two_county_registry(500000, 500000);

    KBrevisSample inside;
    inside.location = {27.0, -82.5};  // strictly inside alpha
    CHECK(assign_sample_to_county(inside, registry) == "alpha");

    KBrevisSample boundary;
    boundary.location = {27.2, -82.5};  // on the shared edge of both boxes
    CHECK(point_in_ring(boundary.location, registry.at("alpha").polygon));
    CHECK(point_in_ring(boundary.location, registry.at("beta").polygon));
    CHECK(assign_sample_to_county(boundary, registry) == "alpha");  // lexicographic

    KBrevisSample offshore;
    offshore.location = {27.62, -82.95};  // outside both boxes
    CHECK(!point_in_ring(offshore.location, registry.at("alpha").polygon));
    CHECK(!point_in_ring(offshore.location, registry.at("beta").polygon));
    // nearest-centroid oracle over all counties
    const double da = geodesic_miles(offshore.location, registry.at("alpha").centroid);
    const double db = geodesic_miles(offshore.location, registry.at("beta").centroid);
    CHECK(db < da);
    CHECK(db < 30.0);
    CHECK(assign_sample_to_county(offshore, registry) == "beta");

    KBrevisSample far;
    far.location = {29.9, -85.0};
    CHECK(assign_sample_to_county(far, registry).empty());  // unassigned
}

TEST_CASE("credit_share: identity, population split, conservation") {
    SharedUnitMap shared{{"shared", {"alpha", "beta"}}};

    SUBCASE("ordinary unit maps to itself") {
        const auto registry = two_county_registry(500000, 500000);
        const auto credit = credit_share("alpha", registry, shared);
        REQUIRE(credit.size() == 1);
        CHECK(credit.at("alpha") == 1.0);
    }

    SUBCASE("reference populations reproduce 60/40 after rounding") {
        const auto registry = two_county_registry(1460000, 973000);
        const auto credit = credit_share("shared", registry, shared);
        CHECK(std::lround(credit.at("alpha") * 100.0) == 60);
        CHECK(std::lround(credit.at("beta") * 100.0) == 40);
        CHECK(credit.at("alpha") + credit.at("beta") == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("hypothetical 750k/250k splits 0.75/0.25") {
        const auto registry = two_county_registry(750000, 250000);
        const auto credit = credit_share("shared", registry, shared);
        CHECK(credit.at("alpha") == doctest::Approx(0.75).epsilon(1e-12));
        CHECK(credit.at("beta") == doctest::Approx(0.25).epsilon(1e-12));
    }

    SUBCASE("weights always sum to one") {
        Rng rng(5);
        for (int i = 0; i < 200; ++i) {
            const auto registry =
                two_county_registry(1 + rng.next_below(3000000), 1 + rng.next_below(3000000));
            const auto credit = credit_share("shared", registry, shared);
            double sum = 0.0;
            for (const auto& [unit, w] : credit) sum += w;
            CHECK(std::fabs(sum - 1.0) < 1e-9);
        }
    }

    SUBCASE("shared unit with no members is an error") {
        const auto registry = two_county_registry(500000, 500000);
        SharedUnitMap empty_members{{"shared", {}}};
        CHECK_THROWS_AS(credit_share("shared", registry, empty_members), std::runtime_error);
        CHECK_THROWS_AS(credit_share("missing_unit", registry, shared), std::runtime_error);
    }
}

TEST_CASE("per_capita arithmetic and properties") {
    const auto registry = two_county_registry(400000, 973000);
    CHECK(per_capita(80.0, "alpha", registry) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(per_capita(0.0, "beta", registry) == 0.0);

    SUBCASE("linear in count") {
        Rng rng(6);
        for (int i = 0; i < 100; ++i) {
            const double c = rng.next_unit() * 1000.0;
            const double k = 1.0 + rng.next_unit() * 9.0;
            CHECK(per_capita(k * c, "alpha", registry) ==
                  doctest::Approx(k * per_capita(c, "alpha", registry)).epsilon(1e-12));
        }
    }

    SUBCASE("scaling population by k scales result by 1/k") {
        const auto doubled = two_county_registry(800000, 973000);
        CHECK(per_capita(80.0, "alpha", doubled) ==
              doctest::Approx(per_capita(80.0, "alpha", registry) / 2.0).epsilon(1e-12));
    }

    SUBCASE("zero-population denominator is an error") {
        CHECK_THROWS_AS(per_capita(1.0, "shared", registry), std::runtime_error);
    }
}

TEST_CASE("distance bins and boundaries") {
    CHECK(bin_distance(10.0) == DistanceBin::close);
    CHECK(bin_distance(30.0) == DistanceBin::medium);
    CHECK(bin_distance(25.0) == DistanceBin::medium);  // boundary goes upward
    CHECK(bin_distance(50.0) == DistanceBin::medium);
    CHECK(bin_distance(50.0001) == DistanceBin::far);
    CHECK(bin_distance(0.0) == DistanceBin::close);
    CHECK_THROWS_AS(bin_distance(-1.0), std::invalid_argument);
}

TEST_CASE("bin_distance is monotone in distance") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const double d1 = rng.next_unit() * 100.0;
        const double d2 = rng.next_unit() * 100.0;
        const auto lo = bin_distance(std::min(d1, d2));
        const auto hi = bin_distance(std::max(d1, d2));
        CHECK(static_cast<int>(lo) <= static_cast<int>(hi));
    }
}
