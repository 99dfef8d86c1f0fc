#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "clsc/geo.hpp"
#include "doctest.h"

using clsc::haversine_km;
using clsc::LatLon;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent oracle: spherical law of cosines in atan2 form (Vincenty's
// special case for a sphere), same radius, different trigonometry.
double oracle_km(const LatLon& a, const LatLon& b) {
    const double p1 = a.lat * kPi / 180.0, p2 = b.lat * kPi / 180.0;
    const double dl = (b.lon - a.lon) * kPi / 180.0;
    const double num = std::hypot(std::cos(p2) * std::sin(dl),
                                  std::cos(p1) * std::sin(p2) -
                                      std::sin(p1) * std::cos(p2) * std::cos(dl));
    const double den = std::sin(p1) * std::sin(p2) + std::cos(p1) * std::cos(p2) * std::cos(dl);
    return clsc::kEarthRadiusKm * std::atan2(num, den);
}

LatLon random_point(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> lat(-90.0, 90.0), lon(-180.0, 180.0);
    return {lat(rng), lon(rng)};
}

}  // namespace

TEST_CASE("identical points give exactly zero") {
    const LatLon victoria{48.4284, -123.3656};
    CHECK(haversine_km(victoria, victoria) == 0.0);
}

TEST_CASE("antipodal points give half the circumference") {
    const double d = haversine_km({0.0, 0.0}, {0.0, 180.0});
    CHECK(d == doctest::Approx(kPi * clsc::kEarthRadiusKm).epsilon(1e-6));
}

TEST_CASE("Victoria to Nanaimo matches the independent oracle") {
    const LatLon victoria{48.4284, -123.3656};
    const LatLon nanaimo{49.1659, -123.9401};
    const double d = haversine_km(victoria, nanaimo);
    CHECK(d == doctest::Approx(oracle_km(victoria, nanaimo)).epsilon(1e-3));
    CHECK(d > 50.0);
    CHECK(d < 150.0);
}

TEST_CASE("50 random pairs agree with the oracle within 0.1%") {
    std::mt19937_64 rng(20260826);
    for (int t = 0; t < 50; ++t) {
        const LatLon a = random_point(rng), b = random_point(rng);
        const double got = haversine_km(a, b);
        const double want = oracle_km(a, b);
        CHECK(std::abs(got - want) <= 1e-3 * std::max(1.0, want));
    }
}

TEST_CASE("symmetry is exact") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        const LatLon a = random_point(rng), b = random_point(rng);
        CHECK(haversine_km(a, b) == haversine_km(b, a));
    }
}

TEST_CASE("triangle inequality on random triples") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 200; ++t) {
        const LatLon a = random_point(rng), b = random_point(rng), c = random_point(rng);
        CHECK(haversine_km(a, c) <= haversine_km(a, b) + haversine_km(b, c) + 1e-9);
    }
}

TEST_CASE("distance grows monotonically along a meridian up to the antipode") {
    const LatLon a{10.0, 20.0};
    double prev = -1.0;
    for (int step = 0; step <= 18; ++step) {
        // walk south from a along its meridian; antipode reached at -170 deg
        const double lat = 10.0 - step * 10.0;
        const LatLon b = lat >= -90.0 ? LatLon{lat, 20.0} : LatLon{-180.0 - lat, -160.0};
        const double d = haversine_km(a, b);
        CHECK(d >= prev - 1e-9);
        prev = d;
    }
}

TEST_CASE("result range is [0, pi*R]") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const double d = haversine_km(random_point(rng), random_point(rng));
        CHECK(d >= 0.0);
        CHECK(d <= kPi * clsc::kEarthRadiusKm + 1e-9);
    }
}

TEST_CASE("out-of-range coordinates are rejected") {
    CHECK_THROWS_AS(haversine_km({91.0, 0.0}, {0.0, 0.0}), clsc::CoordinateError);
    CHECK_THROWS_AS(haversine_km({0.0, 0.0}, {0.0, 180.5}), clsc::CoordinateError);
    CHECK_THROWS_AS(haversine_km({-90.5, 0.0}, {0.0, 0.0}), clsc::CoordinateError);
}

TEST_CASE("distance_matrix: one point vs itself") {
    const auto m = clsc::distance_matrix({"A"}, {{48.0, -123.0}}, {"A"}, {{48.0, -123.0}});
    REQUIRE(m.rows() == 1);
    REQUIRE(m.cols() == 1);
    CHECK(m.at(0, 0) == 0.0);
}

TEST_CASE("distance_matrix: same list both sides is symmetric with zero diagonal") {
    std::vector<std::string> ids{"A", "B", "C", "D"};
    std::vector<LatLon> pts{{48.4, -123.3}, {49.1, -123.9}, {50.7, -127.5}, {48.8, -125.1}};
    const auto m = clsc::distance_matrix(ids, pts, ids, pts);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        CHECK(m.at(i, i) == 0.0);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            CHECK(m.at(i, j) == m.at(j, i));
            CHECK(m.at(i, j) >= 0.0);
        }
    }
}

TEST_CASE("distance_matrix: coordinate errors carry the offending index") {
    std::vector<std::string> ids{"A", "B"};
    std::vector<LatLon> good{{48.0, -123.0}, {49.0, -124.0}};
    std::vector<LatLon> bad{{48.0, -123.0}, {95.0, -124.0}};
    try {
        clsc::distance_matrix(ids, good, ids, bad);
        FAIL("expected CoordinateError");
    } catch (const clsc::CoordinateError& e) {
        CHECK(std::string(e.what()).find("1") != std::string::npos);
    }
}
