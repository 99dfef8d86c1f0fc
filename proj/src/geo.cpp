#include "clsc/geo.hpp"

#include <cmath>

namespace clsc {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

void check_coord(const LatLon& p, const char* which) {
    if (!(p.lat >= -90.0 && p.lat <= 90.0))
        throw CoordinateError(std::string(which) + ": latitude out of range [-90, 90]");
    if (!(p.lon >= -180.0 && p.lon <= 180.0))
        throw CoordinateError(std::string(which) + ": longitude out of range [-180, 180]");
}

}  // namespace

double haversine_km(const LatLon& a, const LatLon& b) {
    check_coord(a, "a");
    check_coord(b, "b");
    if (a.lat == b.lat && a.lon == b.lon) return 0.0;
    const double phi1 = a.lat * kDegToRad;
    const double phi2 = b.lat * kDegToRad;
    const double dphi = (b.lat - a.lat) * kDegToRad;
    const double dlam = (b.lon - a.lon) * kDegToRad;
    const double sp = std::sin(dphi / 2.0);
    const double sl = std::sin(dlam / 2.0);
    double h = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
    if (h > 1.0) h = 1.0;
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

DistanceMatrix distance_matrix(const std::vector<std::string>& ids_a,
                               const std::vector<LatLon>& points_a,
                               const std::vector<std::string>& ids_b,
                               const std::vector<LatLon>& points_b) {
    if (points_a.empty() || points_b.empty())
        throw CoordinateError("distance_matrix: point lists must be non-empty");
    DistanceMatrix m;
    m.from_ids = ids_a;
    m.to_ids = ids_b;
    m.km.assign(points_a.size(), std::vector<double>(points_b.size(), 0.0));
    for (std::size_t i = 0; i < points_a.size(); ++i) {
        for (std::size_t j = 0; j < points_b.size(); ++j) {
            try {
                m.km[i][j] = haversine_km(points_a[i], points_b[j]);
            } catch (const CoordinateError& e) {
                throw CoordinateError("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                      "): " + e.what());
            }
        }
    }
    return m;
}

}  // namespace clsc
