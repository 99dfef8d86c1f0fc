#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace clsc {

inline constexpr double kEarthRadiusKm = 6371.0088;

struct LatLon {
    double lat = 0.0;
    double lon = 0.0;
};

// Dense pairwise great-circle distances in km.
struct DistanceMatrix {
    std::vector<std::string> from_ids;
    std::vector<std::string> to_ids;
    std::vector<std::vector<double>> km;

    double at(std::size_t i, std::size_t j) const { return km[i][j]; }
    std::size_t rows() const { return from_ids.size(); }
    std::size_t cols() const { return to_ids.size(); }
};

struct CoordinateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spherical haversine distance, mean Earth radius 6371.0088 km.
double haversine_km(const LatLon& a, const LatLon& b);

DistanceMatrix distance_matrix(const std::vector<std::string>& ids_a,
                               const std::vector<LatLon>& points_a,
                               const std::vector<std::string>& ids_b,
                               const std::vector<LatLon>& points_b);

}  // namespace clsc
