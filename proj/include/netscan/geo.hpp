#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace netscan {

struct LonLat {
    double lon = 0.0;
    double lat = 0.0;

    friend bool operator==(const LonLat&, const LonLat&) = default;
};

using Polyline = std::vector<LonLat>;

struct BoundingBox {
    double min_lon = 0.0;
    double min_lat = 0.0;
    double max_lon = 0.0;
    double max_lat = 0.0;

    bool contains(const LonLat& p) const {
        return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat && p.lat <= max_lat;
    }
    double width() const { return max_lon - min_lon; }
    double height() const { return max_lat - min_lat; }
};

// Polygon with holes; rings are closed implicitly.
struct Polygon {
    std::vector<Polyline> rings;
};

// Union of polygons (GeoJSON Polygon or MultiPolygon).
struct Boundary {
    std::vector<Polygon> polygons;

    bool empty() const;
    BoundingBox bounding_box() const;
    // Even-odd rule over every ring.
    bool contains(const LonLat& p) const;
};

// Great-circle distance in metres.
double haversine_m(const LonLat& a, const LonLat& b);
double polyline_length_m(std::span<const LonLat> line);

// Euclidean distances in raw degree space.
double degree_distance(const LonLat& a, const LonLat& b);
double point_segment_distance_deg(const LonLat& p, const LonLat& a, const LonLat& b);
double point_polyline_distance_deg(const LonLat& p, std::span<const LonLat> line);

// Sub-polyline between two arc-length fractions in [0, 1]. Fractions are
// measured along the haversine length of `line`.
Polyline sub_polyline(std::span<const LonLat> line, double from_fraction, double to_fraction);

// Key of a coordinate on a 1e-9 degree lattice; equal keys mean "same point".
using NodeKey = std::pair<std::int64_t, std::int64_t>;
NodeKey node_key(const LonLat& p);

}  // namespace netscan
