#include "netscan/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace netscan {

namespace {
constexpr double earth_radius_m = 6371008.8;
constexpr double deg_to_rad = 3.14159265358979323846 / 180.0;
constexpr double lattice = 1e-9;
}  // namespace

bool Boundary::empty() const {
    for (const auto& poly : polygons) {
        if (!poly.rings.empty() && !poly.rings.front().empty()) return false;
    }
    return true;
}

BoundingBox Boundary::bounding_box() const {
    BoundingBox box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity()};
    for (const auto& poly : polygons) {
        for (const auto& ring : poly.rings) {
            for (const auto& p : ring) {
                box.min_lon = std::min(box.min_lon, p.lon);
                box.min_lat = std::min(box.min_lat, p.lat);
                box.max_lon = std::max(box.max_lon, p.lon);
                box.max_lat = std::max(box.max_lat, p.lat);
            }
        }
    }
    return box;
}

bool Boundary::contains(const LonLat& p) const {
    bool inside = false;
    for (const auto& poly : polygons) {
        for (const auto& ring : poly.rings) {
            const std::size_t n = ring.size();
            for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
                const LonLat& a = ring[i];
                const LonLat& b = ring[j];
                if ((a.lat > p.lat) != (b.lat > p.lat) &&
                    p.lon < (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon) {
                    inside = !inside;
                }
            }
        }
    }
    return inside;
}

double haversine_m(const LonLat& a, const LonLat& b) {
    const double phi1 = a.lat * deg_to_rad;
    const double phi2 = b.lat * deg_to_rad;
    const double dphi = (b.lat - a.lat) * deg_to_rad;
    const double dlambda = (b.lon - a.lon) * deg_to_rad;
    const double s = std::sin(dphi / 2) * std::sin(dphi / 2) +
                     std::cos(phi1) * std::cos(phi2) * std::sin(dlambda / 2) * std::sin(dlambda / 2);
    return 2.0 * earth_radius_m * std::asin(std::min(1.0, std::sqrt(s)));
}

double polyline_length_m(std::span<const LonLat> line) {
    double total = 0.0;
    for (std::size_t i = 1; i < line.size(); ++i) total += haversine_m(line[i - 1], line[i]);
    return total;
}

double degree_distance(const LonLat& a, const LonLat& b) {
    return std::hypot(a.lon - b.lon, a.lat - b.lat);
}

double point_segment_distance_deg(const LonLat& p, const LonLat& a, const LonLat& b) {
    const double dx = b.lon - a.lon;
    const double dy = b.lat - a.lat;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return degree_distance(p, a);
    double t = ((p.lon - a.lon) * dx + (p.lat - a.lat) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return degree_distance(p, LonLat{a.lon + t * dx, a.lat + t * dy});
}

double point_polyline_distance_deg(const LonLat& p, std::span<const LonLat> line) {
    if (line.size() == 1) return degree_distance(p, line[0]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < line.size(); ++i) {
        best = std::min(best, point_segment_distance_deg(p, line[i - 1], line[i]));
    }
    return best;
}

namespace {

// Point at arc-length fraction `f` of `line`, given cumulative lengths.
LonLat point_at(std::span<const LonLat> line, const std::vector<double>& cumulative, double f) {
    const double total = cumulative.back();
    if (f <= 0.0) return line.front();
    if (f >= 1.0) return line.back();
    const double target = f * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
    const std::size_t i = static_cast<std::size_t>(std::distance(cumulative.begin(), it));
    const std::size_t hi = std::min(i, line.size() - 1);
    const std::size_t lo = hi - 1;
    const double span = cumulative[hi] - cumulative[lo];
    const double t = span > 0.0 ? (target - cumulative[lo]) / span : 0.0;
    return LonLat{line[lo].lon + t * (line[hi].lon - line[lo].lon),
                  line[lo].lat + t * (line[hi].lat - line[lo].lat)};
}

}  // namespace

Polyline sub_polyline(std::span<const LonLat> line, double from_fraction, double to_fraction) {
    std::vector<double> cumulative(line.size(), 0.0);
    for (std::size_t i = 1; i < line.size(); ++i) {
        cumulative[i] = cumulative[i - 1] + haversine_m(line[i - 1], line[i]);
    }
    if (cumulative.back() <= 0.0) return Polyline{line.front(), line.back()};
    Polyline out;
    out.push_back(point_at(line, cumulative, from_fraction));
    const double lo = from_fraction * cumulative.back();
    const double hi = to_fraction * cumulative.back();
    for (std::size_t i = 1; i + 1 < line.size(); ++i) {
        if (cumulative[i] > lo && cumulative[i] < hi) out.push_back(line[i]);
    }
    out.push_back(point_at(line, cumulative, to_fraction));
    return out;
}

NodeKey node_key(const LonLat& p) {
    return {std::llround(p.lon / lattice), std::llround(p.lat / lattice)};
}

}  // namespace netscan
