#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "netscan/geo.hpp"

namespace netscan {

struct Vertex {
    std::string id;
    LonLat position;
};

struct Edge {
    std::string id;
    std::size_t from = 0;  // index into RoadNetwork::vertices
    std::size_t to = 0;
    Polyline geometry;
    double length_m = 0.0;
    bool oneway = false;
};

// Street graph. Construct through `make_road_network`, which validates it.
struct RoadNetwork {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
};

// One polyline per edge; vertices are derived from the line endpoints.
struct EdgeInput {
    std::string id;
    Polyline geometry;
    // Taken from the haversine length of `geometry` when absent.
    std::optional<double> length_m;
    bool oneway = false;
};

// Throws InvalidInput naming the edge on duplicate ids, short geometry or
// non-positive length.
RoadNetwork make_road_network(const std::vector<EdgeInput>& edges);

using SegmentId = std::int32_t;

struct Segment {
    SegmentId id = 0;
    std::string edge_id;
    Polyline geometry;
    double length_m = 0.0;
    // Endpoint nodes on the 1e-9 degree lattice, in geometry order.
    NodeKey start;
    NodeKey end;
    std::vector<SegmentId> adjacent;  // sorted
};

// Splits every edge into ceil(length / target_len) equal pieces. Segment ids
// are dense and follow edge order, so `segments[i].id == i`.
std::vector<Segment> segment_network(const RoadNetwork& network, double target_len_m);

enum class Direction { undirected, forward, reverse };

const char* to_string(Direction d);
Direction direction_from_string(const std::string& text);

struct SensorPlacement {
    std::string id;
    LonLat position;
    std::optional<SegmentId> segment;
    double snap_distance_deg = 0.0;
    // Travel direction relative to the geometry order of the snapped segment.
    // nullopt means the sensor counts both ways.
    std::optional<Direction> direction;

    bool snapped() const { return segment.has_value(); }
};

// Nearest segment by point-to-polyline distance in degree space. Sensors
// farther than `tolerance_deg` are left unsnapped. Ties go to the smaller
// segment id.
std::vector<SensorPlacement> snap_sensors(const std::vector<SensorPlacement>& sensors,
                                          const std::vector<Segment>& segments,
                                          double tolerance_deg);

struct SegmentPath {
    std::vector<SegmentId> segments;  // traversal order
    // true when the segment is traversed start -> end of its geometry.
    std::vector<bool> along_geometry;
    double length_m = 0.0;
    std::vector<SegmentId> canonical;  // sorted copy of `segments`

    std::string key() const;
    SegmentPath reversed() const;
};

struct PathEnumerationOptions {
    double min_length_m = 50.0;
    double max_length_m = 1000.0;
    std::size_t max_paths = 5'000'000;
};

// Every simple path (no repeated segment, consecutive segments joined end to
// start) whose length lies in [min, max], one per canonical key, sorted by
// canonical key. Throws PathCapExceeded when more than `max_paths` distinct
// paths exist.
std::vector<SegmentPath> enumerate_paths(const std::vector<Segment>& segments,
                                         const PathEnumerationOptions& options);

struct PathMembers {
    std::vector<std::size_t> undirected;  // indices into the sensor list, sorted
    std::vector<std::size_t> forward;
    std::vector<std::size_t> reverse;

    const std::vector<std::size_t>& get(Direction d) const;
};

PathMembers path_members(const SegmentPath& path, const std::vector<SensorPlacement>& sensors);

// Snapped sensor indices grouped by segment, for computing members of many
// paths against the same placement list.
class SegmentSensorIndex {
public:
    SegmentSensorIndex(const std::vector<SensorPlacement>& sensors, std::size_t segment_count);

    PathMembers members(const SegmentPath& path) const;

private:
    const std::vector<SensorPlacement>* sensors_;
    std::vector<std::vector<std::size_t>> by_segment_;
};

}  // namespace netscan
