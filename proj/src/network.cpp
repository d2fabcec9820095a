#include "netscan/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "netscan/error.hpp"

namespace netscan {

RoadNetwork make_road_network(const std::vector<EdgeInput>& edges) {
    RoadNetwork net;
    std::map<NodeKey, std::size_t> vertex_of;
    std::unordered_set<std::string> seen;
    auto vertex_for = [&](const LonLat& p) {
        const NodeKey key = node_key(p);
        auto it = vertex_of.find(key);
        if (it != vertex_of.end()) return it->second;
        const std::size_t index = net.vertices.size();
        net.vertices.push_back(Vertex{"v" + std::to_string(index), p});
        vertex_of.emplace(key, index);
        return index;
    };
    for (const auto& in : edges) {
        if (!seen.insert(in.id).second) {
            throw InvalidInput("duplicate edge id '" + in.id + "'");
        }
        if (in.geometry.size() < 2) {
            throw InvalidInput("edge '" + in.id + "' needs at least two coordinates");
        }
        const double length = in.length_m.value_or(polyline_length_m(in.geometry));
        if (!(length > 0.0) || !std::isfinite(length)) {
            throw InvalidInput("edge '" + in.id + "' has zero length");
        }
        Edge e;
        e.id = in.id;
        e.from = vertex_for(in.geometry.front());
        e.to = vertex_for(in.geometry.back());
        e.geometry = in.geometry;
        e.length_m = length;
        e.oneway = in.oneway;
        net.edges.push_back(std::move(e));
    }
    return net;
}

std::vector<Segment> segment_network(const RoadNetwork& network, double target_len_m) {
    if (!(target_len_m > 0.0)) throw InvalidInput("target segment length must be positive");
    if (network.edges.empty()) throw InvalidInput("road network has no edges");

    std::vector<Segment> segments;
    for (const Edge& edge : network.edges) {
        if (!(edge.length_m > 0.0)) {
            throw InvalidInput("edge '" + edge.id + "' has zero length");
        }
        const auto pieces = static_cast<std::size_t>(
            std::max(1.0, std::ceil(edge.length_m / target_len_m - 1e-9)));
        const double piece_len = edge.length_m / static_cast<double>(pieces);
        for (std::size_t k = 0; k < pieces; ++k) {
            const double from = static_cast<double>(k) / static_cast<double>(pieces);
            const double to = static_cast<double>(k + 1) / static_cast<double>(pieces);
            Segment s;
            s.id = static_cast<SegmentId>(segments.size());
            s.edge_id = edge.id;
            s.geometry = sub_polyline(edge.geometry, from, to);
            s.length_m = piece_len;
            s.start = node_key(s.geometry.front());
            s.end = node_key(s.geometry.back());
            segments.push_back(std::move(s));
        }
    }

    std::map<NodeKey, std::vector<SegmentId>> at_node;
    for (const auto& s : segments) {
        at_node[s.start].push_back(s.id);
        if (s.end != s.start) at_node[s.end].push_back(s.id);
    }
    for (auto& s : segments) {
        std::set<SegmentId> adj;
        for (const NodeKey& node : {s.start, s.end}) {
            for (SegmentId other : at_node[node]) {
                if (other != s.id) adj.insert(other);
            }
        }
        s.adjacent.assign(adj.begin(), adj.end());
    }
    return segments;
}

const char* to_string(Direction d) {
    switch (d) {
        case Direction::undirected: return "undirected";
        case Direction::forward: return "forward";
        case Direction::reverse: return "reverse";
    }
    return "undirected";
}

Direction direction_from_string(const std::string& text) {
    if (text == "undirected") return Direction::undirected;
    if (text == "forward") return Direction::forward;
    if (text == "reverse") return Direction::reverse;
    throw InvalidInput("unknown direction '" + text + "'");
}

std::vector<SensorPlacement> snap_sensors(const std::vector<SensorPlacement>& sensors,
                                          const std::vector<Segment>& segments,
                                          double tolerance_deg) {
    if (!(tolerance_deg >= 0.0)) throw InvalidInput("snap tolerance must be non-negative");
    std::vector<SensorPlacement> out;
    out.reserve(sensors.size());
    for (const auto& in : sensors) {
        SensorPlacement s = in;
        s.segment.reset();
        double best = std::numeric_limits<double>::infinity();
        SegmentId best_id = -1;
        for (const auto& seg : segments) {
            const double d = point_polyline_distance_deg(s.position, seg.geometry);
            if (d < best || (d == best && seg.id < best_id)) {
                best = d;
                best_id = seg.id;
            }
        }
        s.snap_distance_deg = best;
        if (best_id >= 0 && best <= tolerance_deg) s.segment = best_id;
        out.push_back(std::move(s));
    }
    return out;
}

std::string SegmentPath::key() const {
    return fmt::format("P:{}", fmt::join(canonical, ","));
}

SegmentPath SegmentPath::reversed() const {
    SegmentPath r = *this;
    std::reverse(r.segments.begin(), r.segments.end());
    std::reverse(r.along_geometry.begin(), r.along_geometry.end());
    r.along_geometry.flip();
    return r;
}

namespace {

class PathSearch {
public:
    PathSearch(const std::vector<Segment>& segments, const PathEnumerationOptions& options)
        : segments_(segments), options_(options), used_(segments.size(), 0) {
        const double lo_tol = 1e-9 * std::max(1.0, options.min_length_m);
        const double hi_tol = 1e-9 * std::max(1.0, options.max_length_m);
        lo_ = options.min_length_m - lo_tol;
        hi_ = options.max_length_m + hi_tol;
    }

    std::map<std::vector<SegmentId>, SegmentPath> run() {
        for (const auto& s : segments_) {
            for (bool along : {true, false}) {
                if (s.length_m > hi_) continue;
                push(s.id, along);
                extend(along ? s.end : s.start);
                pop();
            }
        }
        return std::move(found_);
    }

private:
    void push(SegmentId id, bool along) {
        path_.push_back(id);
        along_.push_back(along);
        used_[static_cast<std::size_t>(id)] = 1;
        length_ += segments_[static_cast<std::size_t>(id)].length_m;
    }

    void pop() {
        const SegmentId id = path_.back();
        length_ -= segments_[static_cast<std::size_t>(id)].length_m;
        used_[static_cast<std::size_t>(id)] = 0;
        path_.pop_back();
        along_.pop_back();
        if (path_.empty()) length_ = 0.0;
    }

    void emit() {
        std::vector<SegmentId> key = path_;
        std::sort(key.begin(), key.end());
        if (found_.count(key)) return;
        SegmentPath p;
        p.segments = path_;
        p.along_geometry = along_;
        p.length_m = length_;
        p.canonical = key;
        found_.emplace(std::move(key), std::move(p));
        if (found_.size() > options_.max_paths) {
            throw PathCapExceeded(found_.size(), options_.max_paths);
        }
    }

    void extend(const NodeKey& exit) {
        if (length_ >= lo_) emit();
        const Segment& last = segments_[static_cast<std::size_t>(path_.back())];
        for (SegmentId next : last.adjacent) {
            const auto& n = segments_[static_cast<std::size_t>(next)];
            if (used_[static_cast<std::size_t>(next)] || length_ + n.length_m > hi_) continue;
            if (n.start == exit) {
                push(next, true);
                extend(n.end);
                pop();
            } else if (n.end == exit) {
                push(next, false);
                extend(n.start);
                pop();
            }
        }
    }

    const std::vector<Segment>& segments_;
    const PathEnumerationOptions& options_;
    double lo_ = 0.0;
    double hi_ = 0.0;
    std::vector<char> used_;
    std::vector<SegmentId> path_;
    std::vector<bool> along_;
    double length_ = 0.0;
    std::map<std::vector<SegmentId>, SegmentPath> found_;
};

}  // namespace

std::vector<SegmentPath> enumerate_paths(const std::vector<Segment>& segments,
                                         const PathEnumerationOptions& options) {
    if (!(options.min_length_m >= 0.0) || !(options.min_length_m < options.max_length_m)) {
        throw InvalidInput(fmt::format("path bounds must satisfy 0 <= min < max (got {} and {})",
                                       options.min_length_m, options.max_length_m));
    }
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (segments[i].id != static_cast<SegmentId>(i)) {
            throw InvalidInput("segment ids must equal their list positions");
        }
    }
    auto found = PathSearch(segments, options).run();
    std::vector<SegmentPath> out;
    out.reserve(found.size());
    for (auto& [key, path] : found) out.push_back(std::move(path));
    return out;
}

const std::vector<std::size_t>& PathMembers::get(Direction d) const {
    switch (d) {
        case Direction::forward: return forward;
        case Direction::reverse: return reverse;
        case Direction::undirected: break;
    }
    return undirected;
}

SegmentSensorIndex::SegmentSensorIndex(const std::vector<SensorPlacement>& sensors,
                                       std::size_t segment_count)
    : sensors_(&sensors), by_segment_(segment_count) {
    for (std::size_t i = 0; i < sensors.size(); ++i) {
        const auto& seg = sensors[i].segment;
        if (seg && static_cast<std::size_t>(*seg) < segment_count) {
            by_segment_[static_cast<std::size_t>(*seg)].push_back(i);
        }
    }
}

PathMembers SegmentSensorIndex::members(const SegmentPath& path) const {
    PathMembers m;
    for (std::size_t k = 0; k < path.segments.size(); ++k) {
        const auto seg = static_cast<std::size_t>(path.segments[k]);
        if (seg >= by_segment_.size()) continue;
        const bool along = k < path.along_geometry.size() ? path.along_geometry[k] : true;
        for (std::size_t i : by_segment_[seg]) {
            m.undirected.push_back(i);
            const auto& dir = (*sensors_)[i].direction;
            if (!dir || *dir == Direction::undirected) {
                m.forward.push_back(i);
                m.reverse.push_back(i);
            } else if ((*dir == Direction::forward) == along) {
                m.forward.push_back(i);
            } else {
                m.reverse.push_back(i);
            }
        }
    }
    for (auto* v : {&m.undirected, &m.forward, &m.reverse}) std::sort(v->begin(), v->end());
    return m;
}

PathMembers path_members(const SegmentPath& path, const std::vector<SensorPlacement>& sensors) {
    std::size_t max_segment = 0;
    for (SegmentId s : path.segments) max_segment = std::max(max_segment, static_cast<std::size_t>(s) + 1);
    return SegmentSensorIndex(sensors, max_segment).members(path);
}

}  // namespace netscan
