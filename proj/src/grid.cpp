#include "netscan/grid.hpp"

#include <algorithm>
#include <cstdio>

#include <fmt/format.h>

#include "netscan/error.hpp"

namespace netscan {

PlanarGrid::PlanarGrid(const BoundingBox& box, int resolution) : box_(box), n_(resolution) {
    if (n_ < 1) throw InvalidInput("grid resolution must be at least 1");
    if (!(box.width() > 0.0) || !(box.height() > 0.0)) {
        throw InvalidInput("grid bounding box has zero area");
    }
    lon_edges_.resize(static_cast<std::size_t>(n_) + 1);
    lat_edges_.resize(static_cast<std::size_t>(n_) + 1);
    for (int i = 0; i <= n_; ++i) {
        const double f = static_cast<double>(i) / n_;
        lon_edges_[static_cast<std::size_t>(i)] = box.min_lon + f * box.width();
        lat_edges_[static_cast<std::size_t>(i)] = box.min_lat + f * box.height();
    }
    lon_edges_.back() = box.max_lon;
    lat_edges_.back() = box.max_lat;
}

namespace {

int index_in(const std::vector<double>& edges, double v) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), v);
    const int i = static_cast<int>(std::distance(edges.begin(), it)) - 1;
    return std::min(i, static_cast<int>(edges.size()) - 2);
}

}  // namespace

std::optional<std::pair<int, int>> PlanarGrid::cell_of(const LonLat& p) const {
    if (!box_.contains(p)) return std::nullopt;
    return std::make_pair(index_in(lon_edges_, p.lon), index_in(lat_edges_, p.lat));
}

BoundingBox PlanarGrid::cell_box(int ix, int iy) const {
    const auto x = static_cast<std::size_t>(ix);
    const auto y = static_cast<std::size_t>(iy);
    return BoundingBox{lon_edges_[x], lat_edges_[y], lon_edges_[x + 1], lat_edges_[y + 1]};
}

PlanarGrid build_grid(const Boundary& boundary, int n) {
    if (boundary.empty()) throw InvalidInput("boundary polygon is empty");
    return PlanarGrid(boundary.bounding_box(), n);
}

std::string GridRectangle::key() const {
    return fmt::format("R:{}-{}:{}-{}", x0, x1, y0, y1);
}

std::optional<GridRectangle> parse_rectangle_key(const std::string& key) {
    GridRectangle r;
    int consumed = 0;
    if (std::sscanf(key.c_str(), "R:%d-%d:%d-%d%n", &r.x0, &r.x1, &r.y0, &r.y1, &consumed) != 4 ||
        static_cast<std::size_t>(consumed) != key.size() || r.x0 > r.x1 || r.y0 > r.y1 ||
        r.x0 < 0 || r.y0 < 0) {
        return std::nullopt;
    }
    return r;
}

std::vector<std::optional<std::pair<int, int>>> assign_cells(const PlanarGrid& grid,
                                                             const std::vector<LonLat>& sensors) {
    std::vector<std::optional<std::pair<int, int>>> cells;
    cells.reserve(sensors.size());
    for (const auto& p : sensors) cells.push_back(grid.cell_of(p));
    return cells;
}

std::vector<GridRectangle> enumerate_rectangles(const PlanarGrid& grid,
                                                const std::vector<LonLat>& sensors,
                                                int max_side) {
    const int n = grid.resolution();
    const int limit = max_side > 0 ? std::min(max_side, n) : n;
    const auto cells = assign_cells(grid, sensors);

    // Sensors bucketed per cell so each rectangle only visits its own cells.
    std::vector<std::vector<std::size_t>> in_cell(static_cast<std::size_t>(n * n));
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i]) {
            in_cell[static_cast<std::size_t>(cells[i]->second * n + cells[i]->first)].push_back(i);
        }
    }

    std::vector<GridRectangle> out;
    for (int x0 = 0; x0 < n; ++x0) {
        for (int x1 = x0; x1 < n && x1 - x0 < limit; ++x1) {
            for (int y0 = 0; y0 < n; ++y0) {
                for (int y1 = y0; y1 < n && y1 - y0 < limit; ++y1) {
                    GridRectangle r{x0, x1, y0, y1, {}};
                    for (int y = y0; y <= y1; ++y) {
                        for (int x = x0; x <= x1; ++x) {
                            const auto& bucket = in_cell[static_cast<std::size_t>(y * n + x)];
                            r.members.insert(r.members.end(), bucket.begin(), bucket.end());
                        }
                    }
                    std::sort(r.members.begin(), r.members.end());
                    out.push_back(std::move(r));
                }
            }
        }
    }
    return out;
}

}  // namespace netscan
