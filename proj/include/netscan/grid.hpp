#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netscan/geo.hpp"

namespace netscan {

// Uniform N x N grid over a bounding box. Cells are half-open [lo, hi) on
// both axes except the last row/column, which is closed.
class PlanarGrid {
public:
    PlanarGrid(const BoundingBox& box, int resolution);

    const BoundingBox& box() const { return box_; }
    int resolution() const { return n_; }
    const std::vector<double>& lon_edges() const { return lon_edges_; }
    const std::vector<double>& lat_edges() const { return lat_edges_; }

    // (ix, iy) of the cell holding `p`, or nullopt outside the box.
    std::optional<std::pair<int, int>> cell_of(const LonLat& p) const;
    BoundingBox cell_box(int ix, int iy) const;

private:
    BoundingBox box_;
    int n_;
    std::vector<double> lon_edges_;
    std::vector<double> lat_edges_;
};

// Grid over the boundary's bounding box. Throws InvalidInput for an empty or
// zero-area boundary or n < 1.
PlanarGrid build_grid(const Boundary& boundary, int n);

struct GridRectangle {
    int x0 = 0, x1 = 0, y0 = 0, y1 = 0;  // inclusive cell ranges
    std::vector<std::size_t> members;    // sensor indices, sorted

    int cell_count() const { return (x1 - x0 + 1) * (y1 - y0 + 1); }
    bool contains_cell(int ix, int iy) const {
        return ix >= x0 && ix <= x1 && iy >= y0 && iy <= y1;
    }
    std::string key() const;
};

// Parses a key produced by GridRectangle::key(); nullopt if malformed.
std::optional<GridRectangle> parse_rectangle_key(const std::string& key);

// Cell of every sensor position (nullopt when outside the box).
std::vector<std::optional<std::pair<int, int>>> assign_cells(const PlanarGrid& grid,
                                                             const std::vector<LonLat>& sensors);

// All rectangles of whole cells in (x0, x1, y0, y1) order, each with its
// member sensors. `max_side` > 0 limits both side lengths, in cells.
std::vector<GridRectangle> enumerate_rectangles(const PlanarGrid& grid,
                                                const std::vector<LonLat>& sensors,
                                                int max_side = 0);

}  // namespace netscan
