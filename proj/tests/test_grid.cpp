#include <gtest/gtest.h>

#include <random>

#include "netscan/error.hpp"
#include "netscan/grid.hpp"

using namespace netscan;

namespace {

Boundary square(double x0, double y0, double x1, double y1) {
    Boundary b;
    b.polygons.push_back(Polygon{{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}}});
    return b;
}

}  // namespace

TEST(Grid, UnitSquareEdges) {
    const auto g = build_grid(square(0, 0, 1, 1), 2);
    EXPECT_EQ(g.lon_edges(), (std::vector<double>{0.0, 0.5, 1.0}));
    EXPECT_EQ(g.lat_edges(), (std::vector<double>{0.0, 0.5, 1.0}));
}

TEST(Grid, SharedCornerGoesToLargerIndices) {
    const auto g = build_grid(square(0, 0, 1, 1), 2);
    EXPECT_EQ(g.cell_of({0.5, 0.5}), std::make_pair(1, 1));
    EXPECT_EQ(g.cell_of({1.0, 1.0}), std::make_pair(1, 1));
    EXPECT_EQ(g.cell_of({0.0, 0.0}), std::make_pair(0, 0));
    EXPECT_FALSE(g.cell_of({1.01, 0.5}).has_value());
}

TEST(Grid, WestminsterBoxHas64Cells) {
    const auto g = build_grid(square(-0.19, 51.49, -0.11, 51.525), 8);
    std::size_t cells = 0;
    for (int ix = 0; ix < g.resolution(); ++ix)
        for (int iy = 0; iy < g.resolution(); ++iy) {
            const auto b = g.cell_box(ix, iy);
            EXPECT_GT(b.width(), 0.0);
            ++cells;
        }
    EXPECT_EQ(cells, 64u);
}

TEST(Grid, RejectsDegenerateBoundary) {
    EXPECT_THROW(build_grid(square(0, 0, 0, 1), 4), InvalidInput);
    EXPECT_THROW(build_grid(Boundary{}, 4), InvalidInput);
    EXPECT_THROW(build_grid(square(0, 0, 1, 1), 0), InvalidInput);
}

TEST(Rectangles, CountsMatchTriangularSquares) {
    const auto g2 = build_grid(square(0, 0, 1, 1), 2);
    EXPECT_EQ(enumerate_rectangles(g2, {}).size(), 9u);
    const auto g8 = build_grid(square(0, 0, 1, 1), 8);
    EXPECT_EQ(enumerate_rectangles(g8, {}).size(), 1296u);
}

TEST(Rectangles, SingleCellHoldsEveryInBoxSensor) {
    const auto g = build_grid(square(0, 0, 1, 1), 1);
    const auto r = enumerate_rectangles(g, {{0.2, 0.2}, {0.9, 1.0}, {2.0, 2.0}});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].members, (std::vector<std::size_t>{0, 1}));
}

TEST(Rectangles, MatchBruteForceMembership) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.1, 1.1);
    for (int n = 1; n <= 6; ++n) {
        const auto g = build_grid(square(0, 0, 1, 1), n);
        std::vector<LonLat> pts(40);
        for (auto& p : pts) p = {u(rng), u(rng)};
        const auto rects = enumerate_rectangles(g, pts);
        ASSERT_EQ(rects.size(), static_cast<std::size_t>((n * (n + 1) / 2) * (n * (n + 1) / 2)));
        std::size_t i = 0;
        for (int x0 = 0; x0 < n; ++x0)
            for (int x1 = x0; x1 < n; ++x1)
                for (int y0 = 0; y0 < n; ++y0)
                    for (int y1 = y0; y1 < n; ++y1, ++i) {
                        const auto& r = rects[i];
                        EXPECT_EQ(std::tie(r.x0, r.x1, r.y0, r.y1), std::tie(x0, x1, y0, y1));
                        const double lo_x = static_cast<double>(x0) / n, hi_x = static_cast<double>(x1 + 1) / n;
                        const double lo_y = static_cast<double>(y0) / n, hi_y = static_cast<double>(y1 + 1) / n;
                        std::vector<std::size_t> expect;
                        for (std::size_t k = 0; k < pts.size(); ++k) {
                            const auto& p = pts[k];
                            const bool in_x = p.lon >= lo_x && (p.lon < hi_x || (x1 == n - 1 && p.lon <= 1.0));
                            const bool in_y = p.lat >= lo_y && (p.lat < hi_y || (y1 == n - 1 && p.lat <= 1.0));
                            if (in_x && in_y) expect.push_back(k);
                        }
                        EXPECT_EQ(r.members, expect);
                    }
    }
}

TEST(Rectangles, MembershipIsMonotone) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<LonLat> pts(60);
    for (auto& p : pts) p = {u(rng), u(rng)};
    const auto g = build_grid(square(0, 0, 1, 1), 4);
    const auto rects = enumerate_rectangles(g, pts);
    for (const auto& a : rects)
        for (const auto& b : rects) {
            if (a.x0 >= b.x0 && a.x1 <= b.x1 && a.y0 >= b.y0 && a.y1 <= b.y1) {
                EXPECT_TRUE(std::includes(b.members.begin(), b.members.end(), a.members.begin(), a.members.end()));
            }
        }
}

TEST(Rectangles, MaxSideLimitsBothSides) {
    const auto g = build_grid(square(0, 0, 1, 1), 4);
    const auto rects = enumerate_rectangles(g, {}, 2);
    EXPECT_EQ(rects.size(), 49u);
    for (const auto& r : rects) {
        EXPECT_LE(r.x1 - r.x0 + 1, 2);
        EXPECT_LE(r.y1 - r.y0 + 1, 2);
    }
}

TEST(Rectangles, KeyRoundTrip) {
    GridRectangle r;
    r.x0 = 1;
    r.x1 = 3;
    r.y0 = 0;
    r.y1 = 7;
    EXPECT_EQ(r.key(), "R:1-3:0-7");
    const auto parsed = parse_rectangle_key(r.key());
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(std::tie(parsed->x0, parsed->x1, parsed->y0, parsed->y1), std::tie(r.x0, r.x1, r.y0, r.y1));
    EXPECT_FALSE(parse_rectangle_key("R:3-1:0-0").has_value());
    EXPECT_FALSE(parse_rectangle_key("P:1,2").has_value());
}
