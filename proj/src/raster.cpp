#include "polyconsensus/raster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace polyconsensus {

GridFrame frame_for(const BBox& bbox, int resolution, const RasterOptions& opts) {
    if (resolution < 1)
        throw InvalidInputError("frame_for: resolution must be >= 1");
    if (!bbox.valid())
        throw InvalidInputError("frame_for: invalid bbox");
    double x0 = std::floor(bbox.x_min) - std::ceil(opts.pad_px);
    double y0 = std::floor(bbox.y_min) - std::ceil(opts.pad_px);
    double x1 = std::ceil(bbox.x_max) + std::ceil(opts.pad_px);
    double y1 = std::ceil(bbox.y_max) + std::ceil(opts.pad_px);
    GridFrame f;
    f.resolution = resolution;
    f.origin = {x0, y0};
    f.width = static_cast<int>(std::llround((x1 - x0) * resolution));
    f.height = static_cast<int>(std::llround((y1 - y0) * resolution));
    if (f.cell_count() > opts.cell_budget)
        throw ResourceLimitError("raster grid of " + std::to_string(f.cell_count()) +
                                 " cells exceeds budget of " +
                                 std::to_string(opts.cell_budget));
    return f;
}

RasterGrid::RasterGrid(const GridFrame& frame)
    : frame_(frame),
      cells_(static_cast<std::size_t>(frame.cell_count()), 0) {
    if (frame.width < 1 || frame.height < 1 || frame.resolution < 1)
        throw InvalidInputError("RasterGrid: degenerate frame");
}

std::int64_t RasterGrid::filled_count() const {
    return std::count_if(cells_.begin(), cells_.end(),
                         [](std::uint8_t c) { return c != 0; });
}

namespace {

// Segment endpoint in cell coordinates: u = (x - origin.x) * r.
Point2 to_cells(const GridFrame& f, Point2 p) {
    double r = static_cast<double>(f.resolution);
    return {(p.x - f.origin.x) * r, (p.y - f.origin.y) * r};
}

void mark(RasterGrid& grid, double u, double v) {
    int i = static_cast<int>(std::floor(u));
    int j = static_cast<int>(std::floor(v));
    if (grid.in_bounds(i, j)) grid.set(i, j);
}

} // namespace

void add_segment_supercover(RasterGrid& grid, Point2 a, Point2 b) {
    Point2 p0 = to_cells(grid.frame(), a);
    Point2 p1 = to_cells(grid.frame(), b);
    Point2 d = p1 - p0;

    // Parameter values where the segment crosses integer grid lines. Mark the
    // tile of a point strictly between consecutive crossings (membership is
    // constant there) and the tile at each crossing itself, which catches
    // single-point memberships when the segment passes exactly through a
    // lattice corner.
    std::vector<double> ts{0.0, 1.0};
    auto add_axis_crossings = [&](double c0, double dc) {
        if (dc == 0.0) return;
        double lo = std::min(c0, c0 + dc);
        double hi = std::max(c0, c0 + dc);
        for (double m = std::ceil(lo); m <= std::floor(hi); m += 1.0) {
            double t = (m - c0) / dc;
            if (t >= 0.0 && t <= 1.0) ts.push_back(t);
        }
    };
    add_axis_crossings(p0.x, d.x);
    add_axis_crossings(p0.y, d.y);
    std::sort(ts.begin(), ts.end());

    for (double t : ts)
        mark(grid, p0.x + t * d.x, p0.y + t * d.y);
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        double tm = 0.5 * (ts[k] + ts[k + 1]);
        mark(grid, p0.x + tm * d.x, p0.y + tm * d.y);
    }
}

void add_boundary_supercover(RasterGrid& grid, const Polygon& polygon) {
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        auto [a, b] = polygon.edge(i);
        add_segment_supercover(grid, a, b);
    }
}

void add_interior_centers(RasterGrid& grid, const Polygon& polygon) {
    const GridFrame& f = grid.frame();
    const double r = static_cast<double>(f.resolution);
    const auto& v = polygon.vertices();
    const std::size_t n = v.size();

    std::vector<double> xs;
    for (int j = 0; j < f.height; ++j) {
        double yc = f.origin.y + (j + 0.5) / r;
        xs.clear();
        for (std::size_t e = 0; e < n; ++e) {
            const Point2& a = v[e];
            const Point2& b = v[(e + 1) % n];
            if ((a.y <= yc) != (b.y <= yc))
                xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            // Centers strictly between the crossing pair. Centers exactly on
            // the boundary belong to supercover-filled cells anyway.
            double ua = (xs[k] - f.origin.x) * r - 0.5;
            double ub = (xs[k + 1] - f.origin.x) * r - 0.5;
            int i0 = static_cast<int>(std::floor(ua)) + 1;
            int i1 = static_cast<int>(std::ceil(ub)) - 1;
            i0 = std::max(i0, 0);
            i1 = std::min(i1, f.width - 1);
            for (int i = i0; i <= i1; ++i) grid.set(i, j);
        }
    }
}

RasterGrid rasterize_alltouch(const Polygon& polygon, int resolution,
                              const RasterOptions& opts) {
    RasterGrid grid(frame_for(polygon.bbox(), resolution, opts));
    add_boundary_supercover(grid, polygon);
    add_interior_centers(grid, polygon);
    return grid;
}

double raster_area(const RasterGrid& grid) {
    double r = static_cast<double>(grid.resolution());
    return static_cast<double>(grid.filled_count()) / (r * r);
}

} // namespace polyconsensus
