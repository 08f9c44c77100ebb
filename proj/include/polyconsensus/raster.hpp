#pragma once

#include <cstdint>
#include <vector>

#include "polyconsensus/geometry.hpp"

namespace polyconsensus {

struct RasterOptions {
    // Margin beyond the polygon bbox, in pixels. Distance fields need valid
    // values in a band outside the shape.
    double pad_px = 4.0;
    std::int64_t cell_budget = 100'000'000;
};

// Grid geometry shared by occupancy grids and scalar fields. `resolution` is
// r grid cells per image pixel; cell (i, j) is the half-open tile
// [origin.x + i/r, origin.x + (i+1)/r) x [origin.y + j/r, origin.y + (j+1)/r).
struct GridFrame {
    int resolution = 1;
    Point2 origin;
    int width = 0;  // cell count
    int height = 0; // cell count

    Point2 cell_center(int i, int j) const {
        double r = static_cast<double>(resolution);
        return {origin.x + (i + 0.5) / r, origin.y + (j + 0.5) / r};
    }
    std::int64_t cell_count() const {
        return static_cast<std::int64_t>(width) * height;
    }
    bool operator==(const GridFrame& o) const {
        return resolution == o.resolution && origin == o.origin &&
               width == o.width && height == o.height;
    }
};

// Integer-aligned frame covering bbox plus pad on every side. Snapping the
// origin to whole pixels keeps rasterization equivariant under integer
// translation.
GridFrame frame_for(const BBox& bbox, int resolution, const RasterOptions& opts = {});

class RasterGrid {
public:
    RasterGrid() = default;
    explicit RasterGrid(const GridFrame& frame);

    const GridFrame& frame() const { return frame_; }
    int resolution() const { return frame_.resolution; }
    Point2 origin() const { return frame_.origin; }
    int width() const { return frame_.width; }
    int height() const { return frame_.height; }

    bool filled(int i, int j) const { return cells_[idx(i, j)] != 0; }
    void set(int i, int j, bool v = true) { cells_[idx(i, j)] = v ? 1 : 0; }
    bool in_bounds(int i, int j) const {
        return i >= 0 && i < frame_.width && j >= 0 && j < frame_.height;
    }
    std::int64_t filled_count() const;
    const std::vector<std::uint8_t>& cells() const { return cells_; }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(j) * frame_.width + i;
    }
    GridFrame frame_;
    std::vector<std::uint8_t> cells_;
};

// Marks every cell whose half-open tile the segment passes through,
// including single-point memberships at corner grazes. Endpoints outside the
// grid are clipped cell-wise (out-of-bounds cells are skipped).
void add_segment_supercover(RasterGrid& grid, Point2 a, Point2 b);

// Supercover of every polygon edge.
void add_boundary_supercover(RasterGrid& grid, const Polygon& polygon);

// Marks every cell whose center is inside the polygon (even-odd scanline).
void add_interior_centers(RasterGrid& grid, const Polygon& polygon);

// Boundary supercover + interior centers on a fresh grid over the polygon
// bbox plus pad.
RasterGrid rasterize_alltouch(const Polygon& polygon, int resolution,
                              const RasterOptions& opts = {});

// Filled-cell count / resolution^2, in pixels^2.
double raster_area(const RasterGrid& grid);

} // namespace polyconsensus
