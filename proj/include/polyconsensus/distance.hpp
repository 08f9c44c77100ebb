#pragma once

#include <vector>

#include "polyconsensus/raster.hpp"

namespace polyconsensus {

// Per-cell real values on a GridFrame. Units are pixels for distance fields
// and dimensionless for derived statistics.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(const GridFrame& frame, double fill = 0.0);

    const GridFrame& frame() const { return frame_; }
    int resolution() const { return frame_.resolution; }
    Point2 origin() const { return frame_.origin; }
    int width() const { return frame_.width; }
    int height() const { return frame_.height; }

    double at(int i, int j) const { return values_[idx(i, j)]; }
    void set(int i, int j, double v) { values_[idx(i, j)] = v; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    bool same_geometry(const ScalarField& o) const { return frame_ == o.frame_; }

private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(j) * frame_.width + i;
    }
    GridFrame frame_;
    std::vector<double> values_;
};

// Exact Euclidean distance (pixels) from each cell center to the nearest
// filled-cell center. Two-pass separable squared-distance transform with
// lower-envelope parabola evaluation; exact, not approximate.
ScalarField edt(const RasterGrid& seeds);

// Signed distance to the polygon boundary, negative inside. Distances come
// from edt over the boundary supercover cells; the sign of a cell follows the
// even-odd containment of its center.
ScalarField signed_distance_field(const Polygon& polygon, int resolution,
                                  const RasterOptions& opts = {});
// Same, on a caller-supplied frame (shared grids for consensus work).
ScalarField signed_distance_field(const Polygon& polygon, const GridFrame& frame);

// Minimum unsigned point-to-segment distance over all polygon edges.
double exact_polyline_distance(const Polygon& polygon, Point2 p);

// Bilinear interpolation of the four surrounding cell-center values.
// p outside the cell-center hull raises OutOfDomainError.
double sample_field(const ScalarField& field, Point2 p);

} // namespace polyconsensus
