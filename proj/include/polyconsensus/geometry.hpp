#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "polyconsensus/errors.hpp"

namespace polyconsensus {

// Pixel coordinates, origin top-left, x right, y down (COCO convention).
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

struct BBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    bool valid() const { return x_min < x_max && y_min < y_max; }
    bool contains(Point2 p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
};

BBox bbox_of(const std::vector<Point2>& points);
BBox bbox_union(const BBox& a, const BBox& b);

// Ordered vertex list; the closing edge (last -> first) is implicit, so
// polygons are stored open. Construction checks vertex count, finiteness and
// consecutive duplicates; the O(E^2) simplicity check is separate
// (validate_simple) and runs on ingested data only.
class Polygon {
public:
    Polygon() = default;
    explicit Polygon(std::vector<Point2> vertices);

    const std::vector<Point2>& vertices() const { return verts_; }
    std::size_t size() const { return verts_.size(); }
    Point2 vertex(std::size_t i) const { return verts_[i]; }
    // Edge i runs from vertex i to vertex (i+1) % size().
    std::pair<Point2, Point2> edge(std::size_t i) const {
        return {verts_[i], verts_[(i + 1) % verts_.size()]};
    }
    BBox bbox() const { return bbox_of(verts_); }

private:
    std::vector<Point2> verts_;
};

bool is_simple(const Polygon& polygon);
// Throws ValidationError when the polygon self-intersects. `context` is
// prefixed to the message (e.g. the offending rater id).
void validate_simple(const Polygon& polygon, const std::string& context = "");

// Signed shoelace sum / 2; positive for vertices ordered by increasing angle
// in the (x right, y down) frame used throughout.
double signed_area(const Polygon& polygon);
// |signed shoelace sum| / 2; orientation-independent.
double shoelace_area(const Polygon& polygon);
double perimeter(const Polygon& polygon);

struct ArcSample {
    double t = 0.0; // arc length from vertex 0, pixels
    Point2 point;
};

// Samples at t = 0, step, 2*step, ... < perimeter, linearly interpolated
// along edges. Sample count = ceil(perimeter / step).
std::vector<ArcSample> resample_by_arclength(const Polygon& polygon, double step);

// Even-odd rule. Points exactly on the boundary count as inside.
bool contains_point(const Polygon& polygon, Point2 p);

// True when p lies on the polygon boundary (within `eps` of some edge).
bool point_on_boundary(const Polygon& polygon, Point2 p, double eps = 1e-12);

double point_segment_distance(Point2 p, Point2 a, Point2 b);

// Expands bbox by margin_fraction of its own width/height on each side,
// clamped to [0, image_w] x [0, image_h].
BBox crop_with_margin(const BBox& bbox, double margin_fraction,
                      double image_w, double image_h);

Polygon translate(const Polygon& polygon, Point2 offset);

} // namespace polyconsensus
