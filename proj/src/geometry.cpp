#include "polyconsensus/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polyconsensus {

BBox bbox_of(const std::vector<Point2>& points) {
    if (points.empty())
        throw InvalidInputError("bbox_of: empty point list");
    BBox b{points[0].x, points[0].y, points[0].x, points[0].y};
    for (const Point2& p : points) {
        b.x_min = std::min(b.x_min, p.x);
        b.y_min = std::min(b.y_min, p.y);
        b.x_max = std::max(b.x_max, p.x);
        b.y_max = std::max(b.y_max, p.y);
    }
    return b;
}

BBox bbox_union(const BBox& a, const BBox& b) {
    return {std::min(a.x_min, b.x_min), std::min(a.y_min, b.y_min),
            std::max(a.x_max, b.x_max), std::max(a.y_max, b.y_max)};
}

Polygon::Polygon(std::vector<Point2> vertices) : verts_(std::move(vertices)) {
    if (verts_.size() < 3)
        throw InvalidInputError("polygon needs at least 3 vertices, got " +
                                std::to_string(verts_.size()));
    for (const Point2& p : verts_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw InvalidInputError("polygon vertex is not finite");
    }
    for (std::size_t i = 0; i < verts_.size(); ++i) {
        if (verts_[i] == verts_[(i + 1) % verts_.size()])
            throw InvalidInputError("polygon has identical consecutive vertices at index " +
                                    std::to_string(i));
    }
}

namespace {

int orientation_sign(Point2 a, Point2 b, Point2 c) {
    double v = cross(b - a, c - a);
    if (v > 0.0) return 1;
    if (v < 0.0) return -1;
    return 0;
}

bool on_segment_collinear(Point2 a, Point2 b, Point2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection test, including touching and collinear overlap.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    int o1 = orientation_sign(a, b, c);
    int o2 = orientation_sign(a, b, d);
    int o3 = orientation_sign(c, d, a);
    int o4 = orientation_sign(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment_collinear(a, b, c)) return true;
    if (o2 == 0 && on_segment_collinear(a, b, d)) return true;
    if (o3 == 0 && on_segment_collinear(c, d, a)) return true;
    if (o4 == 0 && on_segment_collinear(c, d, b)) return true;
    return false;
}

} // namespace

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    Point2 ab = b - a;
    double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    double t = dot(p - a, ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + t * ab);
}

bool is_simple(const Polygon& polygon) {
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        auto [a, b] = polygon.edge(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            auto [c, d] = polygon.edge(j);
            if (adjacent) {
                // Adjacent edges share one endpoint; the only illegal contact
                // is a spike-back, where the free endpoint of one edge lands
                // on the other edge.
                Point2 free_ij = (j == i + 1) ? a : b;
                Point2 free_ji = (j == i + 1) ? d : c;
                if (orientation_sign(a, b, free_ji) == 0 &&
                    on_segment_collinear(a, b, free_ji))
                    return false;
                if (orientation_sign(c, d, free_ij) == 0 &&
                    on_segment_collinear(c, d, free_ij))
                    return false;
                continue;
            }
            if (segments_intersect(a, b, c, d)) return false;
        }
    }
    return true;
}

void validate_simple(const Polygon& polygon, const std::string& context) {
    if (!is_simple(polygon)) {
        std::string prefix = context.empty() ? "" : context + ": ";
        throw ValidationError(prefix + "polygon is self-intersecting");
    }
}

double signed_area(const Polygon& polygon) {
    const auto& v = polygon.vertices();
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % v.size()];
        sum += a.x * b.y - b.x * a.y;
    }
    return 0.5 * sum;
}

double shoelace_area(const Polygon& polygon) {
    return std::abs(signed_area(polygon));
}

double perimeter(const Polygon& polygon) {
    const auto& v = polygon.vertices();
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        sum += distance(v[i], v[(i + 1) % v.size()]);
    return sum;
}

std::vector<ArcSample> resample_by_arclength(const Polygon& polygon, double step) {
    if (!(step > 0.0))
        throw InvalidInputError("resample_by_arclength: step must be > 0");
    const auto& v = polygon.vertices();
    const std::size_t n = v.size();
    const double total = perimeter(polygon);
    const std::size_t count = static_cast<std::size_t>(std::ceil(total / step));

    // cum[i] = arc length at vertex i; cum[n] = perimeter
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        cum[i + 1] = cum[i] + distance(v[i], v[(i + 1) % n]);

    std::vector<ArcSample> out;
    out.reserve(std::max<std::size_t>(count, 1));
    std::size_t edge = 0;
    for (std::size_t k = 0; k < std::max<std::size_t>(count, 1); ++k) {
        double t = static_cast<double>(k) * step;
        while (edge + 1 < n && cum[edge + 1] <= t) ++edge;
        double edge_len = cum[edge + 1] - cum[edge];
        double local = edge_len > 0.0 ? (t - cum[edge]) / edge_len : 0.0;
        local = std::clamp(local, 0.0, 1.0);
        Point2 p = v[edge] + local * (v[(edge + 1) % n] - v[edge]);
        out.push_back({t, p});
    }
    return out;
}

bool point_on_boundary(const Polygon& polygon, Point2 p, double eps) {
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        auto [a, b] = polygon.edge(i);
        if (point_segment_distance(p, a, b) <= eps) return true;
    }
    return false;
}

bool contains_point(const Polygon& polygon, Point2 p) {
    if (point_on_boundary(polygon, p)) return true;
    // Even-odd ray crossing toward +x with the half-open vertex rule.
    bool inside = false;
    const auto& v = polygon.vertices();
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        Point2 a = v[i];
        Point2 b = v[(i + 1) % n];
        if ((a.y <= p.y) != (b.y <= p.y)) {
            double x_at = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (x_at > p.x) inside = !inside;
        }
    }
    return inside;
}

BBox crop_with_margin(const BBox& bbox, double margin_fraction,
                      double image_w, double image_h) {
    if (!bbox.valid())
        throw InvalidInputError("crop_with_margin: invalid bbox");
    if (margin_fraction < 0.0 || margin_fraction >= 1.0)
        throw InvalidInputError("crop_with_margin: margin_fraction must be in [0, 1)");
    if (bbox.x_min < 0.0 || bbox.y_min < 0.0 || bbox.x_max > image_w || bbox.y_max > image_h)
        throw InvalidInputError("crop_with_margin: bbox outside image");
    double mx = margin_fraction * bbox.width();
    double my = margin_fraction * bbox.height();
    return {std::max(0.0, bbox.x_min - mx), std::max(0.0, bbox.y_min - my),
            std::min(image_w, bbox.x_max + mx), std::min(image_h, bbox.y_max + my)};
}

Polygon translate(const Polygon& polygon, Point2 offset) {
    std::vector<Point2> verts = polygon.vertices();
    for (Point2& p : verts) p = p + offset;
    return Polygon(std::move(verts));
}

} // namespace polyconsensus
