#include "polyconsensus/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polyconsensus {

ScalarField::ScalarField(const GridFrame& frame, double fill)
    : frame_(frame),
      values_(static_cast<std::size_t>(frame.cell_count()), fill) {
    if (frame.width < 1 || frame.height < 1 || frame.resolution < 1)
        throw InvalidInputError("ScalarField: degenerate frame");
}

namespace {

constexpr double kUnset = -1.0;

// 1-D squared distance transform over the finite entries of `f`
// (Felzenszwalb & Huttenlocher lower envelope). Entries with f < 0 are
// treated as absent. All arithmetic on squared integer cell offsets stays
// exact in doubles for any realistic grid size.
void squared_dt_1d(const std::vector<double>& f, std::vector<double>& d,
                   std::vector<int>& hull, std::vector<double>& breaks) {
    const int n = static_cast<int>(f.size());
    hull.clear();
    breaks.clear();
    for (int q = 0; q < n; ++q) {
        if (f[q] < 0.0) continue;
        double fq = f[q];
        while (!hull.empty()) {
            int p = hull.back();
            double s = ((fq + static_cast<double>(q) * q) -
                        (f[p] + static_cast<double>(p) * p)) /
                       (2.0 * (q - p));
            if (!breaks.empty() && s <= breaks.back()) {
                hull.pop_back();
                breaks.pop_back();
            } else {
                hull.push_back(q);
                breaks.push_back(s);
                break;
            }
        }
        if (hull.empty()) hull.push_back(q);
    }
    if (hull.empty()) {
        std::fill(d.begin(), d.end(), kUnset);
        return;
    }
    std::size_t k = 0;
    for (int q = 0; q < n; ++q) {
        while (k < breaks.size() && breaks[k] < static_cast<double>(q)) ++k;
        double dq = static_cast<double>(q - hull[k]);
        d[q] = dq * dq + f[hull[k]];
    }
}

} // namespace

ScalarField edt(const RasterGrid& seeds) {
    if (seeds.filled_count() == 0)
        throw InvalidInputError("edt: grid has no filled cells");

    const GridFrame& frame = seeds.frame();
    const int w = frame.width;
    const int h = frame.height;
    ScalarField out(frame);

    // Pass 1 (columns): squared distance to the nearest seed within the
    // column, kUnset for seedless columns.
    std::vector<double> col(h), dcol(h);
    std::vector<int> hull;
    std::vector<double> breaks;
    std::vector<double> g(static_cast<std::size_t>(w) * h, kUnset);
    for (int i = 0; i < w; ++i) {
        for (int j = 0; j < h; ++j)
            col[j] = seeds.filled(i, j) ? 0.0 : kUnset;
        bool any = false;
        for (int j = 0; j < h; ++j) any = any || col[j] == 0.0;
        if (!any) continue;
        // Binary seeds: two-scan nearest-seed distance, then square.
        int last = std::numeric_limits<int>::min() / 2;
        std::vector<double>& dist = dcol;
        for (int j = 0; j < h; ++j) {
            if (col[j] == 0.0) last = j;
            dist[j] = static_cast<double>(j - last);
        }
        int next = std::numeric_limits<int>::max() / 2;
        for (int j = h - 1; j >= 0; --j) {
            if (col[j] == 0.0) next = j;
            dist[j] = std::min(dist[j], static_cast<double>(next - j));
        }
        for (int j = 0; j < h; ++j)
            g[static_cast<std::size_t>(j) * w + i] = dist[j] * dist[j];
    }

    // Pass 2 (rows): lower envelope over the finite column results.
    std::vector<double> row(w), drow(w);
    const double r = static_cast<double>(frame.resolution);
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) row[i] = g[static_cast<std::size_t>(j) * w + i];
        squared_dt_1d(row, drow, hull, breaks);
        for (int i = 0; i < w; ++i)
            out.set(i, j, std::sqrt(drow[i]) / r);
    }
    return out;
}

namespace {

// Even-odd interior test for every cell center, same crossing rule as
// contains_point and add_interior_centers.
std::vector<std::uint8_t> interior_center_mask(const GridFrame& f, const Polygon& polygon) {
    RasterGrid g(f);
    add_interior_centers(g, polygon);
    return g.cells();
}

} // namespace

ScalarField signed_distance_field(const Polygon& polygon, const GridFrame& frame) {
    RasterGrid boundary(frame);
    add_boundary_supercover(boundary, polygon);
    ScalarField field = edt(boundary);
    std::vector<std::uint8_t> inside = interior_center_mask(frame, polygon);
    auto& vals = field.values();
    for (std::size_t k = 0; k < vals.size(); ++k)
        if (inside[k]) vals[k] = -vals[k];
    return field;
}

ScalarField signed_distance_field(const Polygon& polygon, int resolution,
                                  const RasterOptions& opts) {
    return signed_distance_field(polygon, frame_for(polygon.bbox(), resolution, opts));
}

double exact_polyline_distance(const Polygon& polygon, Point2 p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        auto [a, b] = polygon.edge(i);
        best = std::min(best, point_segment_distance(p, a, b));
    }
    return best;
}

double sample_field(const ScalarField& field, Point2 p) {
    const GridFrame& f = field.frame();
    const double r = static_cast<double>(f.resolution);
    double u = (p.x - f.origin.x) * r - 0.5;
    double v = (p.y - f.origin.y) * r - 0.5;
    if (u < 0.0 || v < 0.0 || u > f.width - 1 || v > f.height - 1)
        throw OutOfDomainError("sample_field: point outside field extent");
    int i0 = std::min(static_cast<int>(std::floor(u)), f.width - 2);
    int j0 = std::min(static_cast<int>(std::floor(v)), f.height - 2);
    i0 = std::max(i0, 0);
    j0 = std::max(j0, 0);
    double fu = u - i0;
    double fv = v - j0;
    double v00 = field.at(i0, j0);
    double v10 = field.at(i0 + 1, j0);
    double v01 = field.at(i0, j0 + 1);
    double v11 = field.at(i0 + 1, j0 + 1);
    return (1.0 - fv) * ((1.0 - fu) * v00 + fu * v10) +
           fv * ((1.0 - fu) * v01 + fu * v11);
}

} // namespace polyconsensus
