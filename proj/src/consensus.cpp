#include "polyconsensus/consensus.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

namespace polyconsensus {

std::string to_string(Phase phase) {
    return phase == Phase::pre_qa ? "pre_qa" : "post_qa";
}

Phase phase_from_string(const std::string& s) {
    if (s == "pre_qa") return Phase::pre_qa;
    if (s == "post_qa") return Phase::post_qa;
    throw InvalidInputError("unknown phase '" + s + "' (expected pre_qa or post_qa)");
}

std::vector<const RaterPolygon*> RaterSet::phase_raters(Phase phase) const {
    std::vector<const RaterPolygon*> out;
    for (const RaterPolygon& r : raters)
        if (r.phase == phase) out.push_back(&r);
    return out;
}

GridFrame shared_frame(const RaterSet& raters, Phase phase,
                       const ConsensusOptions& opts) {
    auto polys = raters.phase_raters(phase);
    if (polys.empty())
        throw InvalidInputError("no polygons for phase " + to_string(phase) +
                                " in sample '" + raters.sample_id + "'");
    BBox box = polys[0]->polygon.bbox();
    for (const RaterPolygon* r : polys) box = bbox_union(box, r->polygon.bbox());
    return frame_for(box, opts.resolution, opts.raster);
}

namespace {

RasterGrid alltouch_on_frame(const GridFrame& frame, const Polygon& polygon) {
    RasterGrid g(frame);
    add_boundary_supercover(g, polygon);
    add_interior_centers(g, polygon);
    return g;
}

double mask_iou(const RasterGrid& a, const RasterGrid& b) {
    const auto& ca = a.cells();
    const auto& cb = b.cells();
    std::int64_t inter = 0, uni = 0;
    for (std::size_t k = 0; k < ca.size(); ++k) {
        bool fa = ca[k] != 0, fb = cb[k] != 0;
        inter += (fa && fb) ? 1 : 0;
        uni += (fa || fb) ? 1 : 0;
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace

PhaseFields compute_phase_fields(const RaterSet& raters, Phase phase,
                                 const ConsensusOptions& opts) {
    PhaseFields out;
    out.frame = shared_frame(raters, phase, opts);
    auto polys = raters.phase_raters(phase);

    std::vector<RasterGrid> masks;
    masks.reserve(polys.size());
    for (const RaterPolygon* r : polys) {
        out.rater_ids.push_back(r->rater_id);
        out.fields.push_back(signed_distance_field(r->polygon, out.frame));
        masks.push_back(alltouch_on_frame(out.frame, r->polygon));
    }

    // Assumption-1 heuristic: raters are expected to describe the same shape.
    for (std::size_t i = 0; i < masks.size(); ++i) {
        for (std::size_t j = i + 1; j < masks.size(); ++j) {
            double iou = mask_iou(masks[i], masks[j]);
            if (iou < opts.min_pairwise_iou) {
                std::ostringstream msg;
                msg << "low pairwise IoU " << iou << " between raters '"
                    << out.rater_ids[i] << "' and '" << out.rater_ids[j]
                    << "' (phase " << to_string(phase) << ")";
                out.warnings.push_back(msg.str());
            }
        }
    }
    return out;
}

ScalarField mean_sdf(std::span<const ScalarField> fields) {
    if (fields.empty())
        throw InvalidInputError("mean_sdf: no fields");
    for (const ScalarField& f : fields)
        if (!f.same_geometry(fields[0]))
            throw InvalidInputError("mean_sdf: mismatched field geometry");

    ScalarField out(fields[0].frame());
    const std::size_t cells = out.values().size();
    // Pairwise summation keeps the result independent of any evaluation
    // schedule an implementation might choose.
    std::function<double(std::size_t, std::size_t, std::size_t)> pair_sum =
        [&](std::size_t cell, std::size_t lo, std::size_t hi) -> double {
        if (hi - lo == 1) return fields[lo].values()[cell];
        std::size_t mid = lo + (hi - lo) / 2;
        return pair_sum(cell, lo, mid) + pair_sum(cell, mid, hi);
    };
    const double n = static_cast<double>(fields.size());
    for (std::size_t cell = 0; cell < cells; ++cell)
        out.values()[cell] = pair_sum(cell, 0, fields.size()) / n;
    return out;
}

namespace {

// Marching squares on the cell-center lattice. Lattice edges connect
// horizontally or vertically adjacent centers; a crossing exists where the
// endpoint classifications (value < 0 vs >= 0) differ, at the linear
// interpolation of the zero.
struct IsoTracer {
    const ScalarField& field;
    int w, h;
    int n_hedges, n_vedges;

    explicit IsoTracer(const ScalarField& f)
        : field(f), w(f.width()), h(f.height()),
          n_hedges((f.width() - 1) * f.height()),
          n_vedges(f.width() * (f.height() - 1)) {}

    bool inside(int i, int j) const { return field.at(i, j) < 0.0; }
    int hedge(int i, int j) const { return j * (w - 1) + i; }
    int vedge(int i, int j) const { return n_hedges + j * w + i; }

    Point2 crossing(int e) const {
        int i, j, di = 0, dj = 0;
        if (e < n_hedges) {
            j = e / (w - 1);
            i = e % (w - 1);
            di = 1;
        } else {
            int k = e - n_hedges;
            j = k / w;
            i = k % w;
            dj = 1;
        }
        double v0 = field.at(i, j);
        double v1 = field.at(i + di, j + dj);
        double t = v0 / (v0 - v1);
        Point2 c0 = field.frame().cell_center(i, j);
        Point2 c1 = field.frame().cell_center(i + di, j + dj);
        return c0 + t * (c1 - c0);
    }

    struct Link {
        int partner = -1;
        int square = -1;
    };

    std::vector<std::array<Link, 2>> links;
    std::vector<std::uint8_t> link_count;

    void add_pair(int ea, int eb, int square) {
        links[ea][link_count[ea]++] = {eb, square};
        links[eb][link_count[eb]++] = {ea, square};
    }

    void build() {
        links.assign(n_hedges + n_vedges, {});
        link_count.assign(n_hedges + n_vedges, 0);
        for (int j = 0; j + 1 < h; ++j) {
            for (int i = 0; i + 1 < w; ++i) {
                bool tl = inside(i, j), tr = inside(i + 1, j);
                bool bl = inside(i, j + 1), br = inside(i + 1, j + 1);
                int e_t = hedge(i, j), e_b = hedge(i, j + 1);
                int e_l = vedge(i, j), e_r = vedge(i + 1, j);
                bool ct = tl != tr, cb = bl != br, cl = tl != bl, cr = tr != br;
                int crossings = int(ct) + int(cb) + int(cl) + int(cr);
                int square = j * (w - 1) + i;
                if (crossings == 2) {
                    int first = -1, second = -1;
                    for (int e : {ct ? e_t : -1, cb ? e_b : -1, cl ? e_l : -1,
                                  cr ? e_r : -1}) {
                        if (e < 0) continue;
                        (first < 0 ? first : second) = e;
                    }
                    add_pair(first, second, square);
                } else if (crossings == 4) {
                    // Saddle: connect through the center when the 4-corner
                    // average is negative (inside).
                    double avg = 0.25 * (field.at(i, j) + field.at(i + 1, j) +
                                         field.at(i, j + 1) + field.at(i + 1, j + 1));
                    bool center_inside = avg < 0.0;
                    bool diag_tl = tl; // corners tl/br share a class, tr/bl the other
                    bool separate_tr_bl = (diag_tl && center_inside) ||
                                          (!diag_tl && !center_inside);
                    if (separate_tr_bl) {
                        add_pair(e_t, e_r, square);
                        add_pair(e_l, e_b, square);
                    } else {
                        add_pair(e_t, e_l, square);
                        add_pair(e_r, e_b, square);
                    }
                }
            }
        }
    }

    // Walk from `start` leaving through link slot `slot`; appends crossing
    // points; returns true when the walk closed back on `start`.
    bool walk(int start, int slot, std::vector<std::uint8_t>& visited,
              std::vector<Point2>& chain) {
        int edge = start;
        int via_square = links[start][slot].square;
        int next = links[start][slot].partner;
        visited[edge] = 1;
        chain.push_back(crossing(edge));
        while (true) {
            edge = next;
            chain.push_back(crossing(edge));
            if (edge == start) return true;
            visited[edge] = 1;
            // Arrived through via_square; leave through the other link.
            int out_slot = -1;
            for (int s = 0; s < link_count[edge]; ++s)
                if (links[edge][s].square != via_square) out_slot = s;
            if (out_slot < 0) return false; // border dead end: open chain
            via_square = links[edge][out_slot].square;
            next = links[edge][out_slot].partner;
        }
    }
};

struct IsoChain {
    std::vector<Point2> points;
    bool closed = false;
};

std::vector<IsoChain> trace_iso_chains(const ScalarField& field) {
    if (field.width() < 2 || field.height() < 2)
        throw InvalidInputError("marching squares needs a field of at least 2x2 cells");
    IsoTracer tracer(field);
    tracer.build();

    const int n_edges = tracer.n_hedges + tracer.n_vedges;
    std::vector<std::uint8_t> visited(n_edges, 0);
    std::vector<IsoChain> chains;

    auto dedupe = [](std::vector<Point2>& pts) {
        pts.erase(std::unique(pts.begin(), pts.end(),
                              [](Point2 a, Point2 b) { return a == b; }),
                  pts.end());
    };

    // Open chains first: border crossings carry a single link.
    for (int e = 0; e < n_edges; ++e) {
        if (visited[e] || tracer.link_count[e] != 1) continue;
        IsoChain chain;
        tracer.walk(e, 0, visited, chain.points);
        dedupe(chain.points);
        if (chain.points.size() >= 2) chains.push_back(std::move(chain));
    }
    // Remaining unvisited crossings belong to closed loops.
    for (int e = 0; e < n_edges; ++e) {
        if (visited[e] || tracer.link_count[e] != 2) continue;
        IsoChain chain;
        chain.closed = tracer.walk(e, 0, visited, chain.points);
        dedupe(chain.points);
        if (chain.closed && chain.points.size() >= 2 &&
            chain.points.front() == chain.points.back())
            chain.points.pop_back();
        if (chain.points.size() >= 2) chains.push_back(std::move(chain));
    }
    return chains;
}

} // namespace

std::vector<std::vector<Point2>> marching_squares_chains(const ScalarField& field) {
    std::vector<std::vector<Point2>> out;
    for (IsoChain& c : trace_iso_chains(field)) out.push_back(std::move(c.points));
    return out;
}

ConsensusCurve extract_zero_level(const ScalarField& field, double sample_step) {
    bool has_neg = false, has_nonneg = false;
    for (double v : field.values()) {
        has_neg = has_neg || v < 0.0;
        has_nonneg = has_nonneg || v >= 0.0;
    }
    if (!has_neg || !has_nonneg)
        throw NoContourError("field is single-signed; zero level set is empty");

    ConsensusCurve out;
    out.resolution = field.resolution();

    struct Loop {
        std::vector<Point2> pts;
        double area;
    };
    std::vector<Loop> loops;
    int open_chains = 0;

    for (IsoChain& chain : trace_iso_chains(field)) {
        if (!chain.closed) {
            ++open_chains;
            continue;
        }
        if (chain.points.size() < 3) continue; // numerically degenerate loop
        double area = 0.0;
        for (std::size_t i = 0; i < chain.points.size(); ++i) {
            const Point2& a = chain.points[i];
            const Point2& b = chain.points[(i + 1) % chain.points.size()];
            area += 0.5 * (a.x * b.y - b.x * a.y);
        }
        loops.push_back({std::move(chain.points), area});
    }

    if (open_chains > 0)
        out.warnings.push_back(std::to_string(open_chains) +
                               " open zero-level chain(s) hit the field border "
                               "(grid pad too small?)");
    if (loops.empty())
        throw NoContourError("zero level set has no closed component");

    std::size_t best = 0;
    for (std::size_t k = 1; k < loops.size(); ++k)
        if (std::abs(loops[k].area) > std::abs(loops[best].area)) best = k;
    for (std::size_t k = 0; k < loops.size(); ++k) {
        if (k == best) continue;
        std::ostringstream msg;
        msg << "discarded secondary zero-level component with |area| "
            << std::abs(loops[k].area);
        out.warnings.push_back(msg.str());
    }

    std::vector<Point2> verts = std::move(loops[best].pts);
    if (loops[best].area < 0.0) std::reverse(verts.begin(), verts.end());
    out.polyline = Polygon(std::move(verts));
    out.perimeter = perimeter(out.polyline);
    out.samples = resample_by_arclength(out.polyline, sample_step);
    return out;
}

ConsensusCurve mean_curve(const RaterSet& raters, Phase phase,
                          const ConsensusOptions& opts) {
    PhaseFields fields = compute_phase_fields(raters, phase, opts);
    ScalarField mean = mean_sdf(fields.fields);
    ConsensusCurve curve = extract_zero_level(mean, opts.sample_step);
    curve.warnings.insert(curve.warnings.begin(), fields.warnings.begin(),
                          fields.warnings.end());
    return curve;
}

namespace {

double wrap_interval(const std::vector<ArcSample>& samples, std::size_t k,
                     double total) {
    if (k + 1 < samples.size()) return samples[k + 1].t - samples[k].t;
    return total - samples[k].t;
}

} // namespace

double asymmetric_distance(const Polygon& from, const Polygon& to, int resolution,
                           const ConsensusOptions& opts) {
    ConsensusOptions o = opts;
    o.resolution = resolution;
    GridFrame frame = frame_for(bbox_union(from.bbox(), to.bbox()), resolution, o.raster);
    ScalarField sdf_to = signed_distance_field(to, frame);
    std::vector<ArcSample> samples = resample_by_arclength(from, o.sample_step);
    const double total = perimeter(from);
    double acc = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        double f = sample_field(sdf_to, samples[k].point);
        acc += f * f * wrap_interval(samples, k, total);
    }
    return std::sqrt(acc);
}

std::vector<double> per_rater_boundary_distances(const ConsensusCurve& consensus,
                                                 const PhaseFields& fields) {
    if (consensus.samples.empty())
        throw InvalidInputError("per_rater_boundary_distances: consensus has no samples");
    std::vector<double> out;
    out.reserve(fields.fields.size());
    const auto& samples = consensus.samples;
    const std::size_t n = samples.size();
    for (const ScalarField& field : fields.fields) {
        std::vector<double> mag(n);
        for (std::size_t k = 0; k < n; ++k)
            mag[k] = std::abs(sample_field(field, samples[k].point));
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            double dt = wrap_interval(samples, k, consensus.perimeter);
            acc += 0.5 * (mag[k] + mag[(k + 1) % n]) * dt;
        }
        out.push_back(acc / consensus.perimeter);
    }
    return out;
}

double expected_boundary_distance(const ConsensusCurve& consensus,
                                  const RaterSet& raters, Phase phase,
                                  const ConsensusOptions& opts) {
    PhaseFields fields = compute_phase_fields(raters, phase, opts);
    std::vector<double> per = per_rater_boundary_distances(consensus, fields);
    double sum = 0.0;
    for (double v : per) sum += v;
    return sum / static_cast<double>(per.size());
}

Polygon mode_shape(const RaterSet& raters, Phase phase,
                   const ConsensusOptions& opts) {
    auto polys = raters.phase_raters(phase);
    if (polys.size() < 2)
        throw InvalidInputError("mode_shape: need at least 2 polygons, got " +
                                std::to_string(polys.size()));
    GridFrame frame = shared_frame(raters, phase, opts);
    std::vector<int> votes(static_cast<std::size_t>(frame.cell_count()), 0);
    for (const RaterPolygon* r : polys) {
        RasterGrid mask = alltouch_on_frame(frame, r->polygon);
        const auto& cells = mask.cells();
        for (std::size_t k = 0; k < cells.size(); ++k)
            if (cells[k]) ++votes[k];
    }
    // Strict majority: a cell is in the mode iff vote fraction > 1/2, i.e.
    // the field 0.5 - fraction is negative. Ties on even n stay outside.
    ScalarField vote_field(frame);
    const double n = static_cast<double>(polys.size());
    for (std::size_t k = 0; k < votes.size(); ++k)
        vote_field.values()[k] = 0.5 - static_cast<double>(votes[k]) / n;
    ConsensusCurve curve;
    try {
        curve = extract_zero_level(vote_field, opts.sample_step);
    } catch (const NoContourError&) {
        throw NoContourError("mode_shape: empty majority region");
    }
    return curve.polyline;
}

} // namespace polyconsensus
