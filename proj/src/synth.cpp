#include "polyconsensus/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace polyconsensus {

double Rng::uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 shifted into (0, 1] so the log stays finite.
    double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
}

ShapeSpec parse_shape_spec(const std::string& text) {
    auto split = [](const std::string& s) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        return parts;
    };
    std::vector<std::string> parts = split(text);
    if (parts.empty())
        throw InvalidInputError("empty shape spec");
    const std::string& kind = parts[0];
    ShapeSpec spec;
    try {
        if (kind == "diamond") {
            spec.kind = ShapeKind::diamond;
        } else if (kind == "octagon") {
            spec.kind = ShapeKind::octagon;
        } else if (kind == "circle") {
            spec.kind = ShapeKind::circle;
        } else if (kind == "ngon") {
            spec.kind = ShapeKind::regular_ngon;
            if (parts.size() < 2)
                throw InvalidInputError("ngon spec needs a vertex count, e.g. ngon:12");
            spec.n = std::stoi(parts[1]);
        } else if (kind == "star") {
            spec.kind = ShapeKind::star;
            if (parts.size() < 2)
                throw InvalidInputError("star spec needs a point count, e.g. star:5");
            spec.n = std::stoi(parts[1]);
            if (parts.size() >= 3) spec.inner_ratio = std::stod(parts[2]);
        } else {
            throw InvalidInputError("unknown shape kind '" + kind + "'");
        }
    } catch (const std::invalid_argument&) {
        throw InvalidInputError("malformed shape spec '" + text + "'");
    } catch (const std::out_of_range&) {
        throw InvalidInputError("malformed shape spec '" + text + "'");
    }
    return spec;
}

Polygon make_shape(const ShapeSpec& spec, double radius, Point2 center) {
    if (!(radius > 0.0))
        throw InvalidInputError("make_shape: radius must be > 0");
    auto ring = [&](int n, double r0) {
        std::vector<Point2> verts;
        verts.reserve(n);
        for (int k = 0; k < n; ++k) {
            double a = 2.0 * std::numbers::pi * k / n;
            verts.push_back({center.x + r0 * std::cos(a),
                             center.y + r0 * std::sin(a)});
        }
        return verts;
    };
    switch (spec.kind) {
    case ShapeKind::diamond:
        return Polygon(ring(4, radius));
    case ShapeKind::octagon:
        return Polygon(ring(8, radius));
    case ShapeKind::circle:
        return Polygon(ring(256, radius));
    case ShapeKind::regular_ngon:
        if (spec.n < 3)
            throw InvalidInputError("make_shape: ngon needs n >= 3");
        return Polygon(ring(spec.n, radius));
    case ShapeKind::star: {
        if (spec.n < 3)
            throw InvalidInputError("make_shape: star needs n >= 3 points");
        if (!(spec.inner_ratio > 0.0) || spec.inner_ratio >= 1.0)
            throw InvalidInputError("make_shape: star inner_ratio must be in (0, 1)");
        std::vector<Point2> verts;
        verts.reserve(2 * spec.n);
        for (int k = 0; k < 2 * spec.n; ++k) {
            double a = std::numbers::pi * k / spec.n;
            double r0 = (k % 2 == 0) ? radius : radius * spec.inner_ratio;
            verts.push_back({center.x + r0 * std::cos(a),
                             center.y + r0 * std::sin(a)});
        }
        return Polygon(std::move(verts));
    }
    }
    throw InvalidInputError("make_shape: unknown kind");
}

Polygon make_shape(const std::string& kind, double radius, Point2 center) {
    return make_shape(parse_shape_spec(kind), radius, center);
}

namespace {

constexpr double kDenseStep = 0.5; // px, fixed pre-perturbation resampling

// Gaussian arc-length smoothing of a circular sequence, rescaled so the
// marginal standard deviation is preserved.
std::vector<double> smooth_circular(const std::vector<double>& values,
                                    double correlation_length, double step) {
    if (correlation_length <= 0.0) return values;
    const long n = static_cast<long>(values.size());
    long reach = static_cast<long>(std::ceil(4.0 * correlation_length / step));
    if (reach >= n / 2) reach = n / 2;
    std::vector<double> kernel(2 * reach + 1);
    double sum = 0.0;
    for (long d = -reach; d <= reach; ++d) {
        double s = d * step / correlation_length;
        kernel[d + reach] = std::exp(-0.5 * s * s);
        sum += kernel[d + reach];
    }
    double sum_sq = 0.0;
    for (double& k : kernel) {
        k /= sum;
        sum_sq += k * k;
    }
    const double gain = 1.0 / std::sqrt(sum_sq);
    std::vector<double> out(values.size(), 0.0);
    for (long i = 0; i < n; ++i) {
        double acc = 0.0;
        for (long d = -reach; d <= reach; ++d) {
            long j = (((i + d) % n) + n) % n;
            acc += kernel[d + reach] * values[j];
        }
        out[i] = gain * acc;
    }
    return out;
}

} // namespace

Polygon perturb(const Polygon& shape, const NoiseModel& model) {
    if (model.sigma_normal < 0.0 || model.sigma_tangent < 0.0 ||
        model.correlation_length < 0.0)
        throw InvalidInputError("perturb: negative noise parameter");
    if (model.sigma_normal == 0.0 && model.sigma_tangent == 0.0)
        return shape;

    std::vector<ArcSample> dense = resample_by_arclength(shape, kDenseStep);
    const std::size_t n = dense.size();
    if (n < 3)
        throw InvalidInputError("perturb: shape too small for dense resampling");

    // Outward normal = tangent rotated toward the exterior; the rotation
    // direction depends on the vertex orientation.
    const double orient = signed_area(shape) >= 0.0 ? 1.0 : -1.0;

    Rng rng(model.seed);
    constexpr int kMaxRetries = 10;
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        std::vector<double> gn(n), gt(n);
        for (std::size_t i = 0; i < n; ++i) gn[i] = rng.gaussian();
        for (std::size_t i = 0; i < n; ++i) gt[i] = rng.gaussian();
        gn = smooth_circular(gn, model.correlation_length, kDenseStep);
        gt = smooth_circular(gt, model.correlation_length, kDenseStep);

        std::vector<Point2> verts(n);
        for (std::size_t i = 0; i < n; ++i) {
            Point2 prev = dense[(i + n - 1) % n].point;
            Point2 next = dense[(i + 1) % n].point;
            Point2 tan = next - prev;
            double len = norm(tan);
            if (len == 0.0) tan = {1.0, 0.0};
            else tan = (1.0 / len) * tan;
            Point2 normal{orient * tan.y, -orient * tan.x};
            verts[i] = dense[i].point +
                       (model.sigma_normal * gn[i]) * normal +
                       (model.sigma_tangent * gt[i]) * tan;
        }
        try {
            Polygon candidate(std::move(verts));
            if (is_simple(candidate)) return candidate;
        } catch (const InvalidInputError&) {
            // duplicate vertices from extreme tangent jitter: retry
        }
    }
    throw GenerationError("perturb: could not produce a simple polygon after retries");
}

std::vector<SimulatedSample> simulate_cohort(int n_samples, int n_raters,
                                             const NoiseModel& pre_noise,
                                             const NoiseModel& post_noise,
                                             std::uint64_t seed) {
    if (n_samples < 2 || n_raters < 2)
        throw InvalidInputError("simulate_cohort: need n_samples >= 2 and n_raters >= 2");

    static const ShapeSpec kinds[] = {
        {ShapeKind::circle, 0, 0.5},       {ShapeKind::octagon, 0, 0.5},
        {ShapeKind::regular_ngon, 16, 0.5}, {ShapeKind::diamond, 0, 0.5},
        {ShapeKind::regular_ngon, 6, 0.5},
    };

    std::vector<SimulatedSample> out;
    out.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        Rng rng(seed ^ static_cast<std::uint64_t>(i));
        const ShapeSpec& spec = kinds[i % (sizeof(kinds) / sizeof(kinds[0]))];
        double radius = 8.0 + 6.0 * rng.uniform();
        double margin = radius + 6.0;
        Point2 center{margin, margin};
        SimulatedSample sample;
        sample.ground_truth = make_shape(spec, radius, center);

        std::ostringstream sid;
        sid << "synth-";
        sid.width(3);
        sid.fill('0');
        sid << i;
        sample.raters.sample_id = sid.str();
        sample.raters.image_width = std::ceil(2.0 * margin);
        sample.raters.image_height = std::ceil(2.0 * margin);

        for (Phase phase : {Phase::pre_qa, Phase::post_qa}) {
            const NoiseModel& base = phase == Phase::pre_qa ? pre_noise : post_noise;
            for (int r = 0; r < n_raters; ++r) {
                NoiseModel model = base;
                model.seed = rng.next_u64();
                RaterPolygon rp;
                rp.rater_id = "r" + std::to_string(r);
                rp.phase = phase;
                rp.polygon = perturb(sample.ground_truth, model);
                sample.raters.raters.push_back(std::move(rp));
            }
        }
        out.push_back(std::move(sample));
    }
    return out;
}

} // namespace polyconsensus
