#pragma once

#include <cstdint>
#include <random>

#include "polyconsensus/consensus.hpp"

namespace polyconsensus {

// Deterministic, portable random stream: std::mt19937_64 (its output
// sequence is pinned by the standard), uniforms as (x >> 11) * 2^-53 in
// [0, 1), Gaussians via Box-Muller on consecutive uniform pairs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }
    double uniform(); // [0, 1)
    double gaussian();

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Correlated vertex jitter applied along the outward normal and tangent.
struct NoiseModel {
    double sigma_normal = 0.0;      // pixels
    double sigma_tangent = 0.0;     // pixels
    double correlation_length = 0.0; // arc-length Gaussian smoothing, pixels
    std::uint64_t seed = 0;
};

enum class ShapeKind { diamond, octagon, circle, regular_ngon, star };

struct ShapeSpec {
    ShapeKind kind = ShapeKind::circle;
    int n = 0;                // regular_ngon / star points
    double inner_ratio = 0.5; // star inner radius / radius
};

// Parses "diamond", "octagon", "circle", "ngon:<n>", "star:<n>[:<ratio>]".
ShapeSpec parse_shape_spec(const std::string& text);

// Canonical vertex layouts: first vertex at angle 0, vertices at increasing
// angle (counterclockwise in the y-up sense). diamond = 4-gon at the axis
// points, circle = 256-gon.
Polygon make_shape(const ShapeSpec& spec, double radius, Point2 center);
Polygon make_shape(const std::string& kind, double radius, Point2 center);

// Deterministic noisy copy. With both sigmas zero the input is returned
// unchanged; otherwise the contour is densely resampled at 0.5 px steps so
// vertex density does not confound noise magnitude, then jittered with
// correlated Gaussian noise. Self-intersecting draws are retried on the same
// stream (bounded); GenerationError when retries run out.
Polygon perturb(const Polygon& shape, const NoiseModel& model);

struct SimulatedSample {
    RaterSet raters; // both phases populated
    Polygon ground_truth;
};

// Per-sample ground-truth shapes with per-phase rater noise. Sample i uses
// the derived seed (seed XOR i), so per-sample generation is order-free.
// The seed fields of pre/post models are ignored; jitter seeds come from the
// per-sample stream.
std::vector<SimulatedSample> simulate_cohort(int n_samples, int n_raters,
                                             const NoiseModel& pre_noise,
                                             const NoiseModel& post_noise,
                                             std::uint64_t seed);

} // namespace polyconsensus
