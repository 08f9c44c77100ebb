#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyconsensus/distance.hpp"

namespace polyconsensus {

enum class Phase { pre_qa, post_qa };

std::string to_string(Phase phase);
Phase phase_from_string(const std::string& s);

struct RaterPolygon {
    std::string rater_id;
    Phase phase = Phase::pre_qa;
    Polygon polygon;
};

// N polygons describing the same object, tagged with rater ids and QA phase.
struct RaterSet {
    std::string sample_id;
    double image_width = 0.0;
    double image_height = 0.0;
    std::vector<RaterPolygon> raters;
    std::string instructions; // optional free text, unused by computation

    std::vector<const RaterPolygon*> phase_raters(Phase phase) const;
};

struct ConsensusOptions {
    int resolution = 8;        // cells per pixel
    double sample_step = 0.25; // arc-length step for curve samples, pixels
    double min_pairwise_iou = 0.5;
    RasterOptions raster;
};

// Mean curve with arc-length parameterization.
struct ConsensusCurve {
    Polygon polyline; // closed, sub-pixel vertices on mean-field cell edges
    double perimeter = 0.0;
    int resolution = 0;
    std::vector<ArcSample> samples;
    std::vector<std::string> warnings;
};

// Per-rater signed distance fields on one shared frame, plus the occupancy
// masks used for the pairwise-IoU sanity check.
struct PhaseFields {
    GridFrame frame;
    std::vector<std::string> rater_ids;
    std::vector<ScalarField> fields;
    std::vector<std::string> warnings;
};

// Shared integer-aligned frame over the union bbox of the phase's polygons.
GridFrame shared_frame(const RaterSet& raters, Phase phase,
                       const ConsensusOptions& opts = {});

// SDF per rater of the phase on the shared frame. Emits a warning per
// polygon pair whose rasterized IoU falls below opts.min_pairwise_iou.
PhaseFields compute_phase_fields(const RaterSet& raters, Phase phase,
                                 const ConsensusOptions& opts = {});

// Cellwise arithmetic mean (pairwise summation, order-independent result).
// Accepts n >= 1; geometry must match across fields.
ScalarField mean_sdf(std::span<const ScalarField> fields);

// All iso-contour chains of the zero level (closed loops and, where the
// level set exits the field, open chains). Building block for
// extract_zero_level; exposed for direct use and testing.
std::vector<std::vector<Point2>> marching_squares_chains(const ScalarField& field);

// Zero level set of the field as a closed curve. With several closed
// components the largest by |area| wins and the others are reported as
// warnings. Throws NoContourError when the field is single-signed or no
// closed component exists.
ConsensusCurve extract_zero_level(const ScalarField& field, double sample_step = 0.25);

// Mean consensus curve of the phase: zero level of the mean signed distance
// map over a shared grid.
ConsensusCurve mean_curve(const RaterSet& raters, Phase phase,
                          const ConsensusOptions& opts = {});

// sqrt of the line integral over `from`'s boundary of the squared distance
// to `to`'s boundary; asymmetric in its arguments. Units: pixels^1.5.
double asymmetric_distance(const Polygon& from, const Polygon& to, int resolution,
                           const ConsensusOptions& opts = {});

// Per-rater mean unsigned boundary distance along the consensus
// (trapezoid accumulation / perimeter). The expected boundary distance d_B
// is the mean of these.
std::vector<double> per_rater_boundary_distances(const ConsensusCurve& consensus,
                                                 const PhaseFields& fields);

double expected_boundary_distance(const ConsensusCurve& consensus,
                                  const RaterSet& raters, Phase phase,
                                  const ConsensusOptions& opts = {});

// Majority-vote shape: cells filled in strictly more than n/2 rasterized
// masks, 0.5-level contour of the vote fraction, largest component.
Polygon mode_shape(const RaterSet& raters, Phase phase,
                   const ConsensusOptions& opts = {});

} // namespace polyconsensus
