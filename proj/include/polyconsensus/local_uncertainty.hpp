#pragma once

#include "polyconsensus/consensus.hpp"

namespace polyconsensus {

// Signed distances from every rater boundary at each arc-length sample of the
// consensus. Rows are raters, columns consensus samples.
struct DeviationProfile {
    std::vector<double> t;      // arc-length positions, pixels
    std::vector<Point2> points; // consensus sample points
    double perimeter = 0.0;
    double sample_step = 0.0;
    std::vector<std::vector<double>> per_rater_signed;
    std::vector<std::string> rater_ids;
    std::vector<double> sigma; // empty until local_sigma runs
};

// Maximal contiguous arc interval where sigma exceeds the threshold. On a
// closed curve the interval may wrap: t_end can exceed the perimeter.
struct FlaggedSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    double peak_sigma = 0.0;
    std::vector<Point2> polyline;
};

struct LocalUncertaintyOptions {
    double window = 2.0;    // arc-length smoothing window, pixels
    double threshold = 0.5; // rejection threshold, pixels
    double band = 3.0;      // heatmap mask band around the consensus, pixels
};

// per_rater_signed[i][k] = rater i's signed distance field sampled at
// consensus sample k (negative: consensus point inside rater i's shape).
DeviationProfile signed_deviations(const ConsensusCurve& consensus,
                                   const PhaseFields& fields);
DeviationProfile signed_deviations(const ConsensusCurve& consensus,
                                   const RaterSet& raters, Phase phase,
                                   const ConsensusOptions& opts = {});

// Per-sample RMS deviation over raters, then a circular moving average over
// the arc-length window. Requires window >= sample step.
DeviationProfile local_sigma(DeviationProfile profile, double window);

std::vector<FlaggedSegment> flag_segments(const DeviationProfile& profile,
                                          double threshold);

// Per-cell population standard deviation of the rater signed-distance values,
// masked to cells within `band` pixels of the consensus polyline.
ScalarField variance_heatmap(const ConsensusCurve& consensus,
                             const PhaseFields& fields, double band);
ScalarField variance_heatmap(const ConsensusCurve& consensus,
                             const RaterSet& raters, Phase phase,
                             const ConsensusOptions& opts = {},
                             double band = 3.0);

} // namespace polyconsensus
