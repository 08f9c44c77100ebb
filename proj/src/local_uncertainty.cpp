#include "polyconsensus/local_uncertainty.hpp"

#include <algorithm>
#include <cmath>

namespace polyconsensus {

DeviationProfile signed_deviations(const ConsensusCurve& consensus,
                                   const PhaseFields& fields) {
    if (consensus.samples.empty())
        throw InvalidInputError("signed_deviations: consensus has no samples");
    DeviationProfile profile;
    profile.perimeter = consensus.perimeter;
    profile.t.reserve(consensus.samples.size());
    profile.points.reserve(consensus.samples.size());
    for (const ArcSample& s : consensus.samples) {
        profile.t.push_back(s.t);
        profile.points.push_back(s.point);
    }
    profile.sample_step = consensus.samples.size() > 1
                              ? consensus.samples[1].t - consensus.samples[0].t
                              : consensus.perimeter;
    profile.rater_ids = fields.rater_ids;
    profile.per_rater_signed.reserve(fields.fields.size());
    for (const ScalarField& field : fields.fields) {
        std::vector<double> row;
        row.reserve(consensus.samples.size());
        for (const ArcSample& s : consensus.samples)
            row.push_back(sample_field(field, s.point));
        profile.per_rater_signed.push_back(std::move(row));
    }
    return profile;
}

DeviationProfile signed_deviations(const ConsensusCurve& consensus,
                                   const RaterSet& raters, Phase phase,
                                   const ConsensusOptions& opts) {
    return signed_deviations(consensus, compute_phase_fields(raters, phase, opts));
}

DeviationProfile local_sigma(DeviationProfile profile, double window) {
    if (profile.per_rater_signed.empty())
        throw InvalidInputError("local_sigma: profile has no rater rows");
    if (window < profile.sample_step)
        throw InvalidInputError("local_sigma: window smaller than the sample step");

    const std::size_t n_samples = profile.t.size();
    const std::size_t n_raters = profile.per_rater_signed.size();

    std::vector<double> rms(n_samples, 0.0);
    for (std::size_t k = 0; k < n_samples; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n_raters; ++i) {
            double v = profile.per_rater_signed[i][k];
            acc += v * v;
        }
        rms[k] = std::sqrt(acc / static_cast<double>(n_raters));
    }

    // Circular moving average over samples within window/2 of arc length.
    const long half = static_cast<long>(std::floor(0.5 * window / profile.sample_step));
    const long nn = static_cast<long>(n_samples);
    long count = 2 * half + 1;
    if (count > nn) count = nn;
    profile.sigma.assign(n_samples, 0.0);
    for (long k = 0; k < nn; ++k) {
        double acc = 0.0;
        for (long d = 0; d < count; ++d) {
            long j = (((k - half + d) % nn) + nn) % nn;
            acc += rms[static_cast<std::size_t>(j)];
        }
        profile.sigma[static_cast<std::size_t>(k)] = acc / static_cast<double>(count);
    }
    return profile;
}

std::vector<FlaggedSegment> flag_segments(const DeviationProfile& profile,
                                          double threshold) {
    if (profile.sigma.empty())
        throw InvalidInputError("flag_segments: sigma not set (run local_sigma)");
    const std::size_t n = profile.sigma.size();
    std::vector<std::uint8_t> above(n);
    std::size_t n_above = 0;
    for (std::size_t k = 0; k < n; ++k) {
        above[k] = profile.sigma[k] > threshold ? 1 : 0;
        n_above += above[k];
    }

    std::vector<FlaggedSegment> out;
    if (n_above == 0) return out;

    // A segment covers its run of above-threshold samples and ends at the
    // first sample below the threshold, so t_start != t_end always holds.
    auto make_segment = [&](std::size_t first, std::size_t count) {
        FlaggedSegment seg;
        seg.t_start = profile.t[first];
        std::size_t next = (first + count) % n;
        seg.t_end = profile.t[next];
        while (seg.t_end <= seg.t_start) seg.t_end += profile.perimeter;
        seg.peak_sigma = 0.0;
        seg.polyline.reserve(count);
        for (std::size_t d = 0; d < count; ++d) {
            std::size_t k = (first + d) % n;
            seg.peak_sigma = std::max(seg.peak_sigma, profile.sigma[k]);
            seg.polyline.push_back(profile.points[k]);
        }
        return seg;
    };

    if (n_above == n) {
        out.push_back(make_segment(0, n)); // full coverage: [0, perimeter]
        return out;
    }

    // Start scanning right after a below-threshold sample so that runs
    // crossing t = 0 merge naturally.
    std::size_t start = 0;
    while (above[start]) ++start;
    std::size_t k = start;
    do {
        if (above[k]) {
            std::size_t first = k;
            std::size_t count = 0;
            while (above[k]) {
                ++count;
                k = (k + 1) % n;
            }
            out.push_back(make_segment(first, count));
        } else {
            k = (k + 1) % n;
        }
    } while (k != start);

    std::sort(out.begin(), out.end(),
              [](const FlaggedSegment& a, const FlaggedSegment& b) {
                  return a.t_start < b.t_start;
              });
    return out;
}

ScalarField variance_heatmap(const ConsensusCurve& consensus,
                             const PhaseFields& fields, double band) {
    if (!(band > 0.0))
        throw InvalidInputError("variance_heatmap: band must be > 0");
    if (fields.fields.empty())
        throw InvalidInputError("variance_heatmap: no rater fields");

    // Distance to the consensus polyline, for masking.
    RasterGrid boundary(fields.frame);
    add_boundary_supercover(boundary, consensus.polyline);
    ScalarField dist = edt(boundary);

    ScalarField out(fields.frame, 0.0);
    const std::size_t cells = out.values().size();
    const double n = static_cast<double>(fields.fields.size());
    for (std::size_t c = 0; c < cells; ++c) {
        if (dist.values()[c] > band) continue;
        double mean = 0.0;
        for (const ScalarField& f : fields.fields) mean += f.values()[c];
        mean /= n;
        double var = 0.0;
        for (const ScalarField& f : fields.fields) {
            double d = f.values()[c] - mean;
            var += d * d;
        }
        out.values()[c] = std::sqrt(var / n);
    }
    return out;
}

ScalarField variance_heatmap(const ConsensusCurve& consensus,
                             const RaterSet& raters, Phase phase,
                             const ConsensusOptions& opts, double band) {
    return variance_heatmap(consensus, compute_phase_fields(raters, phase, opts), band);
}

} // namespace polyconsensus
