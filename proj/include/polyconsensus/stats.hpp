#pragma once

#include <span>
#include <string>
#include <vector>

#include "polyconsensus/consensus.hpp"

namespace polyconsensus {

struct WelchResult {
    double t = 0.0;
    double df = 0.0;          // Welch-Satterthwaite degrees of freedom
    double p_two_sided = 1.0;
    double alpha = 0.05;
    bool significant = false; // p < alpha
};

// Two-sample Welch t-test with unbiased variances; two-sided p from the
// Student-t distribution via the regularized incomplete beta function.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b,
                         double alpha = 0.05);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);
// Two-sided tail probability of Student's t with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct DBRecord {
    std::string sample_id;
    std::string rater_id;
    double d_b = 0.0;
};

struct PerImageStat {
    std::string sample_id;
    double db_mean = 0.0;
    double db_std = 0.0; // sample std over raters (0 for a single rater)
    int n_raters = 0;
};

struct CohortSummary {
    Phase phase = Phase::pre_qa;
    std::vector<PerImageStat> per_image; // sorted by sample_id
    double grand_mean = 0.0; // over pooled per-rater values
    double grand_std = 0.0;
    // The alternative aggregation (statistics of per-image means); the paper
    // does not say which one its cohort numbers use, so both are reported.
    double mean_of_image_means = 0.0;
    double std_of_image_means = 0.0;
    int n_values = 0;
};

CohortSummary summarize_cohort(std::span<const DBRecord> records, Phase phase);

struct PhaseDelta {
    std::string sample_id;
    double pre_mean = 0.0;
    double post_mean = 0.0;
    double delta = 0.0; // post - pre
};

struct ComparisonReport {
    CohortSummary pre;
    CohortSummary post;
    WelchResult welch;
    std::vector<PhaseDelta> per_image_deltas; // images present in both phases
    std::string shift_direction;              // "decrease", "increase" or "none"
    bool per_image_means_mode = false;
    std::vector<std::string> warnings;
};

// Welch test over the pooled per-rater d_B values of each phase, or over
// per-image means when per_image_means is set.
ComparisonReport compare_phases(std::span<const DBRecord> pre,
                                std::span<const DBRecord> post,
                                double alpha = 0.05,
                                bool per_image_means = false);

} // namespace polyconsensus
